# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Three-way comparison result shared by the notation systems
"""
import enum


class Order(enum.IntEnum):
    """
    Result of a three-way comparison
    """
    LT = -1
    EQ = 0
    GT = 1

    @classmethod
    def of(cls, sign):
        """
        Convert a signed integer into an Order
        """
        if sign < 0:
            return cls.LT
        if sign > 0:
            return cls.GT
        return cls.EQ

    def flip(self):
        return Order(-self.value)

    def __str__(self):
        return self.name
