# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Cantor normal form arithmetic for ordinals below epsilon_0.

This module knows nothing about the theta and psi notation systems.  It is the
independent oracle both of them are compared against on their countable
fragments: a countable notation is evaluated into a :class:`CNF` value and the
order of the notations must agree with the order of the values.

A value is a tuple of ``(exponent, coefficient)`` pairs with strictly
decreasing exponents (themselves :class:`CNF` values) and positive integer
coefficients, so ``omega^2*3 + omega + 5`` is
``((CNF.of(2), 3), (CNF.of(1), 1), (CNF.of(0), 5))``.

Example:

    >>> from ordcalc.cnf import CNF, OMEGA
    >>> CNF.of(1) + OMEGA == OMEGA
    True
    >>> str(OMEGA + CNF.of(1))
    'w+1'
"""
import functools
import logging


logger = logging.getLogger(__name__)  # pylint: disable=C0103


@functools.total_ordering
class CNF:
    """
    An ordinal below epsilon_0 in Cantor normal form
    """
    __slots__ = ('terms', '_hash')

    def __init__(self, terms=()):
        terms = tuple(terms)
        previous = None
        for exponent, coefficient in terms:
            if not isinstance(exponent, CNF):
                raise TypeError('exponent must be a CNF value, got %r' % (exponent,))
            if not isinstance(coefficient, int) or coefficient < 1:
                raise ValueError('coefficients must be positive integers')
            if previous is not None and not exponent < previous:
                raise ValueError('exponents must strictly decrease')
            previous = exponent
        self.terms = terms
        self._hash = hash(terms)

    @classmethod
    def of(cls, value):
        """
        The finite ordinal ``value``
        """
        if value < 0:
            raise ValueError('ordinals are not negative')
        if value == 0:
            return ZERO
        return cls(((ZERO, value),))

    @classmethod
    def omega_power(cls, exponent, coefficient=1):
        """
        ``omega^exponent * coefficient``
        """
        return cls(((exponent, coefficient),))

    def is_zero(self):
        return not self.terms

    def is_finite(self):
        return self.is_zero() or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def is_principal(self):
        """
        True for the additively principal ordinals ``omega^a``
        """
        return len(self.terms) == 1 and self.terms[0][1] == 1

    def compare(self, other):
        """
        Return -1, 0 or 1
        """
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            result = e1.compare(e2)
            if result:
                return result
            if c1 != c2:
                return -1 if c1 < c2 else 1
        if len(self.terms) == len(other.terms):
            return 0
        return -1 if len(self.terms) < len(other.terms) else 1

    def __eq__(self, other):
        if not isinstance(other, CNF):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        if not isinstance(other, CNF):
            return NotImplemented
        return self.compare(other) < 0

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        if not isinstance(other, CNF):
            return NotImplemented
        if other.is_zero():
            return self
        head, head_coefficient = other.terms[0]
        kept = []
        for exponent, coefficient in self.terms:
            order = exponent.compare(head)
            if order > 0:
                kept.append((exponent, coefficient))
            elif order == 0:
                head_coefficient += coefficient
                break
            else:
                break
        kept.append((head, head_coefficient))
        kept.extend(other.terms[1:])
        return CNF(kept)

    def __repr__(self):
        return 'CNF(%s)' % (str(self),)

    def __str__(self):
        if self.is_zero():
            return '0'
        parts = []
        for exponent, coefficient in self.terms:
            if exponent.is_zero():
                parts.append(str(coefficient))
                continue
            if exponent == ONE:
                base = 'w'
            elif exponent.is_finite() or exponent.is_principal():
                base = 'w^' + str(exponent)
            else:
                base = 'w^(' + str(exponent) + ')'
            parts.append(base if coefficient == 1 else '%s*%d' % (base, coefficient))
        return '+'.join(parts)


def omega_exp(exponent):
    """
    ``omega^exponent``; ``omega^0`` is 1
    """
    return CNF.omega_power(exponent)


def ordinal_sum(values):
    """
    Left-to-right ordinal sum of an iterable of CNF values
    """
    return functools.reduce(lambda left, right: left + right, values, ZERO)


ZERO = CNF()
ONE = CNF(((ZERO, 1),))
OMEGA = CNF(((ONE, 1),))
