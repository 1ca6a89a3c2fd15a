# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Exception classes raised by the ordcalc modules.

Checkers report problems with a well formed object through
:class:`ordcalc.report.Report`; the exceptions below are raised when an input
cannot be interpreted at all, or when a construction is asked for something
its preconditions exclude.
"""


class OrdcalcException(Exception):
    """
    Base class for all ordcalc errors
    """
    pass


class ParseError(OrdcalcException):
    """
    Malformed s-expression or JSON document
    """
    pass


class ThetaError(OrdcalcException):
    """
    Invalid request on a term of the theta notation system
    """
    pass


class PsiError(OrdcalcException):
    """
    Invalid request on a term of the psi notation system
    """
    pass


class PsiNormalFormError(PsiError):
    """
    A psi term that is not in normal form was used where one is required
    """
    pass


class FormulaError(OrdcalcException):
    """
    Formula shape, variable or classification error
    """
    pass


class RegistryError(FormulaError):
    """
    Invalid operator registry entry or unknown operator name
    """
    pass


class ProofError(OrdcalcException):
    """
    Proof tree that cannot be interpreted
    """
    pass


class CertificateError(OrdcalcException):
    """
    Certificate that cannot be interpreted, or a failed precondition of a
    certificate transformation
    """
    pass


class FixpointError(OrdcalcException):
    """
    Operator body that cannot be evaluated over a finite universe, or an
    invalid finite relation
    """
    pass


class DecorationError(OrdcalcException):
    """
    Invalid request to the decorated resolution construction
    """
    pass
