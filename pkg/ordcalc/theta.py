# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
The theta notation system: terms built from 0, Omega, + and theta.

A term is one of

* :data:`ZERO`;
* a :class:`ThetaApp`, ``theta(b)``, always a countable additively principal
  value;
* a :class:`ThetaSum` of base-Omega monomials ``O^a . c`` with strictly
  decreasing exponents, where the coefficient ``c`` is a non-empty weakly
  decreasing tuple of :class:`ThetaApp` terms.

Omega is the monomial ``O^1 . 1`` (:data:`OMEGA`).  A countable sum of two or
more theta terms is written as the single monomial with exponent 0; a single
monomial with exponent 0 and a one-element coefficient would duplicate a
:class:`ThetaApp` and is rejected by :func:`validate_theta`.

Wire syntax::

    0                 zero
    (v ARG)           theta(ARG)
    (sum (mono EXP (cs (v ARG) ...)) ...)

Example:

    >>> from ordcalc import theta
    >>> one, omega = theta.parse_theta('(v 0)'), theta.parse_theta('(v (v 0))')
    >>> theta.cmp_theta(one, omega)
    <Order.LT: -1>
    >>> theta.pretty(theta.add_theta(omega, one))
    'v(v(0))+v(0)'
"""
import dataclasses
import functools
import logging

from . import cnf
from . import sexpr
from .exceptions import ParseError, ThetaError
from .ordering import Order
from .report import Report


logger = logging.getLogger(__name__)  # pylint: disable=C0103


@dataclasses.dataclass(frozen=True)
class ThetaZero:
    """
    The ordinal 0
    """

    def __str__(self):
        return pretty(self)


@dataclasses.dataclass(frozen=True)
class ThetaApp:
    """
    theta(argument)
    """
    argument: object

    def __str__(self):
        return pretty(self)


@dataclasses.dataclass(frozen=True)
class Monomial:
    """
    O^exponent . (coefficient[0] + coefficient[1] + ...)
    """
    exponent: object
    coefficient: tuple


@dataclasses.dataclass(frozen=True)
class ThetaSum:
    """
    A base-Omega sum of monomials, highest exponent first
    """
    monomials: tuple

    def __str__(self):
        return pretty(self)


ZERO = ThetaZero()
ONE = ThetaApp(ZERO)
OMEGA = ThetaSum((Monomial(ONE, (ONE,)),))


def theta(argument):
    """
    theta(argument)
    """
    return ThetaApp(argument)


def nat_theta(value):
    """
    The finite ordinal ``value`` as a sum of theta(0) terms
    """
    if value < 0:
        raise ThetaError('ordinals are not negative')
    if value == 0:
        return ZERO
    return _from_monomials((Monomial(ZERO, (ONE,) * value),))


def monomial(exponent, coefficient=ONE):
    """
    The term ``O^exponent . coefficient`` for a nonzero countable coefficient
    """
    items = _coefficient_items(coefficient)
    if not items:
        raise ThetaError('monomial coefficients are nonzero')
    return _from_monomials((Monomial(exponent, items),))


def _coefficient_items(term):
    if isinstance(term, ThetaApp):
        return (term,)
    if isinstance(term, ThetaZero):
        return ()
    if len(term.monomials) == 1 and term.monomials[0].exponent == ZERO:
        return term.monomials[0].coefficient
    raise ThetaError('coefficient %s is not below Omega' % (pretty(term),))


def _monomials(term):
    if isinstance(term, ThetaZero):
        return ()
    if isinstance(term, ThetaApp):
        return (Monomial(ZERO, (term,)),)
    return term.monomials


def _from_monomials(monomials):
    monomials = tuple(monomials)
    if not monomials:
        return ZERO
    if len(monomials) == 1 and monomials[0].exponent == ZERO and len(monomials[0].coefficient) == 1:
        return monomials[0].coefficient[0]
    return ThetaSum(monomials)


def _coefficient_term(items):
    return _from_monomials((Monomial(ZERO, tuple(items)),))


def k_set(term):
    """
    The set K(term) of countable components steering theta comparisons.

    K(0) is empty, K(theta(b)) is {theta(b)} and the K-set of a sum is the
    union of K(exponent) and {coefficient} over its monomials.

    Returns
    -------
    frozenset
        Set of theta terms, each below Omega
    """
    if isinstance(term, ThetaZero):
        return frozenset()
    if isinstance(term, ThetaApp):
        return frozenset((term,))
    result = set()
    for mono in term.monomials:
        result |= k_set(mono.exponent)
        result.add(_coefficient_term(mono.coefficient))
    return frozenset(result)


def _compare_coefficients(left, right):
    for a, b in zip(left, right):
        result = _compare(a, b)
        if result:
            return result
    return (len(left) > len(right)) - (len(left) < len(right))


def _compare_monomials(left, right):
    for a, b in zip(left, right):
        result = _compare(a.exponent, b.exponent)
        if result:
            return result
        result = _compare_coefficients(a.coefficient, b.coefficient)
        if result:
            return result
    return (len(left) > len(right)) - (len(left) < len(right))


def _theta_less(left, right):
    """
    theta(a) < theta(b) iff (a < b and K(a) < theta(b)) or theta(a) <= some
    member of K(b)
    """
    if _compare(left.argument, right.argument) < 0 and all(
            _compare(member, right) < 0 for member in k_set(left.argument)):
        return True
    return any(_compare(left, member) <= 0 for member in k_set(right.argument))


@functools.lru_cache(maxsize=1 << 16)
def _compare(left, right):
    if left == right:
        return 0
    if isinstance(left, ThetaApp) and isinstance(right, ThetaApp):
        if _theta_less(left, right):
            return -1
        if _theta_less(right, left):
            return 1
        raise ThetaError(
            'theta terms %s and %s are incomparable' % (pretty(left), pretty(right))
        )
    return _compare_monomials(_monomials(left), _monomials(right))


def cmp_theta(left, right):
    """
    Compare two valid theta terms

    Returns
    -------
    Order
        LT, EQ or GT
    """
    return Order.of(_compare(left, right))


def add_theta(left, right):
    """
    The normalized term for the ordinal sum left + right.

    Monomials of ``left`` below the leading monomial of ``right`` are absorbed;
    a monomial with the same exponent merges its coefficient with the leading
    coefficient of ``right``.
    """
    right_monomials = _monomials(right)
    if not right_monomials:
        return left
    head = right_monomials[0]
    result = []
    for mono in _monomials(left):
        order = _compare(mono.exponent, head.exponent)
        if order > 0:
            result.append(mono)
            continue
        if order == 0:
            leading = head.coefficient[0]
            kept = tuple(c for c in mono.coefficient if _compare(c, leading) >= 0)
            head = Monomial(head.exponent, kept + head.coefficient)
        break
    result.append(head)
    result.extend(right_monomials[1:])
    return _from_monomials(result)


def validate_theta(term, path='term'):
    """
    Check the structural invariants of a theta term, recursively

    Parameters
    ----------
    term : ThetaZero, ThetaApp or ThetaSum
        The term to check

    path : str
        Name used for the root in diagnostic paths

    Returns
    -------
    Report
        Empty when the term is valid
    """
    report = Report(subject='theta term')
    _validate(term, path, report)
    return report


def _validate(term, path, report):
    if isinstance(term, ThetaZero):
        return True
    if isinstance(term, ThetaApp):
        return _validate(term.argument, path + '.arg', report)
    if not isinstance(term, ThetaSum):
        report.add(path, 'not a theta term: %r' % (term,))
        return False
    ok = True
    if not term.monomials:
        report.add(path, 'a sum needs at least one monomial')
        return False
    previous = None
    for index, mono in enumerate(term.monomials):
        mono_path = '%s.mono[%d]' % (path, index)
        if not isinstance(mono, Monomial):
            report.add(mono_path, 'not a monomial: %r' % (mono,))
            ok = False
            continue
        exponent_ok = _validate(mono.exponent, mono_path + '.exponent', report)
        coefficient_ok = _validate_coefficient(mono.coefficient, mono_path + '.coefficient', report)
        ok = ok and exponent_ok and coefficient_ok
        if exponent_ok and previous is not None and _compare(mono.exponent, previous) >= 0:
            report.add(mono_path, 'exponents must strictly decrease')
            ok = False
        previous = mono.exponent if exponent_ok else None
    if ok and len(term.monomials) == 1:
        mono = term.monomials[0]
        if mono.exponent == ZERO and len(mono.coefficient) == 1:
            report.add(path, 'a single monomial O^0.b with one coefficient term is not a sum (needs a_0 > 0 or n > 1)')
            ok = False
    return ok


def _validate_coefficient(items, path, report):
    if not isinstance(items, tuple) or not items:
        report.add(path, 'coefficients are non-empty tuples of theta applications')
        return False
    ok = True
    for index, item in enumerate(items):
        if not isinstance(item, ThetaApp):
            report.add('%s[%d]' % (path, index), 'coefficient entries must be theta applications')
            ok = False
        elif not _validate(item, '%s[%d]' % (path, index), report):
            ok = False
    if ok:
        for index in range(1, len(items)):
            if _compare(items[index - 1], items[index]) < 0:
                report.add('%s[%d]' % (path, index), 'coefficient must be weakly decreasing')
                ok = False
    return ok


def is_valid_theta(term):
    return validate_theta(term).ok


def theta_size(term):
    """
    Node count: 0 counts 1, theta(b) counts 1 + size(b), a sum counts 1 plus
    the sizes of its exponents and coefficient entries
    """
    if isinstance(term, ThetaZero):
        return 1
    if isinstance(term, ThetaApp):
        return 1 + theta_size(term.argument)
    return 1 + sum(
        theta_size(m.exponent) + sum(theta_size(c) for c in m.coefficient)
        for m in term.monomials
    )


@functools.lru_cache(maxsize=None)
def _apps_of_size(size):
    return tuple(ThetaApp(argument) for argument in terms_of_size(size - 1))


@functools.lru_cache(maxsize=None)
def _coefficients(budget, upper):
    result = []
    for first in range(2, budget + 1):
        for app in _apps_of_size(first):
            if upper is not None and _compare(app, upper) > 0:
                continue
            if first == budget:
                result.append((app,))
            else:
                result.extend((app,) + rest for rest in _coefficients(budget - first, app))
    return tuple(result)


@functools.lru_cache(maxsize=None)
def _monomial_lists(budget, upper):
    result = []
    for exponent_size in range(1, budget - 1):
        for exponent in terms_of_size(exponent_size):
            if upper is not None and _compare(exponent, upper) >= 0:
                continue
            for coefficient_size in range(2, budget - exponent_size + 1):
                rest_budget = budget - exponent_size - coefficient_size
                for coefficient in _coefficients(coefficient_size, None):
                    mono = Monomial(exponent, coefficient)
                    if rest_budget == 0:
                        result.append((mono,))
                    else:
                        result.extend((mono,) + rest for rest in _monomial_lists(rest_budget, exponent))
    return tuple(result)


@functools.lru_cache(maxsize=None)
def terms_of_size(size):
    """
    All valid terms with exactly ``size`` nodes, in canonical text order
    """
    if size < 1:
        return ()
    if size == 1:
        return (ZERO,)
    found = list(_apps_of_size(size))
    for monomials in _monomial_lists(size - 1, None):
        if len(monomials) == 1 and monomials[0].exponent == ZERO and len(monomials[0].coefficient) == 1:
            continue
        found.append(ThetaSum(monomials))
    found.sort(key=to_sexpr)
    logger.debug('Enumerated %d theta terms of size %d', len(found), size)
    return tuple(found)


def enumerate_theta(size_bound):
    """
    Every valid term of size at most ``size_bound`` exactly once, smallest
    first and in canonical text order within one size
    """
    if size_bound < 1:
        raise ThetaError('size_bound must be at least 1')
    for size in range(1, size_bound + 1):
        yield from terms_of_size(size)


def count_theta(size_bound):
    return sum(len(terms_of_size(size)) for size in range(1, size_bound + 1))


def is_countable_theta(term):
    """
    True when no monomial with a nonzero exponent occurs anywhere in the term
    """
    if isinstance(term, ThetaZero):
        return True
    if isinstance(term, ThetaApp):
        return is_countable_theta(term.argument)
    return all(
        m.exponent == ZERO and all(is_countable_theta(c) for c in m.coefficient)
        for m in term.monomials
    )


def eval_countable_theta(term):
    """
    Evaluate a countable-fragment term into Cantor normal form, with
    theta(a) = omega^a

    Raises
    ------
    ThetaError
        The term mentions Omega
    """
    if not is_countable_theta(term):
        raise ThetaError('%s is outside the countable fragment' % (pretty(term),))
    return _eval(term)


def _eval(term):
    if isinstance(term, ThetaZero):
        return cnf.ZERO
    if isinstance(term, ThetaApp):
        return cnf.omega_exp(_eval(term.argument))
    return cnf.ordinal_sum(_eval(c) for c in term.monomials[0].coefficient)


def to_sexpr_tree(term):
    if isinstance(term, ThetaZero):
        return '0'
    if isinstance(term, ThetaApp):
        return ('v', to_sexpr_tree(term.argument))
    return ('sum',) + tuple(
        ('mono', to_sexpr_tree(m.exponent), ('cs',) + tuple(to_sexpr_tree(c) for c in m.coefficient))
        for m in term.monomials
    )


def to_sexpr(term):
    """
    Canonical wire text of a term
    """
    return sexpr.write(to_sexpr_tree(term))


def from_sexpr_tree(tree):
    if tree == '0':
        return ZERO
    if isinstance(tree, str):
        raise ParseError('unknown theta atom %r' % (tree,))
    if len(tree) == 2 and tree[0] == 'v':
        return ThetaApp(from_sexpr_tree(tree[1]))
    if len(tree) >= 2 and tree[0] == 'sum':
        return ThetaSum(tuple(_monomial_from_tree(item) for item in tree[1:]))
    raise ParseError('malformed theta term %s' % (sexpr.write(tree),))


def _monomial_from_tree(tree):
    if isinstance(tree, str) or len(tree) != 3 or tree[0] != 'mono':
        raise ParseError('expected (mono EXP COEF), got %s' % (sexpr.write(tree),))
    coefficient = tree[2]
    if isinstance(coefficient, str) or len(coefficient) < 2 or coefficient[0] != 'cs':
        raise ParseError('expected (cs (v ARG) ...), got %s' % (sexpr.write(coefficient),))
    items = tuple(from_sexpr_tree(item) for item in coefficient[1:])
    if not all(isinstance(item, ThetaApp) for item in items):
        raise ParseError('coefficient entries must be (v ARG) terms')
    return Monomial(from_sexpr_tree(tree[1]), items)


def parse_theta(text):
    """
    Parse the wire syntax.  The result is not validated, use
    :func:`validate_theta` for that.
    """
    return from_sexpr_tree(sexpr.read(text))


def pretty(term):
    """
    Human readable form: ``0``, ``v(b)``, ``O`` for Omega and ``O^a.b``
    monomials joined by ``+``
    """
    if isinstance(term, ThetaZero):
        return '0'
    if isinstance(term, ThetaApp):
        return 'v(%s)' % (pretty(term.argument),)
    parts = []
    for mono in term.monomials:
        coefficient = '+'.join(pretty(c) for c in mono.coefficient)
        if mono.exponent == ZERO:
            parts.append(coefficient)
            continue
        base = 'O' if mono.exponent == ONE else 'O^' + _grouped(pretty(mono.exponent))
        if mono.coefficient == (ONE,):
            parts.append(base)
        else:
            parts.append(base + '·' + _grouped(coefficient))
    return '+'.join(parts)


def _grouped(text):
    return '(' + text + ')' if '+' in text else text


# Documented aliases
OMEGA_SQUARED = monomial(nat_theta(2))
FEFERMAN_SCHUTTE = theta(OMEGA_SQUARED)
SMALL_VEBLEN = theta(monomial(theta(ONE)))
