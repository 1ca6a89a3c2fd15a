# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
The psi notation system: 0, Omega, omega powers above Omega, psi and sums.

``H_gamma(X)`` is the closure of ``X`` and ``{0, Omega}`` under sums, under
``omega^b`` for ``b > Omega`` and under ``psi(b)`` for ``b < gamma``;
``psi(a)`` is the least ``b <= Omega`` with ``H_a(b)`` below Omega contained
in ``b``.  Terms are compared in normal form (every ``psi(a)`` subterm has all
members of ``G(a)`` below ``a``), where ``psi`` is strictly increasing and all
psi values are countable.

Wire syntax::

    0  Om  (w EXP)  (p ARG)  (sum T1 T2 ...)

The module also holds the ordinal bookkeeping of the collapsing argument:
:func:`hat`, :func:`collapse_steps` and the bound helpers built on them.

Example:

    >>> from ordcalc import psi
    >>> psi.cmp_psi(psi.ONE, psi.psi_app(psi.ONE))
    <Order.LT: -1>
    >>> psi.pretty(psi.hat(psi.ZERO, psi.ONE))
    'w^(Om+p(0))'
"""
import dataclasses
import functools
import logging

from . import cnf
from . import sexpr
from .exceptions import ParseError, PsiError, PsiNormalFormError
from .ordering import Order
from .report import Report


logger = logging.getLogger(__name__)  # pylint: disable=C0103


@dataclasses.dataclass(frozen=True)
class PsiZero:
    """
    The ordinal 0
    """

    def __str__(self):
        return pretty(self)


@dataclasses.dataclass(frozen=True)
class OmegaConst:
    """
    The first uncountable Omega
    """

    def __str__(self):
        return pretty(self)


@dataclasses.dataclass(frozen=True)
class OmegaPow:
    """
    omega^exponent with exponent above Omega
    """
    exponent: object

    def __str__(self):
        return pretty(self)


@dataclasses.dataclass(frozen=True)
class PsiApp:
    """
    psi(argument)
    """
    argument: object

    def __str__(self):
        return pretty(self)


@dataclasses.dataclass(frozen=True)
class PsiSum:
    """
    Weakly decreasing sum of at least two principal terms
    """
    terms: tuple

    def __str__(self):
        return pretty(self)


@dataclasses.dataclass(frozen=True)
class CollapseSteps:
    """
    b_m = gamma + omega^(Omega + a0) * m and beta_m = psi(b_m)
    """
    gamma: object
    a0: object
    m: int
    b_m: object
    beta_m: object


ZERO = PsiZero()
OMEGA = OmegaConst()
ONE = PsiApp(ZERO)
PRINCIPALS = (OmegaConst, OmegaPow, PsiApp)


def _principals(term):
    if isinstance(term, PsiZero):
        return ()
    if isinstance(term, PsiSum):
        return term.terms
    return (term,)


def _from_principals(terms):
    terms = tuple(terms)
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return PsiSum(terms)


def _rank(principal):
    if isinstance(principal, PsiApp):
        return 0
    if isinstance(principal, OmegaConst):
        return 1
    return 2


def _compare_principal(left, right):
    left_rank, right_rank = _rank(left), _rank(right)
    if left_rank != right_rank:
        return -1 if left_rank < right_rank else 1
    if isinstance(left, PsiApp):
        return _compare(left.argument, right.argument)
    if isinstance(left, OmegaPow):
        return _compare(left.exponent, right.exponent)
    return 0


@functools.lru_cache(maxsize=1 << 16)
def _compare(left, right):
    if left == right:
        return 0
    if isinstance(left, PRINCIPALS) and isinstance(right, PRINCIPALS):
        return _compare_principal(left, right)
    left_terms, right_terms = _principals(left), _principals(right)
    for a, b in zip(left_terms, right_terms):
        result = _compare(a, b)
        if result:
            return result
    return (len(left_terms) > len(right_terms)) - (len(left_terms) < len(right_terms))


def cmp_psi(left, right):
    """
    Compare two normal-form psi terms

    Raises
    ------
    PsiNormalFormError
        Either argument is not in normal form
    """
    for term in (left, right):
        if not is_nf(term):
            raise PsiNormalFormError('%s is not in normal form' % (pretty(term),))
    return Order.of(_compare(left, right))


def psi_less(left, right):
    return _compare(left, right) < 0


def psi_max(terms):
    """
    Largest of a non-empty iterable of terms
    """
    return functools.reduce(lambda a, b: b if _compare(a, b) < 0 else a, terms)


def g_set(term):
    """
    G(term): G0 = G(Omega) = {}, G(psi a) = {a} | G(a), G(omega^a) = G(a) and
    a sum takes the union over its summands
    """
    if isinstance(term, (PsiZero, OmegaConst)):
        return frozenset()
    if isinstance(term, OmegaPow):
        return g_set(term.exponent)
    if isinstance(term, PsiApp):
        return frozenset((term.argument,)) | g_set(term.argument)
    result = frozenset()
    for item in term.terms:
        result |= g_set(item)
    return result


@functools.lru_cache(maxsize=1 << 14)
def is_nf(term):
    """
    True when every psi(a) subterm has every member of G(a) below a
    """
    if isinstance(term, (PsiZero, OmegaConst)):
        return True
    if isinstance(term, OmegaPow):
        return is_nf(term.exponent)
    if isinstance(term, PsiApp):
        argument = term.argument
        return is_nf(argument) and all(_compare(g, argument) < 0 for g in g_set(argument))
    return all(is_nf(item) for item in term.terms)


def validate_psi(term, path='term'):
    """
    Check the grammar of a psi term: omega powers above Omega, sums of at
    least two principal terms in weakly decreasing order
    """
    report = Report(subject='psi term')
    _validate(term, path, report)
    return report


def _validate(term, path, report):
    if isinstance(term, (PsiZero, OmegaConst)):
        return True
    if isinstance(term, OmegaPow):
        if not _validate(term.exponent, path + '.exp', report):
            return False
        if _compare(term.exponent, OMEGA) <= 0:
            report.add(path, 'omega power exponent must exceed Omega')
            return False
        return True
    if isinstance(term, PsiApp):
        return _validate(term.argument, path + '.arg', report)
    if not isinstance(term, PsiSum):
        report.add(path, 'not a psi term: %r' % (term,))
        return False
    if len(term.terms) < 2:
        report.add(path, 'a sum has at least two summands')
        return False
    ok = True
    for index, item in enumerate(term.terms):
        item_path = '%s[%d]' % (path, index)
        if not isinstance(item, PRINCIPALS):
            report.add(item_path, 'summands must be principal terms')
            ok = False
        elif not _validate(item, item_path, report):
            ok = False
    if ok:
        for index in range(1, len(term.terms)):
            if _compare(term.terms[index - 1], term.terms[index]) < 0:
                report.add('%s[%d]' % (path, index), 'sum must be weakly decreasing')
                ok = False
    return ok


def is_valid_psi(term):
    return validate_psi(term).ok


def _require_valid(term):
    report = validate_psi(term)
    if not report.ok:
        raise PsiError('invalid psi term %r: %s' % (term, '; '.join(str(d) for d in report)))


def add_psi(left, right):
    """
    Normalized sum: summands of ``left`` below the leading summand of
    ``right`` are absorbed
    """
    right_terms = _principals(right)
    if not right_terms:
        return left
    head = right_terms[0]
    kept = tuple(p for p in _principals(left) if _compare(p, head) >= 0)
    return _from_principals(kept + right_terms)


def omega_pow(exponent):
    """
    omega^exponent, defined for exponents above Omega

    Raises
    ------
    PsiError
        The exponent is not above Omega
    """
    _require_valid(exponent)
    if _compare(exponent, OMEGA) <= 0:
        raise PsiError('omega_pow needs an exponent above Omega, got %s' % (pretty(exponent),))
    return OmegaPow(exponent)


def psi_app(argument):
    """
    psi(argument)
    """
    _require_valid(argument)
    return PsiApp(argument)


def succ_psi(term):
    """
    term + 1
    """
    return add_psi(term, ONE)


def nat_psi(value):
    """
    The finite ordinal ``value`` as a sum of psi(0) terms
    """
    if value < 0:
        raise PsiError('ordinals are not negative')
    return _from_principals((ONE,) * value)


def h_member(gamma, extras, term):
    """
    Decide ``term`` in H_gamma(extras)

    Parameters
    ----------
    gamma : psi term
        Index of the operator

    extras : iterable of psi terms
        The set X

    term : psi term
        The term to decide

    Returns
    -------
    bool
    """
    extras = extras if isinstance(extras, frozenset) else frozenset(extras)
    return _h_member(gamma, extras, term)


def _h_member(gamma, extras, term):
    if term in extras or isinstance(term, (PsiZero, OmegaConst)):
        return True
    if isinstance(term, PsiSum):
        return all(_h_member(gamma, extras, item) for item in term.terms)
    if isinstance(term, OmegaPow):
        return _compare(term.exponent, OMEGA) > 0 and _h_member(gamma, extras, term.exponent)
    return _compare(term.argument, gamma) < 0 and _h_member(gamma, extras, term.argument)


def hat(gamma, a):
    """
    gamma + omega^(Omega + a).  For a = 0 the power omega^Omega is Omega
    itself.
    """
    return add_psi(gamma, _hat_principal(a))


def _hat_principal(a):
    if a == ZERO:
        return OMEGA
    return omega_pow(add_psi(OMEGA, a))


def collapse_steps(gamma, a0, m):
    """
    b_m = gamma + omega^(Omega + a0) * m as an m-fold sum, and beta_m = psi(b_m)

    Returns
    -------
    CollapseSteps
    """
    if m < 1:
        raise PsiError('collapse_steps needs m >= 1')
    principal = _hat_principal(a0)
    b_m = gamma
    for _ in range(m):
        b_m = add_psi(b_m, principal)
    return CollapseSteps(gamma=gamma, a0=a0, m=m, b_m=b_m, beta_m=psi_app(b_m))


def is_countable_psi(term):
    """
    True for terms built from 0, + and psi only
    """
    if isinstance(term, PsiZero):
        return True
    if isinstance(term, PsiApp):
        return is_countable_psi(term.argument)
    if isinstance(term, PsiSum):
        return all(is_countable_psi(item) for item in term.terms)
    return False


def omega_exp(a):
    """
    omega^a for a normal-form term.

    Below Omega the countable identity psi(a) = omega^a is used, which holds
    for the Omega-free fragment; omega^Omega is Omega; above Omega the
    omega_pow constructor applies.
    """
    order = _compare(a, OMEGA)
    if order > 0:
        return omega_pow(a)
    if order == 0:
        return OMEGA
    if not is_countable_psi(a):
        raise PsiError('omega^%s has no notation in this system' % (pretty(a),))
    return psi_app(a)


def cut_elimination_bound(a):
    """
    Height bound omega^a after eliminating cuts of the top degree
    """
    return omega_exp(a)


def collapsing_bound(gamma, a):
    """
    Operator index and height after collapsing a derivation of height a
    controlled by H_gamma: (hat(gamma, a) + 1, psi(hat(gamma, a)))
    """
    top = hat(gamma, a)
    return succ_psi(top), psi_app(top)


def norm_bound(a):
    """
    psi(omega^(Omega + a)): inductive norms of elements proved to be in a
    fixpoint by a derivation of height a stay below this value
    """
    return psi_app(hat(ZERO, a))


def psi_size(term):
    if isinstance(term, (PsiZero, OmegaConst)):
        return 1
    if isinstance(term, OmegaPow):
        return 1 + psi_size(term.exponent)
    if isinstance(term, PsiApp):
        return 1 + psi_size(term.argument)
    return 1 + sum(psi_size(item) for item in term.terms)


@functools.lru_cache(maxsize=None)
def _principals_of_size(size):
    if size == 1:
        return (OMEGA,)
    found = []
    for argument in terms_of_size(size - 1):
        candidate = PsiApp(argument)
        if is_nf(candidate):
            found.append(candidate)
        if _compare(argument, OMEGA) > 0:
            found.append(OmegaPow(argument))
    return tuple(found)


@functools.lru_cache(maxsize=None)
def _principal_lists(budget, upper):
    result = []
    for first in range(1, budget + 1):
        for principal in _principals_of_size(first):
            if upper is not None and _compare(principal, upper) > 0:
                continue
            if first == budget:
                result.append((principal,))
            else:
                result.extend((principal,) + rest for rest in _principal_lists(budget - first, principal))
    return tuple(result)


@functools.lru_cache(maxsize=None)
def terms_of_size(size):
    """
    All valid normal-form terms with exactly ``size`` nodes, in canonical
    text order
    """
    if size < 1:
        return ()
    if size == 1:
        return (ZERO, OMEGA)
    found = list(_principals_of_size(size))
    found.extend(PsiSum(items) for items in _principal_lists(size - 1, None) if len(items) >= 2)
    found.sort(key=to_sexpr)
    logger.debug('Enumerated %d psi terms of size %d', len(found), size)
    return tuple(found)


def enumerate_psi(size_bound):
    """
    Every valid normal-form term of size at most ``size_bound`` exactly once
    """
    if size_bound < 1:
        raise PsiError('size_bound must be at least 1')
    for size in range(1, size_bound + 1):
        yield from terms_of_size(size)


def count_psi(size_bound):
    return sum(len(terms_of_size(size)) for size in range(1, size_bound + 1))


def eval_countable_psi(term):
    """
    Evaluate a term built from 0, + and psi into Cantor normal form, with
    psi(a) = omega^a
    """
    if not is_countable_psi(term):
        raise PsiError('%s is outside the countable fragment' % (pretty(term),))
    return _eval(term)


def _eval(term):
    if isinstance(term, PsiZero):
        return cnf.ZERO
    if isinstance(term, PsiApp):
        return cnf.omega_exp(_eval(term.argument))
    return cnf.ordinal_sum(_eval(item) for item in term.terms)


def psi_minimality(target, size_bound, margin=4):
    """
    Spot-check psi(a) = min{b <= Omega : H_a(b) below Omega is inside b} over
    a finite universe.

    Candidates b are the enumerated terms of size at most ``size_bound`` not
    above ``target``; the universe deciding membership and inclusion is the
    enumerated countable terms of size at most ``size_bound + margin``.  The
    inclusion must fail for every candidate below ``target`` and hold at
    ``target``.
    """
    if not isinstance(target, PsiApp):
        raise PsiError('psi_minimality needs a psi(a) term')
    report = Report(subject='minimality of %s' % (pretty(target),))
    argument = target.argument
    universe = [u for u in enumerate_psi(size_bound + margin) if _compare(u, OMEGA) < 0]
    candidates = [b for b in enumerate_psi(size_bound) if _compare(b, target) <= 0]
    if target not in candidates:
        raise PsiError('%s is larger than size_bound allows' % (pretty(target),))
    for beta in candidates:
        below = frozenset(u for u in universe if _compare(u, beta) < 0)
        witness = next(
            (u for u in universe if _h_member(argument, below, u) and _compare(u, beta) >= 0),
            None
        )
        if beta == target and witness is not None:
            report.add(pretty(beta), 'closure escapes the target through %s' % (pretty(witness),))
        elif beta != target and witness is None:
            report.add(pretty(beta), 'closure stays below a smaller candidate')
    logger.debug('Minimality of %s: %d candidates over %d terms', pretty(target), len(candidates), len(universe))
    return report


def to_sexpr_tree(term):
    if isinstance(term, PsiZero):
        return '0'
    if isinstance(term, OmegaConst):
        return 'Om'
    if isinstance(term, OmegaPow):
        return ('w', to_sexpr_tree(term.exponent))
    if isinstance(term, PsiApp):
        return ('p', to_sexpr_tree(term.argument))
    return ('sum',) + tuple(to_sexpr_tree(item) for item in term.terms)


def to_sexpr(term):
    """
    Canonical wire text of a term
    """
    return sexpr.write(to_sexpr_tree(term))


def from_sexpr_tree(tree):
    if tree == '0':
        return ZERO
    if tree == 'Om':
        return OMEGA
    if isinstance(tree, str):
        raise ParseError('unknown psi atom %r' % (tree,))
    if len(tree) == 2 and tree[0] == 'w':
        return OmegaPow(from_sexpr_tree(tree[1]))
    if len(tree) == 2 and tree[0] == 'p':
        return PsiApp(from_sexpr_tree(tree[1]))
    if len(tree) >= 2 and tree[0] == 'sum':
        return PsiSum(tuple(from_sexpr_tree(item) for item in tree[1:]))
    raise ParseError('malformed psi term %s' % (sexpr.write(tree),))


def parse_psi(text):
    """
    Parse the wire syntax.  The result is not validated, use
    :func:`validate_psi` and :func:`is_nf` for that.
    """
    return from_sexpr_tree(sexpr.read(text))


def pretty(term):
    """
    Human readable form: ``0``, ``Om``, ``w^(b)``, ``p(a)`` and sums joined by
    ``+``
    """
    if isinstance(term, PsiZero):
        return '0'
    if isinstance(term, OmegaConst):
        return 'Om'
    if isinstance(term, OmegaPow):
        return 'w^(%s)' % (pretty(term.exponent),)
    if isinstance(term, PsiApp):
        return 'p(%s)' % (pretty(term.argument),)
    return '+'.join(pretty(item) for item in term.terms)
