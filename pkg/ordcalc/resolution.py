# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Decorated ground resolution refutations of the clause families

    C_i, ~D_i                              (unit pairs, i < n)
    {~C_i : i in I} + {D_j : j in J}       (one clause per partition I, J of [0, n))

Every literal occurrence carries a positive integer, its decoration.  A
decorated derivation satisfies three conditions:

1. the two literals resolved upon carry the same decoration;
2. an occurrence passed from a premise to the conclusion keeps its
   decoration, so a clause never holds one literal with two decorations;
3. a unit leaf ``C_i^(k), ~D_i^(m)`` has ``k > m``, and a partition leaf has
   every decoration of a negative literal below every decoration of a
   positive one.

:func:`build_refutation` assembles a refutation of size ``n`` from the
derivations ``pi_j(n)`` of ``~D_j``, built by recursion on ``n``.
:func:`brute_force` searches the decorated refutations with bounded
decorations independently, and :func:`to_controlled` turns a refutation into
a controlled derivation certificate whose decorations ``m`` become the stages
``beta_m`` of :func:`ordcalc.psi.collapse_steps`.

Derivations are immutable DAGs; subderivations are shared wherever the
construction reuses them.

Example:

    >>> refutation = build_refutation(2)
    >>> max_decoration(refutation), max_decoration_index(refutation)
    (4, 5)
"""
import dataclasses
import functools
import itertools
import json
import logging
import re

from . import controlled
from . import formula as fl
from . import psi
from .exceptions import CertificateError, DecorationError, ParseError
from .report import Report


logger = logging.getLogger(__name__)  # pylint: disable=C0103


KINDS = ('C', 'D')
SHIFT_MODES = ('minimal', 'uniform')
UNIT = 'unit'
PARTITION = 'partition'


@dataclasses.dataclass(frozen=True, order=True)
class Literal:
    """
    C_i or D_i, possibly negated, with an optional decoration
    """
    kind: str
    index: int
    positive: bool = True
    decoration: int = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DecorationError('literal kind must be C or D, got %r' % (self.kind,))
        if self.index < 0:
            raise DecorationError('literal index must not be negative')
        if self.decoration is not None and self.decoration < 1:
            raise DecorationError('decorations are positive integers, got %r' % (self.decoration,))

    @property
    def key(self):
        return self.kind, self.index

    @property
    def atom(self):
        """
        The literal without its decoration
        """
        return self.kind, self.index, self.positive

    def complement(self):
        return dataclasses.replace(self, positive=not self.positive)

    def decorated(self, decoration):
        return dataclasses.replace(self, decoration=decoration)

    def __str__(self):
        text = '%s%s%d' % ('' if self.positive else '-', self.kind, self.index)
        if self.decoration is not None:
            text += '^%d' % (self.decoration,)
        return text


_LITERAL = re.compile(r'^(-?)([CD])(\d+)(?:\^(\d+))?$')


def parse_literal(text):
    match = _LITERAL.match(text.strip())
    if not match:
        raise ParseError('malformed literal %r' % (text,))
    sign, kind, index, decoration = match.groups()
    return Literal(kind, int(index), not sign, int(decoration) if decoration else None)


def show_clause(clause):
    return '{%s}' % (', '.join(str(lit) for lit in sorted(clause)),)


@dataclasses.dataclass(frozen=True, eq=False)
class DecoratedDerivation:
    """
    A leaf clause or a resolution of two derivations

    Attributes:
        conclusion(frozenset):
            The decorated literals of the derived clause

        leaf(str):
            ``unit`` or ``partition`` for leaves, None for resolutions

        premises(tuple):
            The two premise derivations of a resolution

        pivot(tuple):
            (kind, index) of the literal resolved upon
    """
    conclusion: frozenset
    leaf: str = None
    premises: tuple = ()
    pivot: tuple = None

    @property
    def is_leaf(self):
        return self.leaf is not None


def leaf(literals, kind):
    return DecoratedDerivation(conclusion=frozenset(literals), leaf=kind)


def resolve(left, right, pivot):
    """
    Resolve two derivations on the literal ``pivot = (kind, index)``

    Raises
    ------
    DecorationError
        The premises do not hold the literal with opposite signs
    """
    left_lits = [lit for lit in left.conclusion if lit.key == pivot]
    right_lits = [lit for lit in right.conclusion if lit.key == pivot]
    if len(left_lits) != 1 or len(right_lits) != 1 or left_lits[0].positive == right_lits[0].positive:
        raise DecorationError('cannot resolve %s with %s on %s%d' % (
            show_clause(left.conclusion), show_clause(right.conclusion), pivot[0], pivot[1]))
    conclusion = (left.conclusion | right.conclusion) - {left_lits[0], right_lits[0]}
    return DecoratedDerivation(conclusion=conclusion, premises=(left, right), pivot=pivot)


def family_size(derivation):
    """
    1 + the largest literal index in the derivation
    """
    return 1 + max((lit.index for node in nodes(derivation) for lit in node.conclusion), default=-1)


def nodes(derivation):
    """
    The distinct nodes of a derivation, each once, root first
    """
    seen = set()
    stack = [derivation]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(reversed(node.premises))


def leaves(derivation):
    return (node for node in nodes(derivation) if node.is_leaf)


# Clause families

def gen_clauses(n):
    """
    The unit pair clauses and the partition clauses of size ``n``

    Returns
    -------
    tuple
        (units, partitions): n clauses {C_i, ~D_i} and 2**n clauses, the
        partitions ordered by the bitmask of I
    """
    if n < 1:
        raise DecorationError('clause families start at n = 1, got %d' % (n,))
    units = [frozenset({Literal('C', i), Literal('D', i, False)}) for i in range(n)]
    partitions = []
    for mask in range(1 << n):
        partitions.append(frozenset(
            Literal('C', i, False) if mask >> i & 1 else Literal('D', i) for i in range(n)
        ))
    return units, partitions


# Transformations

def _transform(derivation, literal_map, extra, cache):
    """
    Copy a derivation, mapping every literal and adding ``extra`` to
    partition leaves and everything below them
    """
    key = id(derivation)
    if key in cache:
        return cache[key][1]
    if derivation.is_leaf:
        conclusion = frozenset(literal_map(lit) for lit in derivation.conclusion)
        if extra is not None and derivation.leaf == PARTITION:
            conclusion |= {extra}
        result = DecoratedDerivation(conclusion=conclusion, leaf=derivation.leaf)
    else:
        left, right = (_transform(p, literal_map, extra, cache) for p in derivation.premises)
        pivot = literal_map(Literal(*derivation.pivot)).key
        result = resolve(left, right, pivot)
    cache[key] = (derivation, result)
    return result


def shift_decorations(derivation, amount, extra=None, cache=None):
    """
    Raise every decoration by ``amount``, optionally appending ``extra``
    below partition leaves
    """
    def shifted(lit):
        return lit if lit.decoration is None else lit.decorated(lit.decoration + amount)
    return _transform(derivation, shifted, extra, {} if cache is None else cache)


def swap_indices(derivation, a, b):
    """
    Interchange the indices ``a`` and ``b`` in every literal
    """
    swap = {a: b, b: a}

    def swapped(lit):
        return dataclasses.replace(lit, index=swap.get(lit.index, lit.index))
    return _transform(derivation, swapped, None, {})


def _single_negative_d(derivation):
    conclusion = derivation.conclusion
    if len(conclusion) != 1:
        raise DecorationError('expected a derivation of one literal ~D_p, got %s' % (show_clause(conclusion),))
    (lit,) = conclusion
    if lit.kind != 'D' or lit.positive:
        raise DecorationError('expected a derivation of ~D_p, got %s' % (lit,))
    return lit


def _check_family(derivation, n):
    size = family_size(derivation)
    if n is None:
        return size
    if n < size:
        raise DecorationError('the derivation uses indices up to %d, not a family of size %d' % (size - 1, n))
    return n


def _partition_decorations(derivation, positive):
    return [
        lit.decoration for node in leaves(derivation) if node.leaf == PARTITION
        for lit in node.conclusion if lit.positive == positive
    ]


def max_negative_leaf_decoration(derivation):
    """
    The largest decoration of a negative literal in a partition leaf, 0 if
    there is none
    """
    return max(_partition_decorations(derivation, False), default=0)


def min_positive_leaf_decoration(derivation):
    return min(_partition_decorations(derivation, True), default=None)


def minimal_shift(derivation, m):
    """
    The least uniform raise after which ``~C_n^(m)`` can be appended to
    every partition leaf
    """
    smallest = min_positive_leaf_decoration(derivation)
    if smallest is None:
        return 0
    return max(0, m + 1 - smallest)


def extend_neg(derivation, m, n=None, shift=None, cache=None):
    """
    From a derivation of ~D_p^(k) build one of ~D_p^(k + s), ~C_n^(m)

    Parameters
    ----------
    derivation : DecoratedDerivation
        A derivation of a single literal ~D_p from the family of size n

    m : int
        Decoration of the appended literal ~C_n

    n : int, optional
        Family size, by default 1 + the largest index in use

    shift : int, optional
        The raise s of all decorations; 1 + m when omitted

    Raises
    ------
    DecorationError
        The derivation does not prove one literal ~D_p, ``n`` does not cover
        its indices or the shift is too small
    """
    _single_negative_d(derivation)
    n = _check_family(derivation, n)
    if m < 1:
        raise DecorationError('decorations are positive integers, got %d' % (m,))
    shift = 1 + m if shift is None else shift
    if shift < minimal_shift(derivation, m):
        raise DecorationError('a raise by %d leaves a partition leaf with a decoration not above %d' % (shift, m))
    return shift_decorations(derivation, shift, Literal('C', n, False, m), cache)


def extend_pos(derivation, k=None, n=None, cache=None):
    """
    From a derivation of ~D_q^(k_q) build one of ~D_q^(k_q), D_n^(k)

    ``k`` defaults to 1 + the largest decoration of a negative literal in a
    partition leaf.

    Returns
    -------
    tuple
        (derivation, k)
    """
    if not isinstance(derivation, DecoratedDerivation):
        raise DecorationError('extend_pos needs a derivation, got %r' % (derivation,))
    _single_negative_d(derivation)
    n = _check_family(derivation, n)
    needed = 1 + max_negative_leaf_decoration(derivation)
    k = needed if k is None else k
    if k < needed:
        raise DecorationError('D_%d^(%d) is not above every negative partition decoration' % (n, k))
    return shift_decorations(derivation, 0, Literal('D', n, True, k), cache), k


# The construction

def _check_shift_mode(shift):
    if shift not in SHIFT_MODES:
        raise DecorationError('shift mode must be one of %s, got %r' % (', '.join(SHIFT_MODES), shift))


@functools.lru_cache(maxsize=32)
def build_family(n, shift='minimal'):
    """
    The derivations pi_0(n), ..., pi_{n-1}(n)

    Parameters
    ----------
    n : int
        Family size, at least 1

    shift : str
        ``minimal`` raises the extended derivations only as far as needed,
        ``uniform`` by 1 + m

    Returns
    -------
    tuple
        pi_j(n) for j < n
    """
    _check_shift_mode(shift)
    if n < 1:
        raise DecorationError('clause families start at n = 1, got %d' % (n,))
    if n == 1:
        k, m = 1, 2
        unit = leaf({Literal('C', 0, True, m), Literal('D', 0, False, k)}, UNIT)
        partition = leaf({Literal('C', 0, False, m)}, PARTITION)
        return (resolve(unit, partition, ('C', 0)),)

    previous = build_family(n - 1, shift)
    top = n - 1
    k = 1 + max(max_negative_leaf_decoration(pi) for pi in previous)
    m = k + 1
    logger.debug('Building pi_j(%d): k=%d m=%d shift=%s', n, k, m, shift)

    # D_top^(k) from the leaf D_0 .. D_top and the pi_j extended by D_top^(k)
    positive_cache = {}
    chain = leaf(
        {Literal('D', j, True, _single_negative_d(pi).decoration) for j, pi in enumerate(previous)} | {Literal('D', top, True, k)},
        PARTITION
    )
    for j, pi in enumerate(previous):
        extended, _ = extend_pos(pi, k, top, positive_cache)
        chain = resolve(chain, extended, ('D', j))

    unit = leaf({Literal('C', top, True, m), Literal('D', top, False, k)}, UNIT)
    negative_cache = {}
    family = []
    for pi in previous:
        amount = minimal_shift(pi, m) if shift == 'minimal' else 1 + m
        extended = extend_neg(pi, m, top, amount, negative_cache.setdefault(amount, {}))
        family.append(resolve(resolve(unit, extended, ('C', top)), chain, ('D', top)))
    family.append(swap_indices(family[0], 0, top))
    return tuple(family)


def build_pi(j, n, shift='minimal'):
    """
    The derivation pi_j(n) of ~D_j^(k_j)

    Raises
    ------
    DecorationError
        j is not below n
    """
    if not 0 <= j < n:
        raise DecorationError('pi_j(n) needs 0 <= j < n, got j=%d n=%d' % (j, n))
    return build_family(n, shift)[j]


@functools.lru_cache(maxsize=32)
def build_refutation(n, shift='minimal'):
    """
    Resolve the partition leaf D_0^(k_0), ..., D_{n-1}^(k_{n-1}) against
    every pi_j(n) down to the empty clause
    """
    family = build_family(n, shift)
    root = leaf({_single_negative_d(pi).complement() for pi in family}, PARTITION)
    for j, pi in enumerate(family):
        root = resolve(root, pi, ('D', j))
    logger.debug('Refutation of size %d: %d distinct nodes', n, node_count(root))
    return root


# Measures

def _fold(derivation, at_leaf, combine):
    memo = {}

    def visit(node):
        if id(node) not in memo:
            if node.is_leaf:
                memo[id(node)] = at_leaf(node)
            else:
                memo[id(node)] = combine(node, [visit(p) for p in node.premises])
        return memo[id(node)]
    return visit(derivation)


def leaf_count(derivation):
    """
    Leaves of the derivation as a tree, shared subderivations counted once per
    use
    """
    return _fold(derivation, lambda node: 1, lambda node, values: sum(values))


def node_count(derivation):
    return sum(1 for _ in nodes(derivation))


def height(derivation):
    return _fold(derivation, lambda node: 0, lambda node, values: 1 + max(values))


def max_decoration(derivation):
    return max((lit.decoration or 0 for node in nodes(derivation) for lit in node.conclusion), default=0)


def leaf_stage(node):
    """
    max(max k, 1 + max m) over the positive decorations k and negative
    decorations m of a leaf
    """
    return max(
        (lit.decoration if lit.positive else lit.decoration + 1 for lit in node.conclusion),
        default=1
    )


def max_decoration_index(derivation):
    return max((leaf_stage(node) for node in leaves(derivation)), default=0)


def growth_table(upto, shift='minimal'):
    """
    Rows (n, leaves, max decoration, max decoration index) for n = 1 .. upto
    """
    rows = []
    for n in range(1, upto + 1):
        refutation = build_refutation(n, shift)
        rows.append((n, leaf_count(refutation), max_decoration(refutation), max_decoration_index(refutation)))
    return rows


def expected_pi_leaves(n):
    """
    Leaves of pi_j(n): 2 for n = 1, else n * leaves(n - 1) + 2
    """
    count = 2
    for size in range(2, n + 1):
        count = size * count + 2
    return count


def expected_refutation_leaves(n):
    return n * expected_pi_leaves(n) + 1


def expected_uniform_max_decoration(n):
    """
    Largest decoration of the refutation built with the uniform 1 + m raise
    """
    value = 2
    for _ in range(2, n + 1):
        value = 2 * value + 3
    return value


# Checking

class _Checker:

    def __init__(self, size, report):
        self.size = size
        self.report = report
        self.seen = set()

    def check(self, root):
        stack = [(root, 'root')]
        while stack:
            node, path = stack.pop()
            if id(node) in self.seen:
                continue
            self.seen.add(id(node))
            self._decorations(node, path)
            if node.is_leaf:
                self._leaf(node, path)
            else:
                self._resolution(node, path)
                for index in reversed(range(len(node.premises))):
                    stack.append((node.premises[index], '%s.%d' % (path, index)))

    def _decorations(self, node, path):
        for lit in node.conclusion:
            if lit.decoration is None:
                self.report.add(path, 'literal %s has no decoration' % (lit,), 'decoration')

    def _leaf(self, node, path):
        lits = sorted(node.conclusion)
        if any(lit.decoration is None for lit in lits):
            return
        if node.leaf == UNIT:
            positive = [lit for lit in lits if lit.positive]
            negative = [lit for lit in lits if not lit.positive]
            if (len(lits) != 2 or len(positive) != 1 or positive[0].kind != 'C' or negative[0].kind != 'D'
                    or positive[0].index != negative[0].index):
                self.report.add(path, '%s is not a unit pair clause C_i, ~D_i' % (show_clause(lits),), 'leaf')
                return
            if not positive[0].decoration > negative[0].decoration:
                self.report.add(path, 'unit leaf %s needs %d > %d' % (
                    show_clause(lits), positive[0].decoration, negative[0].decoration), 'leaf-order')
            return
        if node.leaf != PARTITION:
            self.report.add(path, 'unknown leaf kind %r' % (node.leaf,), 'leaf')
            return
        shapes_ok = all((lit.kind == 'C') != lit.positive for lit in lits)
        indices = sorted(lit.index for lit in lits)
        if not shapes_ok or indices != list(range(self.size)):
            self.report.add(path, '%s is not a partition clause of size %d' % (show_clause(lits), self.size), 'leaf')
            return
        negative = [lit.decoration for lit in lits if not lit.positive]
        positive = [lit.decoration for lit in lits if lit.positive]
        if negative and positive and not max(negative) < min(positive):
            self.report.add(path, 'partition leaf %s needs max %d < min %d' % (
                show_clause(lits), max(negative), min(positive)), 'leaf-order')

    def _resolution(self, node, path):
        if len(node.premises) != 2 or node.pivot is None:
            self.report.add(path, 'a resolution has two premises and a pivot', 'resolution')
            return
        left, right = node.premises
        pivot = tuple(node.pivot)
        found = [[lit for lit in premise.conclusion if lit.key == pivot] for premise in (left, right)]
        if len(found[0]) != 1 or len(found[1]) != 1 or found[0][0].positive == found[1][0].positive:
            self.report.add(path, 'premises do not hold %s%d with opposite signs' % pivot, 'resolution')
            return
        cut_left, cut_right = found[0][0], found[1][0]
        if cut_left.decoration != cut_right.decoration:
            self.report.add(path, 'resolved literals %s and %s carry different decorations' % (cut_left, cut_right), 'cut-decoration')
        passed = (left.conclusion - {cut_left}) | (right.conclusion - {cut_right})
        by_atom = {}
        for lit in passed:
            by_atom.setdefault(lit.atom, set()).add(lit.decoration)
        for atom, decorations in sorted(by_atom.items()):
            if len(decorations) > 1:
                self.report.add(path, 'occurrences of %s%s%d carry decorations %s' % (
                    '' if atom[2] else '-', atom[0], atom[1], sorted(d or 0 for d in decorations)), 'link')
        if node.conclusion != passed:
            missing = passed - node.conclusion
            extra = node.conclusion - passed
            self.report.add(path, 'conclusion differs from the resolvent: missing %s, extra %s' % (
                show_clause(missing), show_clause(extra)), 'link')


def check_decoration(derivation):
    """
    Check resolution soundness and the three decoration conditions

    Returns
    -------
    Report
        Diagnostics with the rules ``resolution``, ``cut-decoration``,
        ``link``, ``leaf``, ``leaf-order`` and ``decoration``
    """
    if not isinstance(derivation, DecoratedDerivation):
        raise DecorationError('check_decoration needs a derivation, got %r' % (type(derivation).__name__,))
    size = family_size(derivation)
    report = Report(subject='decorated derivation over %d indices' % (size,))
    _Checker(size, report).check(derivation)
    logger.debug('Checked decorated derivation: %d diagnostics', len(report.diagnostics))
    return report


# Exhaustive search

def _consistent(clause):
    atoms = {}
    for lit in clause:
        if atoms.setdefault(lit.atom, lit.decoration) != lit.decoration:
            return False
    return True


def _tautology(clause):
    keys = {}
    for lit in clause:
        keys.setdefault(lit.key, set()).add(lit.positive)
    return any(len(signs) == 2 for signs in keys.values())


def decorated_leaves(n, max_dec):
    """
    Every decorated instance of the clause families with decorations in
    1 .. max_dec that meets the leaf conditions
    """
    units, partitions = gen_clauses(n)
    values = range(1, max_dec + 1)
    result = []
    for clause in units:
        positive, negative = sorted(clause, key=lambda lit: not lit.positive)
        for k, m in itertools.product(values, values):
            if k > m:
                result.append(leaf({positive.decorated(k), negative.decorated(m)}, UNIT))
    for clause in partitions:
        lits = sorted(clause)
        for decorations in itertools.product(values, repeat=len(lits)):
            negative = [d for lit, d in zip(lits, decorations) if not lit.positive]
            positive = [d for lit, d in zip(lits, decorations) if lit.positive]
            if negative and positive and not max(negative) < min(positive):
                continue
            result.append(leaf({lit.decorated(d) for lit, d in zip(lits, decorations)}, PARTITION))
    return result


def _sort_key(clause):
    return len(clause), sorted((lit.kind, lit.index, lit.positive, lit.decoration) for lit in clause)


def brute_force(n, max_dec):
    """
    Given-clause saturation over decorated clauses with forward subsumption

    Returns
    -------
    DecoratedDerivation or None
        A refutation with decorations at most ``max_dec``, None when there is
        none
    """
    if max_dec < 1:
        return None
    pending = sorted(decorated_leaves(n, max_dec), key=lambda d: _sort_key(d.conclusion))
    processed = []
    kept = {}
    for derivation in pending:
        kept.setdefault(derivation.conclusion, derivation)
    queue = [kept[clause] for clause in sorted(kept, key=_sort_key)]
    logger.debug('Search n=%d max_dec=%d: %d leaves', n, max_dec, len(queue))
    while queue:
        given = queue.pop(0)
        if not given.conclusion:
            return given
        if any(done.conclusion <= given.conclusion for done in processed):
            continue
        processed.append(given)
        fresh = []
        for other in processed:
            for lit in given.conclusion:
                opposite = lit.complement()
                if opposite not in other.conclusion:
                    continue
                resolvent = (given.conclusion | other.conclusion) - {lit, opposite}
                if not _consistent(resolvent) or _tautology(resolvent):
                    continue
                if resolvent in kept or any(done.conclusion <= resolvent for done in processed):
                    continue
                derivation = DecoratedDerivation(conclusion=resolvent, premises=(given, other), pivot=lit.key)
                kept[resolvent] = derivation
                fresh.append(derivation)
        if any(not d.conclusion for d in fresh):
            return next(d for d in fresh if not d.conclusion)
        queue.extend(fresh)
        queue.sort(key=lambda d: _sort_key(d.conclusion))
    logger.debug('Search n=%d max_dec=%d: saturated with %d clauses', n, max_dec, len(processed))
    return None


def minimal_max_decoration(n, limit):
    """
    The least bound on decorations for which :func:`brute_force` finds a
    refutation, None when none up to ``limit`` does
    """
    for max_dec in range(1, limit + 1):
        if brute_force(n, max_dec) is not None:
            return max_dec
    return None


# Controlled derivations

def atomic_bindings(n, positive_name='c', negative_name='d'):
    """
    C_i := I_c^{<Omega}(i) and D_i := I_d^{<Omega}(i)
    """
    bindings = {}
    for i in range(n):
        bindings[('C', i)] = fl.Fix(positive_name, psi.OMEGA, fl.Num(i))
        bindings[('D', i)] = fl.Fix(negative_name, psi.OMEGA, fl.Num(i))
    return bindings


def _binding_formula(bindings, lit, steps):
    formula = fl.bound_positive(bindings[lit.key], steps(lit.decoration).beta_m)
    return formula if lit.positive else fl.negate(formula)


def _validate_bindings(derivation, bindings):
    for key in sorted({lit.key for node in nodes(derivation) for lit in node.conclusion}):
        if key not in bindings:
            raise CertificateError('no binding for %s%d' % key)
        formula = bindings[key]
        if not fl.is_positive(formula):
            raise CertificateError('binding of %s%d is not positive' % key)
        if fl.free_vars(formula):
            raise CertificateError('binding of %s%d is not closed' % key)


def to_controlled(derivation, gamma, a0, bindings):
    """
    A controlled derivation certificate of the conclusion of a decorated
    derivation

    A literal with decoration m becomes its binding with every positive
    Omega-stage fixpoint atom bounded by beta_m, negated for negative
    literals.  Leaves become hypotheses with height beta_s and operator
    index b_s + 1 for their leaf stage s; a resolution becomes a cut one above
    the larger premise height, with operator index b_s + 1 for the largest
    leaf stage s above it.

    Parameters
    ----------
    derivation : DecoratedDerivation
        A derivation accepted by :func:`check_decoration`

    gamma, a0 : psi terms
        The parameters of :func:`ordcalc.psi.collapse_steps`

    bindings : dict
        (kind, index) to positive closed formulas

    Raises
    ------
    CertificateError
        Rejected derivation, invalid bindings, or ``gamma`` or ``a0`` not a
        normal form term
    """
    report = check_decoration(derivation)
    if not report.ok:
        raise CertificateError('to_controlled needs a valid decorated derivation: %s' % (report.diagnostics[0],))
    for label, term in (('gamma', gamma), ('a0', a0)):
        if not psi.is_valid_psi(term) or not psi.is_nf(term):
            raise CertificateError('%s %s is not a normal form psi term' % (label, psi.pretty(term)))
    bindings = {(key[0], int(key[1])) if not isinstance(key, str) else parse_literal(key).key: value
                for key, value in bindings.items()}
    _validate_bindings(derivation, bindings)

    steps = functools.lru_cache(maxsize=None)(lambda m: psi.collapse_steps(gamma, a0, m))
    memo = {}

    def convert(node):
        if id(node) in memo:
            return memo[id(node)][0]
        sequent = frozenset(_binding_formula(bindings, lit, steps) for lit in node.conclusion)
        if node.is_leaf:
            stage = leaf_stage(node)
            result = controlled.certificate(
                psi.succ_psi(steps(stage).b_m), steps(stage).beta_m, 1, sequent, 'hypothesis',
                note='%s leaf %s' % (node.leaf, show_clause(node.conclusion))
            )
            memo[id(node)] = (result, stage)
            return result
        premises = [convert(p) for p in node.premises]
        stage = max(memo[id(p)][1] for p in node.premises)
        positive_side = [p for p in node.premises if any(lit.key == node.pivot and lit.positive for lit in p.conclusion)][0]
        cut_lit = next(lit for lit in positive_side.conclusion if lit.key == node.pivot)
        cut = _binding_formula(bindings, cut_lit, steps)
        if node.premises[0] is positive_side:
            premises.reverse()
        result = controlled.certificate(
            psi.succ_psi(steps(stage).b_m),
            psi.succ_psi(psi.psi_max([p.bound for p in premises])),
            1, sequent, 'cut', premises, cut=cut
        )
        memo[id(node)] = (result, stage)
        return result

    root = convert(derivation)
    logger.debug('Controlled certificate of height %s', psi.pretty(root.bound))
    return root


# JSON

def derivation_to_json(derivation):
    """
    ``{"nodes": [...], "root": i}``; each node is listed once, so shared
    subderivations stay shared
    """
    index = {}
    listed = []

    def visit(node):
        if id(node) in index:
            return index[id(node)]
        premises = [visit(p) for p in node.premises]
        entry = {'conclusion': [str(lit) for lit in sorted(node.conclusion)]}
        if node.is_leaf:
            entry['leaf'] = node.leaf
        else:
            entry['pivot'] = '%s%d' % tuple(node.pivot)
            entry['premises'] = premises
        index[id(node)] = len(listed)
        listed.append(entry)
        return index[id(node)]

    root = visit(derivation)
    return {'nodes': listed, 'root': root}


def derivation_from_json(document):
    try:
        built = []
        for entry in document['nodes']:
            conclusion = frozenset(parse_literal(text) for text in entry['conclusion'])
            if 'leaf' in entry:
                built.append(DecoratedDerivation(conclusion=conclusion, leaf=entry['leaf']))
                continue
            pivot = parse_literal(entry['pivot'])
            premises = tuple(built[i] for i in entry['premises'])
            built.append(DecoratedDerivation(conclusion=conclusion, premises=premises, pivot=pivot.key))
        return built[document['root']]
    except (KeyError, IndexError, TypeError) as error:
        raise ParseError('malformed derivation document: %s' % (error,)) from error


def load_derivation(path):
    with open(path, encoding='utf-8') as handle:
        try:
            return derivation_from_json(json.load(handle))
        except json.JSONDecodeError as error:
            raise ParseError('%s: %s' % (path, error)) from error
