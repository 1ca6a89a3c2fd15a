# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Least fixpoints of positive operators over a finite universe ``[0, N)``.

The stages are ``stages[0] = {}`` and ``stages[k + 1] = phi(stages[k])``, so
``stages[k]`` is the union of the stages below ``k`` and the inductive norm of
``n`` is the least ``k`` with ``n`` in ``stages[k + 1]``.  Unbounded
quantifiers in operator bodies range over the universe; a trace records when
that truncation happened for a body that is not an Acc operator.

Accessible parts of finite relations are computed independently of the
operator machinery, by peeling off elements whose predecessors are all
accessible, and serve as an oracle for the traces of :func:`acc_operator`.

Example:

    >>> rel = FiniteRelation(3, {(0, 1), (1, 2), (0, 2)})
    >>> [sorted(s) for s in lfp_stages(acc_operator(rel), 3).stages]
    [[], [0], [0, 1], [0, 1, 2]]
"""
import dataclasses
import functools
import json
import logging
import math

from . import cnf
from . import formula as fl
from . import operators
from . import psi
from .exceptions import FixpointError, FormulaError, ParseError, PsiError
from .report import Report


logger = logging.getLogger(__name__)  # pylint: disable=C0103


@dataclasses.dataclass(frozen=True)
class FiniteRelation:
    """
    A relation on [0, size); an edge (a, b) means a precedes b
    """
    size: int
    edges: frozenset = frozenset()

    def __init__(self, size, edges=()):
        edges = frozenset((int(a), int(b)) for a, b in edges)
        if size < 0:
            raise FixpointError('universe size must not be negative')
        for a, b in edges:
            if not (0 <= a < size and 0 <= b < size):
                raise FixpointError('edge (%d, %d) leaves the universe [0, %d)' % (a, b, size))
        object.__setattr__(self, 'size', size)
        object.__setattr__(self, 'edges', edges)

    @property
    def transitive(self):
        return is_transitive(self)

    def predecessors(self, element):
        return frozenset(a for a, b in self.edges if b == element)

    def to_json(self):
        return {'size': self.size, 'edges': sorted([a, b] for a, b in self.edges)}


def relation_from_json(document):
    try:
        return FiniteRelation(int(document['size']), [tuple(edge) for edge in document.get('edges', [])])
    except (KeyError, TypeError, ValueError) as error:
        raise ParseError('malformed relation document: %s' % (error,)) from error


def load_relation(path):
    with open(path, encoding='utf-8') as handle:
        try:
            return relation_from_json(json.load(handle))
        except json.JSONDecodeError as error:
            raise ParseError('%s: %s' % (path, error)) from error


def is_transitive(relation):
    edges = relation.edges
    return all((a, d) in edges for a, b in edges for c, d in edges if b == c)


def transitive_closure(relation):
    edges = set(relation.edges)
    changed = True
    while changed:
        extra = {(a, d) for a, b in edges for c, d in edges if b == c} - edges
        changed = bool(extra)
        edges |= extra
    return FiniteRelation(relation.size, edges)


def acc_operator(relation, name='acc'):
    """
    The Acc operator forall y (theta0(x, y) -> y in X) of a relation, theta0
    being the disjunction of ``y = a & x = b`` over its edges
    """
    x, y = fl.Var('x'), fl.Var('y')
    theta0 = fl.BigOr(tuple(
        fl.And(fl.Rel('=', y, fl.Num(a)), fl.Rel('=', x, fl.Num(b)))
        for a, b in sorted(relation.edges)
    ))
    return operators.acc_entry(name, theta0)


@dataclasses.dataclass(frozen=True)
class StageTrace:
    """
    The stages of an operator over [0, size)

    Attributes:
        operator(str):
            Operator name

        size(int):
            Universe bound N

        stages(tuple):
            stages[0] = {} and stages[k + 1] = phi(stages[k])

        closure_index(int):
            First k with stages[k] == stages[k + 1]

        truncated(bool):
            Unbounded quantifiers of a non-Acc body were cut to the universe
    """
    operator: str
    size: int
    stages: tuple
    closure_index: int
    truncated: bool = False

    @property
    def fixpoint(self):
        return self.stages[-1]

    def to_dict(self):
        return {
            'operator': self.operator, 'size': self.size,
            'stages': [sorted(s) for s in self.stages],
            'closure_index': self.closure_index, 'truncated': self.truncated,
        }


def _has_unbounded(body):
    if isinstance(body, fl.QUANTIFIERS):
        return True
    return any(_has_unbounded(child) for child in fl.children(body))


def _stage_index(stage):
    """
    Finite stage tags give their value, infinite ones None
    """
    try:
        value = psi.eval_countable_psi(stage)
    except PsiError:
        return None
    if not value.is_finite():
        return None
    return value.terms[0][1] if value.terms else 0


class _Interpretation:
    """
    Interprets fixpoint atoms of other operators by their own traces
    """

    def __init__(self, registry, size, computing):
        self.registry = registry
        self.size = size
        self.computing = computing

    @functools.lru_cache(maxsize=None)
    def trace(self, name):
        if name in self.computing:
            raise FixpointError('operator %s refers to its own fixpoint; use the set variable' % (name,))
        entry = self.registry.get(name)
        return _trace(entry, self.size, self.registry, self.computing | {name})

    def fix_value(self, name, stage, value):
        trace = self.trace(name)
        if stage == psi.OMEGA:
            return value in trace.fixpoint
        index = _stage_index(stage)
        if index is None or index >= len(trace.stages):
            return value in trace.fixpoint
        return value in trace.stages[index]


def apply_operator(entry, current, size, registry=None, interpretation=None):
    """
    phi(current) over [0, size)
    """
    interpretation = interpretation or _Interpretation(registry or operators.OperatorRegistry(), size, frozenset((entry.name,)))

    def set_value(name, value):
        if name != entry.set_var:
            raise FixpointError('operator %s uses an unknown set variable %s' % (entry.name, name))
        return value in current

    result = set()
    for element in range(size):
        try:
            if fl.evaluate(
                entry.body, {entry.var: element}, universe=size,
                set_value=set_value, fix_value=interpretation.fix_value
            ):
                result.add(element)
        except FormulaError as error:
            raise FixpointError('operator %s cannot be evaluated: %s' % (entry.name, error)) from error
    return frozenset(result)


def _trace(entry, size, registry, computing):
    interpretation = _Interpretation(registry, size, computing)
    stages = [frozenset()]
    while True:
        following = apply_operator(entry, stages[-1], size, interpretation=interpretation)
        if following == stages[-1]:
            break
        if not stages[-1] <= following:
            raise FixpointError('operator %s is not monotone on its stages' % (entry.name,))
        stages.append(following)
    truncated = _has_unbounded(entry.body) and not entry.acc_flag
    return StageTrace(entry.name, size, tuple(stages), len(stages) - 1, truncated)


def lfp_stages(entry, size, registry=None):
    """
    Iterate the operator from the empty set until nothing changes

    Parameters
    ----------
    entry : OperatorEntry
        The operator

    size : int
        Universe bound N

    registry : OperatorRegistry, optional
        Operators referred to by fixpoint atoms in the body

    Returns
    -------
    StageTrace
    """
    if size < 0:
        raise FixpointError('universe size must not be negative')
    registry = registry if registry is not None else operators.OperatorRegistry()
    trace = _trace(entry, size, registry, frozenset((entry.name,)))
    if trace.truncated:
        logger.warning('Operator %s: unbounded quantifiers truncated to [0, %d)', entry.name, size)
    logger.debug('Operator %s closes at stage %d over [0, %d)', entry.name, trace.closure_index, size)
    return trace


def stage_of(trace, element):
    """
    Least k with element in stages[k + 1], math.inf when it never enters
    """
    for index, stage in enumerate(trace.stages):
        if element in stage:
            return index - 1
    return math.inf


def norm(entry, element, size, registry=None):
    """
    The inductive norm of ``element``: min{k : element in I^{k}}, or
    math.inf
    """
    return stage_of(lfp_stages(entry, size, registry), element)


def acc_part(relation):
    """
    Accessible part and ranks of a finite relation

    Returns
    -------
    tuple
        (W, rank) with rank(n) = max(rank(m) + 1 for m before n), 0 for
        minimal elements
    """
    rank = {}
    pending = set(range(relation.size))
    predecessors = {element: relation.predecessors(element) for element in pending}
    level = 0
    while True:
        ready = sorted(e for e in pending if predecessors[e] <= rank.keys())
        if not ready:
            break
        for element in ready:
            rank[element] = max((rank[m] + 1 for m in predecessors[element]), default=0)
        pending.difference_update(ready)
        level += 1
    logger.debug('Accessible part: %d of %d elements after %d rounds', len(rank), relation.size, level)
    return frozenset(rank), rank


def rank_by_recursion(relation):
    """
    rank(n) = 1 + max rank of the predecessors of n, by memoized recursion;
    elements on or above a cycle get no rank
    """
    ranks = {}
    visiting = set()

    def visit(element):
        if element in ranks:
            return ranks[element]
        if element in visiting:
            return None
        visiting.add(element)
        values = [visit(m) for m in relation.predecessors(element)]
        visiting.discard(element)
        if any(v is None for v in values):
            return None
        ranks[element] = 1 + max(values, default=-1)
        return ranks[element]

    for element in range(relation.size):
        visit(element)
    return ranks


def _stages_are_monotone(trace, report):
    for index in range(1, len(trace.stages)):
        if not trace.stages[index - 1] <= trace.stages[index]:
            report.add('stages[%d]' % (index,), 'stage does not contain its predecessor', 'monotone')


def check_fixpoint_axioms(entry, size, registry=None, trace=None, leastness_limit=10):
    """
    Check phi(I) <= I and I <= phi(I) for the computed fixpoint, Prog for Acc
    operators, and, over universes of at most ``leastness_limit`` elements,
    that I is contained in every set closed under phi

    Parameters
    ----------
    entry : OperatorEntry
        The operator

    size : int
        Universe bound N

    registry : OperatorRegistry, optional
        Operators referred to by the body

    trace : StageTrace, optional
        A trace to check instead of a freshly computed one

    Returns
    -------
    Report
    """
    registry = registry if registry is not None else operators.OperatorRegistry()
    trace = trace if trace is not None else lfp_stages(entry, size, registry)
    report = Report(subject='fixpoint axioms of %s over [0, %d)' % (entry.name, size))
    if trace.truncated:
        report.note('unbounded quantifiers truncated to [0, %d)' % (size,))
    _stages_are_monotone(trace, report)
    fixpoint = trace.fixpoint
    image = apply_operator(entry, fixpoint, size, registry)
    for element in sorted(image - fixpoint):
        report.add(str(element), 'phi(I, %d) holds but %d is not in I' % (element, element), 'closure')
    for element in sorted(fixpoint - image):
        report.add(str(element), '%d is in I but phi(I, %d) fails' % (element, element), 'fixpoint')
    if entry.acc_flag:
        _check_prog(entry, size, fixpoint, report)
    if size <= leastness_limit:
        _check_leastness(entry, size, registry, fixpoint, report)
    return report


def _check_prog(entry, size, fixpoint, report):
    """
    Prog(I): an element all of whose theta0-predecessors are in I is in I
    """
    for element in range(size):
        predecessors = [
            fl.eval_term(entry.t0, {entry.var: element, entry.bound_var: other})
            for other in range(size)
            if fl.evaluate(entry.theta0, {entry.var: element, entry.bound_var: other})
        ]
        if all(p in fixpoint for p in predecessors) and element not in fixpoint:
            report.add(str(element), 'all predecessors of %d are in I but %d is not' % (element, element), 'prog')


def _check_leastness(entry, size, registry, fixpoint, report):
    for mask in range(1 << size):
        candidate = frozenset(e for e in range(size) if mask >> e & 1)
        if fixpoint <= candidate:
            continue
        if apply_operator(entry, candidate, size, registry) <= candidate:
            report.add(
                str(sorted(candidate)), 'a set closed under the operator misses %s' % (sorted(fixpoint - candidate),), 'least'
            )
            return


def norm_agreement(relation):
    """
    Elements where the trace of :func:`acc_operator` and :func:`acc_part`
    disagree; an empty list means agreement
    """
    trace = lfp_stages(acc_operator(relation), relation.size)
    accessible, rank = acc_part(relation)
    problems = []
    for element in range(relation.size):
        expected = rank[element] if element in accessible else math.inf
        found = stage_of(trace, element)
        if found != expected:
            problems.append((element, found, expected))
    return problems


def cnf_norm(value):
    """
    A finite norm as an ordinal of the oracle, math.inf unchanged
    """
    return value if value == math.inf else cnf.CNF.of(value)
