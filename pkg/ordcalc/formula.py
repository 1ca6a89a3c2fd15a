# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
First order formulas over the arithmetic signature with fixpoint predicates.

Terms are built from variables, numerals, successor, ``+``, ``*``, ``2^x`` and
the inverses ``p0``, ``p1`` of the Cantor pairing function.  Formulas are kept
in negation normal form: negation is not a node, :func:`negate` pushes it to
the atoms by de Morgan's laws.

Atoms are

* arithmetic relations ``t=s``, ``t<s`` and their complements ``t!=s``,
  ``t!<s`` (:class:`Rel`);
* fixpoint atoms ``I_name^{<stage}(t)`` and their complements (:class:`Fix`),
  the stage being a psi term, :data:`ordcalc.psi.OMEGA` for the fixpoint
  itself;
* set atoms ``t in X`` used inside operator bodies (:class:`SetAtom`).

Classification follows the positive/negative classes and the two
hierarchies over positive formulas: a finitary one closed under connectives
and bounded quantifiers, and an infinitary one built from canonical rank 0
shapes by alternating quantifier blocks.  A formula is of rank 0 when it is a
boolean and bounded combination of atoms and guarded quantifications
``forall y (theta0 -> A)`` / ``exists y (theta0 & A)`` with ``theta0`` a
bounded arithmetic formula.

JSON documents use ``{"kind": ...}`` nodes, see :func:`formula_to_json`.
"""
import dataclasses
import enum
import functools
import itertools
import logging
import math

from . import psi
from .exceptions import FormulaError, ParseError


logger = logging.getLogger(__name__)  # pylint: disable=C0103


# Terms

@dataclasses.dataclass(frozen=True)
class Var:
    name: str


@dataclasses.dataclass(frozen=True)
class Num:
    value: int


@dataclasses.dataclass(frozen=True)
class Succ:
    arg: object


@dataclasses.dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclasses.dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclasses.dataclass(frozen=True)
class Exp2:
    arg: object


@dataclasses.dataclass(frozen=True)
class P0:
    arg: object


@dataclasses.dataclass(frozen=True)
class P1:
    arg: object


UNARY_TERMS = {'S': Succ, 'exp2': Exp2, 'p0': P0, 'p1': P1}
BINARY_TERMS = {'add': Add, 'mul': Mul}
ZERO_TERM = Num(0)


def pair(x, y):
    """
    Cantor pairing (x+y)(x+y+1)/2 + y
    """
    return (x + y) * (x + y + 1) // 2 + y


def unpair(n):
    """
    Inverse of :func:`pair`: returns (p0(n), p1(n))
    """
    w = (math.isqrt(8 * n + 1) - 1) // 2
    y = n - w * (w + 1) // 2
    return w - y, y


def term_vars(term):
    if isinstance(term, Var):
        return frozenset((term.name,))
    if isinstance(term, Num):
        return frozenset()
    if isinstance(term, (Add, Mul)):
        return term_vars(term.left) | term_vars(term.right)
    return term_vars(term.arg)


def subst_term(term, mapping):
    """
    Replace variables by terms
    """
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    if isinstance(term, Num):
        return term
    if isinstance(term, (Add, Mul)):
        return type(term)(subst_term(term.left, mapping), subst_term(term.right, mapping))
    return type(term)(subst_term(term.arg, mapping))


def replace_subterm(term, old, new):
    """
    Replace every occurrence of the term ``old`` by ``new``
    """
    if term == old:
        return new
    if isinstance(term, (Var, Num)):
        return term
    if isinstance(term, (Add, Mul)):
        return type(term)(replace_subterm(term.left, old, new), replace_subterm(term.right, old, new))
    return type(term)(replace_subterm(term.arg, old, new))


def eval_term(term, env=None):
    """
    Value of a term under an assignment of numbers to variables

    Raises
    ------
    FormulaError
        A variable has no value
    """
    env = env or {}
    if isinstance(term, Var):
        if term.name not in env:
            raise FormulaError('variable %s has no value' % (term.name,))
        return env[term.name]
    if isinstance(term, Num):
        return term.value
    if isinstance(term, Succ):
        return eval_term(term.arg, env) + 1
    if isinstance(term, Add):
        return eval_term(term.left, env) + eval_term(term.right, env)
    if isinstance(term, Mul):
        return eval_term(term.left, env) * eval_term(term.right, env)
    if isinstance(term, Exp2):
        return 2 ** eval_term(term.arg, env)
    if isinstance(term, P0):
        return unpair(eval_term(term.arg, env))[0]
    return unpair(eval_term(term.arg, env))[1]


def show_term(term):
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Num):
        return str(term.value)
    if isinstance(term, Succ):
        return 'S(%s)' % (show_term(term.arg),)
    if isinstance(term, Add):
        return '(%s+%s)' % (show_term(term.left), show_term(term.right))
    if isinstance(term, Mul):
        return '(%s*%s)' % (show_term(term.left), show_term(term.right))
    if isinstance(term, Exp2):
        return '2^(%s)' % (show_term(term.arg),)
    return '%s(%s)' % ('p0' if isinstance(term, P0) else 'p1', show_term(term.arg))


# Formulas

RELATIONS = ('=', '<', '!=', '!<')
COMPLEMENT = {'=': '!=', '!=': '=', '<': '!<', '!<': '<'}


@dataclasses.dataclass(frozen=True)
class Rel:
    op: str
    left: object
    right: object


@dataclasses.dataclass(frozen=True)
class Fix:
    """
    I_name^{<stage}(arg), or its complement when ``positive`` is false
    """
    name: str
    stage: object
    arg: object
    positive: bool = True


@dataclasses.dataclass(frozen=True)
class SetAtom:
    """
    arg in X, or arg not in X
    """
    var: str
    arg: object
    positive: bool = True


@dataclasses.dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclasses.dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclasses.dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclasses.dataclass(frozen=True)
class Forall:
    var: str
    body: object


@dataclasses.dataclass(frozen=True)
class BExists:
    """
    exists var < bound. body
    """
    var: str
    bound: object
    body: object


@dataclasses.dataclass(frozen=True)
class BForall:
    """
    forall var < bound. body
    """
    var: str
    bound: object
    body: object


@dataclasses.dataclass(frozen=True)
class BigAnd:
    parts: tuple


@dataclasses.dataclass(frozen=True)
class BigOr:
    parts: tuple


ATOMS = (Rel, Fix, SetAtom)
QUANTIFIERS = (Exists, Forall)
BOUNDED = (BExists, BForall)
TRUE = Rel('=', ZERO_TERM, ZERO_TERM)
FALSE = Rel('!=', ZERO_TERM, ZERO_TERM)


def is_literal(formula):
    return isinstance(formula, ATOMS)


def implies(premise, conclusion):
    """
    premise -> conclusion, as the disjunction of the negated premise
    """
    return Or(negate(premise), conclusion)


def negate(formula):
    """
    Negation normal form complement; an involution
    """
    if isinstance(formula, Rel):
        return Rel(COMPLEMENT[formula.op], formula.left, formula.right)
    if isinstance(formula, (Fix, SetAtom)):
        return dataclasses.replace(formula, positive=not formula.positive)
    if isinstance(formula, And):
        return Or(negate(formula.left), negate(formula.right))
    if isinstance(formula, Or):
        return And(negate(formula.left), negate(formula.right))
    if isinstance(formula, Exists):
        return Forall(formula.var, negate(formula.body))
    if isinstance(formula, Forall):
        return Exists(formula.var, negate(formula.body))
    if isinstance(formula, BExists):
        return BForall(formula.var, formula.bound, negate(formula.body))
    if isinstance(formula, BForall):
        return BExists(formula.var, formula.bound, negate(formula.body))
    if isinstance(formula, BigAnd):
        return BigOr(tuple(negate(part) for part in formula.parts))
    if isinstance(formula, BigOr):
        return BigAnd(tuple(negate(part) for part in formula.parts))
    raise FormulaError('not a formula: %r' % (formula,))


def children(formula):
    if isinstance(formula, (And, Or)):
        return (formula.left, formula.right)
    if isinstance(formula, QUANTIFIERS + BOUNDED):
        return (formula.body,)
    if isinstance(formula, (BigAnd, BigOr)):
        return formula.parts
    return ()


def atoms(formula):
    """
    Atom occurrences from left to right
    """
    if is_literal(formula):
        yield formula
        return
    for child in children(formula):
        yield from atoms(child)


def free_vars(formula):
    if isinstance(formula, Rel):
        return term_vars(formula.left) | term_vars(formula.right)
    if isinstance(formula, (Fix, SetAtom)):
        return term_vars(formula.arg)
    if isinstance(formula, QUANTIFIERS):
        return free_vars(formula.body) - {formula.var}
    if isinstance(formula, BOUNDED):
        return term_vars(formula.bound) | (free_vars(formula.body) - {formula.var})
    result = frozenset()
    for child in children(formula):
        result |= free_vars(child)
    return result


def fresh_name(avoid, base='w'):
    """
    First of ``base``, ``base1``, ``base2``, ... not in ``avoid``
    """
    if base not in avoid:
        return base
    for index in itertools.count(1):
        name = '%s%d' % (base, index)
        if name not in avoid:
            return name
    raise AssertionError('unreachable')


def substitute(formula, mapping):
    """
    Capture avoiding substitution of terms for free variables

    Parameters
    ----------
    formula : Formula
        The formula to substitute into

    mapping : dict
        Variable name to term
    """
    if not mapping:
        return formula
    if isinstance(formula, Rel):
        return Rel(formula.op, subst_term(formula.left, mapping), subst_term(formula.right, mapping))
    if isinstance(formula, (Fix, SetAtom)):
        return dataclasses.replace(formula, arg=subst_term(formula.arg, mapping))
    if isinstance(formula, (And, Or)):
        return type(formula)(substitute(formula.left, mapping), substitute(formula.right, mapping))
    if isinstance(formula, (BigAnd, BigOr)):
        return type(formula)(tuple(substitute(part, mapping) for part in formula.parts))
    if isinstance(formula, QUANTIFIERS + BOUNDED):
        return _substitute_binder(formula, mapping)
    raise FormulaError('not a formula: %r' % (formula,))


def _substitute_binder(formula, mapping):
    inner = {name: term for name, term in mapping.items() if name != formula.var}
    inner = {name: term for name, term in inner.items() if name in free_vars(formula.body)}
    var, body = formula.var, formula.body
    incoming = frozenset().union(*(term_vars(term) for term in inner.values())) if inner else frozenset()
    if var in incoming:
        new_var = fresh_name(incoming | free_vars(body) | set(inner), var)
        body = substitute(body, {var: Var(new_var)})
        var = new_var
    body = substitute(body, inner)
    if isinstance(formula, BOUNDED):
        return type(formula)(var, subst_term(formula.bound, mapping), body)
    return type(formula)(var, body)


def replace_term(formula, old, new):
    """
    Replace every occurrence of the term ``old`` in the atoms of a formula
    """
    if isinstance(formula, Rel):
        return Rel(formula.op, replace_subterm(formula.left, old, new), replace_subterm(formula.right, old, new))
    if isinstance(formula, (Fix, SetAtom)):
        return dataclasses.replace(formula, arg=replace_subterm(formula.arg, old, new))
    return map_children(formula, lambda child: replace_term(child, old, new))


def map_children(formula, function):
    if isinstance(formula, (And, Or)):
        return type(formula)(function(formula.left), function(formula.right))
    if isinstance(formula, QUANTIFIERS):
        return type(formula)(formula.var, function(formula.body))
    if isinstance(formula, BOUNDED):
        return type(formula)(formula.var, formula.bound, function(formula.body))
    if isinstance(formula, (BigAnd, BigOr)):
        return type(formula)(tuple(function(part) for part in formula.parts))
    return formula


# Polarity

class Polarity(enum.Enum):
    """
    How the fixpoint atoms of one operator occur in a formula
    """
    ABSENT = 'absent'
    POS_ONLY = 'pos_only'
    NEG_ONLY = 'neg_only'
    BOTH = 'both'

    @property
    def positive(self):
        return self in (Polarity.ABSENT, Polarity.POS_ONLY)

    @property
    def negative(self):
        return self in (Polarity.ABSENT, Polarity.NEG_ONLY)

    def join(self, other):
        if self is other or other is Polarity.ABSENT:
            return self
        if self is Polarity.ABSENT:
            return other
        return Polarity.BOTH


def is_omega_atom(formula):
    return isinstance(formula, Fix) and formula.stage == psi.OMEGA


def polarity(formula):
    """
    Polarity per operator name, counting only atoms at stage Omega.  Atoms
    with a countable stage occur freely in positive and negative formulas.

    Returns
    -------
    dict
        Operator name to :class:`Polarity`, for the names with an Omega atom
    """
    result = {}
    for atom in atoms(formula):
        if is_omega_atom(atom):
            seen = Polarity.POS_ONLY if atom.positive else Polarity.NEG_ONLY
            result[atom.name] = result.get(atom.name, Polarity.ABSENT).join(seen)
    return result


def is_positive(formula):
    return all(atom.positive for atom in atoms(formula) if is_omega_atom(atom))


def is_negative(formula):
    return all(not atom.positive for atom in atoms(formula) if is_omega_atom(atom))


def is_set_positive(formula, var='X'):
    """
    True when the set variable ``var`` occurs only positively
    """
    return all(atom.positive for atom in atoms(formula) if isinstance(atom, SetAtom) and atom.var == var)


def mentions_fixpoint(formula):
    return any(is_omega_atom(atom) for atom in atoms(formula))


def is_p_and_n(formula):
    """
    C & D with C positive and D negative, in either order
    """
    if not isinstance(formula, And):
        return False
    left, right = formula.left, formula.right
    return (is_positive(left) and is_negative(right)) or (is_negative(left) and is_positive(right))


def is_n_or_p(formula):
    """
    D | C with D negative and C positive, in either order
    """
    if not isinstance(formula, Or):
        return False
    left, right = formula.left, formula.right
    return (is_negative(left) and is_positive(right)) or (is_positive(left) and is_negative(right))


# Arithmetic formulas and evaluation

def is_bounded_arithmetic(formula):
    """
    No fixpoint or set atoms and no unbounded quantifiers
    """
    if isinstance(formula, Rel):
        return True
    if isinstance(formula, (Fix, SetAtom) + QUANTIFIERS):
        return False
    return all(is_bounded_arithmetic(child) for child in children(formula))


def evaluate(formula, env=None, universe=None, set_value=None, fix_value=None):
    """
    Truth value of a formula

    Parameters
    ----------
    formula : Formula
        The formula

    env : dict, optional
        Values of the free variables

    universe : int, optional
        Unbounded quantifiers range over ``range(universe)``; without a
        universe they raise :class:`FormulaError`

    set_value : callable, optional
        ``set_value(name, n)`` decides ``n in name``

    fix_value : callable, optional
        ``fix_value(name, stage, n)`` decides fixpoint atoms

    Returns
    -------
    bool
    """
    env = dict(env or {})
    return _evaluate(formula, env, universe, set_value, fix_value)


def _evaluate(formula, env, universe, set_value, fix_value):  # pylint: disable=R0911,R0912
    if isinstance(formula, Rel):
        left, right = eval_term(formula.left, env), eval_term(formula.right, env)
        if formula.op == '=':
            return left == right
        if formula.op == '!=':
            return left != right
        if formula.op == '<':
            return left < right
        return not left < right
    if isinstance(formula, SetAtom):
        if set_value is None:
            raise FormulaError('no interpretation for the set %s' % (formula.var,))
        return set_value(formula.var, eval_term(formula.arg, env)) == formula.positive
    if isinstance(formula, Fix):
        if fix_value is None:
            raise FormulaError('no interpretation for the fixpoint %s' % (formula.name,))
        return fix_value(formula.name, formula.stage, eval_term(formula.arg, env)) == formula.positive

    def sub(child, bindings=None):
        scope = env if bindings is None else {**env, **bindings}
        return _evaluate(child, scope, universe, set_value, fix_value)

    if isinstance(formula, And):
        return sub(formula.left) and sub(formula.right)
    if isinstance(formula, Or):
        return sub(formula.left) or sub(formula.right)
    if isinstance(formula, BigAnd):
        return all(sub(part) for part in formula.parts)
    if isinstance(formula, BigOr):
        return any(sub(part) for part in formula.parts)
    if isinstance(formula, BOUNDED):
        values = range(eval_term(formula.bound, env))
    else:
        if universe is None:
            raise FormulaError('unbounded quantifier over %s needs a finite universe' % (formula.var,))
        values = range(universe)
    if isinstance(formula, (BForall, Forall)):
        return all(sub(formula.body, {formula.var: value}) for value in values)
    return any(sub(formula.body, {formula.var: value}) for value in values)


def evaluate_arithmetic(formula, env=None):
    """
    Truth of a bounded arithmetic formula

    Raises
    ------
    FormulaError
        The formula has free variables without values, fixpoint atoms or
        unbounded quantifiers
    """
    if not is_bounded_arithmetic(formula):
        raise FormulaError('%s is not a bounded arithmetic formula' % (show(formula),))
    return evaluate(formula, env)


def ground_bounded(formula):
    """
    Expand the bounded quantifiers of a closed formula into finite
    conjunctions and disjunctions and evaluate closed terms to numerals

    Raises
    ------
    FormulaError
        The formula has free variables, or a quantifier bound depends on a
        bound variable
    """
    open_vars = free_vars(formula)
    if open_vars:
        raise FormulaError('ground_bounded needs a closed formula, free: %s' % (', '.join(sorted(open_vars)),))
    return _ground(formula)


def _ground_term(term):
    if term_vars(term):
        return term
    return Num(eval_term(term))


def _ground(formula):
    if isinstance(formula, Rel):
        return Rel(formula.op, _ground_term(formula.left), _ground_term(formula.right))
    if isinstance(formula, (Fix, SetAtom)):
        return dataclasses.replace(formula, arg=_ground_term(formula.arg))
    if isinstance(formula, BOUNDED):
        if term_vars(formula.bound):
            raise FormulaError('bound %s of %s is not closed' % (show_term(formula.bound), formula.var))
        parts = tuple(
            _ground(substitute(formula.body, {formula.var: Num(value)}))
            for value in range(eval_term(formula.bound))
        )
        return BigAnd(parts) if isinstance(formula, BForall) else BigOr(parts)
    return map_children(formula, _ground)


def is_defining_axiom(formula):
    """
    True for instances of the defining equations of +, * and 2^x, in either
    orientation
    """
    if not isinstance(formula, Rel) or formula.op != '=':
        return False
    return _defining(formula.left, formula.right) or _defining(formula.right, formula.left)


def _defining(left, right):  # pylint: disable=R0911
    if isinstance(left, Add):
        if left.right == ZERO_TERM:
            return right == left.left
        if isinstance(left.right, Succ):
            return right == Succ(Add(left.left, left.right.arg))
    if isinstance(left, Mul):
        if left.right == ZERO_TERM:
            return right == ZERO_TERM
        if isinstance(left.right, Succ):
            return right == Add(Mul(left.left, left.right.arg), left.left)
    if isinstance(left, Exp2):
        if left.arg == ZERO_TERM:
            return right == Succ(ZERO_TERM)
        if isinstance(left.arg, Succ):
            return right == Add(Exp2(left.arg.arg), Exp2(left.arg.arg))
    return False


# Hierarchies

@dataclasses.dataclass(frozen=True)
class Guarded:
    """
    A guarded quantification: forall var (theta0 -> body) or
    exists var (theta0 & body)
    """
    universal: bool
    var: str
    theta0: object
    body: object


def guarded(formula):
    """
    Split a guarded quantification, or return None
    """
    if isinstance(formula, Forall) and isinstance(formula.body, Or):
        guard, body = formula.body.left, formula.body.right
        if is_bounded_arithmetic(guard):
            return Guarded(True, formula.var, negate(guard), body)
    if isinstance(formula, Exists) and isinstance(formula.body, And):
        guard, body = formula.body.left, formula.body.right
        if is_bounded_arithmetic(guard):
            return Guarded(False, formula.var, guard, body)
    return None


@functools.lru_cache(maxsize=1 << 14)
def is_rank0(formula):
    """
    Boolean and bounded combination of atoms and guarded quantifications
    """
    if is_literal(formula):
        return True
    if isinstance(formula, QUANTIFIERS):
        split = guarded(formula)
        return split is not None and is_rank0(split.body)
    return all(is_rank0(child) for child in children(formula))


def _normalized(pi, sigma):
    return min(pi, sigma + 1), min(sigma, pi + 1)


@functools.lru_cache(maxsize=1 << 14)
def _finitary(formula, omega):
    if (not omega and is_rank0(formula)) or (omega and is_bounded_arithmetic_or_atoms(formula)):
        return 0, 0
    if isinstance(formula, Forall):
        pi, sigma = _finitary(formula.body, omega)
        return _normalized(max(1, pi), math.inf)
    if isinstance(formula, Exists):
        pi, sigma = _finitary(formula.body, omega)
        return _normalized(math.inf, max(1, sigma))
    ranks = [_finitary(child, omega) for child in children(formula)]
    return _normalized(max(r[0] for r in ranks), max(r[1] for r in ranks))


def is_bounded_arithmetic_or_atoms(formula):
    """
    Bounded formula in atoms, fixpoint atoms included: no unbounded
    quantifier at all
    """
    if is_literal(formula):
        return True
    if isinstance(formula, QUANTIFIERS):
        return False
    return all(is_bounded_arithmetic_or_atoms(child) for child in children(formula))


@functools.lru_cache(maxsize=1 << 14)
def _infinitary(formula):
    if is_rank0(formula):
        return 0, 0
    if isinstance(formula, Forall):
        pi, sigma = _infinitary(formula.body)
        merged = pi if pi >= 1 else math.inf
        return min(sigma + 1, merged), math.inf
    if isinstance(formula, Exists):
        pi, sigma = _infinitary(formula.body)
        merged = sigma if sigma >= 1 else math.inf
        return math.inf, min(pi + 1, merged)
    return math.inf, math.inf


def _finite(value):
    return None if value == math.inf else int(value)


def pi_rank(formula, infinitary=False):
    """
    Least k with the formula in Pi_k(P), None when there is none
    """
    if infinitary:
        return _finite(_infinitary(formula)[0])
    return _finite(_finitary(formula, False)[0])


def sigma_rank(formula, infinitary=False):
    """
    Least k with the formula in Sigma_k(P), None when there is none
    """
    if infinitary:
        return _finite(_infinitary(formula)[1])
    return _finite(_finitary(formula, False)[1])


def dg(formula):
    """
    Degree: 0 without Omega-stage fixpoint atoms, else 1 + the least
    infinitary rank

    Raises
    ------
    FormulaError
        The formula is outside every Pi_k(P) and Sigma_k(P)
    """
    if not mentions_fixpoint(formula):
        return 0
    pi, sigma = _infinitary(formula)
    rank = min(pi, sigma)
    if rank == math.inf:
        raise FormulaError('%s is outside the Pi/Sigma(P) hierarchy' % (show(formula),))
    return 1 + int(rank)


@dataclasses.dataclass(frozen=True)
class AccShape:
    """
    forall var (theta0 -> target in set): the shape of Acc formulas
    """
    var: str
    theta0: object
    target: object
    atom: object


def acc_shape(formula, set_var=None):
    """
    Match ``forall y (theta0 -> t in X)`` with theta0 bounded arithmetic and
    a positive set or fixpoint atom; return an :class:`AccShape` or None
    """
    split = guarded(formula)
    if split is None or not split.universal:
        return None
    atom = split.body
    if isinstance(atom, SetAtom) and atom.positive and (set_var is None or atom.var == set_var):
        return AccShape(split.var, split.theta0, atom.arg, atom)
    if isinstance(atom, Fix) and atom.positive and atom.stage == psi.OMEGA and set_var is None:
        return AccShape(split.var, split.theta0, atom.arg, atom)
    return None


@dataclasses.dataclass(frozen=True)
class FormulaClass:
    """
    Classification of one formula
    """
    is_pos: bool
    is_neg: bool
    is_p_or_n: bool
    is_p_and_n: bool
    is_n_or_p: bool
    is_acc_formula: bool
    pi_rank_P: object
    sigma_rank_P: object
    pi_rank_Omega: object
    sigma_rank_Omega: object

    def to_dict(self):
        return dataclasses.asdict(self)


def classify(formula, infinitary=False):
    """
    Compute the polarity flags and the ranks of a formula

    Parameters
    ----------
    formula : Formula
        A formula in negation normal form

    infinitary : bool
        Use the infinitary hierarchy for the P ranks

    Returns
    -------
    FormulaClass
    """
    positive, negative = is_positive(formula), is_negative(formula)
    omega_pi, omega_sigma = _finitary(formula, True)
    result = FormulaClass(
        is_pos=positive,
        is_neg=negative,
        is_p_or_n=positive or negative,
        is_p_and_n=is_p_and_n(formula),
        is_n_or_p=is_n_or_p(formula),
        is_acc_formula=acc_shape(formula) is not None,
        pi_rank_P=pi_rank(formula, infinitary),
        sigma_rank_P=sigma_rank(formula, infinitary),
        pi_rank_Omega=_finite(omega_pi),
        sigma_rank_Omega=_finite(omega_sigma),
    )
    logger.debug('Classified %s: %s', show(formula), result)
    return result


def coerce_canonical(formula):
    """
    Rewrite a rank 0 formula into the shape OR_i AND_j (C_ij -> D_ij) with
    positive C_ij, D_ij.  A positive unit L becomes TRUE -> L and a negative
    unit L becomes negate(L) -> FALSE.

    Raises
    ------
    FormulaError
        The formula is not of rank 0, or one of its units mixes polarities
    """
    if not is_rank0(formula):
        raise FormulaError('%s is not of rank 0' % (show(formula),))
    disjuncts = _dnf(formula)
    return BigOr(tuple(BigAnd(tuple(_unit_implication(unit) for unit in conjunct)) for conjunct in disjuncts))


def _dnf(formula):
    if isinstance(formula, (And, BigAnd)):
        result = [()]
        for child in children(formula):
            result = [left + right for left in result for right in _dnf(child)]
        return result
    if isinstance(formula, (Or, BigOr)):
        return [conjunct for child in children(formula) for conjunct in _dnf(child)]
    return [(formula,)]


def _unit_implication(unit):
    if is_positive(unit):
        return implies(TRUE, unit)
    if is_negative(unit):
        return implies(negate(unit), FALSE)
    raise FormulaError('unit %s has mixed polarity' % (show(unit),))


def bound_positive(formula, stage, mask=None):
    """
    Replace positive Omega-stage fixpoint atoms by the same atoms at ``stage``

    Parameters
    ----------
    formula : Formula
        Formula in negation normal form

    stage : psi term
        The new stage b

    mask : collection of int, optional
        Indices (left to right, counting positive Omega atoms only) of the
        occurrences to replace; all of them when omitted
    """
    counter = itertools.count()

    def replace(node):
        if isinstance(node, Fix) and node.positive and node.stage == psi.OMEGA:
            index = next(counter)
            if mask is None or index in mask:
                return dataclasses.replace(node, stage=stage)
            return node
        if is_literal(node):
            return node
        return map_children(node, replace)

    return replace(formula)


# Text and JSON

def show(formula):  # pylint: disable=R0911
    """
    Compact human readable text
    """
    if isinstance(formula, Rel):
        return '%s%s%s' % (show_term(formula.left), formula.op, show_term(formula.right))
    if isinstance(formula, Fix):
        return '%sI[%s<%s](%s)' % ('' if formula.positive else '~', formula.name, psi.pretty(formula.stage), show_term(formula.arg))
    if isinstance(formula, SetAtom):
        return '%s%s%s' % (show_term(formula.arg), ' in ' if formula.positive else ' notin ', formula.var)
    if isinstance(formula, And):
        return '(%s & %s)' % (show(formula.left), show(formula.right))
    if isinstance(formula, Or):
        return '(%s | %s)' % (show(formula.left), show(formula.right))
    if isinstance(formula, Exists):
        return 'E%s.%s' % (formula.var, show(formula.body))
    if isinstance(formula, Forall):
        return 'A%s.%s' % (formula.var, show(formula.body))
    if isinstance(formula, BExists):
        return 'E%s<%s.%s' % (formula.var, show_term(formula.bound), show(formula.body))
    if isinstance(formula, BForall):
        return 'A%s<%s.%s' % (formula.var, show_term(formula.bound), show(formula.body))
    joiner = ' & ' if isinstance(formula, BigAnd) else ' | '
    empty = 'TRUE' if isinstance(formula, BigAnd) else 'FALSE'
    return '[%s]' % (joiner.join(show(part) for part in formula.parts) or empty,)


REL_KINDS = {'=': 'eq', '<': 'lt', '!=': 'neq', '!<': 'nlt'}
KIND_RELS = {kind: op for op, kind in REL_KINDS.items()}
TERM_NAMES = {Succ: 'S', Exp2: 'exp2', P0: 'p0', P1: 'p1', Add: 'add', Mul: 'mul'}


def term_to_json(term):
    if isinstance(term, Num):
        return term.value
    if isinstance(term, Var):
        return term.name
    if isinstance(term, (Add, Mul)):
        return {'fn': TERM_NAMES[type(term)], 'args': [term_to_json(term.left), term_to_json(term.right)]}
    return {'fn': TERM_NAMES[type(term)], 'args': [term_to_json(term.arg)]}


def term_from_json(document):
    """
    Integers are numerals, strings are variables and ``{"fn", "args"}``
    objects are compound terms
    """
    if isinstance(document, bool):
        raise ParseError('booleans are not terms')
    if isinstance(document, int):
        if document < 0:
            raise ParseError('numerals are not negative')
        return Num(document)
    if isinstance(document, str):
        return Var(document)
    if not isinstance(document, dict) or 'fn' not in document:
        raise ParseError('malformed term %r' % (document,))
    name, args = document['fn'], document.get('args', [])
    if name in UNARY_TERMS and len(args) == 1:
        return UNARY_TERMS[name](term_from_json(args[0]))
    if name in BINARY_TERMS and len(args) == 2:
        return BINARY_TERMS[name](term_from_json(args[0]), term_from_json(args[1]))
    raise ParseError('unknown function %r with %d arguments' % (name, len(args)))


def formula_to_json(formula):  # pylint: disable=R0911
    """
    JSON document of a formula.

    Node kinds: ``eq``, ``lt``, ``neq``, ``nlt`` (``left``, ``right``),
    ``fix`` (``name``, ``stage``, ``arg``, ``positive``), ``in`` (``set``,
    ``arg``, ``positive``), ``and``/``or`` (``left``, ``right``),
    ``exists``/``forall`` (``var``, ``body``), ``bexists``/``bforall``
    (``var``, ``bound``, ``body``), ``bigand``/``bigor`` (``parts``).
    """
    if isinstance(formula, Rel):
        return {'kind': REL_KINDS[formula.op], 'left': term_to_json(formula.left), 'right': term_to_json(formula.right)}
    if isinstance(formula, Fix):
        return {
            'kind': 'fix', 'name': formula.name, 'stage': psi.to_sexpr(formula.stage),
            'arg': term_to_json(formula.arg), 'positive': formula.positive
        }
    if isinstance(formula, SetAtom):
        return {'kind': 'in', 'set': formula.var, 'arg': term_to_json(formula.arg), 'positive': formula.positive}
    if isinstance(formula, (And, Or)):
        return {
            'kind': 'and' if isinstance(formula, And) else 'or',
            'left': formula_to_json(formula.left), 'right': formula_to_json(formula.right)
        }
    if isinstance(formula, QUANTIFIERS):
        return {
            'kind': 'forall' if isinstance(formula, Forall) else 'exists',
            'var': formula.var, 'body': formula_to_json(formula.body)
        }
    if isinstance(formula, BOUNDED):
        return {
            'kind': 'bforall' if isinstance(formula, BForall) else 'bexists',
            'var': formula.var, 'bound': term_to_json(formula.bound), 'body': formula_to_json(formula.body)
        }
    return {
        'kind': 'bigand' if isinstance(formula, BigAnd) else 'bigor',
        'parts': [formula_to_json(part) for part in formula.parts]
    }


def formula_from_json(document):  # pylint: disable=R0911,R0912
    """
    Parse a formula document.  Besides the kinds written by
    :func:`formula_to_json` the input may use ``not`` (``body``), ``implies``
    (``left``, ``right``), ``true`` and ``false``; they are normalized away.
    """
    if not isinstance(document, dict) or 'kind' not in document:
        raise ParseError('malformed formula %r' % (document,))
    kind = document['kind']
    try:
        if kind in KIND_RELS:
            return Rel(KIND_RELS[kind], term_from_json(document['left']), term_from_json(document['right']))
        if kind == 'fix':
            return Fix(
                document['name'], psi.parse_psi(document.get('stage', 'Om')),
                term_from_json(document['arg']), bool(document.get('positive', True))
            )
        if kind == 'in':
            return SetAtom(document.get('set', 'X'), term_from_json(document['arg']), bool(document.get('positive', True)))
        if kind in ('and', 'or'):
            node = And if kind == 'and' else Or
            return node(formula_from_json(document['left']), formula_from_json(document['right']))
        if kind in ('exists', 'forall'):
            node = Forall if kind == 'forall' else Exists
            return node(document['var'], formula_from_json(document['body']))
        if kind in ('bexists', 'bforall'):
            node = BForall if kind == 'bforall' else BExists
            return node(document['var'], term_from_json(document['bound']), formula_from_json(document['body']))
        if kind in ('bigand', 'bigor'):
            node = BigAnd if kind == 'bigand' else BigOr
            return node(tuple(formula_from_json(part) for part in document['parts']))
        if kind == 'not':
            return negate(formula_from_json(document['body']))
        if kind == 'implies':
            return implies(formula_from_json(document['left']), formula_from_json(document['right']))
        if kind == 'true':
            return TRUE
        if kind == 'false':
            return FALSE
    except KeyError as error:
        raise ParseError('formula of kind %s lacks %s' % (kind, error)) from error
    raise ParseError('unknown formula kind %r' % (kind,))
