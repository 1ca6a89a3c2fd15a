# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Registry of positive operators phi(X, x).

An entry names the operator, its element variable ``x``, its set variable
``X`` and a body in which ``X`` occurs only positively.  Entries of the shape
``forall y (theta0(x, y) -> t0(x, y) in X)`` with a bounded arithmetic
``theta0`` are Acc operators; their ``theta0`` and ``t0`` are kept on the
entry.

A registry is filled once (from JSON or by :meth:`OperatorRegistry.register`)
and then only read.  Registry documents look like::

    {"operators": [
        {"name": "acc", "var": "x", "set": "X",
         "body": {"kind": "forall", "var": "y", "body": {...}}}
    ]}
"""
import dataclasses
import json
import logging

from . import formula as fl
from .exceptions import FormulaError, ParseError, RegistryError


logger = logging.getLogger(__name__)  # pylint: disable=C0103


@dataclasses.dataclass(frozen=True)
class OperatorEntry:
    """
    One operator phi(X, x)

    Attributes:
        name(str):
            Name used by fixpoint atoms

        var(str):
            The element variable x

        body(Formula):
            phi(X, x)

        set_var(str):
            The set variable X

        acc(AccShape):
            The Acc decomposition of the body, None for other operators
    """
    name: str
    var: str
    body: object
    set_var: str = 'X'
    acc: object = None

    @property
    def acc_flag(self):
        return self.acc is not None

    @property
    def theta0(self):
        return self.acc.theta0 if self.acc else None

    @property
    def t0(self):
        return self.acc.target if self.acc else None

    @property
    def bound_var(self):
        return self.acc.var if self.acc else None

    def to_json(self):
        return {'name': self.name, 'var': self.var, 'set': self.set_var, 'body': fl.formula_to_json(self.body)}


@dataclasses.dataclass(frozen=True)
class Predicate:
    """
    A formula with one distinguished parameter, substituted for a set
    variable: ``n in X`` becomes ``formula[param := n]``
    """
    param: str
    formula: object


def make_entry(name, var, body, set_var='X'):
    """
    Build and validate an entry

    Raises
    ------
    RegistryError
        The set variable occurs negatively, or the body has free variables
        other than the element variable
    """
    if not fl.is_set_positive(body, set_var):
        raise RegistryError('operator %s: %s occurs negatively' % (name, set_var))
    extra = fl.free_vars(body) - {var}
    if extra:
        raise RegistryError('operator %s: unexpected free variables %s' % (name, ', '.join(sorted(extra))))
    acc = fl.acc_shape(body, set_var)
    if acc is not None and acc.var == var:
        acc = None
    return OperatorEntry(name=name, var=var, body=body, set_var=set_var, acc=acc)


def acc_entry(name, theta0, target=None, var='x', bound_var='y', set_var='X'):
    """
    The Acc operator forall y (theta0(x, y) -> t0(x, y) in X); ``t0``
    defaults to ``y``
    """
    target = fl.Var(bound_var) if target is None else target
    body = fl.Forall(bound_var, fl.implies(theta0, fl.SetAtom(set_var, target)))
    entry = make_entry(name, var, body, set_var)
    if not entry.acc_flag:
        raise RegistryError('operator %s: theta0 must be bounded arithmetic' % (name,))
    return entry


class OperatorRegistry:
    """
    Write-once collection of operators keyed by name
    """

    def __init__(self, entries=()):
        self._entries = {}
        for entry in entries:
            self.register(entry)

    def register(self, entry):
        if entry.name in self._entries:
            raise RegistryError('duplicate operator %s' % (entry.name,))
        for atom in fl.atoms(entry.body):
            if isinstance(atom, fl.Fix) and atom.name not in self._entries and atom.name != entry.name:
                raise RegistryError('operator %s refers to unknown operator %s' % (entry.name, atom.name))
        logger.debug('Registered operator %s (acc=%s)', entry.name, entry.acc_flag)
        self._entries[entry.name] = entry
        return entry

    def get(self, name):
        try:
            return self._entries[name]
        except KeyError:
            raise RegistryError('unknown operator %s' % (name,)) from None

    def __contains__(self, name):
        return name in self._entries

    def __iter__(self):
        return iter(self._entries.values())

    def __len__(self):
        return len(self._entries)

    def names(self):
        return list(self._entries)

    def check_formula(self, formula, path='formula'):
        """
        Names of fixpoint atoms in ``formula`` missing from the registry
        """
        missing = sorted({atom.name for atom in fl.atoms(formula) if isinstance(atom, fl.Fix) and atom.name not in self})
        if missing:
            raise RegistryError('%s uses unknown operators %s' % (path, ', '.join(missing)))

    def to_json(self):
        return {'operators': [entry.to_json() for entry in self]}


def registry_from_json(document):
    """
    Build a registry from a parsed JSON document
    """
    if not isinstance(document, dict) or not isinstance(document.get('operators'), list):
        raise ParseError('a registry document has an "operators" list')
    registry = OperatorRegistry()
    for item in document['operators']:
        try:
            entry = make_entry(item['name'], item.get('var', 'x'), fl.formula_from_json(item['body']), item.get('set', 'X'))
        except KeyError as error:
            raise ParseError('operator entry lacks %s' % (error,)) from error
        registry.register(entry)
    return registry


def load_registry(path):
    with open(path, encoding='utf-8') as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as error:
            raise ParseError('%s: %s' % (path, error)) from error
    return registry_from_json(document)


def instantiate(entry, predicate, term):
    """
    phi(P, t): the body with ``term`` for the element variable and every set
    atom ``s in X`` replaced according to ``predicate``

    Parameters
    ----------
    entry : OperatorEntry
        The operator

    predicate : psi term or Predicate
        A stage ``a`` gives the atoms I_name^{<a}(s), :data:`ordcalc.psi.OMEGA`
        the fixpoint itself; a :class:`Predicate` is substituted

    term : term
        The argument
    """
    body = fl.substitute(entry.body, {entry.var: term})

    def replace(node):
        if isinstance(node, fl.SetAtom) and node.var == entry.set_var:
            if isinstance(predicate, Predicate):
                result = fl.substitute(predicate.formula, {predicate.param: node.arg})
                return result if node.positive else fl.negate(result)
            return fl.Fix(entry.name, predicate, node.arg, node.positive)
        if fl.is_literal(node):
            return node
        return fl.map_children(node, replace)

    return replace(body)


def phi_sigma(entry, sigma, param=None):
    """
    For an Acc operator forall y (theta0(x, y) -> t0(x, y) in X) and
    sigma(u) = forall z sigma0(z, u) with sigma0 of rank 0, build

        forall w (theta0(x, p0(w)) -> sigma0(p1(w), t0(x, p0(w))))

    Parameters
    ----------
    entry : OperatorEntry
        An Acc operator

    sigma : Formula
        The universal formula

    param : str, optional
        The parameter u; defaults to the only free variable of sigma

    Raises
    ------
    FormulaError
        The operator is not Acc, sigma is not universal, sigma0 is not of
        rank 0, or the parameter is ambiguous
    """
    if not entry.acc_flag:
        raise FormulaError('operator %s is not an Acc operator' % (entry.name,))
    if not isinstance(sigma, fl.Forall):
        raise FormulaError('sigma must be universally quantified, got %s' % (fl.show(sigma),))
    sigma0, z = sigma.body, sigma.var
    if not fl.is_rank0(sigma0):
        raise FormulaError('the matrix %s of sigma is not of rank 0' % (fl.show(sigma0),))
    if param is None:
        candidates = sorted(fl.free_vars(sigma))
        if len(candidates) != 1:
            raise FormulaError('sigma needs exactly one parameter, found %s' % (candidates,))
        param = candidates[0]
    x, y = entry.var, entry.bound_var
    avoid = fl.free_vars(sigma) | fl.free_vars(entry.body) | {x, z, param}
    w = fl.fresh_name(avoid)
    first, second = fl.P0(fl.Var(w)), fl.P1(fl.Var(w))
    guard = fl.substitute(entry.theta0, {y: first})
    target = fl.subst_term(entry.t0, {y: first})
    matrix = fl.substitute(sigma0, {z: second, param: target})
    logger.debug('phi_sigma for %s with %s', entry.name, fl.show(sigma))
    return fl.Forall(w, fl.implies(guard, matrix))
