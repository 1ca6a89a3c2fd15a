# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Certificates for operator controlled derivations ``H_gamma[extras] |-^a_d G``.

A certificate node carries the operator index ``gamma``, the extra ordinals
``extras``, the height bound ``a``, the cut degree bound ``d`` and a sequent
of closed formulas.  :func:`check_certificate` decides the local conditions
of every node:

* the control condition: ``a`` and every stage of ``k(G)`` lie in
  ``H_gamma(extras)``;
* premise heights are below the node height, premise operators are not
  larger than the node operator, extras grow only by the stage of an
  ``I``/``Ibar`` inference;
* each premise sequent is contained in the node sequent plus the formula the
  rule adds;
* the formula side of each rule, and ``dg(C) < d`` for cut formulas.

The infinitely branching rules (``forall`` and ``Ibar``) are certified on
their expanded premises; a declared ``schematic`` description of the
remaining premises is recorded in the report notes.  ``hypothesis`` nodes
stand for open premises and are also only noted.

:func:`apply_bounding` turns a certificate of a positive sequent with
``d = 1`` into one of the sequent with positive fixpoint atoms bounded by a
stage ``b``.
"""
import dataclasses
import json
import logging

from . import formula as fl
from . import operators
from . import psi
from .exceptions import CertificateError, FormulaError, ParseError
from .report import Report


logger = logging.getLogger(__name__)  # pylint: disable=C0103


RULES = ('initial', 'or', 'and', 'exists', 'forall', 'I', 'Ibar', 'Cl', 'cut', 'hypothesis')
MAX_DEGREE = 3


@dataclasses.dataclass(frozen=True, eq=False)
class Certificate:
    """
    One node of a controlled derivation

    Attributes:
        gamma(psi term):
            Index of the operator H_gamma

        extras(frozenset):
            The extra ordinals of H_gamma[extras]

        bound(psi term):
            The height bound a

        degree(int):
            The cut degree bound d

        sequent(frozenset):
            Closed formulas

        rule(str):
            One of :data:`RULES`

        payload(dict):
            ``principal``, ``cut`` formulas, ``stage`` (I), ``stages`` and
            ``required_stages`` (Ibar), ``witness`` (exists), ``instances``
            (forall), ``index`` (or), ``schematic`` text and ``coverage``

        premises(tuple):
            Sub-certificates
    """
    gamma: object
    extras: frozenset
    bound: object
    degree: int
    sequent: frozenset
    rule: str
    payload: dict = dataclasses.field(default_factory=dict)
    premises: tuple = ()

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def certificate(gamma, bound, degree, sequent, rule, premises=(), extras=(), **payload):
    return Certificate(
        gamma=gamma, extras=frozenset(extras), bound=bound, degree=degree,
        sequent=frozenset(sequent), rule=rule, payload=payload, premises=tuple(premises)
    )


def k_stages(sequent):
    """
    k(G): the countable stages of fixpoint atoms occurring in a sequent
    """
    result = set()
    for formula in sequent:
        for atom in fl.atoms(formula):
            if isinstance(atom, fl.Fix) and atom.stage != psi.OMEGA:
                result.add(atom.stage)
    return frozenset(result)


def ground(formula):
    return fl.ground_bounded(formula)


def stage_instance(entry, stage, value):
    """
    phi(I^{<stage}, value) with bounded quantifiers expanded
    """
    return ground(operators.instantiate(entry, stage, fl.Num(value)))


def set_occurs(entry):
    """
    True when the set variable occurs in the operator body
    """
    return any(isinstance(atom, fl.SetAtom) and atom.var == entry.set_var for atom in fl.atoms(entry.body))


def _lt(left, right):
    return psi.psi_less(left, right)


def _le(left, right):
    return not psi.psi_less(right, left)


class _Checker:

    def __init__(self, registry, report):
        self.registry = registry
        self.report = report

    def fail(self, path, rule, message):
        self.report.add(path, message, rule)
        return False

    def check(self, node, path):
        if node.rule not in RULES:
            self.fail(path, node.rule, 'unknown rule')
            return
        if self._node_ok(node, path):
            try:
                getattr(self, '_rule_' + node.rule)(node, path)
            except (FormulaError, KeyError, TypeError, ValueError) as error:
                self.fail(path, node.rule, 'malformed rule data: %s' % (error,))
        for index, premise in enumerate(node.premises):
            self.check(premise, '%s.%d' % (path, index))

    def _node_ok(self, node, path):
        ok = True
        for label, term in (('gamma', node.gamma), ('bound', node.bound)):
            if not psi.is_valid_psi(term) or not psi.is_nf(term):
                ok = self.fail(path, node.rule, '%s %s is not a normal form psi term' % (label, psi.pretty(term)))
        if not 0 <= node.degree <= MAX_DEGREE:
            ok = self.fail(path, node.rule, 'degree %d outside 0..%d' % (node.degree, MAX_DEGREE))
        for formula in node.sequent:
            if fl.free_vars(formula):
                ok = self.fail(path, node.rule, 'formula %s is not closed' % (fl.show(formula),))
        if not ok:
            return False
        extras = node.extras
        if not psi.h_member(node.gamma, extras, node.bound):
            self.fail(path, node.rule, 'control: bound %s is not in H_%s' % (psi.pretty(node.bound), psi.pretty(node.gamma)))
        for stage in sorted(k_stages(node.sequent), key=psi.to_sexpr):
            if not psi.h_member(node.gamma, extras, stage):
                self.fail(path, node.rule, 'control: stage %s is not in H_%s' % (psi.pretty(stage), psi.pretty(node.gamma)))
        for index, premise in enumerate(node.premises):
            if not _lt(premise.bound, node.bound):
                self.fail(path, node.rule, 'premise %d bound %s is not below %s' % (
                    index, psi.pretty(premise.bound), psi.pretty(node.bound)))
            if not _le(premise.gamma, node.gamma):
                self.fail(path, node.rule, 'premise %d operator index exceeds the node index' % (index,))
            if premise.degree > node.degree:
                self.fail(path, node.rule, 'premise %d degree exceeds the node degree' % (index,))
        return True

    def _premise_within(self, node, index, side, path, added_stage=None):
        premise = node.premises[index]
        allowed = node.sequent | {side}
        extra = premise.sequent - allowed
        if extra:
            self.fail(path, node.rule, 'premise %d has formulas outside the conclusion: %s' % (
                index, ', '.join(sorted(fl.show(f) for f in extra))))
        allowed_extras = node.extras | ({added_stage} if added_stage is not None else set())
        if not premise.extras <= allowed_extras:
            self.fail(path, node.rule, 'premise %d adds extras beyond the inference stage' % (index,))

    def _principal(self, node, path, types):
        principal = node.payload.get('principal')
        if not isinstance(principal, types):
            self.fail(path, node.rule, 'principal formula of the wrong kind')
            return None
        if principal not in node.sequent:
            self.fail(path, node.rule, 'principal formula %s is not in the sequent' % (fl.show(principal),))
            return None
        return principal

    def _arity(self, node, path, expected):
        if len(node.premises) != expected:
            self.fail(path, node.rule, 'expected %d premises, got %d' % (expected, len(node.premises)))
            return False
        return True

    def _rule_initial(self, node, path):
        self._arity(node, path, 0)
        for formula in node.sequent:
            if fl.is_bounded_arithmetic(formula) and fl.evaluate_arithmetic(formula):
                return
        self.fail(path, 'initial', 'no true arithmetic formula in the sequent')

    def _rule_hypothesis(self, node, path):
        if self._arity(node, path, 0):
            text = node.payload.get('note') or ', '.join(sorted(fl.show(f) for f in node.sequent))
            self.report.note('%s: hypothesis %s' % (path, text))

    def _rule_or(self, node, path):
        principal = self._principal(node, path, (fl.Or, fl.BigOr))
        if principal is None or not self._arity(node, path, 1):
            return
        parts = fl.children(principal)
        index = node.payload.get('index', 0)
        if not parts or not 0 <= index < len(parts):
            self.fail(path, 'or', 'no disjunct %d' % (index,))
            return
        self._premise_within(node, 0, parts[index], path)

    def _rule_and(self, node, path):
        principal = self._principal(node, path, (fl.And, fl.BigAnd))
        if principal is None:
            return
        parts = fl.children(principal)
        if self._arity(node, path, len(parts)):
            for index, part in enumerate(parts):
                self._premise_within(node, index, part, path)

    def _rule_exists(self, node, path):
        principal = self._principal(node, path, fl.Exists)
        if principal is None or not self._arity(node, path, 1):
            return
        side = ground(fl.substitute(principal.body, {principal.var: fl.Num(int(node.payload['witness']))}))
        self._premise_within(node, 0, side, path)

    def _rule_forall(self, node, path):
        principal = self._principal(node, path, fl.Forall)
        if principal is None:
            return
        instances = node.payload.get('instances', [])
        if len(instances) != len(node.premises):
            self.fail(path, 'forall', 'one instance per expanded premise expected')
            return
        for index, value in enumerate(instances):
            side = ground(fl.substitute(principal.body, {principal.var: fl.Num(int(value))}))
            self._premise_within(node, index, side, path)
        self._schematic(node, path)

    def _schematic(self, node, path):
        if node.payload.get('schematic'):
            self.report.note('%s: schematic premises %s' % (path, node.payload['schematic']))

    def _fix_principal(self, node, path, positive):
        principal = self._principal(node, path, fl.Fix)
        if principal is None:
            return None, None, None
        if principal.positive != positive:
            self.fail(path, node.rule, 'principal fixpoint atom has the wrong polarity')
            return None, None, None
        value = fl.eval_term(principal.arg)
        return principal, self.registry.get(principal.name), value

    def _rule_I(self, node, path):  # pylint: disable=C0103
        principal, entry, value = self._fix_principal(node, path, True)
        if principal is None or not self._arity(node, path, 1):
            return
        stage = node.payload['stage']
        if not _lt(stage, principal.stage):
            self.fail(path, 'I', 'stage %s is not below %s' % (psi.pretty(stage), psi.pretty(principal.stage)))
        if psi.psi_less(psi.OMEGA, stage) or stage == psi.OMEGA:
            self.fail(path, 'I', 'stage %s is not countable' % (psi.pretty(stage),))
        occurs = set_occurs(entry)
        if occurs and not _lt(stage, node.bound):
            self.fail(path, 'I', 'stage %s is not below the bound %s' % (psi.pretty(stage), psi.pretty(node.bound)))
        self._premise_within(node, 0, stage_instance(entry, stage, value), path, stage if occurs else None)

    def _rule_Ibar(self, node, path):  # pylint: disable=C0103
        principal, entry, value = self._fix_principal(node, path, False)
        if principal is None:
            return
        stages = node.payload.get('stages', [])
        if len(stages) != len(node.premises):
            self.fail(path, 'Ibar', 'one stage per expanded premise expected')
            return
        for index, stage in enumerate(stages):
            if not _lt(stage, principal.stage):
                self.fail(path, 'Ibar', 'stage %s is not below %s' % (psi.pretty(stage), psi.pretty(principal.stage)))
            side = fl.negate(stage_instance(entry, stage, value))
            self._premise_within(node, index, side, path, stage)
        declared = set(node.payload.get('required_stages', []))
        if node.payload.get('coverage', 'k') == 'k':
            declared |= k_stages(node.sequent)
        missing = [s for s in declared if _lt(s, principal.stage) and s not in stages]
        if missing:
            self.fail(path, 'Ibar', 'no premise for the stages %s' % (
                ', '.join(sorted(psi.pretty(s) for s in missing)),))
        self._schematic(node, path)

    def _rule_Cl(self, node, path):  # pylint: disable=C0103
        principal, entry, value = self._fix_principal(node, path, True)
        if principal is None or not self._arity(node, path, 1):
            return
        if principal.stage != psi.OMEGA:
            self.fail(path, 'Cl', 'closure applies to atoms at stage Omega')
            return
        self._premise_within(node, 0, stage_instance(entry, psi.OMEGA, value), path)

    def _rule_cut(self, node, path):
        if not self._arity(node, path, 2):
            return
        cut = node.payload['cut']
        degree = fl.dg(cut)
        if degree >= node.degree:
            self.fail(path, 'cut', 'cut formula %s has degree %d, not below %d' % (fl.show(cut), degree, node.degree))
        self._premise_within(node, 0, fl.negate(cut), path)
        self._premise_within(node, 1, cut, path)


def check_certificate(root, registry=None):
    """
    Check the local conditions at every node

    Parameters
    ----------
    root : Certificate
        The certificate

    registry : OperatorRegistry, optional
        Operators named by fixpoint atoms

    Returns
    -------
    Report
    """
    if not isinstance(root, Certificate):
        raise CertificateError('check_certificate needs a Certificate, got %r' % (type(root).__name__,))
    registry = registry if registry is not None else operators.OperatorRegistry()
    report = Report(subject='controlled certificate')
    _Checker(registry, report).check(root, 'root')
    logger.debug('Checked certificate: %d diagnostics, %d notes', len(report.diagnostics), len(report.notes))
    return report


def nodes(root):
    yield root
    for premise in root.premises:
        yield from nodes(premise)


def _has_positive_omega(root):
    return any(
        isinstance(atom, fl.Fix) and atom.positive and atom.stage == psi.OMEGA
        for item in nodes(root) for formula in item.sequent for atom in fl.atoms(formula)
    )


def apply_bounding(root, b, registry=None):
    """
    Bound the positive fixpoint atoms of a d = 1 certificate of a positive
    sequent by the stage ``b``.

    Closure inferences become ``I`` inferences at the stage of their premise
    height; formulas introduced there are bounded by that height.  Every node
    gets the operator index of the root and inherits the extras of the nodes
    below it.  The height and degree of every node are kept.

    Raises
    ------
    CertificateError
        The certificate is rejected, ``d`` is not 1, the sequent is not
        positive, ``a`` is not countable, ``a > b`` or ``b`` is not in the
        root operator
    """
    registry = registry if registry is not None else operators.OperatorRegistry()
    report = check_certificate(root, registry)
    if not report.ok:
        raise CertificateError('apply_bounding needs an accepted certificate: %s' % (report.diagnostics[0],))
    if root.degree != 1:
        raise CertificateError('apply_bounding needs degree 1, got %d' % (root.degree,))
    if not all(fl.is_positive(f) for f in root.sequent):
        raise CertificateError('apply_bounding needs a positive sequent')
    if not psi.psi_less(root.bound, psi.OMEGA):
        raise CertificateError('the bound %s is not countable' % (psi.pretty(root.bound),))
    if not psi.psi_less(b, psi.OMEGA) or psi.psi_less(b, root.bound):
        raise CertificateError('need a <= b < Omega, got a=%s b=%s' % (psi.pretty(root.bound), psi.pretty(b)))
    if not psi.h_member(root.gamma, root.extras, b):
        raise CertificateError('%s is not in H_%s' % (psi.pretty(b), psi.pretty(root.gamma)))
    if not _has_positive_omega(root):
        return root
    logger.debug('Bounding certificate of height %s by %s', psi.pretty(root.bound), psi.pretty(b))
    bounds = {formula: b for formula in root.sequent}
    return _bound(root, bounds, root.gamma, frozenset(), registry)


def _bound(node, bounds, gamma, inherited, registry):
    extras = inherited | node.extras
    payload = dict(node.payload)
    rule = node.rule
    principal = payload.get('principal')
    side_bound = bounds.get(principal) if principal is not None else None

    if rule == 'Cl':
        premise = node.premises[0]
        stage = premise.bound
        payload['principal'] = fl.bound_positive(principal, bounds[principal])
        payload['stage'] = stage
        rule = 'I'
        side_bound = stage
    elif rule == 'I':
        new_principal = fl.bound_positive(principal, bounds[principal])
        payload['principal'] = new_principal
        entry = registry.get(principal.name)
        if not set_occurs(entry) and not psi.psi_less(payload['stage'], new_principal.stage):
            payload['stage'] = psi.ZERO
    elif rule == 'Ibar':
        payload['required_stages'] = sorted(
            set(payload.get('required_stages', [])) | (k_stages(node.sequent) if payload.get('coverage', 'k') == 'k' else set()),
            key=psi.to_sexpr
        )
        payload['coverage'] = 'declared'
    elif rule in ('or', 'and', 'exists', 'forall') and principal is not None:
        payload['principal'] = fl.bound_positive(principal, bounds[principal])
    if side_bound is None:
        side_bound = max_bound(bounds)

    premises = []
    for premise in node.premises:
        premise_bounds = {
            formula: bounds.get(formula, side_bound) for formula in premise.sequent
        }
        premises.append(_bound(premise, premise_bounds, gamma, extras, registry))
    return Certificate(
        gamma=gamma,
        extras=extras,
        bound=node.bound,
        degree=node.degree,
        sequent=frozenset(fl.bound_positive(f, bounds[f]) for f in node.sequent),
        rule=rule,
        payload=payload,
        premises=tuple(premises),
    )


def max_bound(bounds):
    values = list(bounds.values())
    return psi.psi_max(values) if values else psi.ZERO


# JSON

CERT_FORMULAS = ('principal', 'cut')
CERT_STAGES = ('stage',)
CERT_STAGE_LISTS = ('stages', 'required_stages')


def certificate_to_json(node):
    payload = {}
    for key, value in node.payload.items():
        if key in CERT_FORMULAS:
            payload[key] = fl.formula_to_json(value)
        elif key in CERT_STAGES:
            payload[key] = psi.to_sexpr(value)
        elif key in CERT_STAGE_LISTS:
            payload[key] = [psi.to_sexpr(s) for s in value]
        else:
            payload[key] = value
    document = {
        'gamma': psi.to_sexpr(node.gamma),
        'extras': sorted(psi.to_sexpr(e) for e in node.extras),
        'bound': psi.to_sexpr(node.bound),
        'degree': node.degree,
        'sequent': sorted((fl.formula_to_json(f) for f in node.sequent), key=json.dumps),
        'rule': node.rule,
    }
    if payload:
        document['payload'] = payload
    if node.premises:
        document['premises'] = [certificate_to_json(p) for p in node.premises]
    return document


def certificate_from_json(document):
    if not isinstance(document, dict) or 'rule' not in document:
        raise ParseError('malformed certificate node %r' % (document,))
    payload = {}
    for key, value in document.get('payload', {}).items():
        if key in CERT_FORMULAS:
            payload[key] = fl.formula_from_json(value)
        elif key in CERT_STAGES:
            payload[key] = psi.parse_psi(value)
        elif key in CERT_STAGE_LISTS:
            payload[key] = [psi.parse_psi(s) for s in value]
        else:
            payload[key] = value
    try:
        return Certificate(
            gamma=psi.parse_psi(document['gamma']),
            extras=frozenset(psi.parse_psi(e) for e in document.get('extras', [])),
            bound=psi.parse_psi(document['bound']),
            degree=int(document['degree']),
            sequent=frozenset(fl.formula_from_json(f) for f in document.get('sequent', [])),
            rule=document['rule'],
            payload=payload,
            premises=tuple(certificate_from_json(p) for p in document.get('premises', [])),
        )
    except KeyError as error:
        raise ParseError('certificate node lacks %s' % (error,)) from error


def load_certificate(path):
    """
    Read ``{"operators": [...], "certificate": {...}}``; returns the
    certificate and its registry
    """
    with open(path, encoding='utf-8') as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as error:
            raise ParseError('%s: %s' % (path, error)) from error
    if not isinstance(document, dict) or 'certificate' not in document:
        raise ParseError('a certificate document has a "certificate" member')
    registry = operators.registry_from_json({'operators': document.get('operators', [])})
    return certificate_from_json(document['certificate']), registry


def document_to_json(root, registry):
    return {'operators': registry.to_json()['operators'], 'certificate': certificate_to_json(root)}
