# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Checker for finite proofs in the one-sided sequent calculi of the three
fixpoint theories:

``pn-id:k``
    arbitrary positive operators, induction for Pi_k(P) formulas, the R-bar
    rule with sigma positive or negative;

``pandn-acc:k``
    Acc operators, induction for Pi_k(P), sigma = D-bar & C;

``pi01p-acc``
    Acc operators, induction for Pi_1(P), sigma = forall z sigma0(z, u).

Sequents are sets of formulas.  A rule node names its principal formula and
the other data of the inference in its payload; a single premise must be the
conclusion together with the formulas the rule adds, so that the checker
never has to guess which formula a rule works on.

Arithmetical initial sequents are decided only for closed bounded sentences
(plus ``t=t`` and the defining equations of the signature).  A node may
declare ``trusted`` instead; it is accepted and listed in the report notes.
"""
import dataclasses
import json
import logging

from . import formula as fl
from . import operators
from . import psi
from .exceptions import FormulaError, ParseError, ProofError
from .report import Report


logger = logging.getLogger(__name__)  # pylint: disable=C0103


THEORY_KINDS = ('pn-id', 'pandn-acc', 'pi01p-acc')
RULES = (
    'logical', 'equality', 'arith', 'cut', 'exists', 'forall', 'bexists', 'bforall',
    'or', 'and', 'R', 'Rbar', 'ind'
)
PAYLOAD_FORMULAS = ('principal', 'cut', 'theta', 'sigma')
PAYLOAD_TERMS = ('witness', 'term')


@dataclasses.dataclass(frozen=True)
class Theory:
    """
    One of the three theories; ``k`` bounds the induction formulas of the
    first two
    """
    kind: str
    k: int = 0

    @property
    def acc_only(self):
        return self.kind != 'pn-id'

    @property
    def induction_rank(self):
        return 1 if self.kind == 'pi01p-acc' else self.k

    def __str__(self):
        if self.kind == 'pi01p-acc':
            return self.kind
        return '%s:%d' % (self.kind, self.k)


def parse_theory(text):
    """
    Parse ``pn-id:k``, ``pandn-acc:k`` or ``pi01p-acc``
    """
    kind, _, level = text.partition(':')
    if kind not in THEORY_KINDS:
        raise ParseError('unknown theory %r' % (text,))
    if kind == 'pi01p-acc':
        if level:
            raise ParseError('pi01p-acc takes no level')
        return Theory(kind)
    try:
        k = int(level)
    except ValueError:
        raise ParseError('theory %s needs a level, as in %s:1' % (kind, kind)) from None
    if k < 0:
        raise ParseError('theory level must not be negative')
    return Theory(kind, k)


@dataclasses.dataclass(frozen=True, eq=False)
class ProofTree:
    """
    A node of a proof

    Attributes:
        conclusion(frozenset):
            The sequent proved at this node

        rule(str):
            One of :data:`RULES`

        payload(dict):
            Rule data: ``principal``, ``cut``, ``theta``, ``sigma`` formulas,
            ``witness``, ``term`` terms, ``eigen``, ``var``, ``param``,
            ``operator`` names, ``index`` and ``trusted``

        premises(tuple):
            Sub-proofs
    """
    conclusion: frozenset
    rule: str
    payload: dict = dataclasses.field(default_factory=dict)
    premises: tuple = ()


def node(conclusion, rule, premises=(), **payload):
    return ProofTree(frozenset(conclusion), rule, payload, tuple(premises))


@dataclasses.dataclass(frozen=True)
class ProofDocument:
    proof: ProofTree
    registry: operators.OperatorRegistry
    theory: Theory = None


ARITY = {
    'logical': 0, 'equality': 0, 'arith': 0, 'cut': 2, 'exists': 1, 'forall': 1, 'bexists': 2,
    'bforall': 1, 'or': 1, 'R': 1, 'Rbar': 2, 'ind': 3,
}


class _Checker:
    """
    One run of :func:`check_proof`
    """

    def __init__(self, theory, registry, report):
        self.theory = theory
        self.registry = registry
        self.report = report

    def fail(self, path, rule, message):
        self.report.add(path, message, rule)
        return False

    def check(self, tree, path):
        if tree.rule not in RULES:
            self.fail(path, tree.rule, 'unknown rule')
            return
        expected = len(self._principal(tree).parts) if tree.rule == 'and' and self._is_big(tree) else ARITY.get(tree.rule, 2)
        if len(tree.premises) != expected:
            self.fail(path, tree.rule, 'expected %d premises, got %d' % (expected, len(tree.premises)))
        else:
            try:
                getattr(self, '_rule_' + tree.rule)(tree, path)
            except (FormulaError, KeyError, TypeError) as error:
                self.fail(path, tree.rule, 'malformed rule data: %s' % (error,))
        for index, premise in enumerate(tree.premises):
            self.check(premise, '%s.%d' % (path, index))

    def _principal(self, tree):
        return tree.payload.get('principal')

    def _is_big(self, tree):
        return isinstance(self._principal(tree), fl.BigAnd)

    def _expect_premise(self, tree, index, added, path):
        expected = tree.conclusion | frozenset(added)
        actual = tree.premises[index].conclusion
        if actual != expected:
            missing = ', '.join(sorted(fl.show(f) for f in expected - actual))
            extra = ', '.join(sorted(fl.show(f) for f in actual - expected))
            return self.fail(
                path, tree.rule,
                'premise %d does not match: missing {%s}, unexpected {%s}' % (index, missing, extra)
            )
        return True

    def _require_principal(self, tree, path, types):
        principal = self._principal(tree)
        if not isinstance(principal, types):
            self.fail(path, tree.rule, 'principal formula of the wrong kind')
            return None
        if principal not in tree.conclusion:
            self.fail(path, tree.rule, 'principal formula %s is not in the conclusion' % (fl.show(principal),))
            return None
        return principal

    def _fresh(self, tree, path, name, *formulas):
        used = frozenset().union(*(fl.free_vars(f) for f in tree.conclusion))
        for extra in formulas:
            used |= fl.free_vars(extra)
        if name in used:
            return self.fail(path, tree.rule, 'eigenvariable %s is not fresh' % (name,))
        return True

    def _rule_logical(self, tree, path):
        for formula in tree.conclusion:
            if fl.is_literal(formula) and fl.negate(formula) in tree.conclusion:
                return
        self.fail(path, 'logical', 'no complementary pair of literals')

    def _rule_equality(self, tree, path):
        literals = [f for f in tree.conclusion if fl.is_literal(f)]
        for formula in literals:
            if not (isinstance(formula, fl.Rel) and formula.op == '!='):
                continue
            t, s = formula.left, formula.right
            for first in literals:
                for second in literals:
                    left = fl.negate(first)
                    if fl.replace_term(left, t, s) == fl.replace_term(second, t, s) or \
                            fl.replace_term(left, s, t) == fl.replace_term(second, s, t):
                        if left != second:
                            return
        self.fail(path, 'equality', 'no equality axiom t!=s, ~L(t), L(s)')

    def _rule_arith(self, tree, path):
        if tree.payload.get('trusted'):
            principal = self._principal(tree)
            shown = fl.show(principal) if principal is not None else 'the sequent'
            logger.warning('Trusted arithmetical axiom at %s: %s', path, shown)
            self.report.note('%s: trusted axiom %s' % (path, shown))
            return
        principal = self._principal(tree)
        candidates = [principal] if principal is not None else sorted(tree.conclusion, key=fl.show)
        if principal is not None and principal not in tree.conclusion:
            self.fail(path, 'arith', 'principal formula is not in the conclusion')
            return
        for formula in candidates:
            if _true_axiom(formula):
                return
        self.fail(path, 'arith', 'no t=t, defining axiom or true closed bounded sentence')

    def _rule_cut(self, tree, path):
        cut = tree.payload['cut']
        negated = fl.negate(cut)
        left, right = tree.premises[0].conclusion, tree.premises[1].conclusion
        if negated not in left:
            self.fail(path, 'cut', 'left premise lacks %s' % (fl.show(negated),))
        if cut not in right:
            self.fail(path, 'cut', 'right premise lacks %s' % (fl.show(cut),))
        if not (left - {negated}) <= tree.conclusion or not (right - {cut}) <= tree.conclusion:
            self.fail(path, 'cut', 'premises carry formulas that are not in the conclusion')
        if not tree.conclusion <= (left | right):
            self.fail(path, 'cut', 'conclusion has formulas from neither premise')

    def _rule_exists(self, tree, path):
        principal = self._require_principal(tree, path, fl.Exists)
        if principal is not None:
            instance = fl.substitute(principal.body, {principal.var: tree.payload['witness']})
            self._expect_premise(tree, 0, [instance], path)

    def _rule_forall(self, tree, path):
        principal = self._require_principal(tree, path, fl.Forall)
        if principal is not None:
            eigen = tree.payload['eigen']
            self._fresh(tree, path, eigen)
            instance = fl.substitute(principal.body, {principal.var: fl.Var(eigen)})
            self._expect_premise(tree, 0, [instance], path)

    def _rule_bexists(self, tree, path):
        principal = self._require_principal(tree, path, fl.BExists)
        if principal is not None:
            witness = tree.payload['witness']
            self._expect_premise(tree, 0, [fl.substitute(principal.body, {principal.var: witness})], path)
            self._expect_premise(tree, 1, [fl.Rel('<', witness, principal.bound)], path)

    def _rule_bforall(self, tree, path):
        principal = self._require_principal(tree, path, fl.BForall)
        if principal is not None:
            eigen = tree.payload['eigen']
            self._fresh(tree, path, eigen)
            variable = fl.Var(eigen)
            added = [fl.Rel('!<', variable, principal.bound), fl.substitute(principal.body, {principal.var: variable})]
            self._expect_premise(tree, 0, added, path)

    def _rule_or(self, tree, path):
        principal = self._require_principal(tree, path, (fl.Or, fl.BigOr))
        if principal is not None:
            parts = fl.children(principal)
            index = tree.payload.get('index', 0)
            if not 0 <= index < len(parts):
                self.fail(path, 'or', 'disjunct index %d out of range' % (index,))
                return
            self._expect_premise(tree, 0, [parts[index]], path)

    def _rule_and(self, tree, path):
        principal = self._require_principal(tree, path, (fl.And, fl.BigAnd))
        if principal is not None:
            for index, part in enumerate(fl.children(principal)):
                self._expect_premise(tree, index, [part], path)

    def _operator(self, tree, path, principal):
        entry = self.registry.get(principal.name)
        if self.theory.acc_only and not entry.acc_flag:
            self.fail(path, tree.rule, 'theory %s admits only Acc operators, %s is not one' % (self.theory, entry.name))
        return entry

    def _rule_R(self, tree, path):  # pylint: disable=C0103
        principal = self._require_principal(tree, path, fl.Fix)
        if principal is None:
            return
        if not principal.positive or principal.stage != psi.OMEGA:
            self.fail(path, 'R', 'principal formula must be a positive fixpoint atom')
            return
        entry = self._operator(tree, path, principal)
        self._expect_premise(tree, 0, [operators.instantiate(entry, psi.OMEGA, principal.arg)], path)

    def _rule_Rbar(self, tree, path):  # pylint: disable=C0103
        principal = self._require_principal(tree, path, fl.Fix)
        if principal is None:
            return
        if principal.positive or principal.stage != psi.OMEGA:
            self.fail(path, 'Rbar', 'principal formula must be a complemented fixpoint atom')
            return
        entry = self._operator(tree, path, principal)
        sigma, eigen = tree.payload['sigma'], tree.payload['eigen']
        param = tree.payload.get('param') or _only_parameter(sigma)
        self._fresh(tree, path, eigen, fl.Forall(param, sigma))
        variable = fl.Var(eigen)
        step = self._rbar_step(tree, path, entry, sigma, param, variable)
        if step is None:
            return
        sigma_at = fl.substitute(sigma, {param: variable})
        self._expect_premise(tree, 0, [step, sigma_at], path)
        self._expect_premise(tree, 1, [fl.negate(fl.substitute(sigma, {param: principal.arg}))], path)

    def _rbar_step(self, tree, path, entry, sigma, param, variable):
        """
        The formula the left premise adds next to sigma(a)
        """
        kind = self.theory.kind
        if kind == 'pn-id':
            if not (fl.is_positive(sigma) or fl.is_negative(sigma)):
                self.fail(path, 'Rbar', 'sigma must be positive or negative')
                return None
            return fl.negate(operators.instantiate(entry, operators.Predicate(param, sigma), variable))
        if kind == 'pandn-acc':
            if not (isinstance(sigma, fl.And) and fl.is_negative(sigma.left) and fl.is_positive(sigma.right)):
                self.fail(path, 'Rbar', 'sigma must be D-bar & C with D, C positive')
                return None
            return fl.Or(
                fl.negate(operators.instantiate(entry, operators.Predicate(param, sigma.left), variable)),
                fl.negate(operators.instantiate(entry, operators.Predicate(param, sigma.right), variable)),
            )
        if not (isinstance(sigma, fl.Forall) and fl.is_rank0(sigma.body)):
            self.fail(path, 'Rbar', 'sigma must be forall z sigma0 with sigma0 of rank 0')
            return None
        if not entry.acc_flag:
            return None
        built = operators.phi_sigma(entry, sigma, param)
        return fl.negate(fl.substitute(built, {entry.var: variable}))

    def _rule_ind(self, tree, path):
        theta, var, eigen = tree.payload['theta'], tree.payload['var'], tree.payload['eigen']
        term = tree.payload['term']
        rank = fl.pi_rank(theta)
        if rank is None or rank > self.theory.induction_rank:
            self.fail(
                path, 'ind',
                'induction formula has Pi rank %s, theory %s allows %d' % (rank, self.theory, self.theory.induction_rank)
            )
        self._fresh(tree, path, eigen, fl.Forall(var, theta))
        variable = fl.Var(eigen)
        self._expect_premise(tree, 0, [fl.substitute(theta, {var: fl.ZERO_TERM})], path)
        below = fl.negate(fl.substitute(theta, {var: variable}))
        successors = [fl.Succ(variable), fl.Add(variable, fl.Num(1))]
        actual = tree.premises[1].conclusion
        if not any(actual == tree.conclusion | {below, fl.substitute(theta, {var: s})} for s in successors):
            self._expect_premise(tree, 1, [below, fl.substitute(theta, {var: successors[0]})], path)
        self._expect_premise(tree, 2, [fl.negate(fl.substitute(theta, {var: term}))], path)


def _only_parameter(sigma):
    candidates = sorted(fl.free_vars(sigma))
    if len(candidates) != 1:
        raise FormulaError('sigma needs exactly one parameter, found %s' % (candidates,))
    return candidates[0]


def _true_axiom(formula):
    if isinstance(formula, fl.Rel) and formula.op == '=' and formula.left == formula.right:
        return True
    if fl.is_defining_axiom(formula):
        return True
    if fl.free_vars(formula) or not fl.is_bounded_arithmetic(formula):
        return False
    return fl.evaluate_arithmetic(formula)


def check_proof(proof, theory, registry=None):
    """
    Check every node of a proof

    Parameters
    ----------
    proof : ProofTree
        The root of the proof

    theory : Theory or str
        The theory, as returned by :func:`parse_theory`

    registry : OperatorRegistry, optional
        Operators named by fixpoint atoms

    Returns
    -------
    Report
        Empty when the proof is accepted
    """
    if not isinstance(proof, ProofTree):
        raise ProofError('check_proof needs a ProofTree, got %r' % (type(proof).__name__,))
    if isinstance(theory, str):
        theory = parse_theory(theory)
    registry = registry if registry is not None else operators.OperatorRegistry()
    report = Report(subject='proof under %s' % (theory,))
    _Checker(theory, registry, report).check(proof, 'root')
    logger.debug('Checked proof under %s: %d diagnostics', theory, len(report.diagnostics))
    return report


def rename_variable(proof, old, new):
    """
    Rename the free variable ``old`` to ``new`` throughout a proof
    """
    mapping = {old: fl.Var(new)}

    def rename(value, key):
        if key in PAYLOAD_FORMULAS:
            return fl.substitute(value, mapping)
        if key in PAYLOAD_TERMS:
            return fl.subst_term(value, mapping)
        if key == 'eigen' and value == old:
            return new
        return value

    return ProofTree(
        frozenset(fl.substitute(f, mapping) for f in proof.conclusion),
        proof.rule,
        {key: rename(value, key) for key, value in proof.payload.items()},
        tuple(rename_variable(premise, old, new) for premise in proof.premises),
    )


def weaken(proof, formula):
    """
    Add ``formula`` to every sequent of a proof
    """
    return ProofTree(
        proof.conclusion | {formula}, proof.rule, dict(proof.payload),
        tuple(weaken(premise, formula) for premise in proof.premises)
    )


def proof_to_json(proof):
    payload = {}
    for key, value in proof.payload.items():
        if key in PAYLOAD_FORMULAS:
            payload[key] = fl.formula_to_json(value)
        elif key in PAYLOAD_TERMS:
            payload[key] = fl.term_to_json(value)
        else:
            payload[key] = value
    document = {
        'conclusion': sorted((fl.formula_to_json(f) for f in proof.conclusion), key=json.dumps),
        'rule': proof.rule,
    }
    if payload:
        document['payload'] = payload
    if proof.premises:
        document['premises'] = [proof_to_json(premise) for premise in proof.premises]
    return document


def proof_from_json(document):
    if not isinstance(document, dict) or 'rule' not in document:
        raise ParseError('malformed proof node %r' % (document,))
    payload = {}
    for key, value in document.get('payload', {}).items():
        if key in PAYLOAD_FORMULAS:
            payload[key] = fl.formula_from_json(value)
        elif key in PAYLOAD_TERMS:
            payload[key] = fl.term_from_json(value)
        else:
            payload[key] = value
    return ProofTree(
        frozenset(fl.formula_from_json(f) for f in document.get('conclusion', [])),
        document['rule'],
        payload,
        tuple(proof_from_json(premise) for premise in document.get('premises', [])),
    )


def document_from_json(document):
    """
    A proof file: ``{"operators": [...], "theory": "pn-id:1", "proof": {...}}``
    with the operators and the theory optional
    """
    if not isinstance(document, dict) or 'proof' not in document:
        raise ParseError('a proof document has a "proof" member')
    registry = operators.registry_from_json({'operators': document.get('operators', [])})
    theory = parse_theory(document['theory']) if document.get('theory') else None
    return ProofDocument(proof_from_json(document['proof']), registry, theory)


def document_to_json(proof_document):
    document = {'operators': proof_document.registry.to_json()['operators'], 'proof': proof_to_json(proof_document.proof)}
    if proof_document.theory is not None:
        document['theory'] = str(proof_document.theory)
    return document


def load_proof(path):
    with open(path, encoding='utf-8') as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as error:
            raise ParseError('%s: %s' % (path, error)) from error
    return document_from_json(document)
