# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Property sweeps over enumerated and sampled objects.

Every sweep returns a :class:`ordcalc.report.Report`: an empty diagnostic
list means the property held on everything examined, and the notes record
how much was examined.  Randomized sweeps draw from ``random.Random(seed)``
so a run is reproduced by its seed.
"""
import concurrent.futures
import functools
import itertools
import logging
import random

from . import cnf
from . import fixpoint
from . import psi
from . import theta
from .configuration import settings
from .ordering import Order
from .report import Report


logger = logging.getLogger(__name__)  # pylint: disable=C0103


SWEEPS = ('theta', 'psi', 'closure', 'oracle', 'collapse', 'fixpoint')


def order_laws(terms, compare, samples, rng, show=str, report=None):
    """
    Irreflexivity and antisymmetry on every term, a strictly increasing chain
    after sorting, and sampled pairs and triples for antisymmetry and
    transitivity
    """
    report = report if report is not None else Report(subject='order laws')
    terms = list(terms)
    for term in terms:
        if compare(term, term) != Order.EQ:
            report.add(show(term), 'term is not equal to itself', 'irreflexive')
    chain = sorted(terms, key=functools.cmp_to_key(lambda a, b: int(compare(a, b))))
    for left, right in zip(chain, chain[1:]):
        if compare(left, right) != Order.LT:
            report.add(show(left), 'not below its successor %s in the sorted chain' % (show(right),), 'total')
    if len(terms) >= 2:
        for _ in range(samples):
            a, b = rng.choice(terms), rng.choice(terms)
            if compare(a, b) != compare(b, a).flip():
                report.add(show(a), 'comparison with %s is not antisymmetric' % (show(b),), 'trichotomy')
            if a is not b and a != b and compare(a, b) == Order.EQ:
                report.add(show(a), 'distinct term %s compares equal' % (show(b),), 'trichotomy')
            c = rng.choice(terms)
            if compare(a, b) == Order.LT and compare(b, c) == Order.LT and compare(a, c) != Order.LT:
                report.add(show(a), 'transitivity fails through %s and %s' % (show(b), show(c)), 'transitive')
    report.note('%d terms, %d sampled pairs and triples' % (len(terms), samples if len(terms) >= 2 else 0))
    return report


def sweep_theta(size_bound=None, samples=None, seed=None):
    config = settings(theta_size=size_bound, closure_samples=samples, seed=seed)
    terms = list(theta.enumerate_theta(config['theta_size']))
    logger.debug('Theta order sweep over %d terms', len(terms))
    return order_laws(
        terms, theta.cmp_theta, config['closure_samples'], random.Random(config['seed']),
        theta.to_sexpr, Report(subject='theta order laws, size <= %d' % (config['theta_size'],))
    )


def sweep_psi(size_bound=None, samples=None, seed=None):
    config = settings(psi_size=size_bound, closure_samples=samples, seed=seed)
    terms = list(psi.enumerate_psi(config['psi_size']))
    logger.debug('Psi order sweep over %d terms', len(terms))
    return order_laws(
        terms, psi.cmp_psi, config['closure_samples'], random.Random(config['seed']),
        psi.to_sexpr, Report(subject='psi order laws, size <= %d' % (config['psi_size'],))
    )


def sweep_closure(size_bound=None, samples=None, seed=None):
    """
    a, b < theta(c) implies a + b < theta(c) on sampled triples, and the same
    for the principal psi terms
    """
    config = settings(theta_size=size_bound, closure_samples=samples, seed=seed)
    rng = random.Random(config['seed'])
    report = Report(subject='additive closure')
    terms = list(theta.enumerate_theta(config['theta_size']))
    checked = 0
    for _ in range(config['closure_samples']):
        a, b, c = rng.choice(terms), rng.choice(terms), rng.choice(terms)
        top = theta.theta(c)
        if theta.cmp_theta(a, top) == Order.LT and theta.cmp_theta(b, top) == Order.LT:
            checked += 1
            total = theta.add_theta(a, b)
            if theta.cmp_theta(total, top) != Order.LT:
                report.add(theta.to_sexpr(top), 'sum %s escapes' % (theta.to_sexpr(total),), 'theta-closure')
    report.note('theta: %d of %d sampled triples below the principal' % (checked, config['closure_samples']))

    terms = list(psi.enumerate_psi(min(config['theta_size'], settings()['psi_size'])))
    principals = [t for t in terms if not isinstance(t, (psi.PsiSum, psi.PsiZero))]
    checked = 0
    for _ in range(config['closure_samples'] // 10):
        a, b, top = rng.choice(terms), rng.choice(terms), rng.choice(principals)
        if psi.psi_less(a, top) and psi.psi_less(b, top):
            checked += 1
            total = psi.add_psi(a, b)
            if not psi.psi_less(total, top):
                report.add(psi.to_sexpr(top), 'sum %s escapes' % (psi.to_sexpr(total),), 'psi-closure')
    report.note('psi: %d sampled triples below the principal' % (checked,))
    return report


def _oracle_chain(terms, compare, evaluate, show, label, report):
    chain = sorted(terms, key=functools.cmp_to_key(lambda a, b: int(compare(a, b))))
    values = [evaluate(term) for term in chain]
    for index in range(1, len(chain)):
        if not values[index - 1] < values[index]:
            report.add(show(chain[index]), '%s order disagrees with the CNF values %s and %s' % (
                label, values[index - 1], values[index]), 'oracle')
    report.note('%s: %d countable terms' % (label, len(chain)))


def sweep_oracle(theta_size=None, psi_size=None):
    """
    Sorting the countable terms by the notation order must sort their Cantor
    normal form values strictly
    """
    config = settings(theta_size=theta_size, psi_size=psi_size)
    report = Report(subject='countable fragment oracle')
    anchors = (
        ('theta(0)', theta.eval_countable_theta(theta.theta(theta.ZERO)), cnf.ONE),
        ('theta(1)', theta.eval_countable_theta(theta.theta(theta.nat_theta(1))), cnf.OMEGA),
        ('psi(0)', psi.eval_countable_psi(psi.ONE), cnf.ONE),
        ('psi(1)', psi.eval_countable_psi(psi.psi_app(psi.ONE)), cnf.OMEGA),
    )
    for label, found, expected in anchors:
        if found != expected:
            report.add(label, 'evaluates to %s, not %s' % (found, expected), 'anchor')
    _oracle_chain(
        [t for t in theta.enumerate_theta(config['theta_size']) if theta.is_countable_theta(t)],
        theta.cmp_theta, theta.eval_countable_theta, theta.to_sexpr, 'theta', report
    )
    _oracle_chain(
        [t for t in psi.enumerate_psi(config['psi_size']) if psi.is_countable_psi(t)],
        psi.cmp_psi, psi.eval_countable_psi, psi.to_sexpr, 'psi', report
    )
    return report


def sweep_collapse(samples=100, seed=None, size_bound=5):
    """
    beta_m < beta_{m+1} for m = 1 .. 5, and psi(hat(gamma, a0)) below
    psi(hat(gamma, a)) whenever a0 < a, on sampled (gamma, a0, a)
    """
    config = settings(seed=seed)
    rng = random.Random(config['seed'])
    terms = list(psi.enumerate_psi(size_bound))
    countable = [t for t in terms if psi.psi_less(t, psi.OMEGA)]
    report = Report(subject='collapsing bookkeeping')
    for _ in range(samples):
        gamma, a0, a = rng.choice(terms), rng.choice(countable), rng.choice(countable)
        steps = [psi.collapse_steps(gamma, a0, m) for m in range(1, 7)]
        for lower, upper in zip(steps, steps[1:]):
            if not psi.psi_less(lower.beta_m, upper.beta_m):
                report.add(psi.to_sexpr(gamma), 'beta_%d is not below beta_%d for a0=%s' % (
                    lower.m, upper.m, psi.to_sexpr(a0)), 'beta-increasing')
        if psi.psi_less(a0, a):
            low, high = psi.psi_app(psi.hat(gamma, a0)), psi.psi_app(psi.hat(gamma, a))
            if not psi.psi_less(low, high):
                report.add(psi.to_sexpr(gamma), 'psi(hat) is not monotone between %s and %s' % (
                    psi.to_sexpr(a0), psi.to_sexpr(a)), 'collapse-monotone')
    report.note('%d sampled (gamma, a0, a) triples' % (samples,))
    return report


def all_relations(size):
    pairs = list(itertools.product(range(size), repeat=2))
    for mask in range(1 << len(pairs)):
        yield fixpoint.FiniteRelation(size, [pair for bit, pair in enumerate(pairs) if mask >> bit & 1])


def random_relation(rng, size, density=0.3):
    return fixpoint.FiniteRelation(size, [
        (a, b) for a in range(size) for b in range(size) if rng.random() < density
    ])


def relation_problems(relation, axioms=True):
    """
    Disagreements between the Acc trace, the accessible part and the rank
    recursion of one relation, as (message, rule) pairs
    """
    problems = []
    for element, found, expected in fixpoint.norm_agreement(relation):
        problems.append(('norm of %d is %s, accessible part rank %s' % (element, found, expected), 'norm'))
    accessible, rank = fixpoint.acc_part(relation)
    if fixpoint.rank_by_recursion(relation) != rank:
        problems.append(('rank recursion disagrees on %s' % (sorted(accessible),), 'rank'))
    if axioms:
        report = fixpoint.check_fixpoint_axioms(fixpoint.acc_operator(relation), relation.size, leastness_limit=4)
        problems.extend((str(d), 'axioms') for d in report)
    return problems


def _relation_batch(batch):
    return [(relation.to_json(), relation_problems(relation, relation.size <= 4)) for relation in batch]


def _batches(items, size):
    items = iter(items)
    while True:
        batch = list(itertools.islice(items, size))
        if not batch:
            return
        yield batch


def sweep_fixpoint(exhaustive_size=4, random_count=10000, random_size=8, seed=None, jobs=None):
    """
    Every relation over at most ``exhaustive_size`` elements and
    ``random_count`` random relations over at most ``random_size`` elements:
    the norms of the Acc trace agree with the accessible part, the rank
    recursion agrees, and the fixpoint axioms hold
    """
    config = settings(seed=seed, jobs=jobs)
    rng = random.Random(config['seed'])
    relations = [r for size in range(exhaustive_size + 1) for r in all_relations(size)]
    relations.extend(random_relation(rng, rng.randint(0, random_size)) for _ in range(random_count))
    report = Report(subject='fixpoint semantics of finite relations')
    batches = list(_batches(relations, 256))
    logger.debug('Fixpoint sweep: %d relations in %d batches on %d workers', len(relations), len(batches), config['jobs'])
    if config['jobs'] > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config['jobs']) as pool:
            results = list(pool.map(_relation_batch, batches))
    else:
        results = [_relation_batch(batch) for batch in batches]
    for batch in results:
        for document, problems in batch:
            for message, rule in problems:
                report.add(str(document), message, rule)
    report.note('%d relations, exhaustive up to %d elements' % (len(relations), exhaustive_size))
    return report


def run_sweep(name, **kwargs):
    """
    Run one of :data:`SWEEPS` by name
    """
    runners = {
        'theta': sweep_theta, 'psi': sweep_psi, 'closure': sweep_closure,
        'oracle': sweep_oracle, 'collapse': sweep_collapse, 'fixpoint': sweep_fixpoint,
    }
    if name not in runners:
        raise ValueError('unknown sweep %r' % (name,))
    return runners[name](**kwargs)
