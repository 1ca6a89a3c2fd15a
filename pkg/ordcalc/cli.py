# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
The ``ordcalc`` command.

Exit codes: 0 when the result is accepted, 1 when a checker rejects its
input, 2 for usage errors and malformed input files.  Reports go to stdout,
log messages to stderr.
"""
import concurrent.futures
import json
import logging
import math
import sys

import click

from . import configuration
from . import controlled
from . import debug as debug_module
from . import fixpoint
from . import formula as fl
from . import operators
from . import psi as psi_module
from . import resolution
from . import sequent
from . import sweeps
from . import theta as theta_module
from .exceptions import OrdcalcException, ParseError


logger = logging.getLogger(__name__)  # pylint: disable=C0103


ACCEPT, REJECT, USAGE = 0, 1, 2


class OrdcalcGroup(click.Group):
    """
    Turns library errors raised by a command into exit code 2
    """

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (OrdcalcException, ValueError) as error:
            click.echo('error: %s' % (error,), err=True)
            raise click.exceptions.Exit(USAGE) from error


def _config(ctx, subcommand, inputs=(), size_bound=None, jobs=None):
    options = ctx.find_root().obj
    config = configuration.run_config(
        subcommand, inputs, size_bound=size_bound, seed=options['seed'],
        output_format=options['format'], jobs=jobs
    )
    logger.debug('Running %s', config)
    return config


def _emit(config, text, data):
    if config.output_format == 'json':
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        click.echo(text)


def _finish(config, report, extra=None):
    """
    Print a report and leave with 0 for accepted, 1 for rejected
    """
    data = report.to_dict()
    if extra:
        data.update(extra)
    _emit(config, report.render(), data)
    if not report.ok:
        raise click.exceptions.Exit(REJECT)
    return ACCEPT


def _read_json(path):
    with open(path, encoding='utf-8') as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as error:
            raise ParseError('%s: %s' % (path, error)) from error


def _json_number(value):
    return None if value == math.inf else value


@click.group(cls=OrdcalcGroup)
@click.option('--format', 'output_format', type=click.Choice(configuration.FORMATS), default=None, help='Output format.')
@click.option('--seed', type=int, default=None, help='Seed for randomized sweeps; defaults to $ORDCALC_SEED or 0.')
@click.option('--verbose', '-v', is_flag=True, help='Log at debug level.')
@click.version_option(package_name='ordcalc', message='%(prog)s %(version)s')
@click.pass_context
def cli(ctx, output_format, seed, verbose):
    """Ordinal notations, fixpoint proof checking and decorated refutations."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, stream=sys.stderr)
    ctx.obj = {'format': output_format, 'seed': seed}


# theta

@cli.group(cls=OrdcalcGroup)
def theta():
    """The theta notation system."""


@theta.command('cmp')
@click.argument('left')
@click.argument('right')
@click.pass_context
def theta_cmp(ctx, left, right):
    config = _config(ctx, 'theta cmp')
    result = theta_module.cmp_theta(theta_module.parse_theta(left), theta_module.parse_theta(right))
    _emit(config, str(result), {'order': str(result)})


@theta.command('k')
@click.argument('term')
@click.pass_context
def theta_k(ctx, term):
    config = _config(ctx, 'theta k')
    found = sorted(theta_module.to_sexpr(t) for t in theta_module.k_set(theta_module.parse_theta(term)))
    _emit(config, '\n'.join(found), {'k': found})


@theta.command('enum')
@click.option('--size', type=int, required=True, help='Largest term size.')
@click.pass_context
def theta_enum(ctx, size):
    config = _config(ctx, 'theta enum', size_bound=size)
    terms = [theta_module.to_sexpr(t) for t in theta_module.enumerate_theta(size)]
    _emit(config, '\n'.join(terms), {'count': len(terms), 'terms': terms})


@theta.command('validate')
@click.argument('term')
@click.pass_context
def theta_validate(ctx, term):
    config = _config(ctx, 'theta validate')
    return _finish(config, theta_module.validate_theta(theta_module.parse_theta(term)))


@theta.command('eval')
@click.argument('term')
@click.pass_context
def theta_eval(ctx, term):
    config = _config(ctx, 'theta eval')
    value = theta_module.eval_countable_theta(theta_module.parse_theta(term))
    _emit(config, str(value), {'value': str(value)})


# psi

@cli.group(cls=OrdcalcGroup)
def psi():
    """The psi notation system and the collapsing bookkeeping."""


@psi.command('cmp')
@click.argument('left')
@click.argument('right')
@click.pass_context
def psi_cmp(ctx, left, right):
    config = _config(ctx, 'psi cmp')
    result = psi_module.cmp_psi(psi_module.parse_psi(left), psi_module.parse_psi(right))
    _emit(config, str(result), {'order': str(result)})


@psi.command('nf')
@click.argument('term')
@click.pass_context
def psi_nf(ctx, term):
    config = _config(ctx, 'psi nf')
    parsed = psi_module.parse_psi(term)
    result = psi_module.is_valid_psi(parsed) and psi_module.is_nf(parsed)
    _emit(config, 'true' if result else 'false', {'nf': result})
    if not result:
        raise click.exceptions.Exit(REJECT)


@psi.command('hmember')
@click.argument('terms', nargs=-1, required=True)
@click.pass_context
def psi_hmember(ctx, terms):
    """GAMMA [X ...] T: decide T in H_GAMMA(X)."""
    config = _config(ctx, 'psi hmember')
    if len(terms) < 2:
        raise click.UsageError('hmember needs GAMMA and T')
    parsed = [psi_module.parse_psi(t) for t in terms]
    result = psi_module.h_member(parsed[0], frozenset(parsed[1:-1]), parsed[-1])
    _emit(config, 'true' if result else 'false', {'member': result})
    if not result:
        raise click.exceptions.Exit(REJECT)


@psi.command('collapse')
@click.option('--gamma', required=True, help='Operator index gamma.')
@click.option('--a0', required=True, help='Height a0.')
@click.option('--m', 'm', type=int, required=True, help='Multiplier m >= 1.')
@click.pass_context
def psi_collapse(ctx, gamma, a0, m):
    config = _config(ctx, 'psi collapse')
    steps = psi_module.collapse_steps(psi_module.parse_psi(gamma), psi_module.parse_psi(a0), m)
    data = {'m': steps.m, 'b_m': psi_module.to_sexpr(steps.b_m), 'beta_m': psi_module.to_sexpr(steps.beta_m)}
    _emit(config, 'b_%d = %s\nbeta_%d = %s' % (
        m, psi_module.pretty(steps.b_m), m, psi_module.pretty(steps.beta_m)), data)


@psi.command('enum')
@click.option('--size', type=int, required=True, help='Largest term size.')
@click.pass_context
def psi_enum(ctx, size):
    config = _config(ctx, 'psi enum', size_bound=size)
    terms = [psi_module.to_sexpr(t) for t in psi_module.enumerate_psi(size)]
    _emit(config, '\n'.join(terms), {'count': len(terms), 'terms': terms})


@psi.command('eval')
@click.argument('term')
@click.pass_context
def psi_eval(ctx, term):
    config = _config(ctx, 'psi eval')
    value = psi_module.eval_countable_psi(psi_module.parse_psi(term))
    _emit(config, str(value), {'value': str(value)})


# formulas

def _load_formula(path):
    document = _read_json(path)
    registry = None
    if isinstance(document, dict) and 'formula' in document:
        registry = operators.registry_from_json({'operators': document.get('operators', [])})
        document = document['formula']
    formula = fl.formula_from_json(document)
    if registry is not None:
        registry.check_formula(formula)
    return formula


@cli.group(cls=OrdcalcGroup)
def formula():
    """Formula classification and bounding."""


@formula.command('classify')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--infinitary', is_flag=True, help='Use the infinitary rank rules.')
@click.pass_context
def formula_classify(ctx, path, infinitary):
    config = _config(ctx, 'formula classify', (path,))
    classes = fl.classify(_load_formula(path), infinitary).to_dict()
    _emit(config, '\n'.join('%s: %s' % (key, classes[key]) for key in sorted(classes)), classes)


@formula.command('dg')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def formula_dg(ctx, path):
    config = _config(ctx, 'formula dg', (path,))
    degree = fl.dg(_load_formula(path))
    _emit(config, str(degree), {'dg': degree})


@formula.command('bound')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--stage', required=True, help='The stage b as a psi term.')
@click.pass_context
def formula_bound(ctx, path, stage):
    config = _config(ctx, 'formula bound', (path,))
    bounded = fl.bound_positive(_load_formula(path), psi_module.parse_psi(stage))
    _emit(config, fl.show(bounded), fl.formula_to_json(bounded))


# proofs

def _check_file(path, theory):
    """
    Check one proof file; returns the report as a dict
    """
    try:
        document = sequent.load_proof(path)
        chosen = theory or document.theory
        if chosen is None:
            raise ParseError('%s names no theory; pass --theory' % (path,))
        report = sequent.check_proof(document.proof, chosen, document.registry)
        report.subject = '%s under %s' % (path, chosen)
        return report.to_dict(), report.render(), None
    except (OrdcalcException, OSError) as error:
        return None, None, '%s: %s' % (path, error)


@cli.command()
@click.argument('paths', nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--theory', default=None, help='pn-id:k, pandn-acc:k or pi01p-acc.')
@click.option('--jobs', type=int, default=None, help='Worker processes.')
@click.pass_context
def check(ctx, paths, theory, jobs):
    """Check finite sequent proofs."""
    config = _config(ctx, 'check', paths, jobs=jobs)
    chosen = sequent.parse_theory(theory) if theory else None
    if config.jobs > 1 and len(paths) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=min(config.jobs, len(paths))) as pool:
            results = list(pool.map(_check_file, paths, [chosen] * len(paths)))
    else:
        results = [_check_file(path, chosen) for path in paths]
    errors = [error for _, _, error in results if error]
    for error in errors:
        click.echo('error: %s' % (error,), err=True)
    reports = [data for data, _, _ in results if data is not None]
    if config.output_format == 'json':
        click.echo(json.dumps(reports if len(paths) > 1 else (reports[0] if reports else None), indent=2, sort_keys=True))
    else:
        click.echo('\n'.join(text for _, text, _ in results if text))
    if errors:
        raise click.exceptions.Exit(USAGE)
    if not all(data['accepted'] for data in reports):
        raise click.exceptions.Exit(REJECT)
    return ACCEPT


# controlled derivations

@cli.group('controlled', cls=OrdcalcGroup)
def controlled_group():
    """Operator controlled derivation certificates."""


@controlled_group.command('check')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def controlled_check(ctx, path):
    config = _config(ctx, 'controlled check', (path,))
    root, registry = controlled.load_certificate(path)
    return _finish(config, controlled.check_certificate(root, registry))


@controlled_group.command('bound')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--b', 'stage', required=True, help='The stage b as a psi term.')
@click.pass_context
def controlled_bound(ctx, path, stage):
    config = _config(ctx, 'controlled bound', (path,))
    root, registry = controlled.load_certificate(path)
    bounded = controlled.apply_bounding(root, psi_module.parse_psi(stage), registry)
    document = controlled.document_to_json(bounded, registry)
    report = controlled.check_certificate(bounded, registry)
    if config.output_format == 'json':
        click.echo(json.dumps(document, indent=2, sort_keys=True))
    else:
        click.echo(report.render())
    if not report.ok:
        raise click.exceptions.Exit(REJECT)
    return ACCEPT


# fixpoints

def _operator(path, name):
    registry = operators.load_registry(path)
    if not len(registry):
        raise ParseError('%s defines no operator' % (path,))
    return registry.get(name or registry.names()[0]), registry


@cli.group(cls=OrdcalcGroup)
def lfp():
    """Least fixpoints over finite universes."""


@lfp.command('trace')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--n', 'size', type=int, required=True, help='Universe size N.')
@click.option('--op', 'name', default=None, help='Operator name; the first one by default.')
@click.pass_context
def lfp_trace(ctx, path, size, name):
    config = _config(ctx, 'lfp trace', (path,), size_bound=size)
    entry, registry = _operator(path, name)
    trace = fixpoint.lfp_stages(entry, size, registry)
    lines = ['stage %d: %s' % (index, sorted(stage)) for index, stage in enumerate(trace.stages)]
    lines.append('closure index: %d' % (trace.closure_index,))
    _emit(config, '\n'.join(lines), trace.to_dict())


@lfp.command('norm')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--elem', type=int, required=True, help='The element n.')
@click.option('--n', 'size', type=int, required=True, help='Universe size N.')
@click.option('--op', 'name', default=None, help='Operator name; the first one by default.')
@click.pass_context
def lfp_norm(ctx, path, elem, size, name):
    config = _config(ctx, 'lfp norm', (path,), size_bound=size)
    entry, registry = _operator(path, name)
    value = fixpoint.norm(entry, elem, size, registry)
    _emit(config, 'inf' if value == math.inf else str(value), {'element': elem, 'norm': _json_number(value)})


@lfp.command('axioms')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--n', 'size', type=int, required=True, help='Universe size N.')
@click.option('--op', 'name', default=None, help='Operator name; the first one by default.')
@click.pass_context
def lfp_axioms(ctx, path, size, name):
    config = _config(ctx, 'lfp axioms', (path,), size_bound=size)
    entry, registry = _operator(path, name)
    return _finish(config, fixpoint.check_fixpoint_axioms(entry, size, registry))


@cli.command()
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def acc(ctx, path):
    """Accessible part and ranks of a finite relation."""
    config = _config(ctx, 'acc', (path,))
    relation = fixpoint.load_relation(path)
    accessible, rank = fixpoint.acc_part(relation)
    lines = ['accessible: %s' % (sorted(accessible),)]
    lines.extend('rank(%d) = %d' % (element, rank[element]) for element in sorted(rank))
    _emit(config, '\n'.join(lines), {
        'accessible': sorted(accessible), 'rank': {str(k): v for k, v in sorted(rank.items())}
    })


# decorated refutations

@cli.group(cls=OrdcalcGroup)
def resolve():
    """Decorated resolution refutations."""


def _measures(derivation):
    return {
        'leaves': resolution.leaf_count(derivation),
        'nodes': resolution.node_count(derivation),
        'height': resolution.height(derivation),
        'max_decoration': resolution.max_decoration(derivation),
        'max_decoration_index': resolution.max_decoration_index(derivation),
    }


@resolve.command('build')
@click.option('--n', 'size', type=int, required=True, help='Family size n.')
@click.option('--shift', type=click.Choice(resolution.SHIFT_MODES), default=None, help='Decoration raise.')
@click.option('--output', type=click.Path(dir_okay=False, writable=True), default=None, help='Write the derivation here.')
@click.pass_context
def resolve_build(ctx, size, shift, output):
    """
    Build the decorated refutation of the n-family clauses.

    max_decoration is the largest decoration on any literal.
    max_decoration_index is the largest leaf stage, max(max k, 1 + max m);
    this is the stage the leaf hypotheses need. For --n 2 the default
    minimal raise gives 4 and 5.
    """
    config = _config(ctx, 'resolve build', size_bound=size)
    shift = configuration.settings(shift=shift)['shift']
    refutation = resolution.build_refutation(size, shift)
    measures = _measures(refutation)
    document = resolution.derivation_to_json(refutation)
    document['measures'] = measures
    if output:
        with open(output, 'w', encoding='utf-8') as handle:
            json.dump(document, handle)
    _emit(config, '\n'.join('%s: %s' % (key, measures[key]) for key in sorted(measures)), document)


@resolve.command('check')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def resolve_check(ctx, path):
    config = _config(ctx, 'resolve check', (path,))
    derivation = resolution.load_derivation(path)
    return _finish(config, resolution.check_decoration(derivation), {'measures': _measures(derivation)})


@resolve.command('brute')
@click.option('--n', 'size', type=int, required=True, help='Family size n.')
@click.option('--max-dec', type=int, default=None, help='Largest decoration.')
@click.pass_context
def resolve_brute(ctx, size, max_dec):
    config = _config(ctx, 'resolve brute', size_bound=size)
    max_dec = configuration.settings(max_dec=max_dec)['max_dec']
    found = resolution.brute_force(size, max_dec)
    if found is None:
        _emit(config, 'no refutation with decorations <= %d' % (max_dec,), {'found': False, 'max_dec': max_dec})
        return ACCEPT
    document = resolution.derivation_to_json(found)
    document.update({'found': True, 'max_dec': max_dec, 'measures': _measures(found)})
    _emit(config, 'refutation found: max decoration %d, %d leaves' % (
        resolution.max_decoration(found), resolution.leaf_count(found)), document)
    return ACCEPT


@resolve.command('growth')
@click.option('--upto', type=int, required=True, help='Largest family size.')
@click.option('--shift', type=click.Choice(resolution.SHIFT_MODES), default=None, help='Decoration raise.')
@click.pass_context
def resolve_growth(ctx, upto, shift):
    config = _config(ctx, 'resolve growth', size_bound=upto)
    rows = resolution.growth_table(upto, configuration.settings(shift=shift)['shift'])
    lines = ['n\tleaves\tmax_dec\tmax_index']
    lines.extend('\t'.join(str(value) for value in row) for row in rows)
    _emit(config, '\n'.join(lines), [
        {'n': n, 'leaves': leaves, 'max_decoration': top, 'max_decoration_index': index}
        for n, leaves, top, index in rows
    ])


@resolve.command('certify')
@click.option('--n', 'size', type=int, required=True, help='Family size n.')
@click.option('--gamma', default='0', help='Operator index gamma.')
@click.option('--a0', default='(p (p 0))', help='Height a0.')
@click.option('--shift', type=click.Choice(resolution.SHIFT_MODES), default=None, help='Decoration raise.')
@click.pass_context
def resolve_certify(ctx, size, gamma, a0, shift):
    config = _config(ctx, 'resolve certify', size_bound=size)
    refutation = resolution.build_refutation(size, configuration.settings(shift=shift)['shift'])
    root = resolution.to_controlled(
        refutation, psi_module.parse_psi(gamma), psi_module.parse_psi(a0), resolution.atomic_bindings(size)
    )
    report = controlled.check_certificate(root)
    if config.output_format == 'text':
        click.echo('final bound: %s' % (psi_module.pretty(root.bound),))
    return _finish(config, report, {'bound': psi_module.to_sexpr(root.bound), 'certificate': controlled.certificate_to_json(root)})


# sweeps

@cli.command()
@click.argument('name', type=click.Choice(sweeps.SWEEPS))
@click.option('--size', type=int, default=None, help='Enumeration bound.')
@click.option('--samples', type=int, default=None, help='Sampled pairs or triples.')
@click.option('--jobs', type=int, default=None, help='Worker processes for the fixpoint sweep.')
@click.pass_context
def sweep(ctx, name, size, samples, jobs):
    """Property sweeps: theta, psi, closure, oracle, collapse, fixpoint."""
    config = _config(ctx, 'sweep ' + name, size_bound=size, jobs=jobs)
    if name in ('theta', 'psi', 'closure'):
        report = sweeps.run_sweep(name, size_bound=size, samples=samples, seed=config.seed)
    elif name == 'oracle':
        report = sweeps.run_sweep(name, theta_size=size, psi_size=size)
    elif name == 'collapse':
        report = sweeps.run_sweep(name, samples=samples or 100, seed=config.seed)
    else:
        report = sweeps.run_sweep(
            name, exhaustive_size=size if size is not None else 4,
            random_count=samples if samples is not None else 10000, seed=config.seed, jobs=config.jobs
        )
    return _finish(config, report)


@cli.command()
def debug():
    """Print build and dependency information."""
    debug_module.print_debug_info()


def run(argv=None):
    """
    Run the command line with ``argv`` and return the exit code
    """
    try:
        result = cli.main(args=list(argv if argv is not None else sys.argv[1:]), prog_name='ordcalc', standalone_mode=False)
    except click.exceptions.Exit as error:
        return error.exit_code
    except click.ClickException as error:
        error.show()
        return USAGE
    except click.exceptions.Abort:
        return USAGE
    return result if isinstance(result, int) else ACCEPT


def main():
    sys.exit(run())


if __name__ == '__main__':  # pragma: no cover
    main()
