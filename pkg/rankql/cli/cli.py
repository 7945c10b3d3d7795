#!/bin/env python3

import logging

import click

import rankql as rq
from rankql.config import RunConfig, load_config_file
from rankql.exceptions import ConfigError, RankQLError
from rankql.montecarlo import EXPERIMENTS
from rankql.utils import write_json

###############################################################################

# Exit statuses
EXIT_CLAIMS_FAILED = 1
EXIT_ERROR = 2

CONFIG_META = 'rankql.config'


class RunGroup(click.Group):
    def list_commands(self, ctx):
        return list(self.commands)


def _load_config(ctx, param, value):
    """Eager --config callback: feeds the file's flag values to click as defaults."""
    if value is None:
        return None
    try:
        config = load_config_file(value)
    except ConfigError as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param)
    ctx.default_map = dict(ctx.default_map or {}, **{k: v for k, v in config.items()
                                                    if k not in ('thresholds', 'settings')})
    ctx.meta[CONFIG_META] = config
    return value


COMMON_OPTIONS = (
    click.option('--config', type=click.Path(exists=True, dir_okay=False), callback=_load_config, is_eager=True,
                 expose_value=False, help='JSON file supplying any flag; the command line takes precedence.'),
    click.option('--tie-policy', type=click.Choice(['kemeny', 'paper']), default='kemeny', show_default=True,
                 help='Scoring of tied pairs.'),
    click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True),
    click.option('--out', 'out', default=None, help='Write the JSON document here instead of standard output.'),
    click.option('-v', '--verbose', is_flag=True, help='Debug logging and progress bars.'),
)


def common_options(f):
    for option in reversed(COMMON_OPTIONS):
        f = option(f)
    return f


def _config(ctx, command, tie_policy, seed, out, verbose, **kw):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger('rankql').setLevel(logging.DEBUG if verbose else logging.WARNING)
    file_config = ctx.meta.get(CONFIG_META, {})
    return RunConfig(command, tie_policy=tie_policy, seed=seed, output_path=out, verbose=verbose,
                     thresholds=file_config.get('thresholds', {}), settings=file_config.get('settings', {}), **kw)


def _fail(ctx, error):
    click.echo('error: {}'.format(error), err=True)
    ctx.exit(EXIT_ERROR)


def _emit(ctx, doc, cfg):
    try:
        write_json(doc, cfg.output_path, echo=click.echo)
    except OSError as e:
        _fail(ctx, 'cannot write {}: {}'.format(cfg.output_path, e.strerror or e))


@click.command(cls=RunGroup, invoke_without_command=True)
@click.version_option(version=rq.__version__)
@click.pass_context
def cli(ctx):
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@cli.command()
@click.argument('input_csv', type=click.Path(exists=True, dir_okay=False))
@click.option('--columns', default=None, help='Comma separated columns (default: all).')
@common_options
@click.pass_context
def corr(ctx, input_csv, columns, tie_policy, seed, out, verbose):
    """
    Pairwise rank correlations of the columns of INPUT_CSV.

    Each pair reports rho_hat, its t statistic and p-value on N - 2 degrees
    of freedom, the Fisher information and the fitted moment weights.
    """
    try:
        cfg = _config(ctx, 'corr', tie_policy, seed, out, verbose, columns=columns)
        doc = rq.cmd_corr(rq.ingest_csv(input_csv), cfg)
    except RankQLError as e:
        _fail(ctx, e)
    _emit(ctx, doc, cfg)


@cli.command()
@click.argument('input_csv', type=click.Path(exists=True, dir_okay=False))
@click.option('--response', required=True, help='Response column.')
@click.option('--predictors', default=None, help='Comma separated predictor columns (default: all others).')
@click.option('--weighted', is_flag=True, help='Reweight by binned residual variances.')
@click.option('--bins', type=click.IntRange(2, None), default=None, help='Variance bins (default: sqrt N).')
@common_options
@click.pass_context
def fit(ctx, input_csv, response, predictors, weighted, bins, tie_policy, seed, out, verbose):
    """
    Rank-space regression of RESPONSE on the predictors of INPUT_CSV.
    """
    try:
        cfg = _config(ctx, 'fit', tie_policy, seed, out, verbose, bins=bins)
        doc = rq.cmd_fit(rq.ingest_csv(input_csv), response, predictors, weighted, cfg)
    except RankQLError as e:
        _fail(ctx, e)
    _emit(ctx, doc, cfg)


@cli.command()
@click.argument('input_csv', type=click.Path(exists=True, dir_okay=False))
@click.option('--response', required=True, help='Response column.')
@click.option('--instruments', required=True, help='Comma separated instrument columns.')
@click.option('--predictors', default=None,
              help='Comma separated endogenous predictors (default: all columns but response and instruments).')
@common_options
@click.pass_context
def iv(ctx, input_csv, response, instruments, predictors, tie_policy, seed, out, verbose):
    """
    Rank-space two-stage least squares on INPUT_CSV.
    """
    try:
        cfg = _config(ctx, 'iv', tie_policy, seed, out, verbose)
        doc = rq.cmd_iv(rq.ingest_csv(input_csv), response, instruments, predictors, cfg)
    except RankQLError as e:
        _fail(ctx, e)
    _emit(ctx, doc, cfg)


@cli.command()
@click.argument('input_csv', type=click.Path(exists=True, dir_okay=False))
@click.option('--columns', default=None, help='Comma separated columns (default: all).')
@common_options
@click.pass_context
def moments(ctx, input_csv, columns, tie_policy, seed, out, verbose):
    """
    Second to fourth central moments of each column's rank embedding.
    """
    try:
        cfg = _config(ctx, 'moments', tie_policy, seed, out, verbose, columns=columns)
        doc = rq.cmd_moments(rq.ingest_csv(input_csv), cfg)
    except RankQLError as e:
        _fail(ctx, e)
    _emit(ctx, doc, cfg)


@cli.command()
@click.argument('name')
@click.option('--n', 'n', type=click.IntRange(2, None), default=None, help='Sample size.')
@click.option('--reps', type=click.IntRange(0, None), default=None, help='Replicates per cell.')
@click.option('--processes', type=int, default=1, show_default=True,
              help='Worker processes, -1 means use all available cpus.')
@click.option('--csv', 'csv_path', default=None, help='Write per-replicate estimates to this CSV file.')
@click.option('--include-estimates', is_flag=True, help='Embed per-replicate estimates in the JSON report.')
@common_options
@click.pass_context
def simulate(ctx, name, n, reps, processes, csv_path, include_estimates, tie_policy, seed, out, verbose):
    """
    Run the simulation experiment NAME and write its report.

    Exits with status 1 when a claim check fails.
    """
    try:
        cfg = _config(ctx, 'simulate', tie_policy, seed, out, verbose, n=n, reps=reps, processes=processes,
                      csv_path=csv_path, include_estimates=include_estimates)
        doc = rq.cmd_simulate(name, cfg)
    except RankQLError as e:
        _fail(ctx, e)
    except OSError as e:
        _fail(ctx, 'cannot write {}: {}'.format(cfg.csv_path, e.strerror or e))
    _emit(ctx, doc, cfg)
    if not doc['passed']:
        for claim in doc['claim_checks']:
            if not claim['passed'] and not claim['skipped']:
                click.echo('claim failed: {} (observed {:.6g}, threshold {:.6g})'.format(
                    claim['name'], claim['observed'], claim['threshold']), err=True)
        ctx.exit(EXIT_CLAIMS_FAILED)


simulate.help += '\n\nExperiments: {}.'.format(', '.join(EXPERIMENTS))
