"""
One function per command: each takes parsed inputs and a RunConfig and
returns the JSON document the command emits.
"""
import itertools
import logging

from rankql.config import RunConfig, split_names
from rankql.estimators import central_moments, correlate
from rankql.exceptions import ConfigError
from rankql.kernel import embed
from rankql.montecarlo import merge_thresholds, run_experiment
from rankql.regression import design_embedding, estimate_sigma2, fit_2sls, fit_ql, fit_weighted, instrument_matrix

logger = logging.getLogger(__name__)


def _header(command, ds, cfg):
    return {'command': command, 'source': ds.source_path, 'n': ds.n, 'tie_policy': cfg.tie_policy.value}


def _predictors(ds, response, predictors, exclude=()):
    ds.column(response)
    names = split_names(predictors)
    if not names:
        names = tuple(c for c in ds.column_names if c != response and c not in exclude)
    if not names:
        raise ConfigError('no predictor columns left besides the response {!r}'.format(response))
    return names


def cmd_corr(ds, cfg):
    """
    Pairwise rank correlations of the selected columns (all columns by default).

    Parameters
    ----------
    ds : :class:`~rankql.dataset.Dataset`
    cfg : :class:`~rankql.config.RunConfig`

    Returns
    -------
    doc : dict
    """
    names = cfg.columns or ds.column_names
    if len(names) < 2:
        raise ConfigError('corr needs at least two columns, got {}'.format(len(names)))
    pairs = []
    for a, b in itertools.combinations(names, 2):
        fit = correlate(ds.column(a), ds.column(b), cfg.tie_policy, names=(a, b))
        pairs.append(dict(x=a, y=b, **fit.to_dict()))
    doc = _header('corr', ds, cfg)
    doc['pairs'] = pairs
    return doc


def cmd_fit(ds, response, predictors=None, weighted=False, cfg=None):
    """
    Rank-space regression of `response` on `predictors`.

    With `weighted`, per-observation variances are estimated from
    ``cfg.bins`` fitted-value bins and the fit is repeated with weights
    ``1 / sigma2``.

    Returns
    -------
    doc : dict
    """
    cfg = cfg or RunConfig('fit')
    names = _predictors(ds, response, predictors)
    d = design_embedding(ds.select(names), ds.column(response), cfg.tie_policy, names=names, response_name=response)
    fit = fit_ql(d)
    if weighted:
        fit = fit_weighted(d, estimate_sigma2(fit, d, bins=cfg.bins))
    doc = _header('fit', ds, cfg)
    doc.update(response=response, fit=fit.to_dict())
    return doc


def cmd_iv(ds, response, instruments, predictors=None, cfg=None):
    """
    Rank-space two-stage least squares of `response` on `predictors` with
    `instruments`.

    Returns
    -------
    doc : dict
    """
    cfg = cfg or RunConfig('iv')
    instruments = split_names(instruments)
    if not instruments:
        raise ConfigError('iv needs at least one instrument column')
    names = _predictors(ds, response, predictors, exclude=instruments)
    d = design_embedding(ds.select(names), ds.column(response), cfg.tie_policy, names=names, response_name=response)
    _, Z = instrument_matrix(ds.select(instruments), cfg.tie_policy, names=instruments)
    weak_f = merge_thresholds(cfg.thresholds)['weak_instrument_f']
    fit = fit_2sls(d, Z, weak_f=weak_f)
    if fit.weak:
        logger.warning('weak instruments: smallest first-stage F is %.3g (threshold %.3g)', fit.first_stage_f, weak_f)
    doc = _header('iv', ds, cfg)
    doc.update(response=response, instruments=list(instruments), fit=fit.to_dict())
    return doc


def cmd_moments(ds, cfg):
    """Central moments of the rank embedding of each selected column."""
    names = cfg.columns or ds.column_names
    columns = {}
    for name in names:
        e = embed(ds.column(name), cfg.tie_policy)
        m = central_moments(e)
        columns[name] = {'mu2': m.mu2, 'mu3': m.mu3, 'mu4': m.mu4, 'tie_groups': len(e.tie_groups)}
    doc = _header('moments', ds, cfg)
    doc['columns'] = columns
    return doc


def cmd_simulate(name, cfg):
    """
    Run a registered simulation experiment.

    The per-replicate estimates go to ``cfg.csv_path`` when set.

    Returns
    -------
    doc : dict
        The report; ``doc['passed']`` is False when a claim check failed.
    """
    report = run_experiment(name, seed=cfg.seed, n=cfg.n, reps=cfg.reps, settings=cfg.settings,
                            thresholds=cfg.thresholds, policy=cfg.tie_policy, processes=cfg.processes,
                            progress=cfg.verbose)
    if cfg.csv_path:
        report.to_csv(cfg.csv_path)
    return report.to_dict(include_estimates=cfg.include_estimates)
