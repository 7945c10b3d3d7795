"""
Simulation experiments checking the estimator's statistical claims.

Every runner draws its replicates through :func:`rankql.utils.mp`; each
replicate's data comes from its own seeded stream, so the report does not
depend on the number of processes.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import pandas as pd
from scipy import stats

from rankql.exceptions import ConfigError, DegenerateVariable, SingularInformation, SingularInstruments, \
    UnknownExperiment
from rankql.estimators import correlate, pearson, spearman_oracle, variance_bound
from rankql.kernel import TiePolicy
from rankql.regression import design_embedding, estimate_sigma2, fit_2sls, fit_ql, fit_weighted, instrument_matrix
from rankql.montecarlo.config import merge_settings, merge_thresholds
from rankql.montecarlo.generators import (ContaminatedGaussian, DiscretizedCopula, GaussianCopula, Generator,
                                          HeteroLinear, WeakIV, check_seed, replicate_rng)
from rankql.montecarlo.report import SimReport, check, skipped
from rankql.utils import mp

logger = logging.getLogger(__name__)

MIN_UNBIASEDNESS_REPS = 1000
# replicate index of the large reference sample in the hetero-recovery experiment
REFERENCE_STREAM = 2 ** 32


def _check_reps(reps, minimum=1):
    if isinstance(reps, bool) or not isinstance(reps, (int, np.integer)) or reps < minimum:
        raise ConfigError('replicate count must be an integer of at least {}, got {!r}'.format(minimum, reps))
    return int(reps)


def _require(g, kind):
    if not isinstance(g.kind, kind):
        raise ConfigError('this experiment needs a {} generator, got {}'.format(kind.name, g.kind.name))


def _estimates(worker, cells, reps, columns, extra=(), processes=1, progress=False, desc=None):
    """Run `worker(gen, cell_index, replicate, *extra)` over all cells and replicates."""
    tasks, labels, replicates = [], [], []
    for index, (label, gen) in enumerate(cells):
        for r in range(reps):
            tasks.append((gen, index, r) + tuple(extra))
            labels.append(label)
            replicates.append(r)
    logger.info('%s: %d cell(s) x %d replicate(s)', desc, len(cells), reps)
    results = mp(worker, tasks, processes, progress=progress, desc=desc)
    frame = pd.DataFrame([tuple(map(float, res)) for res in results], columns=list(columns))
    frame.insert(0, 'replicate', replicates)
    frame.insert(0, 'cell', labels)
    return frame


def _config(settings, seed, thresholds, policy, generator=None):
    out = {'settings': dict(settings), 'seed': int(seed), 'thresholds': dict(thresholds),
           'tie_policy': TiePolicy.parse(policy).value}
    if generator is not None:
        out['generator'] = generator.to_dict()
    return out


def _cell(label, frame):
    return frame[frame['cell'] == label]


# replicate workers: module level so they can be pickled into a process pool

def _correlation_replicate(gen, cell, replicate, policy):
    x, y = gen.sample(cell, replicate)
    fit = correlate(x, y, policy)
    return fit.rho_hat, fit.t_stat


def _breakdown_replicate(gen, cell, replicate, policy):
    (x, y), (xc, yc) = gen.kind.draw_clean(gen.n, gen.rng(cell, replicate))
    rank_shift = abs(correlate(xc, yc, policy).rho_hat - correlate(x, y, policy).rho_hat)
    return rank_shift, abs(pearson(xc, yc) - pearson(x, y))


def _weak_iv_replicate(gen, cell, replicate, policy, weak_f):
    z, x, y = gen.sample(cell, replicate)
    d = design_embedding({'x': x}, y, policy)
    ols = fit_ql(d).beta[0]
    _, Z = instrument_matrix({'z': z}, policy)
    try:
        iv = fit_2sls(d, Z, weak_f=weak_f)
    except SingularInstruments:
        return ols, math.nan, 0.0
    return ols, iv.beta_2sls[0], iv.first_stage_f


def _hetero_replicate(gen, cell, replicate, policy):
    x, y = gen.sample(cell, replicate)
    d = design_embedding({'x': x}, y, policy)
    fit = fit_ql(d)
    weighted = fit_weighted(d, estimate_sigma2(fit, d))
    return fit.beta[0], weighted.beta[0]


def _tie_replicate(gen, cell, replicate):
    x, y = gen.sample(cell, replicate)
    try:
        kemeny = correlate(x, y, TiePolicy.KEMENY_ZERO).rho_hat
        paper = correlate(x, y, TiePolicy.PAPER_LITERAL).rho_hat
    except DegenerateVariable:
        return math.nan, math.nan, math.nan
    return kemeny, paper, spearman_oracle(x, y)


def _information_replicate(gen, cell, replicate, policy):
    x, y = gen.sample(cell, replicate)
    fit = correlate(x, y, policy)
    try:
        bound = variance_bound(fit)
    except SingularInformation:
        bound = math.nan
    return fit.rho_hat, fit.fisher_info, bound


def _ols_slope(x, y):
    xc = x - x.mean()
    return float(xc @ (y - y.mean()) / (xc @ xc))


def _influence_replicate(gen, cell, replicate, policy, magnitude):
    x, y = gen.sample(cell, replicate)
    d = design_embedding({'x': x}, y, policy)
    base = fit_ql(d).beta[0]
    ols_base = _ols_slope(x, y)
    col = d.columns[:, 0]
    bound = 2.0 * (gen.n - 1) / float(col @ col)
    rank_max = ols_max = 0.0
    for i in range(gen.n):
        for sign in (1.0, -1.0):
            moved = x.copy()
            moved[i] = sign * magnitude
            beta = fit_ql(design_embedding({'x': moved}, y, policy)).beta[0]
            rank_max = max(rank_max, abs(beta - base))
            ols_max = max(ols_max, abs(_ols_slope(moved, y) - ols_base))
    return rank_max, ols_max, bound


# experiments

def run_unbiasedness(g, reps, thresholds=None, policy=TiePolicy.KEMENY_ZERO, processes=1, progress=False):
    """
    Mean of the rank correlation against the grade correlation of a Gaussian copula.

    Parameters
    ----------
    g : Generator
        GaussianCopula generator.
    reps : int
        At least 1000 replicates.

    Returns
    -------
    report : SimReport
        Claim ``bias``: ``|mean(rho_hat) - (6/pi) asin(rho/2)| <= bias_max``.
        The table also carries the classical finite-sample expectation of
        Spearman's coefficient ``((N-2) rho_S + 3 tau) / (N+1)``.
    """
    _require(g, GaussianCopula)
    reps = _check_reps(reps, MIN_UNBIASEDNESS_REPS)
    thresholds = merge_thresholds(thresholds)
    label = 'rho={}'.format(g.kind.rho)
    frame = _estimates(_correlation_replicate, [(label, g)], reps, ('rho_hat', 't_stat'), (policy,),
                       processes, progress, 'unbiasedness')

    target = g.kind.target
    rho_hat = frame['rho_hat'].to_numpy()
    mean = float(rho_hat.mean())
    mcse = float(rho_hat.std(ddof=1) / math.sqrt(reps))
    tau = 2.0 / math.pi * math.asin(g.kind.rho)
    expectation = ((g.n - 2) * target + 3.0 * tau) / (g.n + 1)
    bias = mean - target
    claims = [check('bias', abs(bias), thresholds['bias_max'], abs(bias) <= thresholds['bias_max'],
                    'mean {:.6f} vs grade correlation {:.6f}'.format(mean, target))]
    tables = {'unbiasedness': {'target': target, 'mean': mean, 'bias': bias, 'mcse': mcse,
                               'finite_sample_expectation': expectation,
                               'expectation_bias': expectation - target}}
    settings = {'n': g.n, 'reps': reps, 'rho': g.kind.rho}
    return SimReport.build('unbiasedness', _config(settings, g.seed, thresholds, policy, g), frame,
                           {label: {'rho_hat': target}}, claims, tables)


def run_null_calibration(n, reps, seed=0, thresholds=None, policy=TiePolicy.KEMENY_ZERO, processes=1,
                         progress=False):
    """
    Kolmogorov-Smirnov distance of null t statistics to the t law with N - 2
    degrees of freedom.

    Parameters
    ----------
    n : int
        Sample size, at least 3.
    reps : int
        Number of independent replicates, at least 1.
    seed : int, default=0

    Returns
    -------
    report : SimReport
        Claim ``null_ks``: KS distance below ``ks_max``.
    """
    reps = _check_reps(reps)
    if n < 3:
        raise ConfigError('the null check needs n >= 3, got {}'.format(n))
    thresholds = merge_thresholds(thresholds)
    g = Generator(GaussianCopula(0.0), n, check_seed(seed))
    label = 'n={}'.format(n)
    frame = _estimates(_correlation_replicate, [(label, g)], reps, ('rho_hat', 't_stat'), (policy,),
                       processes, progress, 'null-calibration')

    ks = stats.kstest(frame['t_stat'].to_numpy(), 't', args=(n - 2,))
    claims = [check('null_ks', ks.statistic, thresholds['ks_max'], ks.statistic < thresholds['ks_max'],
                    'KS distance to t_{}'.format(n - 2))]
    tables = {'null': {'ks_distance': float(ks.statistic), 'ks_pvalue': float(ks.pvalue), 'dof': n - 2}}
    settings = {'n': n, 'reps': reps}
    return SimReport.build('null-calibration', _config(settings, seed, thresholds, policy, g), frame,
                           {label: {'rho_hat': 0.0}}, claims, tables)


def run_rate_check(g, n_grid, reps, thresholds=None, policy=TiePolicy.KEMENY_ZERO, processes=1, progress=False):
    """
    Spread of the rank correlation across sample sizes.

    For adjacent sizes ``n_i < n_j`` the ratio ``sd(n_i) / sd(n_j)`` is
    checked against ``sqrt(n_j / n_i)`` (2 for a quadrupling) within
    ``rate_tolerance``. Pairs with a zero spread (comonotone data) are
    skipped.

    Returns
    -------
    report : SimReport
    """
    _require(g, GaussianCopula)
    reps = _check_reps(reps, 2)
    n_grid = [int(n) for n in n_grid]
    if len(n_grid) < 2 or any(b <= a for a, b in zip(n_grid, n_grid[1:])) or n_grid[0] < 3:
        raise ConfigError('n_grid must hold at least two increasing sizes >= 3, got {}'.format(n_grid))
    thresholds = merge_thresholds(thresholds)
    tol = thresholds['rate_tolerance']
    cells = [('n={}'.format(n), g.with_n(n)) for n in n_grid]
    frame = _estimates(_correlation_replicate, cells, reps, ('rho_hat', 't_stat'), (policy,), processes,
                       progress, 'rate-check')

    sds = {n: float(_cell(label, frame)['rho_hat'].std(ddof=1)) for (label, _), n in zip(cells, n_grid)}
    claims, ratios = [], []
    for a, b in zip(n_grid, n_grid[1:]):
        name = 'rate_ratio_n{}_n{}'.format(a, b)
        expected = math.sqrt(b / a)
        if not sds[b] > 0 or not sds[a] > 0:
            claims.append(skipped(name, tol, 'zero spread, the rate is not identifiable'))
            ratios.append({'n': a, 'n_next': b, 'ratio': None, 'expected': expected})
            continue
        ratio = sds[a] / sds[b]
        ok = expected * (1 - tol) <= ratio <= expected * (1 + tol)
        claims.append(check(name, ratio, tol, ok, 'expected {:.4g} within {:.0%}'.format(expected, tol)))
        ratios.append({'n': a, 'n_next': b, 'ratio': ratio, 'expected': expected})
    target = {label: {'rho_hat': g.kind.target} for label, _ in cells}
    settings = {'n_grid': n_grid, 'reps': reps, 'rho': g.kind.rho}
    return SimReport.build('rate-check', _config(settings, g.seed, thresholds, policy, g), frame, target, claims,
                           {'sd': {str(n): sd for n, sd in sds.items()}, 'ratios': ratios})


def run_breakdown(g, eps_grid, reps, thresholds=None, policy=TiePolicy.KEMENY_ZERO, processes=1, progress=False):
    """
    Shift of the rank and Pearson correlations under gross contamination.

    For each fraction eps the median over replicates of
    ``|rho(contaminated) - rho(clean)|`` is compared between the two
    estimators on the same data. The claim holds when the rank shift is
    strictly smaller at every eps in (0, 0.5) and every rank estimate at
    eps = 0.45 is finite. Fractions above 0.5 are rejected.

    Returns
    -------
    report : SimReport
    """
    _require(g, ContaminatedGaussian)
    reps = _check_reps(reps)
    thresholds = merge_thresholds(thresholds)
    eps_grid = [float(e) for e in eps_grid]
    cells = [('eps={}'.format(e), g.with_kind(eps=e)) for e in eps_grid]
    frame = _estimates(_breakdown_replicate, cells, reps, ('rank_shift', 'pearson_shift'), (policy,), processes,
                       progress, 'breakdown')

    claims, medians = [], []
    for (label, _), eps in zip(cells, eps_grid):
        sub = _cell(label, frame)
        rank_med = float(sub['rank_shift'].median())
        pearson_med = float(sub['pearson_shift'].median())
        medians.append({'eps': eps, 'rank_median_shift': rank_med, 'pearson_median_shift': pearson_med})
        if 0.0 < eps < 0.5:
            claims.append(check('breakdown_eps={}'.format(eps), rank_med, pearson_med, rank_med < pearson_med,
                                'median rank shift against median Pearson shift'))
    if 0.45 in eps_grid:
        finite = bool(np.all(np.isfinite(_cell('eps=0.45', frame)['rank_shift'])))
        claims.append(check('rank_finite_eps=0.45', float(finite), 1.0, finite))
    else:
        claims.append(skipped('rank_finite_eps=0.45', 1.0, 'eps = 0.45 not in the grid'))
    target = {label: {'rank_shift': 0.0, 'pearson_shift': 0.0} for label, _ in cells}
    settings = {'n': g.n, 'reps': reps, 'rho': g.kind.rho, 'eps_grid': eps_grid, 'magnitude': g.kind.magnitude}
    return SimReport.build('breakdown', _config(settings, g.seed, thresholds, policy, g), frame, target, claims,
                           {'median_shift': medians})


def run_weak_iv(g, reps, thresholds=None, policy=TiePolicy.KEMENY_ZERO, processes=1, progress=False):
    """
    Rank-space least squares against rank-space 2SLS under a single
    endogenous regressor with one instrument.

    Both slopes are compared with the grade slope of y on x once the
    endogenous error component is removed. The claim records whether the
    quasi-likelihood fit has the smaller mse; replicates where the
    instrument carries no information are dropped from the 2SLS mse.

    Returns
    -------
    report : SimReport
    """
    _require(g, WeakIV)
    reps = _check_reps(reps, 2)
    thresholds = merge_thresholds(thresholds)
    weak_f = thresholds['weak_instrument_f']
    label = 'pi={}'.format(g.kind.pi_strength)
    frame = _estimates(_weak_iv_replicate, [(label, g)], reps, ('beta_ql', 'beta_2sls', 'first_stage_f'),
                       (policy, weak_f), processes, progress, 'weak-iv')

    target = g.kind.target

    def mse(col):
        v = frame[col].to_numpy()
        v = v[np.isfinite(v)]
        return float(np.mean((v - target) ** 2)) if v.size else math.inf

    mse_ql, mse_2sls = mse('beta_ql'), mse('beta_2sls')
    f = frame['first_stage_f'].to_numpy()
    median_f = float(np.median(f))
    claims = [check('weak_iv_mse', mse_ql, mse_2sls, mse_ql <= mse_2sls,
                    'rank-space QL mse against rank-space 2SLS mse')]
    tables = {'weak_iv': {'target': target, 'mse_ql': mse_ql, 'mse_2sls': mse_2sls, 'median_first_stage_f': median_f,
                          'weak_share': float(np.mean(f < weak_f)), 'weak_regime': median_f < weak_f,
                          'failed_2sls': int(np.sum(~np.isfinite(frame['beta_2sls'].to_numpy())))}}
    settings = {'n': g.n, 'reps': reps, 'pi_strength': g.kind.pi_strength, 'endogeneity': g.kind.endogeneity,
                'beta': g.kind.beta}
    return SimReport.build('weak-iv', _config(settings, g.seed, thresholds, policy, g), frame,
                           {label: {'beta_ql': target, 'beta_2sls': target}}, claims, tables)


def reference_slope(gen, cell, reference_n):
    """Rank slope of one predictor on a large reference sample, its Spearman coefficient."""
    x, y = gen.kind.draw(reference_n, replicate_rng(gen.seed, cell, REFERENCE_STREAM))
    return spearman_oracle(x, y)


def run_hetero_recovery(reps, n=200, beta=1.0, noise_exponents=(0.0, 1.0), reference_n=200000, seed=0,
                        thresholds=None, policy=TiePolicy.KEMENY_ZERO, processes=1, progress=False):
    """
    Unweighted against variance-weighted rank regression under
    heteroscedastic noise ``sd(x) = (1 + |x|)**k``.

    The target slope is the rank slope of a `reference_n` sample drawn from
    its own stream. The claim at each exponent is
    ``mse(weighted) <= hetero_mse_ratio_max * mse(unweighted)``.

    Rank-space residuals are bounded, so their spread shrinks in the extreme
    fitted-value bins even for homoscedastic noise. Those bins get the
    largest weights and the weighted slope is pulled above the target; the
    per-cell mean slopes are reported next to the mse ratios.

    Returns
    -------
    report : SimReport
    """
    reps = _check_reps(reps, 2)
    if n < 4:
        raise ConfigError('variance binning needs n >= 4, got {}'.format(n))
    thresholds = merge_thresholds(thresholds)
    ratio_max = thresholds['hetero_mse_ratio_max']
    seed = check_seed(seed)
    noise_exponents = [float(k) for k in noise_exponents]
    cells = [('k={}'.format(k), Generator(HeteroLinear(beta, k), n, seed)) for k in noise_exponents]
    frame = _estimates(_hetero_replicate, cells, reps, ('beta_ql', 'beta_weighted'), (policy,), processes,
                       progress, 'hetero-recovery')

    claims, target, ratios = [], {}, []
    for index, (label, gen) in enumerate(cells):
        slope = reference_slope(gen, index, reference_n)
        target[label] = {'beta_ql': slope, 'beta_weighted': slope}
        sub = _cell(label, frame)
        mse_u = float(np.mean((sub['beta_ql'].to_numpy() - slope) ** 2))
        mse_w = float(np.mean((sub['beta_weighted'].to_numpy() - slope) ** 2))
        ratio = mse_w / mse_u if mse_u > 0 else math.inf
        ratios.append({'noise_exponent': gen.kind.noise_exponent, 'mse_ql': mse_u, 'mse_weighted': mse_w,
                       'ratio': ratio, 'reference_slope': slope, 'mean_beta_ql': float(sub['beta_ql'].mean()),
                       'mean_beta_weighted': float(sub['beta_weighted'].mean())})
        claims.append(check('hetero_mse_ratio_{}'.format(label), ratio, ratio_max, ratio <= ratio_max,
                            'mse(weighted) / mse(unweighted)'))
    settings = {'n': n, 'reps': reps, 'beta': beta, 'noise_exponents': noise_exponents, 'reference_n': reference_n}
    return SimReport.build('hetero-recovery', _config(settings, seed, thresholds, policy), frame, target, claims,
                           {'mse': ratios})


def run_tie_bias(g, reps, thresholds=None, processes=1, progress=False):
    """
    Tie handling under heavily discretised data.

    Records both tie policies and the mid-rank Spearman coefficient. The
    claim is that the KEMENY_ZERO estimate equals mid-rank Spearman to
    ``tie_equivalence_max``; the table reports the mean PAPER_LITERAL
    departure from it.

    Returns
    -------
    report : SimReport
    """
    _require(g, DiscretizedCopula)
    reps = _check_reps(reps)
    thresholds = merge_thresholds(thresholds)
    label = 'levels={}'.format(g.kind.levels)
    frame = _estimates(_tie_replicate, [(label, g)], reps, ('kemeny', 'paper', 'midrank_spearman'), (),
                       processes, progress, 'tie-bias')

    valid = frame.dropna()
    tol = thresholds['tie_equivalence_max']
    if len(valid):
        gap = float(np.max(np.abs(valid['kemeny'] - valid['midrank_spearman'])))
        claims = [check('kemeny_equals_midrank', gap, tol, gap <= tol)]
        paper_gap = float(np.mean(valid['paper'] - valid['kemeny']))
    else:
        claims = [skipped('kemeny_equals_midrank', tol, 'every replicate had a constant variable')]
        paper_gap = math.nan
    tables = {'ties': {'paper_minus_kemeny_mean': paper_gap, 'degenerate_replicates': int(len(frame) - len(valid))}}
    settings = {'n': g.n, 'reps': reps, 'rho': g.kind.rho, 'levels': g.kind.levels}
    return SimReport.build('tie-bias', _config(settings, g.seed, thresholds, TiePolicy.KEMENY_ZERO, g), frame, {},
                           claims, tables)


def run_information_check(g, reps, thresholds=None, policy=TiePolicy.KEMENY_ZERO, processes=1, progress=False):
    """
    Empirical variance of the rank correlation against the mean of the
    ``1 / (N I)`` bound across replicates.

    Replicates with non-positive information have no bound; their share is
    reported. The claim is ``|Var / mean bound - 1| <= information_ratio_tolerance``.

    Returns
    -------
    report : SimReport
    """
    _require(g, GaussianCopula)
    reps = _check_reps(reps, 2)
    thresholds = merge_thresholds(thresholds)
    tol = thresholds['information_ratio_tolerance']
    label = 'rho={}'.format(g.kind.rho)
    frame = _estimates(_information_replicate, [(label, g)], reps, ('rho_hat', 'fisher_info', 'bound'), (policy,),
                       processes, progress, 'information-check')

    bound = frame['bound'].to_numpy()
    finite = bound[np.isfinite(bound)]
    variance = float(frame['rho_hat'].var(ddof=1))
    singular_share = float(1.0 - finite.size / reps)
    if finite.size:
        mean_bound = float(finite.mean())
        ratio = variance / mean_bound
        claims = [check('information_ratio', ratio, tol, abs(ratio - 1.0) <= tol, 'Var(rho_hat) / mean bound')]
    else:
        mean_bound = ratio = math.nan
        claims = [skipped('information_ratio', tol, 'information non-positive in every replicate')]
    tables = {'information': {'variance': variance, 'mean_bound': mean_bound, 'ratio': ratio,
                              'singular_share': singular_share}}
    settings = {'n': g.n, 'reps': reps, 'rho': g.kind.rho}
    return SimReport.build('information-check', _config(settings, g.seed, thresholds, policy, g), frame,
                           {label: {'rho_hat': g.kind.target}}, claims, tables)


def run_influence(g, reps, magnitude=1e6, thresholds=None, policy=TiePolicy.KEMENY_ZERO, processes=1,
                  progress=False):
    """
    Largest change of the slope when one raw x value is moved to
    ``+-magnitude``, for the rank fit and for raw least squares.

    For untied data the rank slope cannot move by more than
    ``2 (N - 1) / sum_n X_n^2``. Claims: the bound holds in every replicate, and
    the median rank change is below the median raw change.

    Returns
    -------
    report : SimReport
    """
    _require(g, GaussianCopula)
    reps = _check_reps(reps)
    if not magnitude > 0:
        raise ConfigError('outlier magnitude must be positive, got {}'.format(magnitude))
    thresholds = merge_thresholds(thresholds)
    slack = thresholds['influence_slack']
    label = 'n={}'.format(g.n)
    frame = _estimates(_influence_replicate, [(label, g)], reps, ('rank_max_shift', 'ols_max_shift', 'rank_bound'),
                       (policy, float(magnitude)), processes, progress, 'influence')

    excess = float(np.max(frame['rank_max_shift'] - frame['rank_bound']))
    rank_med = float(frame['rank_max_shift'].median())
    ols_med = float(frame['ols_max_shift'].median())
    claims = [check('influence_bounded', excess, slack, excess <= slack, 'largest rank shift minus its bound'),
              check('influence_below_ols', rank_med, ols_med, rank_med < ols_med,
                    'median rank shift against median raw least-squares shift')]
    tables = {'influence': {'rank_median_max_shift': rank_med, 'ols_median_max_shift': ols_med,
                            'mean_bound': float(frame['rank_bound'].mean())}}
    settings = {'n': g.n, 'reps': reps, 'rho': g.kind.rho, 'magnitude': float(magnitude)}
    return SimReport.build('influence', _config(settings, g.seed, thresholds, policy, g), frame, {}, claims, tables)


# registry

@dataclass(frozen=True)
class Experiment:
    """A runnable experiment: `runner(settings, seed, thresholds, policy, processes, progress)`."""
    name: str
    runner: Callable
    description: str


def _unbiasedness(s, seed, **kw):
    return run_unbiasedness(Generator(GaussianCopula(s['rho']), s['n'], seed), s['reps'], **kw)


def _null(s, seed, **kw):
    return run_null_calibration(s['n'], s['reps'], seed=seed, **kw)


def _rate(s, seed, **kw):
    return run_rate_check(Generator(GaussianCopula(s['rho']), s['n_grid'][0], seed), s['n_grid'], s['reps'], **kw)


def _breakdown(s, seed, **kw):
    g = Generator(ContaminatedGaussian(s['rho'], 0.0, s['magnitude']), s['n'], seed)
    return run_breakdown(g, s['eps_grid'], s['reps'], **kw)


def _weak_iv(s, seed, **kw):
    g = Generator(WeakIV(s['pi_strength'], s['endogeneity'], s['beta']), s['n'], seed)
    return run_weak_iv(g, s['reps'], **kw)


def _hetero(s, seed, **kw):
    return run_hetero_recovery(s['reps'], n=s['n'], beta=s['beta'], noise_exponents=s['noise_exponents'],
                               reference_n=s['reference_n'], seed=seed, **kw)


def _tie_bias(s, seed, policy=None, **kw):
    return run_tie_bias(Generator(DiscretizedCopula(s['rho'], s['levels']), s['n'], seed), s['reps'], **kw)


def _information(s, seed, **kw):
    return run_information_check(Generator(GaussianCopula(s['rho']), s['n'], seed), s['reps'], **kw)


def _influence(s, seed, **kw):
    g = Generator(GaussianCopula(s['rho']), s['n'], seed)
    return run_influence(g, s['reps'], magnitude=s['magnitude'], **kw)


EXPERIMENTS = {e.name: e for e in (
    Experiment('unbiasedness', _unbiasedness, 'mean rank correlation against the Gaussian-copula grade correlation'),
    Experiment('null-calibration', _null, 'KS distance of null t statistics to t_{N-2}'),
    Experiment('rate-check', _rate, 'sd ratio of the rank correlation across quadrupled sample sizes'),
    Experiment('breakdown', _breakdown, 'rank against Pearson shift under gross contamination'),
    Experiment('weak-iv', _weak_iv, 'rank-space QL against rank-space 2SLS with a weak instrument'),
    Experiment('hetero-recovery', _hetero, 'weighted against unweighted rank regression under heteroscedasticity'),
    Experiment('tie-bias', _tie_bias, 'tie policies against mid-rank Spearman on discretised data'),
    Experiment('information-check', _information, 'empirical variance against the information bound'),
    Experiment('influence', _influence, 'largest slope change from moving one observation'),
)}


def run_experiment(name, seed=0, n=None, reps=None, settings=None, thresholds=None, policy=TiePolicy.KEMENY_ZERO,
                   processes=1, progress=False):
    """
    Run a registered experiment with its default settings.

    Parameters
    ----------
    name : str
        Key of :data:`EXPERIMENTS`.
    seed : int, default=0
        Master seed.
    n : int, optional
        Sample size; for ``rate-check`` the grid becomes ``(n, 4n, 16n)``.
    reps : int, optional
        Replicates per cell.
    settings : dict, optional
        Overrides of the experiment's default settings.
    thresholds : dict, optional
        Overrides of the claim thresholds.

    Returns
    -------
    report : SimReport
    """
    if name not in EXPERIMENTS:
        raise UnknownExperiment('unknown experiment {!r}; known: {}'.format(name, ', '.join(sorted(EXPERIMENTS))))
    s = merge_settings(name, settings)
    if reps is not None:
        s['reps'] = reps
    if n is not None:
        if 'n' in s:
            s['n'] = n
        else:
            s['n_grid'] = [n, 4 * n, 16 * n]
    seed = check_seed(seed)
    logger.info('experiment %s, seed %d', name, seed)
    return EXPERIMENTS[name].runner(s, seed, thresholds=thresholds, policy=policy, processes=processes,
                                    progress=progress)
