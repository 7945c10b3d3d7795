import math
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from rankql.utils import mkdir

KEY_COLUMNS = ('cell', 'replicate')
SUMMARY_COLUMNS = ('cell', 'estimator', 'count', 'mean', 'sd', 'mcse', 'target', 'bias', 'mse')


@dataclass(frozen=True)
class ClaimCheck:
    """
    Outcome of one claim check.

    A skipped check (degenerate data, missing grid point) neither passes nor
    fails the report.
    """
    name: str
    observed: float
    threshold: float
    passed: bool
    skipped: bool = False
    detail: str = ''

    def to_dict(self):
        return {'name': self.name, 'observed': self.observed, 'threshold': self.threshold,
                'passed': bool(self.passed), 'skipped': bool(self.skipped), 'detail': self.detail}


def check(name, observed, threshold, passed, detail=''):
    return ClaimCheck(name=name, observed=float(observed), threshold=float(threshold), passed=bool(passed),
                      detail=detail)


def skipped(name, threshold, detail):
    return ClaimCheck(name=name, observed=math.nan, threshold=float(threshold), passed=False, skipped=True,
                      detail=detail)


def summarize(estimates, target=None):
    """
    Summary statistics of per-replicate estimates.

    Parameters
    ----------
    estimates : :class:`~pandas.DataFrame`
        One row per (cell, replicate); every other column is an estimator.
    target : dict, optional
        ``{cell: {estimator: value}}``; bias and mse are NaN without a target.

    Returns
    -------
    summary : :class:`~pandas.DataFrame`
        One row per (cell, estimator): count of finite values, their mean, sd
        (divisor count - 1), Monte Carlo standard error, target, bias and mse.
    """
    target = target or {}
    columns = [c for c in estimates.columns if c not in KEY_COLUMNS]
    rows = []
    for cell, group in estimates.groupby('cell', sort=False):
        for col in columns:
            v = group[col].to_numpy(dtype=np.float64)
            v = v[np.isfinite(v)]
            count = v.shape[0]
            mean = float(v.mean()) if count else math.nan
            sd = float(v.std(ddof=1)) if count > 1 else math.nan
            t = target.get(cell, {}).get(col, math.nan)
            t = math.nan if t is None else float(t)
            rows.append({'cell': cell, 'estimator': col, 'count': count, 'mean': mean, 'sd': sd,
                         'mcse': sd / math.sqrt(count) if count > 1 else math.nan, 'target': t,
                         'bias': mean - t, 'mse': float(np.mean((v - t) ** 2)) if count else math.nan})
    return pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS))


@dataclass(frozen=True)
class SimReport:
    """
    Result of a simulation experiment.

    Attributes
    ----------
    experiment : str
        Registry name of the experiment.
    config : dict
        Echo of the settings, generator, seed and thresholds.
    estimates : :class:`~pandas.DataFrame`
        Per-replicate estimates, one row per (cell, replicate).
    target : dict
        ``{cell: {estimator: value}}`` population targets.
    summary : :class:`~pandas.DataFrame`
        ``summarize(estimates, target)``.
    claim_checks : list of ClaimCheck
    tables : dict
        Experiment-specific derived tables (ratios, medians, diagnostics).
    """
    experiment: str
    config: dict
    estimates: pd.DataFrame
    target: dict
    summary: pd.DataFrame
    claim_checks: list
    tables: dict = field(default_factory=dict)

    @classmethod
    def build(cls, experiment, config, estimates, target, claim_checks, tables=None):
        return cls(experiment=experiment, config=config, estimates=estimates, target=target,
                   summary=summarize(estimates, target), claim_checks=list(claim_checks), tables=tables or {})

    @property
    def replicates(self):
        """Replicates per cell."""
        counts = self.estimates.groupby('cell', sort=False).size()
        return int(counts.max()) if len(counts) else 0

    @property
    def cells(self):
        return list(pd.unique(self.estimates['cell']))

    @property
    def passed(self):
        return all(c.passed for c in self.claim_checks if not c.skipped)

    def to_dict(self, include_estimates=False):
        out = {
            'experiment': self.experiment,
            'config': self.config,
            'replicates': self.replicates,
            'n_estimates': int(len(self.estimates)),
            'cells': self.cells,
            'target': self.target,
            'summary': self.summary.to_dict(orient='records'),
            'claim_checks': [c.to_dict() for c in self.claim_checks],
            'tables': self.tables,
            'passed': self.passed,
        }
        if include_estimates:
            out['estimates'] = self.estimates.to_dict(orient='list')
        return out

    def to_csv(self, path):
        """Write the per-replicate estimates as a flat CSV file."""
        mkdir(os.path.dirname(os.path.abspath(path)))
        self.estimates.to_csv(path, index=False, float_format='%.17g')
