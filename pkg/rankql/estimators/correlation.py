import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from rankql.exceptions import DegenerateVariable, LengthMismatch, SampleTooSmall, SingularInformation
from rankql.kernel import TiePolicy, embed, as_sample
from rankql.estimators.moments import LambdaWeights, central_moments, fit_lambda, hessian_and_info

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorrelationFit:
    """
    Rank-embedding correlation estimate with its quasi-likelihood diagnostics.

    Attributes
    ----------
    rho_hat : float
        Correlation of the embeddings, in [-1, 1].
    n : int
        Number of observations.
    s2_x, s2_y : float
        Second moments (divisor N-1) of the two embeddings.
    fisher_info : float
        Empirical information ``lambda^T H lambda``.
    hessian : :class:`~numpy.ndarray`
        Symmetric 3 x 3 Hessian in the lambda weights.
    lambdas : LambdaWeights
        Fitted moment weights.
    t_stat : float
        ``rho_hat * sqrt((N-2) / (1 - rho_hat^2))``, infinite when |rho_hat| = 1.
    p_value : float
        Two-sided p-value from the t law with ``dof`` degrees of freedom.
    dof : int
        N - 2.
    """
    rho_hat: float
    n: int
    s2_x: float
    s2_y: float
    fisher_info: float
    hessian: np.ndarray
    lambdas: LambdaWeights
    t_stat: float
    p_value: float
    dof: int

    def to_dict(self):
        return {'rho_hat': self.rho_hat, 'n': self.n, 's2_x': self.s2_x, 's2_y': self.s2_y,
                'fisher_info': self.fisher_info, 'hessian': self.hessian.tolist(),
                'lambda': self.lambdas.to_dict(), 't_stat': self.t_stat,
                'p_value': self.p_value, 'dof': self.dof}


def t_test(rho, n):
    """
    t statistic and two-sided p-value of a correlation under the t_{N-2} null.

    Returns
    -------
    t_stat : float
        Signed infinity when |rho| = 1.
    p_value : float
    """
    dof = n - 2
    if abs(rho) >= 1.0:
        return math.copysign(math.inf, rho), 0.0
    t_stat = rho * math.sqrt(dof / (1.0 - rho * rho))
    p_value = min(1.0, 2.0 * float(stats.t.sf(abs(t_stat), dof)))
    return t_stat, p_value


def _embedding_correlation(xv, yv):
    n = xv.shape[0]
    s2_x = float(np.sum(xv * xv)) / (n - 1)
    s2_y = float(np.sum(yv * yv)) / (n - 1)
    cross = float(np.sum(xv * yv)) / (n - 1)
    rho = cross / math.sqrt(s2_x * s2_y)
    return min(1.0, max(-1.0, rho)), s2_x, s2_y


def correlate(x, y, policy=TiePolicy.KEMENY_ZERO, names=('x', 'y')):
    """
    Correlation of the rank embeddings of two samples.

    ``rho_hat = sum_n X_n Y_n / (N - 1) / sqrt(s2_X s2_Y)`` where s2 are the
    divisor N-1 second moments of the embeddings. For untied data this is
    Spearman's rho; under KEMENY_ZERO with ties it equals the mid-rank
    Spearman coefficient.

    Parameters
    ----------
    x, y : array_like
        Paired raw samples of equal length N >= 3.
    policy : TiePolicy or str, default=TiePolicy.KEMENY_ZERO
        Scoring of tied pairs.
    names : (str, str), default=('x', 'y')
        Variable names used in error messages.

    Returns
    -------
    fit : CorrelationFit
    """
    policy = TiePolicy.parse(policy)
    x = as_sample(x, names[0])
    y = as_sample(y, names[1])
    if x.shape[0] != y.shape[0]:
        raise LengthMismatch('{} has {} observations but {} has {}'.format(
            names[0], x.shape[0], names[1], y.shape[0]))
    n = x.shape[0]
    if n < 3:
        raise SampleTooSmall('correlation needs at least 3 observations, got {}'.format(n))
    for name, raw in zip(names, (x, y)):
        if np.all(raw == raw[0]):
            raise DegenerateVariable('{} is constant'.format(name))

    ex, ey = embed(x, policy), embed(y, policy)
    rho, s2_x, s2_y = _embedding_correlation(ex.values, ey.values)
    if s2_x == 0 or s2_y == 0:
        raise DegenerateVariable('{} has a zero embedding'.format(names[0] if s2_x == 0 else names[1]))

    mx, my = central_moments(ex), central_moments(ey)
    lambdas = fit_lambda(mx, my)
    H, info = hessian_and_info(mx, my, lambdas=lambdas)
    t_stat, p_value = t_test(rho, n)
    return CorrelationFit(rho_hat=rho, n=n, s2_x=s2_x, s2_y=s2_y, fisher_info=info, hessian=H,
                          lambdas=lambdas, t_stat=t_stat, p_value=p_value, dof=n - 2)


def variance_bound(fit):
    """
    Cramer-Rao style variance proxy ``1 / (N I(rho))``.

    Parameters
    ----------
    fit : CorrelationFit

    Returns
    -------
    bound : float
    """
    if not fit.fisher_info > 0:
        raise SingularInformation('Fisher information is {}, the variance bound is undefined'.format(fit.fisher_info))
    return 1.0 / (fit.n * fit.fisher_info)


def spearman_oracle(x, y):
    """
    Reference Spearman coefficient: Pearson correlation of mid-ranks.

    Independent of the score-matrix construction; used to check it.
    """
    ra = stats.rankdata(np.asarray(x, dtype=np.float64), method='average')
    rb = stats.rankdata(np.asarray(y, dtype=np.float64), method='average')
    ra -= ra.mean()
    rb -= rb.mean()
    return float(np.sum(ra * rb) / math.sqrt(np.sum(ra * ra) * np.sum(rb * rb)))


def pearson(x, y):
    """Plain Pearson correlation of raw values, the non-robust comparison."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    xc, yc = x - x.mean(), y - y.mean()
    return float(np.sum(xc * yc) / math.sqrt(np.sum(xc * xc) * np.sum(yc * yc)))
