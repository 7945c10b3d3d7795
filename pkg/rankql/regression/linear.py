import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from rankql.exceptions import (SingularDesign, Underdetermined, NonPositiveVariance, SampleTooSmall,
                               LengthMismatch, ConfigError)

logger = logging.getLogger(__name__)

# condition number of X^T W X beyond which a design counts as singular
COND_MAX = 1e12
SIGMA2_FLOOR = 1e-12


@dataclass(frozen=True)
class RegressionFit:
    """
    Rank-space least-squares fit.

    Attributes
    ----------
    beta : :class:`~numpy.ndarray`
        Length-P coefficients.
    residuals : :class:`~numpy.ndarray`
        ``Y - X beta`` (unweighted, also for weighted fits).
    fitted : :class:`~numpy.ndarray`
        ``X beta``.
    cov_beta : :class:`~numpy.ndarray`
        Model-based covariance ``s^2 (X^T W X)^{-1}``.
    cov_sandwich : :class:`~numpy.ndarray`
        Sandwich (Godambe) covariance ``B^{-1} (sum_n w_n^2 u_n^2 x_n x_n^T) B^{-1}``
        with ``B = X^T W X``.
    s2 : float
        Weighted residual sum of squares over N - P.
    weights : :class:`~numpy.ndarray`, optional
        ``1 / sigma2_by_obs`` for weighted fits.
    sigma2_by_obs : :class:`~numpy.ndarray`, optional
        Per-observation variances used for weighting.
    names : tuple of str
    """
    beta: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    cov_beta: np.ndarray
    cov_sandwich: np.ndarray
    s2: float
    weights: Optional[np.ndarray] = None
    sigma2_by_obs: Optional[np.ndarray] = None
    names: tuple = field(default=())

    @property
    def se(self):
        return np.sqrt(np.diag(self.cov_beta))

    @property
    def se_sandwich(self):
        return np.sqrt(np.diag(self.cov_sandwich))

    @property
    def weighted(self):
        return self.weights is not None

    def to_dict(self):
        names = self.names or tuple('x{}'.format(j) for j in range(self.beta.shape[0]))
        res = self.residuals
        out = {
            'beta': dict(zip(names, self.beta.tolist())),
            'se': dict(zip(names, self.se.tolist())),
            'se_sandwich': dict(zip(names, self.se_sandwich.tolist())),
            'cov_beta': self.cov_beta.tolist(),
            'cov_sandwich': self.cov_sandwich.tolist(),
            'predictors': list(names),
            's2': self.s2,
            'residuals': {'n': int(res.shape[0]), 'rss': float(res @ res), 'mean': float(res.mean()),
                          'sd': float(res.std(ddof=1)) if res.shape[0] > 1 else 0.0,
                          'min': float(res.min()), 'max': float(res.max())},
            'weighted': self.weighted,
        }
        if self.weighted:
            out['weights'] = self.weights.tolist()
            out['sigma2_by_obs'] = self.sigma2_by_obs.tolist()
        return out


def pivoted_solve(X, y, error=SingularDesign, what='design'):
    """
    Least-squares solve through a column-pivoted QR decomposition.

    Parameters
    ----------
    X : :class:`~numpy.ndarray`
        N x P matrix with N > P.
    y : :class:`~numpy.ndarray`
        Length-N right-hand side.
    error : type, default=SingularDesign
        Exception raised when ``cond(X^T X)`` exceeds 1e12.
    what : str
        Name of the matrix for the error message.

    Returns
    -------
    beta : :class:`~numpy.ndarray`
    xtx_inv : :class:`~numpy.ndarray`
        ``(X^T X)^{-1}`` assembled from the triangular factor.
    """
    n, p = X.shape
    Q, R, piv = linalg.qr(X, mode='economic', pivoting=True)
    diag = np.abs(np.diag(R))
    if diag[0] == 0 or not np.all(np.isfinite(R)):
        raise error('{} matrix is zero or not finite'.format(what))
    cond = np.linalg.cond(R) ** 2
    if not np.isfinite(cond) or cond > COND_MAX:
        raise error('{} matrix is numerically singular (condition number {:.3g})'.format(what, cond))
    beta = np.empty(p)
    beta[piv] = linalg.solve_triangular(R, Q.T @ y)
    R_inv = linalg.solve_triangular(R, np.eye(p))
    xtx_inv = np.empty((p, p))
    xtx_inv[np.ix_(piv, piv)] = R_inv @ R_inv.T
    return beta, xtx_inv


def _sandwich(X, u, w, bread):
    meat = (X.T * (w * u) ** 2) @ X
    cov = bread @ meat @ bread
    return 0.5 * (cov + cov.T)


def _fit(d, w=None):
    X, y = np.asarray(d.columns), np.asarray(d.y)
    n, p = X.shape
    if n <= p:
        raise Underdetermined('{} observations for {} predictors'.format(n, p))
    if w is None:
        beta, xtx_inv = pivoted_solve(X, y)
        w_eff = np.ones(n)
    else:
        sw = np.sqrt(w)
        beta, xtx_inv = pivoted_solve(X * sw[:, None], y * sw)
        w_eff = w
    fitted = X @ beta
    u = y - fitted
    s2 = float(np.sum(w_eff * u * u)) / (n - p)
    cov = s2 * 0.5 * (xtx_inv + xtx_inv.T)
    return beta, u, fitted, cov, _sandwich(X, u, w_eff, xtx_inv), s2


def fit_ql(d):
    """
    Quasi-likelihood regression in rank space, ``beta = (X^T X)^{-1} X^T Y``.

    Parameters
    ----------
    d : :class:`~rankql.regression.DesignEmbedding`

    Returns
    -------
    fit : RegressionFit
    """
    beta, u, fitted, cov, sandwich, s2 = _fit(d)
    return RegressionFit(beta=beta, residuals=u, fitted=fitted, cov_beta=cov, cov_sandwich=sandwich,
                         s2=s2, names=tuple(d.names))


def estimate_sigma2(fit, d, bins=None):
    """
    Per-observation residual variances from fitted-value bins.

    Observations are ordered by fitted value and split into `bins`
    contiguous groups; each observation gets its group's residual variance
    (divisor group size - 1), floored at 1e-12.

    Parameters
    ----------
    fit : RegressionFit
    d : :class:`~rankql.regression.DesignEmbedding`
    bins : int, optional
        Number of groups, default ``max(2, floor(sqrt(N)))``. Reduced to the
        default when a group would hold fewer than two observations.

    Returns
    -------
    sigma2 : :class:`~numpy.ndarray`
    """
    n = d.n
    if n < 4:
        raise SampleTooSmall('variance binning needs at least 4 observations, got {}'.format(n))
    default = max(2, math.isqrt(n))
    if bins is None:
        bins = default
    elif bins < 2:
        raise ConfigError('bins must be at least 2, got {}'.format(bins))
    if n // bins < 2:
        logger.debug('reducing %d bins to %d for %d observations', bins, default, n)
        bins = default

    fitted = np.asarray(d.columns) @ fit.beta
    order = np.argsort(fitted, kind='stable')
    sigma2 = np.empty(n)
    for group in np.array_split(order, bins):
        sigma2[group] = np.var(fit.residuals[group], ddof=1)
    return np.maximum(sigma2, SIGMA2_FLOOR)


def fit_weighted(d, sigma2):
    """
    Weighted rank-space regression with ``w_n = 1 / sigma2_n``.

    ``beta = (X^T W X)^{-1} X^T W Y``.

    Parameters
    ----------
    d : :class:`~rankql.regression.DesignEmbedding`
    sigma2 : array_like
        Length-N positive variances.

    Returns
    -------
    fit : RegressionFit
    """
    sigma2 = np.asarray(sigma2, dtype=np.float64)
    if sigma2.shape != (d.n,):
        raise LengthMismatch('{} variances for {} observations'.format(sigma2.size, d.n))
    if not np.all(np.isfinite(sigma2)) or np.any(sigma2 <= 0):
        raise NonPositiveVariance('observation variances must be finite and positive')
    w = 1.0 / sigma2
    beta, u, fitted, cov, sandwich, s2 = _fit(d, w)
    return RegressionFit(beta=beta, residuals=u, fitted=fitted, cov_beta=cov, cov_sandwich=sandwich,
                         s2=s2, weights=w, sigma2_by_obs=sigma2.copy(), names=tuple(d.names))
