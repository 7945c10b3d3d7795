import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from rankql.exceptions import Underidentified, SingularInstruments, LengthMismatch
from rankql.kernel import TiePolicy
from rankql.regression.design import embed_columns
from rankql.regression.linear import COND_MAX, pivoted_solve

logger = logging.getLogger(__name__)

WEAK_F = 10.0


@dataclass(frozen=True)
class IVFit:
    """
    Two-stage least squares in rank space.

    Attributes
    ----------
    beta_2sls : :class:`~numpy.ndarray`
        Length-P coefficients.
    projection_trace : float
        Trace of the instrument projection, equal to rank(Z) = Q.
    first_stage_f : float
        Smallest first-stage F statistic over the predictors.
    first_stage_fs : :class:`~numpy.ndarray`
        First-stage F statistic of each predictor.
    residuals : :class:`~numpy.ndarray`
        Structural residuals ``Y - X beta_2sls``.
    cov_beta : :class:`~numpy.ndarray`
        ``s^2 (Xhat^T Xhat)^{-1}`` with s^2 from the structural residuals.
    weak : bool
        True when ``first_stage_f`` is below the weak-instrument threshold.
    names : tuple of str
    """
    beta_2sls: np.ndarray
    projection_trace: float
    first_stage_f: float
    first_stage_fs: np.ndarray
    residuals: np.ndarray
    cov_beta: np.ndarray
    weak: bool
    names: tuple = ()

    @property
    def se(self):
        return np.sqrt(np.diag(self.cov_beta))

    def to_dict(self):
        names = self.names or tuple('x{}'.format(j) for j in range(self.beta_2sls.shape[0]))
        return {
            'beta_2sls': dict(zip(names, self.beta_2sls.tolist())),
            'se': dict(zip(names, self.se.tolist())),
            'cov_beta': self.cov_beta.tolist(),
            'projection_trace': self.projection_trace,
            'first_stage_f': self.first_stage_f,
            'first_stage_fs': dict(zip(names, self.first_stage_fs.tolist())),
            'weak_instruments': self.weak,
        }


def instrument_matrix(columns, policy=TiePolicy.KEMENY_ZERO, names=None):
    """
    Embed raw instrument columns into an N x Q matrix.

    Accepts the same inputs as :func:`~rankql.regression.embed_columns`.
    """
    names, Z = embed_columns(columns, policy, names, prefix='z')
    Z.flags.writeable = False
    return names, Z


def _first_stage_f(X, Xhat, q):
    n = X.shape[0]
    ess = np.sum(Xhat * Xhat, axis=0)
    rss = np.sum((X - Xhat) ** 2, axis=0)
    with np.errstate(divide='ignore', invalid='ignore'):
        f = (ess / q) / (rss / (n - q))
    return np.where(rss == 0, np.inf, f)


def fit_2sls(d, z, weak_f=WEAK_F):
    """
    Two-stage least squares on rank embeddings.

    The first stage projects the predictor embeddings onto the column space
    of the instrument embeddings, ``Xhat = P_Z X``; the second regresses the
    response embedding on ``Xhat``.

    Parameters
    ----------
    d : :class:`~rankql.regression.DesignEmbedding`
    z : array_like
        N x Q instrument embeddings with Q >= P.
    weak_f : float, default=10.0
        First-stage F below which the instruments are flagged as weak.

    Returns
    -------
    fit : IVFit
    """
    X, y = np.asarray(d.columns), np.asarray(d.y)
    Z = np.asarray(z, dtype=np.float64)
    if Z.ndim == 1:
        Z = Z[:, None]
    n, p = X.shape
    if Z.shape[0] != n:
        raise LengthMismatch('{} instrument rows for {} observations'.format(Z.shape[0], n))
    q = Z.shape[1]
    if q < p:
        raise Underidentified('{} instruments for {} endogenous predictors'.format(q, p))
    if n <= q:
        raise Underidentified('{} observations for {} instruments'.format(n, q))

    Qz, Rz = linalg.qr(Z, mode='economic')
    cond = np.linalg.cond(Rz) ** 2
    if not np.isfinite(cond) or cond > COND_MAX:
        raise SingularInstruments('instrument matrix is numerically singular (condition number {:.3g})'.format(cond))
    Xhat = Qz @ (Qz.T @ X)
    projection_trace = float(np.sum(Qz * Qz))

    xnorm = np.linalg.norm(X, axis=0)
    hnorm = np.linalg.norm(Xhat, axis=0)
    lost = np.flatnonzero(hnorm <= 1e-8 * xnorm)
    if lost.size:
        raise SingularInstruments('instruments carry no information on {}'.format(
            ', '.join(repr(d.names[j]) if d.names else str(j) for j in lost)))

    beta, xtx_inv = pivoted_solve(Xhat, y, error=SingularInstruments, what='projected design')
    u = y - X @ beta
    s2 = float(u @ u) / (n - p)
    fs = _first_stage_f(X, Xhat, q)
    f_min = float(fs.min())
    weak = f_min < weak_f
    if weak:
        logger.debug('weak instruments: first-stage F %.3g below %.3g', f_min, weak_f)
    return IVFit(beta_2sls=beta, projection_trace=projection_trace, first_stage_f=f_min,
                 first_stage_fs=fs, residuals=u, cov_beta=s2 * 0.5 * (xtx_inv + xtx_inv.T),
                 weak=weak, names=tuple(d.names))
