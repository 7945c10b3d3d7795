"""
Central moments of rank embeddings and the moment-weighted quasi-likelihood
built from them: loss, gradient, lambda weights, Hessian and information.
"""
import logging
from dataclasses import dataclass

import numpy as np

from rankql.exceptions import DegenerateVariable, LengthMismatch, NonPositiveVariance, SampleTooSmall

logger = logging.getLogger(__name__)

ORDERS = (2, 3, 4)

# cond(normal equations) above this falls back to lambda = (1, 0, 0)
LAMBDA_COND_MAX = 1e12


@dataclass(frozen=True)
class MomentSet:
    """
    Second, third and fourth central moments of one embedding.

    The embedding mean is zero by construction, so ``mu_r`` is
    ``sum_n values[n]**r / (N - 1)``.

    Attributes
    ----------
    n : int
        Number of observations.
    mu2, mu3, mu4 : float
        Moments with divisor N-1.
    per_obs : :class:`~numpy.ndarray`
        N x 3 matrix of per-observation contributions ``values[n]**r`` for
        r = 2, 3, 4 (one column per order).
    """
    n: int
    mu2: float
    mu3: float
    mu4: float
    per_obs: np.ndarray

    @property
    def moments(self):
        return np.array([self.mu2, self.mu3, self.mu4])

    @property
    def is_zero(self):
        return not np.any(self.per_obs)

    @property
    def is_constant(self):
        """True for a constant but non-zero embedding (the cube column is injective)."""
        cubes = self.per_obs[:, 1]
        return bool(cubes[0] != 0 and np.all(cubes == cubes[0]))


@dataclass(frozen=True)
class LambdaWeights:
    """Weights of the second, third and fourth moments in the quasi-likelihood."""
    lambda2: float = 1.0
    lambda3: float = 0.0
    lambda4: float = 0.0

    def as_array(self):
        return np.array([self.lambda2, self.lambda3, self.lambda4], dtype=np.float64)

    def to_dict(self):
        return {'lambda2': self.lambda2, 'lambda3': self.lambda3, 'lambda4': self.lambda4}


def central_moments(e):
    """
    Central moments of a rank embedding.

    Parameters
    ----------
    e : :class:`~rankql.kernel.RankEmbedding` or array_like
        Embedding (or its values).

    Returns
    -------
    moments : MomentSet
    """
    values = np.asarray(getattr(e, 'values', e), dtype=np.float64)
    n = values.shape[0]
    if n < 2:
        raise SampleTooSmall('moments need at least 2 observations, got {}'.format(n))
    per_obs = np.column_stack([values ** r for r in ORDERS])
    per_obs.flags.writeable = False
    mu = per_obs.sum(axis=0) / (n - 1)
    return MomentSet(n=n, mu2=float(mu[0]), mu3=float(mu[1]), mu4=float(mu[2]), per_obs=per_obs)


def _check_pair(mx, my):
    if mx.n != my.n:
        raise LengthMismatch('moment sets come from samples of length {} and {}'.format(mx.n, my.n))


def _obs_weights(weights, n):
    if weights is None:
        return np.ones(n)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (n,):
        raise LengthMismatch('{} observation weights for {} observations'.format(weights.shape[0], n))
    return weights


def ql_loss(mx, my, w):
    """
    Moment-weighted quasi-likelihood loss.

    ``L = sum_n sum_r lambda_r (mu_r(X_n) + mu_r(Y_n))`` with mu_r(X_n) the
    per-observation contribution ``X_n**r``.

    Parameters
    ----------
    mx, my : MomentSet
        Moments of the two embeddings.
    w : LambdaWeights

    Returns
    -------
    loss : float
    """
    _check_pair(mx, my)
    return float(((mx.per_obs + my.per_obs) @ w.as_array()).sum())


def ql_loglik(mx, my, w):
    """Log of the expanded quasi-likelihood, ``-L / 2``."""
    return -0.5 * ql_loss(mx, my, w)


def ql_gradient(mx, my, weights=None):
    """
    Gradient of the log quasi-likelihood with respect to (lambda2, lambda3, lambda4).

    ``-1/2 sum_n w_n (mu_r(X_n) + mu_r(Y_n))``. Observation weights ``w_n``
    default to one, which gives the unweighted gradient.

    Returns
    -------
    grad : :class:`~numpy.ndarray`
        Length-3 gradient.
    """
    _check_pair(mx, my)
    w = _obs_weights(weights, mx.n)
    return -0.5 * (w[:, None] * (mx.per_obs + my.per_obs)).sum(axis=0)


def fit_lambda(mx, my):
    """
    Fit the lambda weights.

    lambda2 is fixed at 1 and (lambda3, lambda4) minimise the sample variance
    of the per-observation weighted contribution ``lambda . m_n`` with
    ``m_n = mu(X_n) + mu(Y_n)``, a 2 x 2 least-squares problem on the centred
    columns. A singular system gives (1, 0, 0).

    Parameters
    ----------
    mx, my : MomentSet

    Returns
    -------
    w : LambdaWeights
    """
    _check_pair(mx, my)
    m = mx.per_obs + my.per_obs
    if not np.any(mx.per_obs) and not np.any(my.per_obs):
        raise DegenerateVariable('all per-observation moment contributions are zero')
    m = m - m.mean(axis=0)
    a, B = m[:, 0], m[:, 1:]
    G = B.T @ B
    if np.trace(G) == 0 or not np.all(np.isfinite(G)) or np.linalg.cond(G) > LAMBDA_COND_MAX:
        logger.debug('singular lambda normal equations, falling back to (1, 0, 0)')
        return LambdaWeights()
    lam3, lam4 = np.linalg.solve(G, -B.T @ a)
    return LambdaWeights(lambda2=1.0, lambda3=float(lam3), lambda4=float(lam4))


def hessian_and_info(mx, my, lambdas=None, weights=None):
    """
    Hessian of the log quasi-likelihood in the lambda weights and the
    empirical Fisher information.

    ``H_rs = 1/2 sum_n w_n m_{n,r} m_{n,s} / (N - 1)`` where
    ``m_n = (c^X_n + c^Y_n) / 2`` is the joint centred per-observation moment
    contribution of the pair. H is a weighted covariance, hence positive
    semidefinite for non-negative weights, and the information
    ``lambda^T H lambda`` at the fitted lambda weights is never negative.

    Parameters
    ----------
    mx, my : MomentSet
    lambdas : LambdaWeights, optional
        Weights to evaluate the information at; fitted with :func:`fit_lambda`
        when omitted.
    weights : array_like, optional
        Per-observation weights ``w_n = 1 / sigma_n^2``, non-negative.

    Returns
    -------
    H : :class:`~numpy.ndarray`
        Symmetric positive semidefinite 3 x 3 matrix.
    info : float
        Non-negative.
    """
    _check_pair(mx, my)
    n = mx.n
    if n < 3:
        raise SampleTooSmall('the Hessian needs at least 3 observations, got {}'.format(n))
    for name, m in (('x', mx), ('y', my)):
        if m.is_constant:
            raise DegenerateVariable('embedding of {} is constant'.format(name))
    if mx.is_zero and my.is_zero:
        return np.zeros((3, 3)), 0.0

    w = _obs_weights(weights, n)
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise NonPositiveVariance('observation weights must be finite and non-negative')
    joint = 0.5 * ((mx.per_obs - mx.per_obs.mean(axis=0)) + (my.per_obs - my.per_obs.mean(axis=0)))
    H = 0.5 * (w[:, None] * joint).T @ joint / (n - 1)
    H = 0.5 * (H + H.T)

    if lambdas is None:
        lambdas = fit_lambda(mx, my)
    # sum of squares: exactly >= 0
    score = joint @ lambdas.as_array()
    return H, float(0.5 * np.sum(w * score * score) / (n - 1))
