"""
Seeded data generators for the simulation experiments.

Each generator kind is a frozen dataclass with a ``draw(n, rng)`` method.
Replicate streams are derived from ``(seed, cell, replicate)`` with
:class:`numpy.random.SeedSequence`, so a replicate's data does not depend on
which process draws it or in which order.
"""
import math
from dataclasses import dataclass, asdict, replace

import numpy as np
from scipy import stats

from rankql.exceptions import ConfigError

SEED_MAX = 2 ** 64 - 1


def grade_correlation(rho):
    """Population Spearman correlation of a Gaussian copula, ``(6/pi) asin(rho/2)``."""
    return 6.0 / math.pi * math.asin(rho / 2.0)


def replicate_rng(seed, cell, replicate):
    """
    Independent generator for one replicate of one experiment cell.

    Parameters
    ----------
    seed : int
        Master seed, 0 <= seed < 2**64.
    cell : int
        Index of the experiment cell (grid point).
    replicate : int

    Returns
    -------
    rng : :class:`numpy.random.Generator`
    """
    check_seed(seed)
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(cell), int(replicate))))


def check_seed(seed):
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool) or not 0 <= seed <= SEED_MAX:
        raise ConfigError('seed must be an unsigned 64-bit integer, got {!r}'.format(seed))
    return int(seed)


def _check_rho(rho):
    if not -1.0 <= rho <= 1.0:
        raise ConfigError('rho_pearson must lie in [-1, 1], got {}'.format(rho))


def _gaussian_pair(rho, n, rng):
    x = rng.standard_normal(n)
    e = rng.standard_normal(n)
    return x, rho * x + math.sqrt(1.0 - rho * rho) * e


@dataclass(frozen=True)
class GaussianCopula:
    """Bivariate normal pair with Pearson correlation `rho`."""
    rho: float

    name = 'gaussian-copula'

    def __post_init__(self):
        _check_rho(self.rho)

    @property
    def target(self):
        return grade_correlation(self.rho)

    def draw(self, n, rng):
        return _gaussian_pair(self.rho, n, rng)


@dataclass(frozen=True)
class DiscretizedCopula:
    """
    Gaussian copula pair with each margin cut into `levels` equiprobable
    categories 0, ..., levels - 1, which produces heavy ties.
    """
    rho: float
    levels: int = 3

    name = 'discretized-copula'

    def __post_init__(self):
        _check_rho(self.rho)
        if self.levels < 2:
            raise ConfigError('levels must be at least 2, got {}'.format(self.levels))

    def draw(self, n, rng):
        x, y = _gaussian_pair(self.rho, n, rng)
        return discretize(x, self.levels), discretize(y, self.levels)


def discretize(v, levels):
    """Standard normal values cut into `levels` equiprobable categories."""
    return np.minimum(np.floor(stats.norm.cdf(v) * levels), levels - 1)


@dataclass(frozen=True)
class ContaminatedGaussian:
    """
    Gaussian copula pair of which a fraction `eps` of the points is replaced
    by outliers ``(+magnitude (1 + u), -magnitude (1 + u'))`` with u, u'
    uniform on [0, 1).
    """
    rho: float
    eps: float = 0.1
    magnitude: float = 1e6

    name = 'contaminated-gaussian'

    def __post_init__(self):
        _check_rho(self.rho)
        if not 0.0 <= self.eps <= 0.5:
            raise ConfigError('contamination fraction must lie in [0, 0.5], got {}'.format(self.eps))
        if not self.magnitude > 0:
            raise ConfigError('outlier magnitude must be positive, got {}'.format(self.magnitude))

    def draw_clean(self, n, rng):
        """Clean pair and its contaminated copy, drawn from the same stream."""
        x, y = _gaussian_pair(self.rho, n, rng)
        xc, yc = contaminate(x, y, self.eps, self.magnitude, rng)
        return (x, y), (xc, yc)

    def draw(self, n, rng):
        return self.draw_clean(n, rng)[1]


def contaminate(x, y, eps, magnitude, rng):
    """Copy of (x, y) with ``floor(eps N)`` randomly chosen points replaced by outliers."""
    n = x.shape[0]
    k = int(math.floor(eps * n + 1e-9))
    xc, yc = x.copy(), y.copy()
    if k:
        idx = rng.choice(n, size=k, replace=False)
        xc[idx] = magnitude * (1.0 + rng.random(k))
        yc[idx] = -magnitude * (1.0 + rng.random(k))
    return xc, yc


@dataclass(frozen=True)
class HeteroLinear:
    """
    ``y = beta x + sd(x) e`` with x, e standard normal and
    ``sd(x) = (1 + |x|)**noise_exponent``.
    """
    beta: float = 1.0
    noise_exponent: float = 1.0

    name = 'hetero-linear'

    def draw(self, n, rng):
        x = rng.standard_normal(n)
        e = rng.standard_normal(n) * (1.0 + np.abs(x)) ** self.noise_exponent
        return x, self.beta * x + e


@dataclass(frozen=True)
class WeakIV:
    """
    Single endogenous regressor with one instrument.

    ``x = pi z + v``, ``y = beta x + e`` with ``e = endogeneity v + sqrt(1 - endogeneity^2) w``
    and z, v, w independent standard normal.
    """
    pi_strength: float = 0.1
    endogeneity: float = 0.5
    beta: float = 1.0

    name = 'weak-iv'

    def __post_init__(self):
        if not -1.0 <= self.endogeneity <= 1.0:
            raise ConfigError('endogeneity must lie in [-1, 1], got {}'.format(self.endogeneity))

    @property
    def target(self):
        """Grade slope of y on x once the endogenous part of e is removed."""
        var_x = self.pi_strength ** 2 + 1.0
        r = self.beta * math.sqrt(var_x) / math.sqrt(self.beta ** 2 * var_x + 1.0)
        return grade_correlation(r)

    def draw(self, n, rng):
        z = rng.standard_normal(n)
        v = rng.standard_normal(n)
        w = rng.standard_normal(n)
        x = self.pi_strength * z + v
        e = self.endogeneity * v + math.sqrt(1.0 - self.endogeneity ** 2) * w
        return z, x, self.beta * x + e


KINDS = (GaussianCopula, DiscretizedCopula, ContaminatedGaussian, HeteroLinear, WeakIV)


@dataclass(frozen=True)
class Generator:
    """
    A generator kind bound to a sample size and a master seed.

    Identical ``(kind, n, seed)`` yield identical data on every platform.
    """
    kind: object
    n: int
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.kind, KINDS):
            raise ConfigError('unknown generator kind {!r}'.format(self.kind))
        if self.n < 2:
            raise ConfigError('sample size must be at least 2, got {}'.format(self.n))
        check_seed(self.seed)

    def rng(self, cell, replicate):
        return replicate_rng(self.seed, cell, replicate)

    def sample(self, cell, replicate):
        """Data of one replicate."""
        return self.kind.draw(self.n, self.rng(cell, replicate))

    def with_kind(self, **changes):
        return replace(self, kind=replace(self.kind, **changes))

    def with_n(self, n):
        return replace(self, n=n)

    def to_dict(self):
        return {'kind': self.kind.name, 'params': asdict(self.kind), 'n': self.n, 'seed': self.seed}
