import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import rankdata

from rankql.exceptions import SampleTooSmall, NonFiniteInput, ConfigError

logger = logging.getLogger(__name__)


class TiePolicy(str, Enum):
    """
    How a tied pair (k != l, x_k == x_l) is scored.

    KEMENY_ZERO scores ties 0, which keeps the score matrix antisymmetric and
    the embedding zero-sum. PAPER_LITERAL scores every ``x_k >= x_l`` pair +1,
    so both directions of a tie get +1.
    """
    KEMENY_ZERO = 'kemeny'
    PAPER_LITERAL = 'paper'

    @classmethod
    def parse(cls, value):
        """
        Accept a TiePolicy, its value ('kemeny', 'paper') or its name.
        """
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for policy in cls:
            if key in (policy.value, policy.name.lower()):
                return policy
        raise ConfigError('unknown tie policy {!r}, expected one of {}'.format(
            value, ', '.join(p.value for p in cls)))


@dataclass(frozen=True)
class ScoreMatrix:
    """
    Hollow N x N pairwise comparison matrix of one variable.

    Attributes
    ----------
    n : int
        Number of observations.
    entries : :class:`~numpy.ndarray`
        int8 matrix with entries in {-1, 0, +1}; ``entries[k, l]`` is +1 when
        observation k ranks above observation l.
    policy : TiePolicy
        Rule used for tied pairs.
    """
    n: int
    entries: np.ndarray
    policy: TiePolicy = TiePolicy.KEMENY_ZERO


@dataclass(frozen=True)
class CenteredKernel:
    """
    Double-centred score matrix.

    ``entries[k, l] = C[k, l] - row_means[k] - col_means[l] + grand_mean``,
    applied to every cell including the diagonal. Row and column means divide
    by N-1 (the diagonal of C is zero), the grand mean by N^2 - N.
    """
    n: int
    entries: np.ndarray
    row_means: np.ndarray
    col_means: np.ndarray
    grand_mean: float


@dataclass(frozen=True)
class RankEmbedding:
    """
    Column sums of the centred kernel of one variable.

    Attributes
    ----------
    n : int
        Number of observations.
    values : :class:`~numpy.ndarray`
        Length-N read-only float64 vector. Every value lies within
        +/- (N-1)/2 and under KEMENY_ZERO the values sum to zero.
    tie_groups : tuple of tuple of int
        Index sets of observations sharing one raw value, in order of value.
    policy : TiePolicy
        Tie rule the embedding was built with.
    """
    n: int
    values: np.ndarray
    tie_groups: tuple = ()
    policy: TiePolicy = TiePolicy.KEMENY_ZERO

    @property
    def has_ties(self):
        return len(self.tie_groups) > 0

    def __len__(self):
        return self.n


def as_sample(x, name='x'):
    """
    Validate a raw sample and return it as a 1D float64 array.

    Parameters
    ----------
    x : array_like
        Raw observations.
    name : str, default='x'
        Variable name used in error messages.

    Returns
    -------
    x : :class:`~numpy.ndarray`
        Float64 copy of the sample.
    """
    x = np.array(x, dtype=np.float64).ravel()
    if x.shape[0] < 2:
        raise SampleTooSmall('{} has {} observation(s), at least 2 are needed'.format(name, x.shape[0]))
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise NonFiniteInput('{} has a non-finite value at position {}'.format(name, bad))
    return x


def _freeze(arr):
    arr.flags.writeable = False
    return arr


def tie_groups(x):
    """
    Index sets of observations that share a raw value.

    Parameters
    ----------
    x : :class:`~numpy.ndarray`
        Raw sample.

    Returns
    -------
    groups : tuple of tuple of int
        One tuple of (ascending) indices per tied value, ordered by value.
    """
    _, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    tied = np.flatnonzero(counts > 1)
    if not tied.size:
        return ()
    return tuple(tuple(int(i) for i in np.flatnonzero(inverse == k)) for k in tied)


def score_matrix(x, policy=TiePolicy.KEMENY_ZERO):
    """
    Build the hollow pairwise score matrix of a sample.

    Parameters
    ----------
    x : array_like
        Length-N sample of finite reals, N >= 2.
    policy : TiePolicy or str, default=TiePolicy.KEMENY_ZERO
        Scoring of tied pairs.

    Returns
    -------
    c : ScoreMatrix
        ``+1`` where ``x[k] > x[l]``, ``-1`` where ``x[k] < x[l]``, ties per
        `policy`, zero diagonal.
    """
    policy = TiePolicy.parse(policy)
    x = as_sample(x)
    diff = x[:, None] - x[None, :]
    if policy is TiePolicy.KEMENY_ZERO:
        entries = np.sign(diff).astype(np.int8)
    else:
        entries = np.where(diff >= 0, 1, -1).astype(np.int8)
        np.fill_diagonal(entries, 0)
    return ScoreMatrix(n=x.shape[0], entries=_freeze(entries), policy=policy)


def center_kernel(c):
    """
    Double-centre a score matrix.

    Parameters
    ----------
    c : ScoreMatrix
        Hollow score matrix.

    Returns
    -------
    kernel : CenteredKernel
        Centred entries together with the row, column and grand means used.
    """
    n = c.n
    if n < 2:
        raise SampleTooSmall('score matrix of order {} cannot be centred'.format(n))
    C = np.asarray(c.entries, dtype=np.float64)
    row_means = C.sum(axis=1) / (n - 1)
    col_means = C.sum(axis=0) / (n - 1)
    grand_mean = C.sum() / (n * n - n)
    entries = C - row_means[:, None] - col_means[None, :] + grand_mean
    return CenteredKernel(n=n, entries=_freeze(entries), row_means=_freeze(row_means),
                          col_means=_freeze(col_means), grand_mean=float(grand_mean))


def embed(x, policy=TiePolicy.KEMENY_ZERO, method='auto'):
    """
    Rank embedding of a sample: column sums of its centred score kernel.

    For untied data every value is ``(2 r_n - N - 1) / (N - 1)`` where r_n is
    the rank of observation n, which the ``'ranks'`` method evaluates in
    O(N log N) without materialising the N x N kernel.

    Parameters
    ----------
    x : array_like
        Length-N sample of finite reals, N >= 2.
    policy : TiePolicy or str, default=TiePolicy.KEMENY_ZERO
        Scoring of tied pairs.
    method : {'auto', 'dense', 'ranks'}, default='auto'
        ``'dense'`` always builds the kernel, ``'ranks'`` uses the closed form
        and requires untied data, ``'auto'`` uses the closed form when no ties
        are present.

    Returns
    -------
    embedding : RankEmbedding
    """
    policy = TiePolicy.parse(policy)
    x = as_sample(x)
    n = x.shape[0]
    groups = tie_groups(x)
    if method not in ('auto', 'dense', 'ranks'):
        raise ConfigError('unknown embedding method {!r}'.format(method))
    if method == 'ranks' and groups:
        raise ConfigError('the rank shortcut needs untied data, {} tie group(s) found'.format(len(groups)))

    if method == 'ranks' or (method == 'auto' and not groups):
        ranks = rankdata(x, method='ordinal')
        values = (2.0 * ranks - n - 1) / (n - 1)
    else:
        logger.debug('dense embedding: n=%d, %d tie group(s), policy=%s', n, len(groups), policy.value)
        kernel = center_kernel(score_matrix(x, policy))
        values = kernel.entries.sum(axis=0)
    return RankEmbedding(n=n, values=_freeze(np.asarray(values, dtype=np.float64)),
                         tie_groups=groups, policy=policy)


def midrank_embedding(x):
    """
    Closed form of the KEMENY_ZERO embedding for tied or untied data.

    Each observation maps to ``(2 a_n - N - 1) / (N - 1)`` with a_n its
    mid-rank (average rank within its tie group).

    Parameters
    ----------
    x : array_like
        Length-N sample of finite reals.

    Returns
    -------
    values : :class:`~numpy.ndarray`
    """
    x = as_sample(x)
    n = x.shape[0]
    return (2.0 * rankdata(x, method='average') - n - 1) / (n - 1)
