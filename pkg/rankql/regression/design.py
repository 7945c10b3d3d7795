from dataclasses import dataclass

import numpy as np

from rankql.exceptions import DegenerateVariable, LengthMismatch, SingularDesign, Underdetermined
from rankql.kernel import TiePolicy, embed, as_sample


@dataclass(frozen=True)
class DesignEmbedding:
    """
    Rank-embedded linear model data.

    Attributes
    ----------
    n : int
        Number of observations.
    p : int
        Number of predictors.
    columns : :class:`~numpy.ndarray`
        N x P matrix whose columns are predictor embeddings.
    response : :class:`~rankql.kernel.RankEmbedding`
        Embedding of the response.
    names : tuple of str
        Predictor names.
    response_name : str
    """
    n: int
    p: int
    columns: np.ndarray
    response: object
    names: tuple = ()
    response_name: str = 'y'

    @property
    def y(self):
        return self.response.values


def _columns(data, names, default_prefix):
    """Normalise a mapping, a 1D or a 2D array into (names, list of 1D arrays)."""
    if hasattr(data, 'items'):
        names = tuple(data.keys()) if not names else tuple(names)
        cols = [np.asarray(data[k], dtype=np.float64) for k in names]
    else:
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        cols = [arr[:, j] for j in range(arr.shape[1])]
        if not names:
            names = tuple('{}{}'.format(default_prefix, j) for j in range(len(cols)))
    return tuple(names), cols


def embed_columns(data, policy=TiePolicy.KEMENY_ZERO, names=None, prefix='x'):
    """
    Embed each raw column of `data` and stack the embeddings.

    Constant columns are rejected with :class:`~rankql.exceptions.SingularDesign`
    naming the column; their embedding would be zero (or constant).

    Returns
    -------
    names : tuple of str
    matrix : :class:`~numpy.ndarray`
        N x P matrix of embeddings.
    """
    policy = TiePolicy.parse(policy)
    names, cols = _columns(data, names, prefix)
    embedded = []
    for name, col in zip(names, cols):
        col = as_sample(col, name)
        if np.all(col == col[0]):
            raise SingularDesign('column {!r} is constant, its embedding carries no information'.format(name))
        embedded.append(embed(col, policy).values)
    lengths = {c.shape[0] for c in embedded}
    if len(lengths) > 1:
        raise LengthMismatch('columns have differing lengths {}'.format(sorted(lengths)))
    return names, np.column_stack(embedded)


def design_embedding(predictors, response, policy=TiePolicy.KEMENY_ZERO, names=None, response_name='y'):
    """
    Embed raw predictors and a raw response into a rank-space design.

    No intercept column is added: embeddings are centred.

    Parameters
    ----------
    predictors : mapping of str to array_like, or array_like
        N x P raw predictors.
    response : array_like
        Length-N raw response.
    policy : TiePolicy or str, default=TiePolicy.KEMENY_ZERO
    names : sequence of str, optional
        Predictor names (taken from the mapping keys when omitted).
    response_name : str, default='y'

    Returns
    -------
    d : DesignEmbedding
    """
    policy = TiePolicy.parse(policy)
    names, X = embed_columns(predictors, policy, names)
    y = as_sample(response, response_name)
    if y.shape[0] != X.shape[0]:
        raise LengthMismatch('response {!r} has {} observations, predictors have {}'.format(
            response_name, y.shape[0], X.shape[0]))
    if np.all(y == y[0]):
        raise DegenerateVariable('response {!r} is constant'.format(response_name))
    n, p = X.shape
    if n <= p:
        raise Underdetermined('{} observations for {} predictors'.format(n, p))
    X.flags.writeable = False
    return DesignEmbedding(n=n, p=p, columns=X, response=embed(y, policy), names=names,
                           response_name=response_name)
