from .design import DesignEmbedding, design_embedding, embed_columns
from .linear import RegressionFit, fit_ql, estimate_sigma2, fit_weighted, pivoted_solve
from .iv import IVFit, fit_2sls, instrument_matrix
