"""Rank-embedding quasi-likelihood estimators: correlation, regression, 2SLS and their simulation checks"""

from .rankql import cmd_corr, cmd_fit, cmd_iv, cmd_moments, cmd_simulate
from .dataset import Dataset, ingest_csv
from .config import RunConfig
from .kernel import TiePolicy, embed
from .estimators import correlate, variance_bound
from .regression import design_embedding, fit_ql, fit_weighted, estimate_sigma2, fit_2sls

from ._version import __version__
