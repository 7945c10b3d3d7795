from .moments import (MomentSet, LambdaWeights, central_moments, ql_loss, ql_loglik, ql_gradient,
                      fit_lambda, hessian_and_info)
from .correlation import CorrelationFit, correlate, variance_bound, t_test, spearman_oracle, pearson
