from .generators import (GaussianCopula, DiscretizedCopula, ContaminatedGaussian, HeteroLinear, WeakIV, Generator,
                         replicate_rng, grade_correlation, contaminate)
from .report import ClaimCheck, SimReport, summarize
from .config import DEFAULT_THRESHOLDS, DEFAULT_SETTINGS, merge_thresholds, merge_settings
from .experiments import (run_unbiasedness, run_null_calibration, run_rate_check, run_breakdown, run_weak_iv,
                          run_hetero_recovery, run_tie_bias, run_information_check, run_influence, run_experiment,
                          EXPERIMENTS)
