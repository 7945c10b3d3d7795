"""Claim thresholds and experiment sizes. Both are echoed into every report."""
import copy

from rankql.exceptions import ConfigError

DEFAULT_THRESHOLDS = {
    # |mean(rho_hat) - grade correlation|
    'bias_max': 0.01,
    # KS distance of the null t statistics to t_{N-2}
    'ks_max': 0.02,
    # sd(n) / sd(4n) must lie in 2 * [1 - tol, 1 + tol]
    'rate_tolerance': 0.15,
    'hetero_mse_ratio_max': 1.05,
    'weak_instrument_f': 10.0,
    # |Var(rho_hat) / mean bound - 1|
    'information_ratio_tolerance': 0.5,
    'tie_equivalence_max': 1e-12,
    'influence_slack': 1e-9,
}

DEFAULT_SETTINGS = {
    'unbiasedness': {'n': 30, 'reps': 20000, 'rho': 0.5},
    'null-calibration': {'n': 20, 'reps': 10000},
    'rate-check': {'n_grid': [25, 100, 400], 'reps': 2000, 'rho': 0.5},
    'breakdown': {'n': 100, 'reps': 2000, 'rho': 0.5, 'eps_grid': [0.0, 0.1, 0.2, 0.3, 0.45],
                  'magnitude': 1e6},
    'weak-iv': {'n': 200, 'reps': 2000, 'pi_strength': 0.1, 'endogeneity': 0.5, 'beta': 1.0},
    'hetero-recovery': {'n': 200, 'reps': 2000, 'beta': 1.0, 'noise_exponents': [0.0, 1.0],
                        'reference_n': 200000},
    'tie-bias': {'n': 50, 'reps': 1000, 'rho': 0.5, 'levels': 3},
    'information-check': {'n': 30, 'reps': 2000, 'rho': 0.5},
    'influence': {'n': 50, 'reps': 200, 'rho': 0.5, 'magnitude': 1e6},
}


def merge_thresholds(overrides=None):
    """
    Default thresholds updated with `overrides`.

    Raises
    ------
    ConfigError
        On an unknown threshold name or a non-numeric value.
    """
    thresholds = dict(DEFAULT_THRESHOLDS)
    for key, value in (overrides or {}).items():
        if key not in DEFAULT_THRESHOLDS:
            raise ConfigError('unknown threshold {!r}; known: {}'.format(key, ', '.join(sorted(DEFAULT_THRESHOLDS))))
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError('threshold {!r} must be a number, got {!r}'.format(key, value))
        thresholds[key] = float(value)
    return thresholds


def merge_settings(experiment, overrides=None):
    """Default settings of `experiment` updated with `overrides` (None values ignored)."""
    settings = copy.deepcopy(DEFAULT_SETTINGS[experiment])
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in settings:
            raise ConfigError('experiment {!r} has no setting {!r}; known: {}'.format(
                experiment, key, ', '.join(sorted(settings))))
        settings[key] = value
    return settings
