import pytest
import numpy as np

from rankql.exceptions import (ConfigError, DegenerateVariable, LengthMismatch, NonPositiveVariance,
                               SampleTooSmall, SingularDesign, Underdetermined)
from rankql.kernel import embed
from rankql.regression import (DesignEmbedding, RegressionFit, design_embedding, embed_columns, estimate_sigma2,
                               fit_ql, fit_weighted, pivoted_solve)
from rankql.regression.linear import SIGMA2_FLOOR

X5 = [1, 2, 3, 4, 5]


@pytest.fixture
def design():
    rng = np.random.default_rng(42)
    a = rng.standard_normal(60)
    b = rng.standard_normal(60)
    y = a + 0.5 * b + 0.3 * rng.standard_normal(60)
    return design_embedding({'a': a, 'b': b}, y)


def normal_equations(X, y, w=None):
    w = np.ones(len(y)) if w is None else w
    return np.linalg.solve(X.T @ (w[:, None] * X), X.T @ (w * y))


@pytest.mark.parametrize('y, expected', [
    (X5, 1.0),
    ([-1, -2, -3, -4, -5], -1.0),
    ([2, 1, 4, 3, 5], 0.8),
])
def test_single_predictor_examples(y, expected):
    fit = fit_ql(design_embedding(np.array(X5), y))
    assert fit.beta.shape == (1,)
    assert fit.beta[0] == pytest.approx(expected, abs=1e-12)


def test_design_embedding_layout(design):
    assert (design.n, design.p) == (60, 2)
    assert design.names == ('a', 'b')
    assert design.columns.shape == (60, 2)
    assert np.allclose(design.columns[:, 1], embed(design.columns[:, 1]).values)
    with pytest.raises(ValueError):
        design.columns[0, 0] = 0.0


def test_design_embedding_default_names():
    names, X = embed_columns(np.column_stack([X5, [5, 3, 4, 1, 2]]))
    assert names == ('x0', 'x1')
    assert np.allclose(X[:, 0], [-1, -0.5, 0, 0.5, 1])


def test_design_embedding_errors():
    with pytest.raises(SingularDesign, match="'c'"):
        design_embedding({'a': X5, 'c': [3, 3, 3, 3, 3]}, X5)
    with pytest.raises(DegenerateVariable):
        design_embedding({'a': X5}, [2, 2, 2, 2, 2])
    with pytest.raises(LengthMismatch):
        design_embedding({'a': X5}, [1, 2, 3])
    with pytest.raises(Underdetermined):
        design_embedding({'a': [1, 2], 'b': [2, 1]}, [1, 2])


def test_fit_ql_matches_normal_equations(design):
    fit = fit_ql(design)
    X, y = design.columns, design.y
    assert np.allclose(fit.beta, normal_equations(X, y), atol=1e-10)
    assert np.allclose(X.T @ fit.residuals, 0.0, atol=1e-10)
    assert np.allclose(fit.fitted + fit.residuals, y)
    assert fit.s2 == pytest.approx(fit.residuals @ fit.residuals / (60 - 2))
    assert np.allclose(fit.cov_beta, fit.s2 * np.linalg.inv(X.T @ X))
    assert np.all(fit.se > 0)
    assert np.all(fit.se_sandwich > 0)
    assert not fit.weighted


def test_fit_ql_sandwich(design):
    fit = fit_ql(design)
    X, u = design.columns, fit.residuals
    bread = np.linalg.inv(X.T @ X)
    meat = X.T @ np.diag(u * u) @ X
    assert np.allclose(fit.cov_sandwich, bread @ meat @ bread)


def test_fit_ql_to_dict(design):
    doc = fit_ql(design).to_dict()
    assert list(doc['beta']) == ['a', 'b']
    assert doc['predictors'] == ['a', 'b']
    assert doc['residuals']['n'] == 60
    assert doc['weighted'] is False
    assert 'weights' not in doc


def test_pivoted_solve_singular():
    X = np.column_stack([np.arange(6.0), 2 * np.arange(6.0)])
    with pytest.raises(SingularDesign):
        pivoted_solve(X, np.ones(6))
    with pytest.raises(SingularDesign):
        pivoted_solve(np.zeros((5, 2)), np.ones(5))


def test_fit_ql_collinear_columns():
    x = np.arange(10.0)
    # two monotone transforms of one variable embed identically
    d = design_embedding({'x': x, 'x_cubed': x ** 3}, np.arange(10.0)[::-1])
    with pytest.raises(SingularDesign):
        fit_ql(d)


def sigma2_fixture(residuals, fitted):
    n = len(residuals)
    d = DesignEmbedding(n=n, p=1, columns=np.asarray(fitted, dtype=float)[:, None], response=None)
    fit = RegressionFit(beta=np.array([1.0]), residuals=np.asarray(residuals, dtype=float),
                        fitted=np.asarray(fitted, dtype=float), cov_beta=np.eye(1), cov_sandwich=np.eye(1), s2=1.0)
    return fit, d


def test_estimate_sigma2_example():
    fit, d = sigma2_fixture([-1, 1, -2, 2], [1, 2, 3, 4])
    assert np.allclose(estimate_sigma2(fit, d, bins=2), [2, 2, 8, 8])


def test_estimate_sigma2_follows_fitted_order():
    fit, d = sigma2_fixture([-2, -1, 2, 1], [3, 1, 4, 2])
    assert np.allclose(estimate_sigma2(fit, d, bins=2), [8, 2, 8, 2])


def test_estimate_sigma2_floor():
    fit, d = sigma2_fixture(np.zeros(9), np.arange(9.0))
    sigma2 = estimate_sigma2(fit, d)
    assert np.all(sigma2 == SIGMA2_FLOOR)


def test_estimate_sigma2_bins():
    fit, d = sigma2_fixture(np.arange(9.0) % 2, np.arange(9.0))
    # default sqrt(9) = 3 bins of three
    assert np.allclose(estimate_sigma2(fit, d), np.repeat([1 / 3, 1 / 3, 1 / 3], 3))
    # 8 bins would leave single observations and falls back to the default
    assert np.allclose(estimate_sigma2(fit, d, bins=8), estimate_sigma2(fit, d))
    with pytest.raises(ConfigError):
        estimate_sigma2(fit, d, bins=1)
    small_fit, small_d = sigma2_fixture([1, -1, 1], [1, 2, 3])
    with pytest.raises(SampleTooSmall):
        estimate_sigma2(small_fit, small_d)


def test_estimate_sigma2_homoscedastic(design):
    fit = fit_ql(design)
    sigma2 = estimate_sigma2(fit, design, bins=2)
    low, high = np.unique(sigma2)[[0, -1]]
    assert high / low < 3.0


def test_fit_weighted_constant_variance(design):
    base = fit_ql(design)
    unit = fit_weighted(design, np.ones(60))
    assert np.array_equal(unit.weights, np.ones(60))
    assert np.array_equal(unit.beta, base.beta)
    scaled = fit_weighted(design, np.full(60, 3.7))
    assert np.allclose(scaled.beta, base.beta, atol=1e-12)
    assert scaled.weighted
    assert np.allclose(scaled.sigma2_by_obs, 3.7)


def test_fit_weighted_matches_normal_equations(design):
    sigma2 = np.linspace(0.5, 4.0, 60)
    fit = fit_weighted(design, sigma2)
    assert np.allclose(fit.beta, normal_equations(design.columns, design.y, 1 / sigma2), atol=1e-10)
    assert np.allclose(fit.residuals, design.y - design.columns @ fit.beta)


def test_fit_weighted_single_heavy_observation(design):
    sigma2 = np.ones(60)
    sigma2[7] = 1e-6
    fit = fit_weighted(design, sigma2)
    assert np.allclose(fit.beta, normal_equations(design.columns, design.y, 1 / sigma2), atol=1e-8)
    assert abs(fit.residuals[7]) < np.median(np.abs(fit.residuals))


def test_fit_weighted_errors(design):
    with pytest.raises(LengthMismatch):
        fit_weighted(design, np.ones(10))
    bad = np.ones(60)
    bad[3] = 0.0
    with pytest.raises(NonPositiveVariance):
        fit_weighted(design, bad)
    bad[3] = np.nan
    with pytest.raises(NonPositiveVariance):
        fit_weighted(design, bad)


def test_weighted_fit_of_exact_relation():
    d = design_embedding({'x': X5}, X5)
    base = fit_ql(d)
    fit = fit_weighted(d, estimate_sigma2(base, d, bins=2))
    assert np.all(fit.sigma2_by_obs == SIGMA2_FLOOR)
    assert fit.beta[0] == pytest.approx(1.0)
    assert 'weights' in fit.to_dict()


def test_fit_ql_random_designs():
    rng = np.random.default_rng(30)
    for _ in range(200):
        p = int(rng.integers(1, 5))
        n = int(rng.integers(p + 8, 61))
        raw = rng.standard_normal((n, p))
        y = raw @ rng.standard_normal(p) + rng.standard_normal(n)
        d = design_embedding(raw, y)
        assert np.allclose(fit_ql(d).beta, normal_equations(d.columns, d.y), rtol=0, atol=1e-10)


def test_fit_ql_ignores_monotone_transforms():
    rng = np.random.default_rng(31)
    transforms = [np.exp, lambda v: v ** 3, lambda v: 3.0 * v + 1.0, np.arctan]
    for _ in range(200):
        n = int(rng.integers(8, 50))
        a, b = rng.standard_normal(n), rng.standard_normal(n)
        y = a - b + rng.standard_normal(n)
        f, g, h = (transforms[i] for i in rng.integers(0, len(transforms), 3))
        base = fit_ql(design_embedding({'a': a, 'b': b}, y))
        moved = fit_ql(design_embedding({'a': f(a), 'b': g(b)}, h(y)))
        assert np.array_equal(moved.beta, base.beta)
