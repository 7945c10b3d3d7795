import pytest
import numpy as np

from rankql.exceptions import DegenerateVariable, LengthMismatch, NonPositiveVariance, SampleTooSmall
from rankql.estimators import (MomentSet, LambdaWeights, central_moments, ql_loss, ql_loglik, ql_gradient,
                               fit_lambda, hessian_and_info)
from rankql.kernel import embed


@pytest.fixture
def line3():
    return central_moments(embed([1, 2, 3]))


def test_central_moments_example(line3):
    assert line3.mu2 == pytest.approx(1.0)
    assert line3.mu3 == pytest.approx(0.0, abs=1e-15)
    assert line3.mu4 == pytest.approx(1.0)
    assert line3.per_obs.shape == (3, 3)
    assert np.allclose(line3.moments, [1, 0, 1])


def test_central_moments_zero_embedding():
    m = central_moments(np.zeros(3))
    assert (m.mu2, m.mu3, m.mu4) == (0.0, 0.0, 0.0)
    assert m.is_zero
    assert not m.is_constant


def test_central_moments_permutation_invariant(line3):
    m = central_moments(np.array([1.0, -1.0, 0.0]))
    assert np.allclose(m.moments, line3.moments)


def test_central_moments_too_small():
    with pytest.raises(SampleTooSmall):
        central_moments(np.array([0.5]))


def test_constant_embedding_detected():
    assert central_moments(np.full(4, 0.5)).is_constant
    assert not central_moments(embed([1, 2, 3, 4])).is_constant


def test_loss_example(line3):
    assert ql_loss(line3, line3, LambdaWeights(1.0, 0.0, 0.0)) == pytest.approx(4.0)
    assert ql_loglik(line3, line3, LambdaWeights(1.0, 0.0, 0.0)) == pytest.approx(-2.0)


def test_loss_degenerate(line3):
    assert ql_loss(line3, line3, LambdaWeights(0.0, 0.0, 0.0)) == 0.0
    zero = central_moments(np.zeros(3))
    assert ql_loss(zero, zero, LambdaWeights(1.0, 1.0, 1.0)) == 0.0


def test_loss_length_mismatch(line3):
    with pytest.raises(LengthMismatch):
        ql_loss(line3, central_moments(embed([1, 2, 3, 4])), LambdaWeights())


def test_gradient(line3):
    grad = ql_gradient(line3, line3)
    assert np.allclose(grad, [-2.0, 0.0, -2.0])
    # loss is linear in the weights
    w = LambdaWeights(1.0, 0.3, -0.2)
    assert grad @ w.as_array() == pytest.approx(ql_loglik(line3, line3, w))


def test_gradient_observation_weights(line3):
    assert np.allclose(ql_gradient(line3, line3, weights=np.ones(3)), ql_gradient(line3, line3))
    assert np.allclose(ql_gradient(line3, line3, weights=np.zeros(3)), 0.0)
    with pytest.raises(LengthMismatch):
        ql_gradient(line3, line3, weights=np.ones(2))


def test_fit_lambda_symmetric_embedding():
    m = central_moments(embed([1, 2, 3, 4]))
    w = fit_lambda(m, m)
    assert w.lambda2 == 1.0
    assert w.lambda3 == pytest.approx(0.0, abs=1e-10)


def test_fit_lambda_singular_fallback():
    per_obs = np.column_stack([np.array([1.0, 0.0, 1.0]), np.zeros(3), np.zeros(3)])
    m = MomentSet(n=3, mu2=1.0, mu3=0.0, mu4=0.0, per_obs=per_obs)
    assert fit_lambda(m, m) == LambdaWeights(1.0, 0.0, 0.0)


def test_fit_lambda_lambda2_fixed():
    rng = np.random.default_rng(7)
    for _ in range(50):
        x, y = rng.standard_normal(20), rng.standard_normal(20)
        w = fit_lambda(central_moments(embed(x)), central_moments(embed(y)))
        assert w.lambda2 == 1.0
        assert np.all(np.isfinite(w.as_array()))


def test_fit_lambda_zero_contributions():
    zero = central_moments(np.zeros(4))
    with pytest.raises(DegenerateVariable):
        fit_lambda(zero, zero)


def test_hessian_zero_embeddings():
    zero = central_moments(np.zeros(5))
    H, info = hessian_and_info(zero, zero)
    assert not np.any(H)
    assert info == 0.0


def test_hessian_identical_samples():
    x = np.array([0.3, -1.2, 2.0, 0.7, 1.1, -0.4])
    m = central_moments(embed(x))
    H, info = hessian_and_info(m, m)
    squares = m.per_obs[:, 0] - m.per_obs[:, 0].mean()
    assert H[0, 0] == pytest.approx(0.5 * np.sum(squares * squares) / (m.n - 1))
    assert np.allclose(H, H.T)
    assert info >= -1e-12


def test_hessian_information_matches_quadratic_form():
    rng = np.random.default_rng(11)
    mx = central_moments(embed(rng.standard_normal(15)))
    my = central_moments(embed(rng.standard_normal(15)))
    w = LambdaWeights(1.0, 0.5, -0.25)
    H, info = hessian_and_info(mx, my, lambdas=w)
    assert info == pytest.approx(w.as_array() @ H @ w.as_array())


def test_hessian_guards():
    small = central_moments(embed([1, 2]))
    with pytest.raises(SampleTooSmall):
        hessian_and_info(small, small)
    flat = central_moments(np.full(4, 0.5))
    ok = central_moments(embed([1, 2, 3, 4]))
    with pytest.raises(DegenerateVariable):
        hessian_and_info(flat, ok)


def test_hessian_positive_semidefinite_with_weights():
    rng = np.random.default_rng(12)
    for _ in range(50):
        mx = central_moments(embed(rng.standard_normal(25)))
        my = central_moments(embed(rng.standard_normal(25)))
        H, info = hessian_and_info(mx, my, weights=rng.uniform(0.1, 5.0, 25))
        assert np.linalg.eigvalsh(H).min() >= -1e-12
        assert info >= 0.0


def test_hessian_rejects_negative_weights():
    m = central_moments(embed([0.3, -1.2, 2.0, 0.7]))
    with pytest.raises(NonPositiveVariance):
        hessian_and_info(m, m, weights=np.array([1.0, -1.0, 1.0, 1.0]))
