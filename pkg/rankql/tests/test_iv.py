import logging

import pytest
import numpy as np

from rankql.exceptions import LengthMismatch, SingularInstruments, Underidentified
from rankql.regression import design_embedding, fit_2sls, fit_ql, instrument_matrix


@pytest.fixture
def endogenous():
    """One endogenous regressor driven by a strong instrument."""
    rng = np.random.default_rng(3)
    n = 300
    z = rng.standard_normal(n)
    u = rng.standard_normal(n)
    x = z + 0.5 * u + 0.5 * rng.standard_normal(n)
    y = x + u
    return z, x, y


def test_instrument_equal_to_regressor():
    rng = np.random.default_rng(0)
    x, y = rng.standard_normal(40), rng.standard_normal(40)
    d = design_embedding({'x': x}, y)
    fit = fit_2sls(d, d.columns)
    assert np.allclose(fit.beta_2sls, fit_ql(d).beta, atol=1e-10)
    assert fit.projection_trace == pytest.approx(1.0)
    assert not fit.weak


def test_orthogonal_instrument():
    d = design_embedding({'x': [1, 2, 3, 4, 5]}, [2, 1, 4, 3, 5])
    z = np.array([1.0, 0.0, -2.0, 0.0, 1.0])
    assert d.columns[:, 0] @ z == pytest.approx(0.0)
    with pytest.raises(SingularInstruments, match="'x'"):
        fit_2sls(d, z)


def test_collinear_instruments():
    rng = np.random.default_rng(1)
    x, y, z = rng.standard_normal((3, 30))
    d = design_embedding({'x': x}, y)
    with pytest.raises(SingularInstruments):
        fit_2sls(d, np.column_stack([z, 2 * z]))


def test_projection_trace_counts_instruments(endogenous):
    z, x, y = endogenous
    d = design_embedding({'x': x}, y)
    rng = np.random.default_rng(8)
    names, Z = instrument_matrix({'z': z, 'w': rng.standard_normal(len(z))})
    assert names == ('z', 'w')
    fit = fit_2sls(d, Z)
    assert fit.projection_trace == pytest.approx(2.0)
    assert fit.first_stage_fs.shape == (1,)
    assert fit.first_stage_f == fit.first_stage_fs.min()


def test_2sls_matches_closed_form(endogenous):
    z, x, y = endogenous
    d = design_embedding({'x': x}, y)
    _, Z = instrument_matrix([z])
    fit = fit_2sls(d, Z)
    X = d.columns
    P = Z @ np.linalg.solve(Z.T @ Z, Z.T)
    expected = np.linalg.solve(X.T @ P @ X, X.T @ P @ d.y)
    assert np.allclose(fit.beta_2sls, expected, atol=1e-10)
    assert np.allclose(fit.residuals, d.y - X @ fit.beta_2sls)
    assert fit.first_stage_f > 10
    assert not fit.weak


def test_2sls_removes_endogeneity(endogenous):
    z, x, y = endogenous
    d = design_embedding({'x': x}, y)
    _, Z = instrument_matrix([z])
    ols = fit_ql(d).beta[0]
    iv = fit_2sls(d, Z).beta_2sls[0]
    # u pushes x and y together, inflating the least-squares slope
    assert iv < ols


def test_weak_flag(endogenous, caplog):
    z, x, y = endogenous
    d = design_embedding({'x': x}, y)
    _, Z = instrument_matrix([z])
    with caplog.at_level(logging.DEBUG, logger='rankql'):
        fit = fit_2sls(d, Z, weak_f=1e12)
    assert fit.weak
    assert 'weak instruments' in caplog.text
    assert fit.to_dict()['weak_instruments'] is True


def test_identification_guards():
    rng = np.random.default_rng(2)
    a, b, y, z = rng.standard_normal((4, 20))
    d = design_embedding({'a': a, 'b': b}, y)
    with pytest.raises(Underidentified):
        fit_2sls(d, z)
    with pytest.raises(LengthMismatch):
        fit_2sls(d, np.ones((19, 2)))
    small = design_embedding({'a': a[:3]}, y[:3])
    with pytest.raises(Underidentified):
        fit_2sls(small, rng.standard_normal((3, 3)))


def test_to_dict(endogenous):
    z, x, y = endogenous
    d = design_embedding({'x': x}, y)
    _, Z = instrument_matrix([z])
    doc = fit_2sls(d, Z).to_dict()
    assert set(doc) == {'beta_2sls', 'se', 'cov_beta', 'projection_trace', 'first_stage_f', 'first_stage_fs',
                        'weak_instruments'}
    assert list(doc['beta_2sls']) == ['x']
