import math

import pytest
import numpy as np

from rankql.exceptions import ConfigError
from rankql.montecarlo import (GaussianCopula, DiscretizedCopula, ContaminatedGaussian, HeteroLinear, WeakIV,
                               Generator, replicate_rng, grade_correlation, contaminate)
from rankql.montecarlo.generators import check_seed, discretize, SEED_MAX


@pytest.mark.parametrize('rho, expected', [
    (0.0, 0.0),
    (1.0, 1.0),
    (-1.0, -1.0),
    (0.5, 6 / math.pi * math.asin(0.25)),
])
def test_grade_correlation(rho, expected):
    assert grade_correlation(rho) == pytest.approx(expected)
    assert GaussianCopula(rho).target == pytest.approx(expected)


def test_grade_correlation_value():
    assert grade_correlation(0.5) == pytest.approx(0.4826, abs=1e-4)


def test_replicate_streams_are_reproducible():
    a = replicate_rng(7, 2, 3).standard_normal(5)
    b = replicate_rng(7, 2, 3).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, replicate_rng(7, 2, 4).standard_normal(5))
    assert not np.array_equal(a, replicate_rng(7, 3, 3).standard_normal(5))
    assert not np.array_equal(a, replicate_rng(8, 2, 3).standard_normal(5))


def test_seed_validation():
    assert check_seed(0) == 0
    assert check_seed(SEED_MAX) == SEED_MAX
    assert check_seed(np.uint64(5)) == 5
    for bad in (-1, SEED_MAX + 1, 1.5, '3', True):
        with pytest.raises(ConfigError):
            check_seed(bad)


def test_generator_sample_is_deterministic():
    g = Generator(GaussianCopula(0.5), 25, seed=11)
    x1, y1 = g.sample(0, 4)
    x2, y2 = g.sample(0, 4)
    assert np.array_equal(x1, x2) and np.array_equal(y1, y2)
    assert x1.shape == (25,)
    x3, _ = g.sample(1, 4)
    assert not np.array_equal(x1, x3)


def test_generator_validation():
    with pytest.raises(ConfigError):
        Generator('gaussian', 10)
    with pytest.raises(ConfigError):
        Generator(GaussianCopula(0.5), 1)
    with pytest.raises(ConfigError):
        Generator(GaussianCopula(0.5), 10, seed=-3)
    with pytest.raises(ConfigError):
        GaussianCopula(1.5)
    with pytest.raises(ConfigError):
        DiscretizedCopula(0.5, levels=1)
    with pytest.raises(ConfigError):
        ContaminatedGaussian(0.5, eps=0.6)
    with pytest.raises(ConfigError):
        ContaminatedGaussian(0.5, magnitude=0.0)
    with pytest.raises(ConfigError):
        WeakIV(endogeneity=2.0)


def test_generator_replace():
    g = Generator(ContaminatedGaussian(0.5, 0.0), 40, seed=2)
    h = g.with_kind(eps=0.2)
    assert h.kind.eps == 0.2 and h.kind.rho == 0.5
    assert g.kind.eps == 0.0
    assert g.with_n(80).n == 80
    doc = h.to_dict()
    assert doc['kind'] == 'contaminated-gaussian'
    assert doc['params'] == {'rho': 0.5, 'eps': 0.2, 'magnitude': 1e6}
    assert (doc['n'], doc['seed']) == (40, 2)


def test_comonotone_copula():
    x, y = Generator(GaussianCopula(1.0), 30).sample(0, 0)
    assert np.array_equal(x, y)


def test_discretized_levels():
    x, y = Generator(DiscretizedCopula(0.5, levels=3), 500).sample(0, 0)
    assert set(np.unique(x)) <= {0.0, 1.0, 2.0}
    assert set(np.unique(y)) <= {0.0, 1.0, 2.0}
    assert np.array_equal(discretize(np.array([-10.0, 0.0, 10.0]), 3), [0.0, 1.0, 2.0])


def test_contamination_count():
    rng = np.random.default_rng(0)
    x, y = rng.standard_normal(100), rng.standard_normal(100)
    xc, yc = contaminate(x, y, 0.2, 1e6, rng)
    outliers = xc >= 1e6
    assert outliers.sum() == 20
    assert np.all(yc[outliers] <= -1e6)
    assert np.array_equal(xc[~outliers], x[~outliers])
    same_x, _ = contaminate(x, y, 0.0, 1e6, rng)
    assert np.array_equal(same_x, x)


def test_contaminated_draw_shares_clean_data():
    g = Generator(ContaminatedGaussian(0.5, eps=0.1), 50, seed=3)
    (x, y), (xc, yc) = g.kind.draw_clean(g.n, g.rng(0, 0))
    assert np.sum(xc != x) == 5
    dx, dy = g.sample(0, 0)
    assert np.array_equal(dx, xc) and np.array_equal(dy, yc)


def test_hetero_noise():
    x, y = Generator(HeteroLinear(beta=2.0, noise_exponent=0.0), 20).sample(0, 0)
    assert x.shape == y.shape == (20,)
    g = Generator(HeteroLinear(beta=1.0, noise_exponent=1.0), 5000, seed=1)
    x, y = g.sample(0, 0)
    resid = y - x
    inner, outer = np.abs(x) < 0.5, np.abs(x) > 1.5
    assert resid[outer].std() > resid[inner].std()


def test_weak_iv_draw():
    kind = WeakIV(pi_strength=0.0, endogeneity=0.0)
    z, x, y = Generator(kind, 10).sample(0, 0)
    assert z.shape == x.shape == y.shape == (10,)
    assert kind.target == pytest.approx(grade_correlation(1 / math.sqrt(2)))
