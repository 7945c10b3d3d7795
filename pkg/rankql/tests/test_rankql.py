"""
Unit and regression test for the rankql package.
"""

# Import package, test suite, and other packages as needed
import sys

import pytest
import numpy as np

import rankql
from rankql.exceptions import ConfigError, UnknownColumn
from rankql.utils import dumps_json, mp


def test_rankql_imported():
    """Sample test, will always pass so long as import statement worked."""
    assert "rankql" in sys.modules
    assert rankql.__version__


@pytest.fixture
def ds():
    rng = np.random.default_rng(12)
    z = rng.standard_normal(80)
    x = z + rng.standard_normal(80)
    y = x + rng.standard_normal(80)
    return rankql.Dataset.from_columns({'x': x, 'y': y, 'z': z, 'level': np.round(x)}, source_path='mem.csv')


def test_cmd_corr(ds):
    doc = rankql.cmd_corr(ds, rankql.RunConfig('corr', columns='x,y,z'))
    assert [(p['x'], p['y']) for p in doc['pairs']] == [('x', 'y'), ('x', 'z'), ('y', 'z')]
    for pair in doc['pairs']:
        assert pair['rho_hat'] == pytest.approx(rankql.correlate(ds.column(pair['x']), ds.column(pair['y'])).rho_hat)
    with pytest.raises(ConfigError):
        rankql.cmd_corr(ds, rankql.RunConfig('corr', columns='x'))


def test_cmd_fit_default_predictors(ds):
    doc = rankql.cmd_fit(ds, 'y')
    assert doc['fit']['predictors'] == ['x', 'z', 'level']
    with pytest.raises(UnknownColumn):
        rankql.cmd_fit(ds, 'w')


def test_cmd_fit_weighted(ds):
    doc = rankql.cmd_fit(ds, 'y', 'x', weighted=True, cfg=rankql.RunConfig('fit', bins=4))
    assert doc['fit']['weighted']
    assert len(doc['fit']['sigma2_by_obs']) == 80
    assert len(set(doc['fit']['sigma2_by_obs'])) <= 4


def test_cmd_iv(ds):
    doc = rankql.cmd_iv(ds, 'y', 'z', predictors='x')
    assert doc['instruments'] == ['z']
    assert doc['fit']['weak_instruments'] is False
    assert 0.0 < doc['fit']['beta_2sls']['x'] < 1.5
    with pytest.raises(ConfigError):
        rankql.cmd_iv(ds, 'y', '')


def test_cmd_moments_counts_ties(ds):
    doc = rankql.cmd_moments(ds, rankql.RunConfig('moments', columns='x,level'))
    assert doc['columns']['x']['tie_groups'] == 0
    assert doc['columns']['level']['tie_groups'] > 0


def test_cmd_simulate(tmp_path):
    csv_path = tmp_path / 'tie.csv'
    cfg = rankql.RunConfig('simulate', n=20, reps=5, csv_path=str(csv_path), include_estimates=True)
    doc = rankql.cmd_simulate('tie-bias', cfg)
    assert doc['experiment'] == 'tie-bias'
    assert len(doc['estimates']['kemeny']) == 5
    assert csv_path.exists()


def test_mp_preserves_order():
    args = [(i, 3) for i in range(25)]
    assert mp(pow, args, 1) == [i ** 3 for i in range(25)]
    assert mp(pow, args, 2) == [i ** 3 for i in range(25)]
    assert mp(pow, [], 2) == []


def test_dumps_json():
    text = dumps_json({'b': float('nan'), 'a': [1, 0.1, float('inf')], 'c': np.float64(1 / 3), 'd': True})
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert 'NaN' in text and 'Infinity' in text
    assert '0.33333333333333331' in text
    assert '"d": true' in text
    assert dumps_json([], indent=0) == '[]'
    assert dumps_json({'x': np.arange(2)}, indent=0) == '{"x": [0, 1]}'
    with pytest.raises(TypeError):
        dumps_json({'x': object()})
