import json

import pytest

from rankql.config import RunConfig, load_config_file, split_names
from rankql.exceptions import ConfigError
from rankql.kernel import TiePolicy


def test_defaults():
    cfg = RunConfig('corr')
    assert cfg.tie_policy is TiePolicy.KEMENY_ZERO
    assert cfg.seed == 0
    assert cfg.output_path is None
    assert cfg.thresholds == {}


def test_normalisation():
    cfg = RunConfig('simulate', tie_policy='paper', seed=12, columns='a, b,,c', thresholds={'ks_max': 0.05})
    assert cfg.tie_policy is TiePolicy.PAPER_LITERAL
    assert cfg.columns == ('a', 'b', 'c')
    assert cfg.thresholds == {'ks_max': 0.05}
    assert cfg.seed == 12


@pytest.mark.parametrize('kwargs', [
    {'command': 'plot'},
    {'command': 'corr', 'tie_policy': 'dense'},
    {'command': 'corr', 'seed': -1},
    {'command': 'corr', 'seed': 2 ** 64},
    {'command': 'simulate', 'processes': 0},
    {'command': 'simulate', 'processes': -2},
    {'command': 'simulate', 'thresholds': {'speed': 1.0}},
])
def test_invalid(kwargs):
    with pytest.raises(ConfigError):
        RunConfig(**kwargs)


def test_split_names():
    assert split_names(None) == ()
    assert split_names('a,b') == ('a', 'b')
    assert split_names(['a', ' b ']) == ('a', 'b')


def test_load_config_file(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'tie-policy': 'paper', 'seed': 3, 'output_path': 'out.json',
                                'columns': ['a', 'b'], 'csv': 'est.csv', 'thresholds': {'ks_max': 0.1}}))
    config = load_config_file(str(path))
    assert config == {'tie_policy': 'paper', 'seed': 3, 'out': 'out.json', 'columns': 'a,b',
                      'csv_path': 'est.csv', 'thresholds': {'ks_max': 0.1}}


@pytest.mark.parametrize('text', ['{"sed": 3}', '[1, 2]', '{not json', '{"settings": 3}'])
def test_load_config_file_errors(tmp_path, text):
    path = tmp_path / 'bad.json'
    path.write_text(text)
    with pytest.raises(ConfigError):
        load_config_file(str(path))


def test_load_config_file_missing(tmp_path):
    with pytest.raises(ConfigError):
        load_config_file(str(tmp_path / 'absent.json'))
