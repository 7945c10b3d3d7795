import json
from dataclasses import dataclass, field
from typing import Optional

from rankql.exceptions import ConfigError
from rankql.kernel import TiePolicy
from rankql.montecarlo.config import merge_thresholds
from rankql.montecarlo.generators import check_seed

COMMANDS = ('corr', 'fit', 'iv', 'simulate', 'moments')

# keys a config file may carry; they mirror the command-line flags
FLAG_KEYS = ('tie_policy', 'seed', 'out', 'reps', 'n', 'bins', 'columns', 'processes', 'csv_path', 'include_estimates',
             'response', 'predictors', 'instruments', 'weighted', 'verbose')
SECTION_KEYS = ('thresholds', 'settings')
LIST_KEYS = ('columns', 'predictors', 'instruments')
# file keys named after a flag whose parameter is named differently
KEY_ALIASES = {'output_path': 'out', 'csv': 'csv_path'}


def split_names(value):
    """Comma separated names (or a list of names) as a tuple."""
    if not value:
        return ()
    if isinstance(value, str):
        value = value.split(',')
    return tuple(v.strip() for v in value if v.strip())


@dataclass
class RunConfig:
    """
    Settings of one command-line run.

    Attributes
    ----------
    command : str
        One of corr, fit, iv, simulate, moments.
    tie_policy : TiePolicy
        Defaults to KEMENY_ZERO.
    seed : int
        Master seed of simulations, default 0.
    output_path : str, optional
        JSON destination; standard output when None.
    thresholds : dict
        Claim-threshold overrides.
    settings : dict
        Experiment setting overrides.
    """
    command: str
    tie_policy: TiePolicy = TiePolicy.KEMENY_ZERO
    seed: int = 0
    output_path: Optional[str] = None
    thresholds: dict = field(default_factory=dict)
    settings: dict = field(default_factory=dict)
    columns: tuple = ()
    n: Optional[int] = None
    reps: Optional[int] = None
    bins: Optional[int] = None
    processes: int = 1
    csv_path: Optional[str] = None
    include_estimates: bool = False
    verbose: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError('unknown command {!r}; known: {}'.format(self.command, ', '.join(COMMANDS)))
        self.tie_policy = TiePolicy.parse(self.tie_policy)
        self.seed = check_seed(self.seed)
        self.columns = split_names(self.columns)
        if self.processes == 0 or self.processes < -1:
            raise ConfigError('processes must be positive or -1 (all cpus), got {}'.format(self.processes))
        # validates names and values, the overrides themselves are kept
        merge_thresholds(self.thresholds)


def load_config_file(path):
    """
    Read a JSON config file.

    Keys are the command-line flag names (hyphens or underscores), plus
    ``thresholds`` and ``settings`` maps. ``output_path`` is accepted for
    ``out``. Name lists may be given as JSON arrays.

    Returns
    -------
    config : dict
        Normalised keys.
    """
    try:
        with open(path) as fp:
            data = json.load(fp)
    except (OSError, ValueError) as e:
        raise ConfigError('cannot read config file {}: {}'.format(path, e)) from None
    if not isinstance(data, dict):
        raise ConfigError('config file {} must hold a JSON object'.format(path))

    config = {}
    for key, value in data.items():
        key = key.replace('-', '_')
        key = KEY_ALIASES.get(key, key)
        if key not in FLAG_KEYS + SECTION_KEYS:
            raise ConfigError('unknown config key {!r} in {}'.format(key, path))
        if key in SECTION_KEYS and not isinstance(value, dict):
            raise ConfigError('config key {!r} must be an object'.format(key))
        if key in LIST_KEYS and isinstance(value, list):
            value = ','.join(map(str, value))
        config[key] = value
    return config
