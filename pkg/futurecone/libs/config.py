"""
    Author: julij.jegorov
    Date: 12/10/2026
    Description: futurecone.json configuration: load/normalize/save helpers and the
                 Settings singleton every module reads its tunables from.
"""

import copy
import json
import logging
import os
import os.path as osp

from futurecone.libs.errors import ConfigError

logger = logging.getLogger(__name__)

THREADS_ENV = 'FUTURECONE_THREADS'


def get_default_config_path():
    """Get the default location of the futurecone configuration file.

    Returns the path to futurecone.json in the package directory.
    """
    pkg_dir = osp.dirname(osp.dirname(osp.abspath(__file__)))
    return osp.join(pkg_dir, 'futurecone.json')


def load_config(path=None, strict=False):
    """Load config from a JSON file. Falls back to defaults when the file is missing or unreadable,
    unless `strict`, in which case that is a ConfigError."""
    path = path or get_default_config_path()
    if not osp.isfile(path):
        if strict:
            raise ConfigError('config file %s not found' % path)
        logger.warning('config file %s not found, using defaults', path)
        return _default_config()
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        if strict:
            raise ConfigError('could not read config %s: %s' % (path, e))
        logger.warning('could not read config %s (%s), using defaults', path, e)
        return _default_config()
    return _normalize_config(data)


def _default_config():
    """Return the default configuration structure.

    SUITES is empty here; the shipped futurecone.json carries the experiment definitions.
    """
    return {
        'CAPTURE_RADIUS': 1e-2,
        'CAPTURE_TOLERANCE': 1e-9,
        'CONTAINMENT_TOL': 1e-9,
        'TIME_TOL': 1e-9,
        'HISTORY_WINDOW': 32,
        'THREADS': 1,
        'SAMPLING': {
            'N_CONTROLS': 1000,
            'N_SWITCHES': 0,
            'LATTICE_LEVELS': 5,
            'LATTICE_CAP': 4096,
            'BALL_BOUNDARY_POINTS': 256,
        },
        'ESCAPE': {
            'FAN_2D': 64,
            'FAN_3D': 266,
            'HORIZON': 1.0,
            'LEAF_CONTROLS': 64,
            'LEAF_SWITCHES': 1,
            'REFRESH_STEPS': 10,
        },
        'PURSUIT': {
            'HEADING_GAIN': 10.0,
            'PLAN_GRID_STEP': 0.05,
            'PLAN_HORIZON': 5.0,
            'REPLAN_EVERY': 10,
        },
        'VALIDATION': {
            'ROBUST_MARGIN_FRACTION': 0.05,
            'MAX_REJECTIONS': 1000,
            'RANDOM_DWELL': 0.5,
        },
        'SUITES': {},
    }


def _normalize_config(data):
    """Ensure all configuration keys exist.

    Sections are merged key by key so a partial file only overrides what it names.
    """
    out = _default_config()
    for key, value in data.items():
        if isinstance(out.get(key), dict) and isinstance(value, dict):
            out[key].update(copy.deepcopy(value))
        else:
            out[key] = copy.deepcopy(value)
    return out


def save_config(path, data):
    """Write configuration to a JSON file."""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, ensure_ascii=False)


class Singleton(object):
    """Ensures only one instance of a class exists."""

    def __new__(cls):
        if not hasattr(cls, 'instance'):
            cls.instance = super(Singleton, cls).__new__(cls)
        return cls.instance


class Settings(Singleton):
    """Process-wide configuration, loaded lazily from futurecone.json.

    Access sections like a dict: Settings()['ESCAPE']['FAN_2D'].
    """

    config = None

    def __getitem__(self, item):
        if Settings.config is None:
            self.reload()
        return Settings.config[item]

    def reload(self, path=None, strict=False):
        """Re-read the configuration file (default location when path is None)."""
        Settings.config = load_config(path, strict)
        return Settings.config

    def override(self, data):
        """Merge `data` into the active configuration (used by tests and the CLI)."""
        if Settings.config is None:
            self.reload()
        Settings.config = _normalize_config(_merge(Settings.config, data))
        return Settings.config

    def worker_count(self):
        """Number of parallel workers for validation runs.

        FUTURECONE_THREADS (positive integer) takes precedence over THREADS.
        """
        raw = os.environ.get(THREADS_ENV)
        if raw is None or not raw.strip():
            workers = self['THREADS']
        else:
            try:
                workers = int(raw)
            except ValueError:
                raise ConfigError('%s must be a positive integer, got %r' % (THREADS_ENV, raw))
        if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
            raise ConfigError('thread count must be a positive integer, got %r' % (workers,))
        return workers


def _merge(base, data):
    out = copy.deepcopy(base)
    for key, value in data.items():
        if isinstance(out.get(key), dict) and isinstance(value, dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out
