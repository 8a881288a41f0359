"""
    Author: julij.jegorov
    Date: 15/10/2026
    Description: Scenario documents (JSON): parsing with field-level diagnostics, and
                 writing back so a written scenario re-parses to an equal value.
"""

import json
import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional, Tuple

from futurecone.libs.dynamics import MODEL_TYPES, Dubins, VehicleState, model_from_dict
from futurecone.libs.engagement import EngagementConfig
from futurecone.libs.errors import ConfigError, ScenarioError
from futurecone.libs.validation import (
    _ERROR_PREFIX,
    _check_choice,
    _check_keys,
    _check_number,
    _check_vector,
)

logger = logging.getLogger(__name__)

TOP_KEYS = ('dimension', 'pursuer', 'evader', 'window', 'engagement')
PLAYER_KEYS = ('model', 'params', 'position')
PLAYER_OPTIONAL = ('velocity', 'heading')
WINDOW_KEYS = ('t_start', 't_end', 'n_leaves')
ENGAGEMENT_KEYS = ('dt', 't_max', 'capture_radius')


@dataclass(frozen=True)
class PlayerSpec:
    model: object
    position: Tuple[float, ...]
    velocity: Optional[Tuple[float, ...]] = None
    heading: Optional[float] = None

    def state(self):
        return VehicleState(position=self.position, velocity=self.velocity, heading=self.heading)

    def to_dict(self):
        out = OrderedDict([('model', self.model.name), ('params', self.model.params()),
                           ('position', list(self.position))])
        if self.velocity is not None:
            out['velocity'] = list(self.velocity)
        if self.heading is not None:
            out['heading'] = self.heading
        return out


@dataclass(frozen=True)
class Scenario:
    dimension: int
    pursuer: PlayerSpec
    evader: PlayerSpec
    t_start: float
    t_end: float
    n_leaves: int
    dt: float
    t_max: float
    capture_radius: float
    arena_radius: Optional[float] = None
    seed: int = 0

    def engagement_config(self):
        return EngagementConfig(dt=self.dt, t_max=self.t_max, capture_radius=self.capture_radius,
                                arena_radius=self.arena_radius)

    def player(self, which):
        if which in ('x', 'pursuer'):
            return self.pursuer
        if which in ('y', 'evader'):
            return self.evader
        raise ConfigError('player must be x (pursuer) or y (evader), got %r' % (which,))


def _raise(err, field):
    if err:
        raise ScenarioError(err, field)


def _tuple(values):
    return None if values is None else tuple(float(v) for v in values)


def _parse_player(name, data, dimension):
    _raise(_check_keys(name, data, PLAYER_KEYS, PLAYER_OPTIONAL), name)
    _raise(_check_choice(name + '.model', data['model'], tuple(MODEL_TYPES)), name + '.model')
    params = data['params']
    if not isinstance(params, dict):
        raise ScenarioError(_ERROR_PREFIX + '%s.params must be an object.' % name, name + '.params')
    for key, value in params.items():
        _raise(_check_number('%s.params.%s' % (name, key), value, allow_none=key == 'dv_budget'),
               '%s.params.%s' % (name, key))
    try:
        model = model_from_dict({'model': data['model'], 'params': params})
    except ConfigError as e:
        raise ScenarioError('%s.params: %s' % (name, e), name + '.params')
    if isinstance(model, Dubins) and dimension != 2:
        raise ScenarioError('%s: dubins vehicles need dimension 2' % name, name + '.model')
    for key in ('position', 'velocity'):
        _raise(_check_vector('%s.%s' % (name, key), data.get(key), dimension, allow_none=key == 'velocity'),
               '%s.%s' % (name, key))
    _raise(_check_number(name + '.heading', data.get('heading'), allow_none=True), name + '.heading')
    heading = data.get('heading')
    if heading is None and isinstance(model, Dubins):
        heading = 0.0
    return PlayerSpec(model=model, position=_tuple(data['position']), velocity=_tuple(data.get('velocity')),
                      heading=None if heading is None else float(heading))


def parse_scenario(data):
    """Validate a scenario document (already decoded from JSON) and build a Scenario."""
    _raise(_check_keys('scenario', data, TOP_KEYS, ('seed',)), 'scenario')
    dimension = data['dimension']
    _raise(_check_number('dimension', dimension, integer=True), 'dimension')
    if dimension not in (2, 3):
        raise ScenarioError('dimension must be 2 or 3, got %r' % (dimension,), 'dimension')

    pursuer = _parse_player('pursuer', data['pursuer'], dimension)
    evader = _parse_player('evader', data['evader'], dimension)

    window = data['window']
    _raise(_check_keys('window', window, WINDOW_KEYS), 'window')
    _raise(_check_number('window.t_start', window['t_start'], minimum=0)
           or _check_number('window.t_end', window['t_end'])
           or _check_number('window.n_leaves', window['n_leaves'], minimum=1, integer=True), 'window')
    if not window['t_end'] > window['t_start']:
        raise ScenarioError('window.t_end must be > window.t_start', 'window.t_end')

    eng = data['engagement']
    _raise(_check_keys('engagement', eng, ENGAGEMENT_KEYS, ('arena_radius',)), 'engagement')
    for key, minimum, strict in (('dt', 0, True), ('t_max', 0, True), ('capture_radius', 0, False)):
        _raise(_check_number('engagement.' + key, eng[key], minimum=minimum, strict=strict), 'engagement.' + key)
    _raise(_check_number('engagement.arena_radius', eng.get('arena_radius'), minimum=0, strict=True,
                         allow_none=True), 'engagement.arena_radius')
    if eng['dt'] > eng['t_max']:
        raise ScenarioError('engagement.dt must not exceed engagement.t_max', 'engagement.dt')

    seed = data.get('seed', 0)
    _raise(_check_number('seed', seed, minimum=0, integer=True), 'seed')
    return Scenario(dimension=dimension, pursuer=pursuer, evader=evader,
                    t_start=float(window['t_start']), t_end=float(window['t_end']),
                    n_leaves=window['n_leaves'], dt=float(eng['dt']), t_max=float(eng['t_max']),
                    capture_radius=float(eng['capture_radius']),
                    arena_radius=None if eng.get('arena_radius') is None else float(eng['arena_radius']),
                    seed=seed)


def load_scenario(path):
    """Read and parse a scenario file; JSON syntax errors report line and column."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ScenarioError('cannot read scenario %s: %s' % (path, e))
    except UnicodeDecodeError as e:
        raise ScenarioError('%s: not UTF-8 text (byte %d): %s' % (path, e.start, e.reason))
    try:
        data = json.loads(text, object_pairs_hook=OrderedDict)
    except json.JSONDecodeError as e:
        raise ScenarioError('%s: invalid JSON at line %d column %d: %s' % (path, e.lineno, e.colno, e.msg))
    logger.debug('loaded scenario %s', path)
    return parse_scenario(data)


def scenario_to_dict(scenario):
    engagement = OrderedDict([('dt', scenario.dt), ('t_max', scenario.t_max),
                              ('capture_radius', scenario.capture_radius)])
    if scenario.arena_radius is not None:
        engagement['arena_radius'] = scenario.arena_radius
    return OrderedDict([
        ('dimension', scenario.dimension),
        ('pursuer', scenario.pursuer.to_dict()),
        ('evader', scenario.evader.to_dict()),
        ('window', OrderedDict([('t_start', scenario.t_start), ('t_end', scenario.t_end),
                                ('n_leaves', scenario.n_leaves)])),
        ('engagement', engagement),
        ('seed', scenario.seed),
    ])


def write_scenario(path, scenario):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(scenario_to_dict(scenario), f, indent=2)
