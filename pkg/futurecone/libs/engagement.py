"""
    Author: julij.jegorov
    Date: 14/10/2026
    Description: Closed-loop simulation of one pursuit/evasion engagement on a fixed time
                 grid, with the capture-radius termination rule and trajectory tables.
"""

import logging
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from futurecone.libs.config import Settings
from futurecone.libs.dynamics import clamp_control, limit_to_budget, step
from futurecone.libs.errors import ConfigError, EmptyTrajectory
from futurecone.libs.strategies import ObservedHistory, make_strategy

logger = logging.getLogger(__name__)

INTERCEPT = 'intercept'
ESCAPE = 'escape'
CAPTURE = 'capture'
TIMEOUT = 'timeout'
ARENA = 'arena'


@dataclass(frozen=True)
class EngagementConfig:
    """dt and t_max in seconds; capture_radius and arena_radius in metres."""
    dt: float
    t_max: float
    capture_radius: float = 1e-2
    arena_radius: Optional[float] = None

    def __post_init__(self):
        for name in ('dt', 't_max'):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val) or val <= 0:
                raise ConfigError('%s must be a finite number > 0, got %r' % (name, val))
        if self.dt > self.t_max:
            raise ConfigError('dt (%r) must not exceed t_max (%r)' % (self.dt, self.t_max))
        if not self.capture_radius >= 0:
            raise ConfigError('capture_radius must be >= 0, got %r' % (self.capture_radius,))
        if self.arena_radius is not None and not self.arena_radius > 0:
            raise ConfigError('arena_radius must be > 0, got %r' % (self.arena_radius,))

    @property
    def n_steps(self):
        return int(math.ceil(self.t_max / self.dt - 1e-9))

    def to_dict(self):
        out = OrderedDict([('dt', self.dt), ('t_max', self.t_max), ('capture_radius', self.capture_radius)])
        if self.arena_radius is not None:
            out['arena_radius'] = self.arena_radius
        return out


@dataclass(frozen=True)
class Outcome:
    """Intercept at time t, or Escape; `reason` is capture, timeout or arena."""
    kind: str
    t: Optional[float]
    reason: str

    @classmethod
    def intercept(cls, t):
        return cls(INTERCEPT, float(t), CAPTURE)

    @classmethod
    def escape(cls, reason):
        return cls(ESCAPE, None, reason)

    @property
    def is_intercept(self):
        return self.kind == INTERCEPT


@dataclass(frozen=True, eq=False)
class EngagementResult:
    """Sampled trajectories of one engagement; controls_x/controls_y hold the control each
    player applied over each step, after clamping and budget limits."""
    outcome: Outcome
    times: np.ndarray
    trajectory_x: np.ndarray
    trajectory_y: np.ndarray
    min_separation: float
    min_separation_time: float
    controls_x: tuple = ()
    controls_y: tuple = ()

    @property
    def separations(self):
        return np.linalg.norm(self.trajectory_x - self.trajectory_y, axis=1)

    def to_frame(self):
        """Both trajectories on the shared grid: time, xp_*, xe_*, separation."""
        axes = 'xyz'[:self.trajectory_x.shape[1]]
        data = OrderedDict([('time', self.times)])
        for i, axis in enumerate(axes):
            data['xp_%s' % axis] = self.trajectory_x[:, i]
        for i, axis in enumerate(axes):
            data['xe_%s' % axis] = self.trajectory_y[:, i]
        data['separation'] = self.separations
        return pd.DataFrame(data)

    def outcome_dict(self):
        return OrderedDict([
            ('outcome', self.outcome.kind),
            ('time', self.outcome.t),
            ('reason', self.outcome.reason),
            ('min_separation', self.min_separation),
            ('min_separation_time', self.min_separation_time),
            ('steps', int(self.times.size - 1)),
        ])


def _captured(separation, capture_radius):
    # a zero radius falls back to the tolerance
    return separation <= max(capture_radius, Settings()['CAPTURE_TOLERANCE'])


def _build_result(outcome, times, xs, ys, us=(), vs=()):
    times = np.array(times)
    xs = np.array(xs)
    ys = np.array(ys)
    seps = np.linalg.norm(xs - ys, axis=1)
    idx = int(np.argmin(seps))
    return EngagementResult(outcome, times, xs, ys, float(seps[idx]), float(times[idx]), tuple(us), tuple(vs))


def simulate(config, pursuer, evader):
    """Run one engagement.

    pursuer and evader are (model, initial state, strategy kind) triples. Both players pick
    their control from the state at the current grid time, then both step by dt. The game
    stops at the first grid time with separation <= capture_radius, when the evader leaves
    the arena, or at t_max.
    """
    p_model, p_state, p_kind = pursuer
    e_model, e_state, e_kind = evader
    if p_state.dimension != e_state.dimension:
        raise ConfigError('pursuer and evader dimensions differ (%d vs %d)'
                          % (p_state.dimension, e_state.dimension))
    p_state = p_state.replace(time=0.0)
    e_state = e_state.replace(time=0.0)
    dt = config.dt
    p_strategy = make_strategy(p_kind, p_model, e_model, dt)
    e_strategy = make_strategy(e_kind, e_model, p_model, dt)

    p_seen = ObservedHistory.start(0.0, p_state.position)
    e_seen = ObservedHistory.start(0.0, e_state.position)
    times = [0.0]
    xs = [p_state.position]
    ys = [e_state.position]
    us = []
    vs = []

    outcome = None
    if _captured(float(np.linalg.norm(p_state.position - e_state.position)), config.capture_radius):
        outcome = Outcome.intercept(0.0)

    for k in range(config.n_steps):
        if outcome is not None:
            break
        now = k * dt
        u = clamp_control(p_model, p_strategy.control(p_state, e_seen, now, k))
        v = clamp_control(e_model, e_strategy.control(e_state, p_seen, now, k))
        u = limit_to_budget(p_model, p_state, u, dt)
        v = limit_to_budget(e_model, e_state, v, dt)
        us.append(u)
        vs.append(v)
        p_state = step(p_model, p_state, u, dt)
        e_state = step(e_model, e_state, v, dt)

        t = (k + 1) * dt
        p_seen = p_seen.extended(t, p_state.position)
        e_seen = e_seen.extended(t, e_state.position)
        times.append(t)
        xs.append(p_state.position)
        ys.append(e_state.position)

        if _captured(float(np.linalg.norm(p_state.position - e_state.position)), config.capture_radius):
            outcome = Outcome.intercept(t)
        elif config.arena_radius is not None and np.linalg.norm(e_state.position) > config.arena_radius:
            outcome = Outcome.escape(ARENA)

    if outcome is None:
        outcome = Outcome.escape(TIMEOUT)
    logger.debug('engagement %s vs %s: %s at %s after %d steps', p_strategy.kind.name, e_strategy.kind.name,
                 outcome.kind, outcome.t, len(times) - 1)
    return _build_result(outcome, times, xs, ys, us, vs)


def min_separation(result):
    """(time, value) of the smallest separation on the grid."""
    if result.times.size == 0:
        raise EmptyTrajectory('engagement result has no samples')
    seps = result.separations
    idx = int(np.argmin(seps))
    return float(result.times[idx]), float(seps[idx])
