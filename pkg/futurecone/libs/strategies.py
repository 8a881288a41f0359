"""
    Author: julij.jegorov
    Date: 14/10/2026
    Description: Pursuit and evasion behaviours. Strategy kinds (pure pursuit, leaf-plan
                 pursuit, straight line, greedy escape, random maneuver), the observed
                 opponent history, intercept planning by cone containment, and the
                 per-engagement strategy objects the simulation loop drives.
"""

import abc
import logging
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from futurecone.libs.config import Settings
from futurecone.libs.cones import analytic_leaf, build_cone, build_cone_on_grid, cone_contains, sampled_leaf, FutureCone
from futurecone.libs.dynamics import (
    ControlInput,
    ControlKind,
    DoubleIntegrator,
    Dubins,
    VehicleState,
    clamp_control,
    normalize_heading,
    remaining_budget,
)
from futurecone.libs.errors import ConfigError, NoGuarantee, NoOverlap, UnsupportedAnalytic
from futurecone.libs.geometry import direction_fan, unit

logger = logging.getLogger(__name__)

PURSUIT = 'pursuit'
EVASION = 'evasion'
TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ObservedHistory:
    """Time-ordered (time, position) samples of the opponent, newest last.

    Only the most recent HISTORY_WINDOW samples are kept by `extended`.
    """
    samples: Tuple[Tuple[float, np.ndarray], ...]

    def __post_init__(self):
        samples = tuple((float(t), np.array(p, dtype=float)) for t, p in self.samples)
        if not samples:
            raise ValueError('observed history needs at least one sample')
        times = [t for t, _ in samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError('observed history times must be strictly increasing')
        object.__setattr__(self, 'samples', samples)

    @classmethod
    def start(cls, t, position):
        return cls(((t, position),))

    def extended(self, t, position):
        window = Settings()['HISTORY_WINDOW']
        return ObservedHistory((self.samples + ((t, position),))[-window:])

    @property
    def latest_time(self):
        return self.samples[-1][0]

    @property
    def latest_position(self):
        return np.array(self.samples[-1][1])

    @property
    def first_position(self):
        return np.array(self.samples[0][1])

    def velocity_estimate(self):
        """Finite difference of the last two samples; zero with a single sample."""
        if len(self.samples) < 2:
            return np.zeros_like(self.samples[-1][1])
        (t0, p0), (t1, p1) = self.samples[-2:]
        return (p1 - p0) / (t1 - t0)

    def predict(self, t):
        """Constant-velocity extrapolation of the latest sample to time t."""
        return self.latest_position + self.velocity_estimate() * (t - self.latest_time)

    def as_vertex(self, model):
        """Opponent state reconstructed from observations; heading comes from the velocity."""
        velocity = self.velocity_estimate()
        heading = None
        if isinstance(model, Dubins):
            heading = math.atan2(velocity[1], velocity[0]) if np.any(velocity) else 0.0
        return VehicleState(position=self.latest_position, velocity=velocity, heading=heading,
                            time=self.latest_time)


class StrategyKind(object):
    """Base class of the strategy kinds; `role` tells pursuit from evasion."""

    name = None
    role = None

    def params(self):
        return OrderedDict()

    def to_dict(self):
        out = OrderedDict([('kind', self.name)])
        out.update(self.params())
        return out


@dataclass(frozen=True)
class PurePursuit(StrategyKind):
    name = 'pure_pursuit'
    role = PURSUIT


@dataclass(frozen=True)
class LeafPlanPursuit(StrategyKind):
    """Steer toward the aim point of an intercept plan, replanning every `replan_every` steps."""
    replan_every: int = 10

    name = 'leaf_plan_pursuit'
    role = PURSUIT

    def __post_init__(self):
        if isinstance(self.replan_every, bool) or not isinstance(self.replan_every, int) or self.replan_every < 1:
            raise ConfigError('replan_every must be an integer >= 1, got %r' % (self.replan_every,))

    def params(self):
        return OrderedDict([('replan_every', self.replan_every)])


@dataclass(frozen=True)
class StraightLine(StrategyKind):
    """Constant heading; direction None means radially away from the opponent's start."""
    direction: Optional[Tuple[float, ...]] = None

    name = 'straight_line'
    role = EVASION

    def __post_init__(self):
        if self.direction is not None:
            object.__setattr__(self, 'direction', tuple(float(c) for c in self.direction))

    def params(self):
        if self.direction is None:
            return OrderedDict()
        return OrderedDict([('direction', list(self.direction))])


@dataclass(frozen=True)
class GreedyEscape(StrategyKind):
    horizon: float = 1.0

    name = 'greedy_escape'
    role = EVASION

    def __post_init__(self):
        if not self.horizon > 0:
            raise ConfigError('greedy_escape horizon must be > 0, got %r' % (self.horizon,))

    def params(self):
        return OrderedDict([('horizon', self.horizon)])


@dataclass(frozen=True)
class RandomManeuver(StrategyKind):
    seed: int = 0
    dwell: float = 0.5

    name = 'random_maneuver'
    role = EVASION

    def __post_init__(self):
        if not self.dwell > 0:
            raise ConfigError('random_maneuver dwell must be > 0, got %r' % (self.dwell,))

    def params(self):
        return OrderedDict([('seed', self.seed), ('dwell', self.dwell)])


STRATEGY_TYPES = OrderedDict((cls.name, cls) for cls in
                             (PurePursuit, LeafPlanPursuit, StraightLine, GreedyEscape, RandomManeuver))


def strategy_from_dict(data):
    """Build a strategy kind from {'kind': name, **params}."""
    if isinstance(data, str):
        data = {'kind': data}
    params = dict(data)
    name = params.pop('kind', None)
    if name not in STRATEGY_TYPES:
        raise ConfigError('unknown strategy %r, expected one of %s' % (name, ', '.join(STRATEGY_TYPES)))
    try:
        return STRATEGY_TYPES[name](**params)
    except TypeError as e:
        raise ConfigError('bad parameters for %s: %s' % (name, e))


@dataclass(frozen=True, eq=False)
class InterceptPlan:
    t_i: float
    aim_point: np.ndarray
    margin_at_plan: float
    planned_at: float


def plan_intercept_point(pursuer_cone, target_model, target_history, now):
    """Earliest grid time at which the target's cone sits inside the pursuer's, and where to aim.

    The aim point is the target's constant-velocity extrapolation to t_i, projected into the
    target leaf when the extrapolation leaves it.
    """
    try:
        cone = pursuer_cone.restricted(now)
    except NoOverlap:
        raise NoGuarantee('pursuer cone has no leaves after t=%r' % (now,))

    vertex = target_history.as_vertex(target_model)
    leaves = build_cone_on_grid(target_model, vertex, cone.times, method='analytic', fallback=True)
    target_cone = FutureCone(vertex, target_model, cone.t_start, cone.t_end, leaves)
    report = cone_contains(cone, target_cone)
    if report.first_containment_time is None:
        raise NoGuarantee('target cone is never contained (best margin %.6g)' % report.max_margin)

    t_i = report.first_containment_time
    leaf = target_cone.leaf_at(t_i)
    aim = leaf.project(target_history.predict(t_i))
    margin = dict(report.per_time)[t_i].margin
    logger.debug('plan at t=%.4f: t_i=%.4f aim=%s margin=%.3g', now, t_i, aim.tolist(), margin)
    return InterceptPlan(t_i=t_i, aim_point=aim, margin_at_plan=margin, planned_at=now)


def _max_toward(model, own, target, horizon=None):
    """Max-magnitude admissible control that moves `own` toward `target`."""
    offset = np.asarray(target, dtype=float) - own.position
    if model.control_kind is ControlKind.TURN_RATE:
        if not np.any(offset):
            return ControlInput.turn_rate(0.0)
        bearing = math.atan2(offset[1], offset[0])
        error = float(normalize_heading(bearing - own.heading_or_zero()))
        gain = Settings()['PURSUIT']['HEADING_GAIN']
        return ControlInput.turn_rate(float(np.clip(gain * error, -model.bound, model.bound)))
    if model.control_kind is ControlKind.ACCELERATION and horizon is not None:
        # aim at where the target is relative to our coasting position
        offset = offset - own.velocity_or_zero() * horizon
    if not np.any(offset):
        return model.zero_control(own.dimension)
    return clamp_control(model, ControlInput(model.control_kind, model.bound * unit(offset)))


def _one_step_landing(model, own, point, dt):
    """Control that puts `own` exactly on `point` after dt, or None if it is out of reach."""
    offset = np.asarray(point, dtype=float) - own.position
    if model.control_kind is ControlKind.VELOCITY:
        u = offset / dt
    elif model.control_kind is ControlKind.ACCELERATION:
        u = 2.0 * (offset - own.velocity_or_zero() * dt) / (dt * dt)
        remaining = remaining_budget(model, own)
        if remaining is not None and np.linalg.norm(u) * dt > remaining:
            return None
    else:
        return None
    if np.linalg.norm(u) > model.bound:
        return None
    return ControlInput(model.control_kind, u)


def pursuit_control(kind, own, model, target_history, now, plan=None, dt=None):
    """Admissible pursuit control for one step.

    PurePursuit heads at the target's latest position. LeafPlanPursuit heads at
    `plan.aim_point` (pure pursuit when there is no plan); given dt it lands on the target's
    predicted position when that is one step away, and stops on an aim point it can reach.
    """
    if kind.role != PURSUIT:
        raise ConfigError('%s is not a pursuit strategy' % kind.name)
    if isinstance(kind, PurePursuit) or plan is None:
        return _max_toward(model, own, target_history.latest_position)

    if dt is not None:
        landing = _one_step_landing(model, own, target_history.predict(now + dt), dt)
        if landing is not None:
            return landing
        landing = _one_step_landing(model, own, plan.aim_point, dt)
        if landing is not None:
            return landing
    time_to_go = max(plan.t_i - now, dt or 0.0)
    return _max_toward(model, own, plan.aim_point, horizon=time_to_go)


def _escape_fan(model, dimension):
    escape = Settings()['ESCAPE']
    if model.control_kind is ControlKind.TURN_RATE:
        # odd count keeps the straight-ahead rate in the fan
        n = escape['FAN_2D'] | 1
        rates = np.linspace(-model.bound, model.bound, n)
        rates[n // 2] = 0.0
        return rates
    n = escape['FAN_2D'] if dimension == 2 else escape['FAN_3D']
    return model.bound * direction_fan(dimension, n)


def escape_control(own, model, pursuer_leaf_at_horizon, horizon):
    """Fan control whose endpoint after `horizon` lies deepest outside the pursuer leaf.

    The fan is fixed (index 0 is +x, or the hardest right turn for Dubins); ties go to the
    lowest index.
    """
    if not horizon > 0:
        raise ConfigError('escape horizon must be > 0, got %r' % (horizon,))
    controls = _escape_fan(model, own.dimension)
    n = controls.shape[0]
    remaining = remaining_budget(model, own)
    if remaining is not None:
        spend = np.linalg.norm(controls, axis=1) * horizon
        if spend[0] > remaining:
            controls = controls * (remaining / spend[0])

    endpoints, _, _ = model.propagate(
        np.repeat(own.position[None, :], n, axis=0),
        np.repeat(own.velocity_or_zero()[None, :], n, axis=0),
        np.full(n, own.heading_or_zero()), controls, horizon)
    margins = pursuer_leaf_at_horizon.margins(endpoints)
    idx = int(np.flatnonzero(margins <= margins.min() + TIE_TOL)[0])
    if model.control_kind is ControlKind.TURN_RATE:
        return ControlInput.turn_rate(float(controls[idx]))
    # the fan is scaled for the whole horizon; one step may spend up to the full bound
    direction = controls[idx] if remaining is None else model.bound * unit(controls[idx])
    return clamp_control(model, ControlInput(model.control_kind, direction))


class Strategy(metaclass=abc.ABCMeta):
    """Per-engagement state machine around one strategy kind."""

    def __init__(self, kind, model, opponent_model, dt):
        self.kind = kind
        self.model = model
        self.opponent_model = opponent_model
        self.dt = dt

    @abc.abstractmethod
    def control(self, own, opponent_history, now, step_index):
        """Control to apply over [now, now + dt]."""


class PurePursuitStrategy(Strategy):

    def control(self, own, opponent_history, now, step_index):
        return pursuit_control(self.kind, own, self.model, opponent_history, now)


class LeafPlanStrategy(Strategy):
    """Keeps the current intercept plan and refreshes it on schedule or when it runs out."""

    def __init__(self, kind, model, opponent_model, dt):
        super(LeafPlanStrategy, self).__init__(kind, model, opponent_model, dt)
        self.plan = None
        self.last_plan_step = None

    def _needs_replan(self, now, step_index):
        if self.last_plan_step is None:
            return True
        if step_index - self.last_plan_step >= self.kind.replan_every:
            return True
        # a failed plan waits for the schedule; a plan that has run out does not
        return self.plan is not None and now >= self.plan.t_i - Settings()['TIME_TOL']

    def replan(self, own, opponent_history, now):
        pursuit = Settings()['PURSUIT']
        n_leaves = int(round(pursuit['PLAN_HORIZON'] / pursuit['PLAN_GRID_STEP'])) + 1
        vertex = own.replace(time=now)
        cone = build_cone(self.model, vertex, now, now + pursuit['PLAN_HORIZON'], n_leaves,
                          method='analytic', fallback=True)
        try:
            return plan_intercept_point(cone, self.opponent_model, opponent_history, now)
        except NoGuarantee as e:
            logger.debug('no guaranteed intercept at t=%.4f (%s), pure pursuit', now, e)
            return None

    def control(self, own, opponent_history, now, step_index):
        if self._needs_replan(now, step_index):
            self.plan = self.replan(own, opponent_history, now)
            self.last_plan_step = step_index
        return pursuit_control(self.kind, own, self.model, opponent_history, now,
                               plan=self.plan, dt=self.dt)


class StraightLineStrategy(Strategy):

    def __init__(self, kind, model, opponent_model, dt):
        super(StraightLineStrategy, self).__init__(kind, model, opponent_model, dt)
        self.direction = None if kind.direction is None else unit(kind.direction)

    def control(self, own, opponent_history, now, step_index):
        if self.model.control_kind is ControlKind.TURN_RATE:
            return ControlInput.turn_rate(0.0)
        if self.direction is None:
            self.direction = unit(own.position - opponent_history.first_position)
            if not np.any(self.direction):
                self.direction = np.eye(own.dimension)[0]
        return clamp_control(self.model, ControlInput(self.model.control_kind,
                                                      self.model.bound * self.direction))


class GreedyEscapeStrategy(Strategy):
    """Escape against the pursuer leaf `horizon` ahead, rebuilt from observations.

    Sampled leaves (no closed form) are cached for REFRESH_STEPS steps.
    """

    def __init__(self, kind, model, opponent_model, dt):
        super(GreedyEscapeStrategy, self).__init__(kind, model, opponent_model, dt)
        self.cached_leaf = None
        self.cached_step = None

    def pursuer_leaf(self, opponent_history, now, step_index):
        vertex = opponent_history.as_vertex(self.opponent_model)
        t = now + self.kind.horizon
        try:
            return analytic_leaf(self.opponent_model, vertex, t)
        except UnsupportedAnalytic:
            pass
        escape = Settings()['ESCAPE']
        if self.cached_leaf is None or step_index - self.cached_step >= escape['REFRESH_STEPS']:
            self.cached_leaf = sampled_leaf(self.opponent_model, vertex, t,
                                            escape['LEAF_CONTROLS'], escape['LEAF_SWITCHES'])
            self.cached_step = step_index
        return self.cached_leaf

    def control(self, own, opponent_history, now, step_index):
        leaf = self.pursuer_leaf(opponent_history, now, step_index)
        return escape_control(own, self.model, leaf, self.kind.horizon)


class RandomManeuverStrategy(Strategy):
    """Draws a fresh admissible control every `dwell` seconds from its own generator."""

    def __init__(self, kind, model, opponent_model, dt):
        super(RandomManeuverStrategy, self).__init__(kind, model, opponent_model, dt)
        self.rng = np.random.default_rng(kind.seed)
        self.current = None
        self.next_switch = 0.0

    def draw(self, dimension):
        if self.model.control_kind is ControlKind.TURN_RATE:
            return ControlInput.turn_rate(self.rng.uniform(-self.model.bound, self.model.bound))
        direction = unit(self.rng.standard_normal(dimension))
        radius = self.model.bound * self.rng.uniform() ** (1.0 / dimension)
        return clamp_control(self.model, ControlInput(self.model.control_kind, radius * direction))

    def control(self, own, opponent_history, now, step_index):
        if self.current is None or now >= self.next_switch - Settings()['TIME_TOL']:
            self.current = self.draw(own.dimension)
            self.next_switch = now + self.kind.dwell
        return self.current


_STRATEGY_CLASSES = {
    PurePursuit: PurePursuitStrategy,
    LeafPlanPursuit: LeafPlanStrategy,
    StraightLine: StraightLineStrategy,
    GreedyEscape: GreedyEscapeStrategy,
    RandomManeuver: RandomManeuverStrategy,
}


def make_strategy(kind, model, opponent_model, dt):
    """Fresh strategy state machine for one engagement."""
    if isinstance(kind, (str, dict)):
        kind = strategy_from_dict(kind)
    return _STRATEGY_CLASSES[type(kind)](kind, model, opponent_model, dt)
