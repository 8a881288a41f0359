"""
    Author: julij.jegorov
    Date: 12/10/2026
    Description: Bounded-control vehicle models (bounded speed, double integrator, Dubins),
                 vehicle state and control values, control clamping and the exact
                 constant-control flow maps used by every simulation and sampler.
"""

import abc
import enum
import math
import dataclasses
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from futurecone.libs.errors import (
    BudgetExhausted,
    ConfigError,
    FutureConeError,
    InadmissibleControl,
    NonpositiveHorizon,
    VariantMismatch,
)

ADMISSIBLE_TOL = 1e-12


def _frozen_array(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def normalize_heading(heading):
    """Wrap an angle (scalar or array) into [-pi, pi)."""
    return (np.asarray(heading) + math.pi) % (2.0 * math.pi) - math.pi


def _as_column(dt):
    """Scalar dt passes through; a per-row dt array becomes a column for broadcasting."""
    dt = np.asarray(dt, dtype=float)
    return dt[:, None] if dt.ndim == 1 else dt


class ControlKind(enum.Enum):
    VELOCITY = 'velocity'
    ACCELERATION = 'acceleration'
    TURN_RATE = 'turn_rate'


@dataclass(frozen=True, eq=False)
class ControlInput:
    """A piecewise-constant control value.

    `value` is a d-vector for velocity/acceleration controls and a 0-d array for turn rates.
    """
    kind: ControlKind
    value: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'value', _frozen_array(self.value))

    @classmethod
    def velocity(cls, vector):
        return cls(ControlKind.VELOCITY, vector)

    @classmethod
    def acceleration(cls, vector):
        return cls(ControlKind.ACCELERATION, vector)

    @classmethod
    def turn_rate(cls, rate):
        return cls(ControlKind.TURN_RATE, float(rate))

    @property
    def magnitude(self):
        if self.kind is ControlKind.TURN_RATE:
            return abs(float(self.value))
        return float(np.linalg.norm(self.value))

    def __repr__(self):
        return 'ControlInput(%s, %s)' % (self.kind.value, self.value.tolist())


@dataclass(frozen=True, eq=False)
class VehicleState:
    """Position (m), velocity (m/s), heading (rad, Dubins only), time (s).

    dv_remaining carries the unspent delta-v of a budgeted double integrator; None means
    "not yet drawn" and is read as the model's full budget.
    """
    position: np.ndarray
    velocity: Optional[np.ndarray] = None
    heading: Optional[float] = None
    time: float = 0.0
    dv_remaining: Optional[float] = None

    def __post_init__(self):
        position = _frozen_array(self.position)
        if position.ndim != 1 or position.size not in (2, 3):
            raise FutureConeError('position must have 2 or 3 components, got shape %s' % (position.shape,))
        if not np.all(np.isfinite(position)):
            raise FutureConeError('position components must be finite')
        object.__setattr__(self, 'position', position)
        if self.velocity is not None:
            velocity = _frozen_array(self.velocity)
            if velocity.shape != position.shape:
                raise FutureConeError('velocity must match the position dimension')
            object.__setattr__(self, 'velocity', velocity)
        if self.heading is not None:
            object.__setattr__(self, 'heading', float(normalize_heading(self.heading)))
        object.__setattr__(self, 'time', float(self.time))

    @property
    def dimension(self):
        return self.position.size

    def velocity_or_zero(self):
        if self.velocity is None:
            return np.zeros(self.dimension)
        return np.array(self.velocity)

    def heading_or_zero(self):
        return 0.0 if self.heading is None else self.heading

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        out = OrderedDict([('position', self.position.tolist())])
        if self.velocity is not None:
            out['velocity'] = self.velocity.tolist()
        if self.heading is not None:
            out['heading'] = self.heading
        out['time'] = self.time
        if self.dv_remaining is not None:
            out['dv_remaining'] = self.dv_remaining
        return out

    @classmethod
    def from_dict(cls, data):
        return cls(position=data['position'], velocity=data.get('velocity'),
                   heading=data.get('heading'), time=data.get('time', 0.0),
                   dv_remaining=data.get('dv_remaining'))


class DynamicsModel(metaclass=abc.ABCMeta):
    """Base class for bounded-control vehicle models.

    Subclasses provide an exact flow map under constant control. `propagate` receives
    positions, so a position-dependent model can be added without changing callers.
    """

    name = None
    control_kind = None

    @property
    @abc.abstractmethod
    def bound(self):
        """Upper bound on the control magnitude."""

    @abc.abstractmethod
    def propagate(self, positions, velocities, headings, controls, dt):
        """Advance a batch of states by dt under constant controls.

        positions/velocities are (N, d), headings (N,), controls (N, d) or (N,).
        Returns new (positions, velocities, headings).
        """

    @abc.abstractmethod
    def params(self):
        """Model parameters as an ordered mapping."""

    def zero_control(self, dimension):
        if self.control_kind is ControlKind.TURN_RATE:
            return ControlInput.turn_rate(0.0)
        return ControlInput(self.control_kind, np.zeros(dimension))

    def to_dict(self):
        return OrderedDict([('model', self.name), ('params', self.params())])

    def _check_positive(self, **values):
        for key, val in values.items():
            if val is None or not math.isfinite(val) or val <= 0:
                raise ConfigError('%s.%s must be > 0, got %r' % (self.name, key, val))


@dataclass(frozen=True)
class BoundedSpeed(DynamicsModel):
    """Velocity is the control, |u| <= v_max."""
    v_max: float

    name = 'bounded_speed'
    control_kind = ControlKind.VELOCITY

    def __post_init__(self):
        self._check_positive(v_max=self.v_max)

    @property
    def bound(self):
        return self.v_max

    def params(self):
        return OrderedDict([('v_max', self.v_max)])

    def propagate(self, positions, velocities, headings, controls, dt):
        return positions + controls * _as_column(dt), np.array(controls, dtype=float), headings


@dataclass(frozen=True)
class DoubleIntegrator(DynamicsModel):
    """Acceleration is the control, |u| <= a_max; optional cumulative delta-v budget."""
    a_max: float
    dv_budget: Optional[float] = None

    name = 'double_integrator'
    control_kind = ControlKind.ACCELERATION

    def __post_init__(self):
        self._check_positive(a_max=self.a_max)
        if self.dv_budget is not None and (not math.isfinite(self.dv_budget) or self.dv_budget < 0):
            raise ConfigError('double_integrator.dv_budget must be >= 0, got %r' % (self.dv_budget,))

    @property
    def bound(self):
        return self.a_max

    @property
    def budgeted(self):
        return self.dv_budget is not None

    def params(self):
        out = OrderedDict([('a_max', self.a_max)])
        if self.dv_budget is not None:
            out['dv_budget'] = self.dv_budget
        return out

    def propagate(self, positions, velocities, headings, controls, dt):
        dt = _as_column(dt)
        new_positions = positions + velocities * dt + 0.5 * controls * dt * dt
        return new_positions, velocities + controls * dt, headings


@dataclass(frozen=True)
class Dubins(DynamicsModel):
    """Planar constant-speed vehicle; turn rate is the control, |u| <= speed / r_min."""
    speed: float
    r_min: float

    name = 'dubins'
    control_kind = ControlKind.TURN_RATE

    def __post_init__(self):
        self._check_positive(speed=self.speed, r_min=self.r_min)

    @property
    def bound(self):
        return self.speed / self.r_min

    def params(self):
        return OrderedDict([('speed', self.speed), ('r_min', self.r_min)])

    def propagate(self, positions, velocities, headings, controls, dt):
        if positions.shape[1] != 2:
            raise FutureConeError('Dubins vehicles are planar (d=2)')
        rates = np.reshape(controls, -1)
        half_turn = 0.5 * rates * dt
        # chord of the arc; np.sinc keeps the straight-line limit exact
        chord = self.speed * dt * np.sinc(half_turn / math.pi)
        mid_heading = headings + half_turn
        displacement = np.stack([chord * np.cos(mid_heading), chord * np.sin(mid_heading)], axis=1)
        new_headings = normalize_heading(headings + rates * dt)
        new_velocities = self.speed * np.stack([np.cos(new_headings), np.sin(new_headings)], axis=1)
        return positions + displacement, new_velocities, new_headings


MODEL_TYPES = OrderedDict([
    (BoundedSpeed.name, BoundedSpeed),
    (DoubleIntegrator.name, DoubleIntegrator),
    (Dubins.name, Dubins),
])


def model_from_dict(data):
    """Build a model from {'model': name, 'params': {...}}."""
    name = data.get('model')
    if name not in MODEL_TYPES:
        raise ConfigError('unknown model %r, expected one of %s' % (name, ', '.join(MODEL_TYPES)))
    try:
        return MODEL_TYPES[name](**data.get('params', {}))
    except TypeError as e:
        raise ConfigError('bad parameters for %s: %s' % (name, e))


def _check_variant(model, u):
    if u.kind is not model.control_kind:
        raise VariantMismatch('%s control given to %s model' % (u.kind.value, model.name))


def clamp_control(model, raw):
    """Project a raw control onto the model's admissible set.

    Vector controls keep their direction; an admissible control is returned unchanged.
    """
    _check_variant(model, raw)
    if raw.kind is ControlKind.TURN_RATE:
        rate = float(raw.value)
        if abs(rate) <= model.bound + ADMISSIBLE_TOL:
            return raw
        return ControlInput.turn_rate(math.copysign(model.bound, rate))
    norm = float(np.linalg.norm(raw.value))
    if norm <= model.bound + ADMISSIBLE_TOL:
        return raw
    return ControlInput(raw.kind, raw.value * (model.bound / norm))


def remaining_budget(model, state):
    """Unspent delta-v of a budgeted double integrator, None for unbudgeted models."""
    if not isinstance(model, DoubleIntegrator) or not model.budgeted:
        return None
    return model.dv_budget if state.dv_remaining is None else state.dv_remaining


def limit_to_budget(model, state, u, dt):
    """Scale a double-integrator control so the step spends at most the remaining delta-v.

    A vehicle with an exhausted budget gets a zero control and coasts.
    """
    remaining = remaining_budget(model, state)
    if remaining is None:
        return u
    norm = float(np.linalg.norm(u.value))
    if norm * dt <= remaining:
        return u
    if remaining <= 0.0 or norm == 0.0:
        return model.zero_control(state.dimension)
    return ControlInput(u.kind, u.value * (remaining / (norm * dt)))


def step(model, s, u, dt):
    """Advance one state by dt under a constant admissible control (exact flow map)."""
    if not dt > 0:
        raise NonpositiveHorizon('dt must be > 0, got %r' % (dt,))
    _check_variant(model, u)
    if u.magnitude > model.bound + ADMISSIBLE_TOL:
        raise InadmissibleControl('|u| = %.17g exceeds bound %.17g of %s'
                                  % (u.magnitude, model.bound, model.name))

    dv_remaining = s.dv_remaining
    remaining = remaining_budget(model, s)
    if remaining is not None:
        dv_remaining = remaining - u.magnitude * dt
        if dv_remaining < -ADMISSIBLE_TOL:
            raise BudgetExhausted('step needs %.17g m/s of delta-v, %.17g left' % (u.magnitude * dt, remaining))
        dv_remaining = max(dv_remaining, 0.0)

    controls = np.reshape(u.value, (1, -1)) if u.kind is not ControlKind.TURN_RATE else np.reshape(u.value, (1,))
    positions, velocities, headings = model.propagate(
        s.position.reshape(1, -1), s.velocity_or_zero().reshape(1, -1),
        np.array([s.heading_or_zero()]), controls, dt)

    heading = float(headings[0]) if isinstance(model, Dubins) else s.heading
    return VehicleState(position=positions[0], velocity=velocities[0], heading=heading,
                        time=s.time + dt, dv_remaining=dv_remaining)
