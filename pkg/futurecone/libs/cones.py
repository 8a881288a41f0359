"""
    Author: julij.jegorov
    Date: 13/10/2026
    Description: Future cones and their leaves (the reachable position set at one time).
                 Analytic balls, sampled point clouds with hulls, cone construction on a
                 uniform grid and the leaf/cone containment tests with signed margins.
"""

import itertools
import logging
import math
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.stats import qmc

from futurecone.libs.config import Settings
from futurecone.libs.dynamics import (
    BoundedSpeed,
    ControlKind,
    DoubleIntegrator,
    Dubins,
    remaining_budget,
)
from futurecone.libs.errors import (
    BadWindow,
    GridMismatch,
    InvalidResolution,
    NonpositiveHorizon,
    NoOverlap,
    TimeMismatch,
    UnsupportedAnalytic,
)
from futurecone.libs.geometry import (
    build_hull,
    cloud_signed_distance,
    direction_fan,
    hull_signed_distance,
    project_into_ball,
    sphere_points,
)

logger = logging.getLogger(__name__)

MIN_CONTROLS = 8
BALL = 'ball'
CLOUD = 'cloud'


@dataclass(frozen=True, eq=False)
class Leaf:
    """Positions reachable at exactly `time`: a closed ball or a point cloud with its hull.

    `convex` is False for clouds whose true set is not convex (Dubins); containment in
    such an outer leaf is judged against the hull and reported as approximate.
    """
    time: float
    kind: str
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None
    points: Optional[np.ndarray] = None
    hull: object = field(default=None, repr=False)
    convex: bool = True

    @classmethod
    def ball(cls, time, center, radius):
        if radius < 0:
            raise ValueError('leaf radius must be >= 0, got %r' % (radius,))
        center = np.array(center, dtype=float)
        center.setflags(write=False)
        return cls(time=float(time), kind=BALL, center=center, radius=float(radius))

    @classmethod
    def cloud(cls, time, points, convex=True):
        points = np.atleast_2d(np.array(points, dtype=float))
        if points.shape[0] == 0:
            raise ValueError('point-cloud leaf needs at least one point')
        points.setflags(write=False)
        return cls(time=float(time), kind=CLOUD, points=points, hull=build_hull(points), convex=convex)

    @property
    def is_ball(self):
        return self.kind == BALL

    @property
    def dimension(self):
        return self.center.size if self.is_ball else self.points.shape[1]

    def margins(self, points):
        """Signed clearance of each point: positive inside the leaf, negative outside."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.is_ball:
            return self.radius - np.linalg.norm(points - self.center, axis=1)
        if self.hull is None:
            return cloud_signed_distance(points, self.points)
        return hull_signed_distance(points, self.hull)

    def sample_points(self):
        """Points that stand in for this leaf when it is the inner set.

        For clouds the hull vertices suffice: the signed distance to a convex set is concave,
        so its minimum over the cloud is reached at a hull vertex.
        """
        if self.is_ball:
            if self.radius == 0.0:
                return self.center.reshape(1, -1)
            return sphere_points(self.center, self.radius, Settings()['SAMPLING']['BALL_BOUNDARY_POINTS'])
        if self.hull is None:
            return np.array(self.points)
        return self.points[self.hull.vertices]

    def boundary_points(self, n=None):
        """Outline for export and plotting: circle/sphere samples or the hull vertex ring."""
        if self.is_ball:
            n = n or Settings()['SAMPLING']['BALL_BOUNDARY_POINTS']
            return sphere_points(self.center, self.radius, n)
        return self.sample_points()

    def project(self, point):
        """Closest point of the leaf to `point` (nearest cloud point for clouds)."""
        point = np.asarray(point, dtype=float)
        if self.is_ball:
            return project_into_ball(point, self.center, self.radius)
        if self.margins(point)[0] >= 0.0:
            return point
        gaps = np.linalg.norm(self.points - point, axis=1)
        return np.array(self.points[int(np.argmin(gaps))])


@dataclass(frozen=True, eq=False)
class FutureCone:
    """Vertex state, model, window and one leaf per grid time."""
    vertex: object
    model: object
    t_start: float
    t_end: float
    leaves: Tuple[Leaf, ...]

    def __post_init__(self):
        tol = Settings()['TIME_TOL']
        if not self.t_end > self.t_start:
            raise BadWindow('t_end (%r) must be > t_start (%r)' % (self.t_end, self.t_start))
        if self.vertex.time > self.t_start + tol:
            raise BadWindow('vertex time %r is after t_start %r' % (self.vertex.time, self.t_start))
        object.__setattr__(self, 'leaves', tuple(self.leaves))
        times = self.times
        if times.size and (np.any(np.diff(times) <= 0.0)
                           or times[0] < self.t_start - tol or times[-1] > self.t_end + tol):
            raise BadWindow('leaf times must be strictly increasing inside [t_start, t_end]')

    @property
    def times(self):
        return np.array([leaf.time for leaf in self.leaves])

    @property
    def approximate(self):
        return any(not leaf.convex for leaf in self.leaves)

    def leaf_at(self, t):
        """The leaf at grid time t (within TIME_TOL)."""
        times = self.times
        idx = int(np.argmin(np.abs(times - t))) if times.size else -1
        if idx < 0 or abs(times[idx] - t) > Settings()['TIME_TOL']:
            raise TimeMismatch('no leaf at t=%r' % (t,))
        return self.leaves[idx]

    def restricted(self, after):
        """The same cone keeping only leaves strictly later than `after`."""
        tol = Settings()['TIME_TOL']
        kept = tuple(leaf for leaf in self.leaves if leaf.time > after + tol)
        if not kept:
            raise NoOverlap('cone has no leaves after t=%r' % (after,))
        return FutureCone(self.vertex, self.model, max(self.t_start, after), self.t_end, kept)


@dataclass(frozen=True)
class ContainmentVerdict:
    contained: bool
    margin: float

    def to_dict(self):
        return OrderedDict([('contained', self.contained), ('margin', self.margin)])


@dataclass(frozen=True)
class ContainmentReport:
    """Per-time verdicts of one cone inside another.

    window is the contiguous run of contained grid times that starts at
    first_containment_time.
    """
    per_time: Tuple[Tuple[float, ContainmentVerdict], ...]
    first_containment_time: Optional[float]
    window: Optional[Tuple[float, float]]
    tol: float
    approximate: bool = False

    @property
    def contained_any(self):
        return self.first_containment_time is not None

    @property
    def margins(self):
        return np.array([verdict.margin for _, verdict in self.per_time])

    @property
    def min_margin(self):
        return float(self.margins.min())

    @property
    def max_margin(self):
        return float(self.margins.max())

    def to_dict(self):
        return OrderedDict([
            ('first_containment_time', self.first_containment_time),
            ('window', None if self.window is None else list(self.window)),
            ('tol', self.tol),
            ('approximate', self.approximate),
            ('min_margin', self.min_margin),
            ('max_margin', self.max_margin),
            ('per_time', [OrderedDict([('time', t)], **v.to_dict()) for t, v in self.per_time]),
        ])


def analytic_leaf(model, vertex, t):
    """Closed-form leaf: a ball for bounded speed and for the unbudgeted double integrator."""
    horizon = t - vertex.time
    if not horizon > 0:
        raise NonpositiveHorizon('leaf time %r must be after vertex time %r' % (t, vertex.time))
    if isinstance(model, BoundedSpeed):
        return Leaf.ball(t, vertex.position, model.v_max * horizon)
    if isinstance(model, DoubleIntegrator) and not model.budgeted:
        center = vertex.position + vertex.velocity_or_zero() * horizon
        return Leaf.ball(t, center, 0.5 * model.a_max * horizon * horizon)
    raise UnsupportedAnalytic('no closed-form leaf for %s%s' % (
        model.name, ' with a delta-v budget' if isinstance(model, DoubleIntegrator) else ''))


def _unit_ball_from_halton(samples, dimension):
    """Map Halton points in [0,1)^q to uniformly spread points of the unit disk/ball."""
    if dimension == 2:
        angle = 2.0 * math.pi * samples[:, 0]
        radius = np.sqrt(samples[:, 1])
        return np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)
    z = 2.0 * samples[:, 0] - 1.0
    phi = 2.0 * math.pi * samples[:, 1]
    ring = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    radius = np.cbrt(samples[:, 2])
    return radius[:, None] * np.stack([ring * np.cos(phi), ring * np.sin(phi), z], axis=1)


def _lattice_palette(model, dimension, levels):
    if model.control_kind is ControlKind.TURN_RATE:
        return np.linspace(-model.bound, model.bound, levels)
    if dimension == 2:
        dirs = direction_fan(2, 2 * (levels - 1))
    else:
        dirs = np.vstack([np.eye(3), -np.eye(3)])
    return np.vstack([np.zeros((1, dimension)), model.bound * dirs])


def _control_families(model, dimension, n_controls, n_switches, horizon):
    """Deterministic control-sequence families as (controls, durations) pairs.

    controls is (S, K) for turn rates or (S, K, d) for vector controls; durations (S, K).
    """
    sampling = Settings()['SAMPLING']
    segments = n_switches + 1
    uniform = np.full(segments, horizon / segments)
    n_boundary = n_controls // 2
    n_interior = n_controls - n_boundary
    turn = model.control_kind is ControlKind.TURN_RATE
    bound = model.bound
    families = []

    def constant(values):
        values = np.asarray(values, dtype=float)
        repeated = np.repeat(values[:, None, ...], segments, axis=1)
        return repeated, np.tile(uniform, (values.shape[0], 1))

    # boundary sweep, held constant over the horizon
    if turn:
        families.append(constant(np.linspace(-bound, bound, n_boundary | 1)))
    else:
        families.append(constant(bound * direction_fan(dimension, n_boundary)))

    # low-discrepancy interior, one Halton block per segment
    q = 1 if turn else (2 if dimension == 2 else 3)
    halton = qmc.Halton(d=q * segments, scramble=False).random(n_interior)
    if turn:
        controls = bound * (2.0 * halton - 1.0)
    else:
        blocks = [_unit_ball_from_halton(halton[:, k * q:(k + 1) * q], dimension) for k in range(segments)]
        controls = bound * np.stack(blocks, axis=1)
    families.append((controls, np.tile(uniform, (n_interior, 1))))

    # coarse bang/coast lattice when it stays small
    palette = _lattice_palette(model, dimension, sampling['LATTICE_LEVELS'])
    if len(palette) ** segments <= sampling['LATTICE_CAP']:
        combos = np.array([np.stack(seq) for seq in itertools.product(palette, repeat=segments)])
        families.append((combos, np.tile(uniform, (combos.shape[0], 1))))

    if turn:
        families.append(_turn_straight_families(bound, horizon, max(n_controls // 4, 2)))
    return families


def _turn_straight_families(rate, horizon, n_fractions):
    """Two-segment turn/straight, straight/turn and turn/turn sequences with a swept switch time."""
    fractions = np.linspace(0.0, 1.0, n_fractions)
    pairs = [(rate, 0.0), (-rate, 0.0), (0.0, rate), (0.0, -rate), (rate, -rate), (-rate, rate)]
    controls = np.array([[a, b] for a, b in pairs for _ in fractions])
    first = np.tile(fractions, len(pairs)) * horizon
    durations = np.stack([first, horizon - first], axis=1)
    return controls, durations


def _propagate_sequences(model, vertex, controls, durations):
    """Endpoints of a batch of piecewise-constant control sequences started at the vertex."""
    n = controls.shape[0]
    positions = np.repeat(vertex.position[None, :], n, axis=0)
    velocities = np.repeat(vertex.velocity_or_zero()[None, :], n, axis=0)
    headings = np.full(n, vertex.heading_or_zero())
    remaining = remaining_budget(model, vertex)
    budget = None if remaining is None else np.full(n, float(remaining))
    for k in range(controls.shape[1]):
        u = controls[:, k]
        dt = durations[:, k]
        if budget is not None:
            spend = np.linalg.norm(u, axis=1) * dt
            scale = np.where(spend > budget, budget / np.where(spend > 0.0, spend, 1.0), 1.0)
            u = u * scale[:, None]
            budget = budget - np.minimum(spend, budget)
        positions, velocities, headings = model.propagate(positions, velocities, headings, u, dt)
    return positions


def sampled_leaf(model, vertex, t, n_controls=None, n_switches=None):
    """Point-cloud leaf from a deterministic sweep of piecewise-constant controls.

    The sweep always includes the extremal constant controls, so the hull approaches the
    true leaf from inside.
    """
    sampling = Settings()['SAMPLING']
    n_controls = sampling['N_CONTROLS'] if n_controls is None else n_controls
    n_switches = sampling['N_SWITCHES'] if n_switches is None else n_switches
    if n_controls < MIN_CONTROLS:
        raise InvalidResolution('n_controls must be >= %d, got %r' % (MIN_CONTROLS, n_controls))
    if n_switches < 0:
        raise InvalidResolution('n_switches must be >= 0, got %r' % (n_switches,))
    horizon = t - vertex.time
    if not horizon > 0:
        raise NonpositiveHorizon('leaf time %r must be after vertex time %r' % (t, vertex.time))

    endpoints = [_propagate_sequences(model, vertex, controls, durations)
                 for controls, durations in _control_families(model, vertex.dimension, n_controls,
                                                              n_switches, horizon)]
    points = np.vstack(endpoints)
    logger.debug('sampled %s leaf at t=%.6g: %d points', model.name, t, points.shape[0])
    return Leaf.cloud(t, points, convex=not isinstance(model, Dubins))


def sampling_tolerance(model, horizon, n_controls=None):
    """Resolution of a sampled leaf: arc spacing of its boundary sweep times the leaf reach."""
    n_controls = Settings()['SAMPLING']['N_CONTROLS'] if n_controls is None else n_controls
    if isinstance(model, BoundedSpeed):
        reach = model.v_max * horizon
    elif isinstance(model, DoubleIntegrator):
        reach = 0.5 * model.a_max * horizon * horizon
    else:
        reach = model.speed * horizon
    return reach * 2.0 * math.pi / max(n_controls // 2, 1)


def _build_leaf(model, vertex, t, method, fallback, n_controls, n_switches):
    if t <= vertex.time + Settings()['TIME_TOL']:
        return Leaf.ball(t, vertex.position, 0.0)
    if method == 'sampled':
        return sampled_leaf(model, vertex, t, n_controls, n_switches)
    try:
        return analytic_leaf(model, vertex, t)
    except UnsupportedAnalytic:
        if not fallback:
            raise
        logger.debug('no analytic leaf for %s at t=%.6g, sampling instead', model.name, t)
        return sampled_leaf(model, vertex, t, n_controls, n_switches)


def build_cone_on_grid(model, vertex, times, method='analytic', fallback=False,
                       n_controls=None, n_switches=None, workers=1):
    """Leaves at the given times, in order. Leaf builds may run on a thread pool."""
    if method not in ('analytic', 'sampled'):
        raise ValueError('method must be analytic or sampled, got %r' % (method,))

    def build(t):
        return _build_leaf(model, vertex, float(t), method, fallback, n_controls, n_switches)

    if workers > 1 and len(times) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return tuple(pool.map(build, times))
    return tuple(build(t) for t in times)


def build_cone(model, vertex, t_start, t_end, n_leaves, method='analytic', fallback=False,
               n_controls=None, n_switches=None, workers=1):
    """Future cone on the uniform n_leaves grid over [t_start, t_end] (t_end included).

    With method='analytic' and fallback=True, leaves without a closed form are sampled.
    """
    if not t_end > t_start:
        raise BadWindow('t_end (%r) must be > t_start (%r)' % (t_end, t_start))
    if vertex.time > t_start + Settings()['TIME_TOL']:
        raise BadWindow('vertex time %r is after t_start %r' % (vertex.time, t_start))
    if isinstance(n_leaves, bool) or not isinstance(n_leaves, (int, np.integer)) or n_leaves < 1:
        raise InvalidResolution('n_leaves must be a positive integer, got %r' % (n_leaves,))
    times = np.array([t_end]) if n_leaves == 1 else np.linspace(t_start, t_end, n_leaves)
    leaves = build_cone_on_grid(model, vertex, times, method, fallback, n_controls, n_switches, workers)
    return FutureCone(vertex, model, float(t_start), float(t_end), leaves)


def _default_tol(tol):
    return Settings()['CONTAINMENT_TOL'] if tol is None else tol


def leaf_contains(outer, inner, tol=None):
    """Decide inner ⊆ outer at one time with a signed margin (closed sets: margin >= -tol)."""
    tol = _default_tol(tol)
    if abs(outer.time - inner.time) > Settings()['TIME_TOL']:
        raise TimeMismatch('leaf times differ: %r vs %r' % (outer.time, inner.time))
    if outer.is_ball and inner.is_ball:
        margin = outer.radius - (float(np.linalg.norm(inner.center - outer.center)) + inner.radius)
    else:
        margin = float(outer.margins(inner.sample_points()).min())
    return ContainmentVerdict(contained=bool(margin >= -tol), margin=margin)


def _aligned_pairs(outer, inner):
    tol = Settings()['TIME_TOL']
    lo = max(outer.t_start, inner.t_start)
    hi = min(outer.t_end, inner.t_end)
    if lo > hi + tol:
        raise NoOverlap('windows [%r, %r] and [%r, %r] do not overlap'
                        % (outer.t_start, outer.t_end, inner.t_start, inner.t_end))
    outer_leaves = [leaf for leaf in outer.leaves if lo - tol <= leaf.time <= hi + tol]
    inner_leaves = [leaf for leaf in inner.leaves if lo - tol <= leaf.time <= hi + tol]
    if len(outer_leaves) != len(inner_leaves) or not outer_leaves:
        raise GridMismatch('grids do not align on the overlap [%r, %r]' % (lo, hi))
    for a, b in zip(outer_leaves, inner_leaves):
        if abs(a.time - b.time) > tol:
            raise GridMismatch('leaf times %r and %r differ by more than %g s' % (a.time, b.time, tol))
    return list(zip(outer_leaves, inner_leaves))


def cone_contains(outer, inner, tol=None):
    """Leaf-by-leaf containment of `inner` in `outer` over the shared grid."""
    tol = _default_tol(tol)
    pairs = _aligned_pairs(outer, inner)
    per_time = tuple((a.time, leaf_contains(a, b, tol)) for a, b in pairs)

    first = None
    window = None
    for idx, (t, verdict) in enumerate(per_time):
        if verdict.contained:
            first = t
            last = t
            for t_next, v_next in per_time[idx + 1:]:
                if not v_next.contained:
                    break
                last = t_next
            window = (first, last)
            break

    approximate = any(not a.convex for a, _ in pairs)
    if approximate:
        logger.warning('containment judged against the hull of a non-convex leaf; verdicts are approximate')
    return ContainmentReport(per_time=per_time, first_containment_time=first, window=window,
                             tol=tol, approximate=approximate)


def cone_nests(outer, inner, tol=None):
    """True when every shared leaf of `inner` lies in `outer`, e.g. a later-vertex cone in its parent."""
    report = cone_contains(outer, inner, tol)
    return all(verdict.contained for _, verdict in report.per_time)
