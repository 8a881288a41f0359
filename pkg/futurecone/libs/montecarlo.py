"""
    Author: julij.jegorov
    Date: 15/10/2026
    Description: Monte Carlo validation of the containment criterion. Sufficiency runs
                 (containment => capture by leaf-plan pursuit), necessity runs (no
                 containment => greedy escape) and the decoy experiment, all seeded per
                 scenario/trial so every failure can be replayed.
"""

import logging
import math
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from futurecone.libs.config import Settings
from futurecone.libs.cones import build_cone, cone_contains
from futurecone.libs.dynamics import Dubins, VehicleState, model_from_dict
from futurecone.libs.engagement import EngagementConfig, simulate
from futurecone.libs.errors import ConfigError, EmptyPolicies, UnsatisfiableDistribution
from futurecone.libs.geometry import unit
from futurecone.libs.strategies import (
    GreedyEscape,
    LeafPlanPursuit,
    RandomManeuver,
    StraightLine,
    strategy_from_dict,
)

logger = logging.getLogger(__name__)

SUFFICIENCY = 'sufficiency'
NECESSITY = 'necessity'
DECOY = 'decoy'
UNIFORM_RANDOM = 'uniform-random'
ONE_PER_TARGET = 'one-per-target'

FINITE_POLICY_NOTE = ('Evader and pursuer behaviour is drawn from the finite policy set listed here; '
                      'the criterion quantifies over every admissible maneuver, so a clean run is '
                      'evidence, not proof.')


def _range(name, value):
    lo, hi = (value, value) if isinstance(value, (int, float)) else tuple(value)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo <= 0 or hi < lo:
        raise ConfigError('%s must be a positive range [lo, hi], got %r' % (name, value))
    return float(lo), float(hi)


@dataclass(frozen=True)
class ModelRange:
    """A model family with per-parameter [lo, hi] ranges drawn uniformly."""
    model: str
    params: Tuple[Tuple[str, Tuple[float, float]], ...]

    @classmethod
    def from_dict(cls, data):
        params = tuple((key, _range('%s.%s' % (data.get('model'), key), value))
                       for key, value in data.get('params', {}).items())
        out = cls(model=data.get('model'), params=params)
        out.draw(np.random.default_rng(0))  # parameter names and kinds are checked here
        return out

    def draw(self, rng):
        values = OrderedDict((key, float(rng.uniform(lo, hi)) if hi > lo else lo) for key, (lo, hi) in self.params)
        return model_from_dict({'model': self.model, 'params': values})

    def to_dict(self):
        return OrderedDict([('model', self.model),
                            ('params', OrderedDict((k, [lo, hi]) for k, (lo, hi) in self.params))])


@dataclass(frozen=True)
class ScenarioDistribution:
    """Random two-player scenarios: pursuer at the origin, evader at a random bearing."""
    dimension: int
    pursuer: ModelRange
    evader: ModelRange
    separation: Tuple[float, float]
    window: Tuple[float, float]
    n_leaves: int = 101
    dt: float = 0.01
    capture_radius: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ConfigError('dimension must be 2 or 3, got %r' % (self.dimension,))
        object.__setattr__(self, 'separation', _range('separation', self.separation))
        t_start, t_end = self.window
        if not t_end > t_start >= 0:
            raise ConfigError('window must satisfy 0 <= t_start < t_end, got %r' % (self.window,))
        object.__setattr__(self, 'window', (float(t_start), float(t_end)))
        if self.n_leaves < 1:
            raise ConfigError('n_leaves must be >= 1, got %r' % (self.n_leaves,))

    @classmethod
    def from_dict(cls, data, seed=0):
        try:
            return cls(dimension=data['dimension'],
                       pursuer=ModelRange.from_dict(data['pursuer']),
                       evader=ModelRange.from_dict(data['evader']),
                       separation=data['separation'],
                       window=tuple(data['window']),
                       n_leaves=data.get('n_leaves', 101),
                       dt=data.get('dt', 0.01),
                       capture_radius=data.get('capture_radius', Settings()['CAPTURE_RADIUS']),
                       seed=seed)
        except KeyError as e:
            raise ConfigError('suite definition is missing %s' % e)

    def engagement_config(self):
        return EngagementConfig(dt=self.dt, t_max=self.window[1], capture_radius=self.capture_radius)

    def draw(self, index, attempt):
        """Scenario `index`, draw `attempt`; depends only on (seed, index, attempt)."""
        rng = np.random.default_rng(np.random.SeedSequence([self.seed, index, attempt]))
        p_model = self.pursuer.draw(rng)
        e_model = self.evader.draw(rng)
        separation = float(rng.uniform(*self.separation)) if self.separation[1] > self.separation[0] \
            else self.separation[0]
        bearing = unit(rng.standard_normal(self.dimension))
        p_heading = float(rng.uniform(-math.pi, math.pi)) if isinstance(p_model, Dubins) else None
        e_heading = float(rng.uniform(-math.pi, math.pi)) if isinstance(e_model, Dubins) else None
        p_state = VehicleState(position=np.zeros(self.dimension), heading=p_heading)
        e_state = VehicleState(position=separation * bearing, heading=e_heading)
        return Scenario(index, attempt, p_model, p_state, e_model, e_state, separation)

    def to_dict(self):
        return OrderedDict([
            ('dimension', self.dimension),
            ('pursuer', self.pursuer.to_dict()),
            ('evader', self.evader.to_dict()),
            ('separation', list(self.separation)),
            ('window', list(self.window)),
            ('n_leaves', self.n_leaves),
            ('dt', self.dt),
            ('capture_radius', self.capture_radius),
            ('seed', self.seed),
        ])


@dataclass(frozen=True, eq=False)
class Scenario:
    index: int
    attempt: int
    pursuer_model: object
    pursuer_state: VehicleState
    evader_model: object
    evader_state: VehicleState
    separation: float

    @property
    def scale(self):
        return self.separation

    def seed_entropy(self, master_seed):
        return [master_seed, self.index, self.attempt]


@dataclass(frozen=True)
class ValidationReport:
    """Aggregate of one validation run; `failures` are replayable descriptors."""
    mode: str
    n_scenarios: int
    n_policies_per_scenario: int
    successes: int
    failures: Tuple[dict, ...]
    robust: bool
    robust_margin_fraction: float
    seed: int
    policies: Tuple[dict, ...] = field(default=())
    note: str = FINITE_POLICY_NOTE

    @property
    def n_runs(self):
        return self.n_scenarios * self.n_policies_per_scenario

    @property
    def empty(self):
        return self.n_runs == 0

    @property
    def success_rate(self):
        if self.empty:
            return None
        return self.successes / float(self.n_runs)

    def to_dict(self):
        return OrderedDict([
            ('mode', self.mode),
            ('note', self.note),
            ('seed', self.seed),
            ('n_scenarios', self.n_scenarios),
            ('n_policies_per_scenario', self.n_policies_per_scenario),
            ('policies', list(self.policies)),
            ('successes', self.successes),
            ('n_failures', len(self.failures)),
            ('success_rate', self.success_rate),
            ('empty', self.empty),
            ('robust', self.robust),
            ('robust_margin_fraction', self.robust_margin_fraction),
            ('failures', list(self.failures)),
        ])


def _containment(dist, scenario):
    t_start, t_end = dist.window
    p_cone = build_cone(scenario.pursuer_model, scenario.pursuer_state, t_start, t_end, dist.n_leaves,
                        method='analytic', fallback=True)
    e_cone = build_cone(scenario.evader_model, scenario.evader_state, t_start, t_end, dist.n_leaves,
                        method='analytic', fallback=True)
    return cone_contains(p_cone, e_cone)


def _accepts(mode, report, robust_margin):
    if mode == SUFFICIENCY:
        if robust_margin > 0:
            return report.max_margin >= robust_margin
        return report.contained_any
    if robust_margin > 0:
        return report.max_margin <= -robust_margin
    return not report.contained_any


def _filtered_scenario(mode, dist, index, fraction):
    max_rejections = Settings()['VALIDATION']['MAX_REJECTIONS']
    for attempt in range(max_rejections):
        scenario = dist.draw(index, attempt)
        report = _containment(dist, scenario)
        if _accepts(mode, report, fraction * scenario.scale):
            return scenario
        logger.debug('%s scenario %d attempt %d rejected (margins %.3g..%.3g)',
                     mode, index, attempt, report.min_margin, report.max_margin)
    raise UnsatisfiableDistribution('%d consecutive %s draws failed the containment filter'
                                    % (max_rejections, mode))


def _seeded_policy(kind, scenario, master_seed):
    """RandomManeuver seeds are mixed with the scenario so each scenario gets its own stream."""
    if not isinstance(kind, RandomManeuver):
        return kind
    entropy = [int(kind.seed)] + scenario.seed_entropy(master_seed)
    derived = int(np.random.SeedSequence(entropy).generate_state(1)[0])
    return RandomManeuver(seed=derived, dwell=kind.dwell)


def _descriptor(mode, master_seed, scenario, config, p_kind, e_kind, result):
    return OrderedDict([
        ('mode', mode),
        ('seed', master_seed),
        ('index', scenario.index),
        ('attempt', scenario.attempt),
        ('pursuer', OrderedDict([('model', scenario.pursuer_model.to_dict()),
                                 ('state', scenario.pursuer_state.to_dict()),
                                 ('strategy', p_kind.to_dict())])),
        ('evader', OrderedDict([('model', scenario.evader_model.to_dict()),
                                ('state', scenario.evader_state.to_dict()),
                                ('strategy', e_kind.to_dict())])),
        ('engagement', config.to_dict()),
        ('result', result.outcome_dict()),
    ])


def replay_failure(descriptor):
    """Re-run the engagement a failure descriptor records."""
    def player(data):
        return (model_from_dict(data['model']), VehicleState.from_dict(data['state']),
                strategy_from_dict(data['strategy']))

    config = EngagementConfig(**descriptor['engagement'])
    return simulate(config, player(descriptor['pursuer']), player(descriptor['evader']))


def _run_scenario(mode, dist, index, policies, fraction):
    scenario = _filtered_scenario(mode, dist, index, fraction)
    config = dist.engagement_config()
    successes = 0
    failures = []
    for policy in policies:
        if mode == SUFFICIENCY:
            p_kind = LeafPlanPursuit(replan_every=Settings()['PURSUIT']['REPLAN_EVERY'])
            e_kind = _seeded_policy(policy, scenario, dist.seed)
        else:
            p_kind = policy
            e_kind = GreedyEscape(horizon=Settings()['ESCAPE']['HORIZON'])
        result = simulate(config,
                          (scenario.pursuer_model, scenario.pursuer_state, p_kind),
                          (scenario.evader_model, scenario.evader_state, e_kind))
        if mode == SUFFICIENCY:
            ok = result.outcome.is_intercept and result.outcome.t <= dist.window[1]
        else:
            ok = not result.outcome.is_intercept
        if ok:
            successes += 1
        else:
            failures.append(_descriptor(mode, dist.seed, scenario, config, p_kind, e_kind, result))
    return successes, failures


def _validate(mode, dist, n_scenarios, policies, robust_margin_fraction=None, workers=None):
    if isinstance(n_scenarios, bool) or not isinstance(n_scenarios, int) or n_scenarios < 0:
        raise ConfigError('n_scenarios must be a non-negative integer, got %r' % (n_scenarios,))
    policies = [strategy_from_dict(p) if isinstance(p, (str, dict)) else p for p in policies]
    if not policies:
        raise EmptyPolicies('%s validation needs at least one policy' % mode)
    fraction = Settings()['VALIDATION']['ROBUST_MARGIN_FRACTION'] \
        if robust_margin_fraction is None else robust_margin_fraction
    robust = fraction > 0
    if not robust:
        logger.warning('robust margin filter is off; boundary scenarios are admitted and results are non-robust')
    workers = Settings().worker_count() if workers is None else workers

    def run(index):
        return _run_scenario(mode, dist, index, policies, fraction)

    if workers > 1 and n_scenarios > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(n_scenarios)))
    else:
        outcomes = [run(index) for index in range(n_scenarios)]

    successes = sum(ok for ok, _ in outcomes)
    failures = tuple(f for _, fails in outcomes for f in fails)
    report = ValidationReport(mode=mode, n_scenarios=n_scenarios, n_policies_per_scenario=len(policies),
                              successes=successes, failures=failures, robust=robust,
                              robust_margin_fraction=fraction, seed=dist.seed,
                              policies=tuple(p.to_dict() for p in policies))
    logger.info('%s: %d/%d runs succeeded', mode, successes, report.n_runs)
    return report


def validate_sufficiency(dist, n_scenarios, policies, robust_margin_fraction=None, workers=None):
    """Leaf-plan pursuit against each evader policy on scenarios where containment holds."""
    return _validate(SUFFICIENCY, dist, n_scenarios, policies, robust_margin_fraction, workers)


def validate_necessity(dist, n_scenarios, pursuit_policies, robust_margin_fraction=None, workers=None):
    """Greedy escape against each pursuit policy on scenarios where containment never holds."""
    return _validate(NECESSITY, dist, n_scenarios, pursuit_policies, robust_margin_fraction, workers)


@dataclass(frozen=True)
class DecoyScenario:
    """Interceptors against real targets hidden among decoys with the same model."""
    n_interceptors: int
    n_targets_real: int
    n_decoys: int
    interceptor_model: object
    target_model: object
    assignment: str = UNIFORM_RANDOM
    seed: int = 0
    separation: Tuple[float, float] = (0.5, 1.0)
    dimension: int = 2

    def __post_init__(self):
        for name in ('n_interceptors', 'n_targets_real'):
            if getattr(self, name) < 1:
                raise ConfigError('%s must be >= 1, got %r' % (name, getattr(self, name)))
        if self.n_decoys < 0:
            raise ConfigError('n_decoys must be >= 0, got %r' % (self.n_decoys,))
        if self.assignment not in (UNIFORM_RANDOM, ONE_PER_TARGET):
            raise ConfigError('assignment must be %s or %s, got %r'
                              % (UNIFORM_RANDOM, ONE_PER_TARGET, self.assignment))
        if self.dimension not in (2, 3):
            raise ConfigError('dimension must be 2 or 3, got %r' % (self.dimension,))
        object.__setattr__(self, 'separation', _range('separation', self.separation))

    @property
    def n_targets(self):
        return self.n_targets_real + self.n_decoys

    @property
    def coverage_shortfall(self):
        return self.n_interceptors < self.n_targets

    @classmethod
    def from_dict(cls, data, seed=0):
        try:
            return cls(n_interceptors=data['n_interceptors'], n_targets_real=data['n_targets_real'],
                       n_decoys=data['n_decoys'], interceptor_model=model_from_dict(data['interceptor']),
                       target_model=model_from_dict(data['target']),
                       assignment=data.get('assignment', UNIFORM_RANDOM), seed=seed,
                       separation=tuple(data.get('separation', (0.5, 1.0))),
                       dimension=data.get('dimension', 2))
        except KeyError as e:
            raise ConfigError('decoy definition is missing %s' % e)

    def to_dict(self):
        return OrderedDict([
            ('dimension', self.dimension),
            ('n_interceptors', self.n_interceptors),
            ('n_targets_real', self.n_targets_real),
            ('n_decoys', self.n_decoys),
            ('interceptor', self.interceptor_model.to_dict()),
            ('target', self.target_model.to_dict()),
            ('assignment', self.assignment),
            ('separation', list(self.separation)),
            ('seed', self.seed),
        ])


@dataclass(frozen=True)
class DecoyReport:
    n_trials: int
    interceptions: int
    all_real_intercepted: int
    real_hits: Optional[int]
    expected_hit_rate: Optional[float]
    unengaged_trials: int
    coverage_shortfall: bool
    scenario: dict = field(default_factory=dict)

    def _rate(self, count):
        return None if self.n_trials == 0 or count is None else count / float(self.n_trials)

    @property
    def interception_rate(self):
        return self._rate(self.interceptions)

    @property
    def all_real_intercepted_rate(self):
        return self._rate(self.all_real_intercepted)

    @property
    def real_hit_rate(self):
        return self._rate(self.real_hits)

    @property
    def hit_rate_half_width(self):
        """3-sigma binomial half-width around the expected hit rate."""
        if self.expected_hit_rate is None or self.n_trials == 0:
            return None
        p = self.expected_hit_rate
        return 3.0 * math.sqrt(p * (1.0 - p) / self.n_trials)

    @property
    def expected_band(self):
        if self.hit_rate_half_width is None:
            return None
        return (self.expected_hit_rate - self.hit_rate_half_width,
                self.expected_hit_rate + self.hit_rate_half_width)

    @property
    def claim_holds(self):
        """Every trial intercepts something, the hit rate sits in its band, and full coverage
        (when there are enough interceptors) catches every real target."""
        if self.n_trials == 0:
            return False
        if self.interceptions != self.n_trials:
            return False
        band = self.expected_band
        if band is not None and not band[0] <= self.real_hit_rate <= band[1]:
            return False
        if not self.coverage_shortfall and self.all_real_intercepted != self.n_trials:
            return False
        return True

    def to_dict(self):
        band = self.expected_band
        return OrderedDict([
            ('mode', DECOY),
            ('scenario', self.scenario),
            ('n_trials', self.n_trials),
            ('interception_rate', self.interception_rate),
            ('all_real_intercepted_rate', self.all_real_intercepted_rate),
            ('real_hit_rate', self.real_hit_rate),
            ('expected_hit_rate', self.expected_hit_rate),
            ('hit_rate_half_width', self.hit_rate_half_width),
            ('expected_band', None if band is None else list(band)),
            ('unengaged_trials', self.unengaged_trials),
            ('coverage_shortfall', self.coverage_shortfall),
            ('claim_holds', self.claim_holds),
        ])


def _assign(sc, rng):
    """Target index per interceptor; interceptors see positions only, never labels."""
    if sc.assignment == UNIFORM_RANDOM:
        return [int(rng.integers(sc.n_targets)) for _ in range(sc.n_interceptors)]
    return [i % sc.n_targets for i in range(sc.n_interceptors)]


def _decoy_trial(sc, config, trial):
    rng = np.random.default_rng(np.random.SeedSequence([sc.seed, trial]))
    max_rejections = Settings()['VALIDATION']['MAX_REJECTIONS']
    pursuit = Settings()['PURSUIT']
    n_leaves = int(round(config.t_max / pursuit['PLAN_GRID_STEP'])) + 1
    dubins_target = isinstance(sc.target_model, Dubins)
    origin = VehicleState(position=np.zeros(sc.dimension),
                          heading=0.0 if isinstance(sc.interceptor_model, Dubins) else None)
    p_cone = build_cone(sc.interceptor_model, origin, 0.0, config.t_max, n_leaves, fallback=True)
    for _ in range(max_rejections):
        positions = [rng.uniform(*sc.separation) * unit(rng.standard_normal(sc.dimension))
                     for _ in range(sc.n_targets)]
        headings = [unit(rng.standard_normal(sc.dimension)) for _ in range(sc.n_targets)]
        targets = [VehicleState(position=p, heading=math.atan2(h[1], h[0]) if dubins_target else None)
                   for p, h in zip(positions, headings)]
        cones = [build_cone(sc.target_model, t, 0.0, config.t_max, n_leaves, fallback=True) for t in targets]
        if all(cone_contains(p_cone, cone).contained_any for cone in cones):
            break
    else:
        raise UnsatisfiableDistribution('%d consecutive decoy layouts failed the pairing filter' % max_rejections)

    # real targets are the first n_targets_real before shuffling
    order = rng.permutation(sc.n_targets)
    is_real = [int(j) < sc.n_targets_real for j in order]
    shown = [targets[int(j)] for j in order]
    shown_dirs = [headings[int(j)] for j in order]
    assignment = _assign(sc, rng)

    intercepted = set()
    for target_index in assignment:
        result = simulate(config,
                          (sc.interceptor_model, origin, LeafPlanPursuit(pursuit['REPLAN_EVERY'])),
                          (sc.target_model, shown[target_index], StraightLine(tuple(shown_dirs[target_index]))))
        if result.outcome.is_intercept:
            intercepted.add(target_index)
    real = {i for i, flag in enumerate(is_real) if flag}
    hit = None
    if sc.n_interceptors == 1:
        hit = assignment[0] in intercepted and is_real[assignment[0]]
    return OrderedDict([
        ('intercepted_any', bool(intercepted)),
        ('all_real', real <= intercepted),
        ('real_hit', hit),
        ('unengaged', len(set(assignment)) < sc.n_targets),
    ])


def run_decoy(sc, config, n_trials, workers=None):
    """Repeat the decoy engagement n_trials times; assignments are fixed at t=0."""
    if isinstance(n_trials, bool) or not isinstance(n_trials, int) or n_trials < 0:
        raise ConfigError('n_trials must be a non-negative integer, got %r' % (n_trials,))
    workers = Settings().worker_count() if workers is None else workers

    def run(trial):
        return _decoy_trial(sc, config, trial)

    if workers > 1 and n_trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(run, range(n_trials)))
    else:
        trials = [run(trial) for trial in range(n_trials)]

    single = sc.n_interceptors == 1
    expected = sc.n_targets_real / float(sc.n_targets) if single and sc.assignment == UNIFORM_RANDOM else None
    report = DecoyReport(
        n_trials=n_trials,
        interceptions=sum(t['intercepted_any'] for t in trials),
        all_real_intercepted=sum(t['all_real'] for t in trials),
        real_hits=sum(t['real_hit'] for t in trials) if single else None,
        expected_hit_rate=expected,
        unengaged_trials=sum(t['unengaged'] for t in trials),
        coverage_shortfall=sc.coverage_shortfall,
        scenario=sc.to_dict(),
    )
    if report.coverage_shortfall:
        logger.warning('%d interceptor(s) for %d targets: some targets go unengaged',
                       sc.n_interceptors, sc.n_targets)
    logger.info('decoy: %d trials, interception rate %s, real hit rate %s',
                n_trials, report.interception_rate, report.real_hit_rate)
    return report
