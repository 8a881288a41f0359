"""
    Author: julij.jegorov
    Date: 17/10/2026
    Description: Unit tests for the engagement loop, its termination rules and the
                 trajectory tables.
"""

import math
import unittest
import numpy as np
import sys
import os

_here = os.path.dirname(os.path.abspath(__file__))
_futurecone = os.path.dirname(_here)
_root = os.path.dirname(_futurecone)
if _root not in sys.path:
    sys.path.insert(0, _root)

from futurecone.libs.config import Settings
from futurecone.libs.dynamics import BoundedSpeed, DoubleIntegrator, Dubins, VehicleState, clamp_control, step
from futurecone.libs.engagement import (
    ARENA,
    CAPTURE,
    ESCAPE,
    INTERCEPT,
    TIMEOUT,
    EngagementConfig,
    EngagementResult,
    Outcome,
    min_separation,
    simulate,
    _captured,
)
from futurecone.libs.errors import ConfigError, EmptyTrajectory
from futurecone.libs.strategies import (
    GreedyEscape,
    LeafPlanPursuit,
    PurePursuit,
    RandomManeuver,
    StraightLine,
)


def _collinear_chase(capture_radius, dt=0.01):
    config = EngagementConfig(dt=dt, t_max=5.0, capture_radius=capture_radius)
    return simulate(config,
                    (BoundedSpeed(2.0), VehicleState([0.0, 0.0]), PurePursuit()),
                    (BoundedSpeed(1.0), VehicleState([1.0, 0.0]), StraightLine(direction=(1.0, 0.0))))


class TestEngagementConfig(unittest.TestCase):
    def test_invalid(self):
        with self.assertRaises(ConfigError):
            EngagementConfig(dt=0.0, t_max=1.0)
        with self.assertRaises(ConfigError):
            EngagementConfig(dt=0.5, t_max=0.1)
        with self.assertRaises(ConfigError):
            EngagementConfig(dt=0.1, t_max=1.0, capture_radius=-1.0)
        with self.assertRaises(ConfigError):
            EngagementConfig(dt=0.1, t_max=1.0, arena_radius=0.0)

    def test_n_steps(self):
        self.assertEqual(EngagementConfig(dt=0.01, t_max=5.0).n_steps, 500)
        self.assertEqual(EngagementConfig(dt=0.3, t_max=1.0).n_steps, 4)


class TestSimulate(unittest.TestCase):
    def test_collinear_chase_with_capture_radius(self):
        result = _collinear_chase(0.1)
        self.assertEqual(result.outcome.kind, INTERCEPT)
        self.assertEqual(result.outcome.reason, CAPTURE)
        self.assertAlmostEqual(result.outcome.t, 0.9, delta=0.02)
        self.assertLessEqual(result.min_separation, 0.1)

    def test_collinear_chase_exact_capture(self):
        result = _collinear_chase(0.0)
        self.assertTrue(result.outcome.is_intercept)
        self.assertAlmostEqual(result.outcome.t, 1.0, delta=0.02)

    def test_halving_dt(self):
        coarse = _collinear_chase(0.1, dt=0.01)
        fine = _collinear_chase(0.1, dt=0.005)
        self.assertLessEqual(abs(coarse.outcome.t - fine.outcome.t), 2 * 0.01)

    def test_faster_evader_escapes(self):
        config = EngagementConfig(dt=0.01, t_max=5.0)
        result = simulate(config,
                          (BoundedSpeed(1.0), VehicleState([0.0, 0.0]), PurePursuit()),
                          (BoundedSpeed(2.0), VehicleState([1.0, 0.0]), GreedyEscape(horizon=1.0)))
        self.assertEqual(result.outcome.kind, ESCAPE)
        self.assertEqual(result.outcome.reason, TIMEOUT)
        self.assertIsNone(result.outcome.t)
        t, value = min_separation(result)
        self.assertEqual(t, 0.0)
        self.assertAlmostEqual(value, 1.0)
        self.assertTrue(np.all(np.diff(result.separations) > 0.0))

    def test_leaf_plan_catches_greedy_evader(self):
        config = EngagementConfig(dt=0.01, t_max=5.0, capture_radius=0.01)
        result = simulate(config,
                          (BoundedSpeed(2.0), VehicleState([0.0, 0.0]), LeafPlanPursuit(replan_every=10)),
                          (BoundedSpeed(1.0), VehicleState([0.5, 0.5]), GreedyEscape(horizon=1.0)))
        self.assertTrue(result.outcome.is_intercept)
        self.assertLessEqual(result.outcome.t, 5.0)

    def test_capture_at_start(self):
        config = EngagementConfig(dt=0.1, t_max=1.0, capture_radius=0.01)
        result = simulate(config,
                          (BoundedSpeed(1.0), VehicleState([1.0, 1.0]), PurePursuit()),
                          (BoundedSpeed(1.0), VehicleState([1.0, 1.0]), StraightLine()))
        self.assertEqual(result.outcome, Outcome.intercept(0.0))
        self.assertEqual(result.outcome_dict()['steps'], 0)

    def test_arena_exit_is_an_escape(self):
        config = EngagementConfig(dt=0.1, t_max=10.0, arena_radius=2.0)
        result = simulate(config,
                          (BoundedSpeed(1.0), VehicleState([0.0, 0.0]), PurePursuit()),
                          (BoundedSpeed(2.0), VehicleState([1.0, 0.0]), StraightLine()))
        self.assertEqual(result.outcome, Outcome.escape(ARENA))
        self.assertLess(result.times[-1], 1.0)

    def test_termination_bound(self):
        config = EngagementConfig(dt=0.3, t_max=1.0)
        result = simulate(config,
                          (BoundedSpeed(1.0), VehicleState([0.0, 0.0]), PurePursuit()),
                          (BoundedSpeed(1.0), VehicleState([5.0, 0.0]), StraightLine()))
        self.assertLessEqual(result.times.size, math.ceil(1.0 / 0.3) + 1)

    def test_displacements_respect_bounds(self):
        config = EngagementConfig(dt=0.05, t_max=3.0)
        result = simulate(config,
                          (BoundedSpeed(1.5), VehicleState([0.0, 0.0]), PurePursuit()),
                          (BoundedSpeed(1.0), VehicleState([2.0, 1.0]), RandomManeuver(seed=9, dwell=0.2)))
        steps_x = np.linalg.norm(np.diff(result.trajectory_x, axis=0), axis=1)
        steps_y = np.linalg.norm(np.diff(result.trajectory_y, axis=0), axis=1)
        self.assertLessEqual(steps_x.max(), 1.5 * 0.05 + 1e-9)
        self.assertLessEqual(steps_y.max(), 1.0 * 0.05 + 1e-9)

    def test_budgeted_pursuer_coasts_instead_of_failing(self):
        config = EngagementConfig(dt=0.01, t_max=2.0)
        result = simulate(config,
                          (DoubleIntegrator(1.0, dv_budget=0.3), VehicleState([0.0, 0.0]), PurePursuit()),
                          (BoundedSpeed(1.0), VehicleState([1.0, 0.0]), StraightLine()))
        self.assertEqual(result.outcome.kind, ESCAPE)
        self.assertLessEqual(np.linalg.norm(result.trajectory_x[-1]), 0.3 * 2.0 + 1e-9)

    def test_dubins_pursuer_runs(self):
        config = EngagementConfig(dt=0.01, t_max=3.0, capture_radius=0.05)
        result = simulate(config,
                          (Dubins(1.0, 0.5), VehicleState([0.0, 0.0], heading=0.0), PurePursuit()),
                          (BoundedSpeed(0.3), VehicleState([1.0, 0.0]), StraightLine(direction=(0.0, 1.0))))
        steps_x = np.linalg.norm(np.diff(result.trajectory_x, axis=0), axis=1)
        self.assertLessEqual(steps_x.max(), 0.01 + 1e-9)

    def test_deterministic(self):
        config = EngagementConfig(dt=0.02, t_max=2.0)
        runs = [simulate(config,
                         (BoundedSpeed(1.0), VehicleState([0.0, 0.0]), LeafPlanPursuit(replan_every=5)),
                         (BoundedSpeed(0.8), VehicleState([1.0, 0.5]), RandomManeuver(seed=3, dwell=0.3)))
                for _ in range(2)]
        self.assertEqual(runs[0].outcome, runs[1].outcome)
        np.testing.assert_array_equal(runs[0].trajectory_x, runs[1].trajectory_x)
        np.testing.assert_array_equal(runs[0].trajectory_y, runs[1].trajectory_y)

    def test_dimension_mismatch(self):
        config = EngagementConfig(dt=0.1, t_max=1.0)
        with self.assertRaises(ConfigError):
            simulate(config,
                     (BoundedSpeed(1.0), VehicleState([0.0, 0.0]), PurePursuit()),
                     (BoundedSpeed(1.0), VehicleState([1.0, 0.0, 0.0]), StraightLine()))


class TestResultTables(unittest.TestCase):
    def test_frame_columns(self):
        frame = _collinear_chase(0.1).to_frame()
        self.assertEqual(list(frame.columns), ['time', 'xp_x', 'xp_y', 'xe_x', 'xe_y', 'separation'])
        config = EngagementConfig(dt=0.1, t_max=0.5)
        result = simulate(config,
                          (BoundedSpeed(1.0), VehicleState([0.0, 0.0, 0.0]), PurePursuit()),
                          (BoundedSpeed(1.0), VehicleState([3.0, 0.0, 0.0]), StraightLine()))
        self.assertEqual(list(result.to_frame().columns),
                         ['time', 'xp_x', 'xp_y', 'xp_z', 'xe_x', 'xe_y', 'xe_z', 'separation'])

    def test_outcome_dict(self):
        out = _collinear_chase(0.1).outcome_dict()
        self.assertEqual(list(out), ['outcome', 'time', 'reason', 'min_separation', 'min_separation_time', 'steps'])
        self.assertEqual(out['outcome'], INTERCEPT)

    def test_min_separation_single_sample(self):
        result = EngagementResult(Outcome.escape(TIMEOUT), np.array([0.0]), np.array([[0.0, 0.0]]),
                                  np.array([[3.0, 0.0]]), 3.0, 0.0)
        self.assertEqual(min_separation(result), (0.0, 3.0))

    def test_min_separation_empty(self):
        result = EngagementResult(Outcome.escape(TIMEOUT), np.zeros(0), np.zeros((0, 2)), np.zeros((0, 2)),
                                  float('nan'), float('nan'))
        with self.assertRaises(EmptyTrajectory):
            min_separation(result)


def _replay(model, state, controls, dt):
    positions = [state.position]
    for u in controls:
        if clamp_control(model, u) is not u:
            raise AssertionError('recorded control %r is not admissible' % (u,))
        state = step(model, state, u, dt)
        positions.append(state.position)
    return np.array(positions)


class TestReplay(unittest.TestCase):
    def check_replay(self, config, pursuer, evader):
        result = simulate(config, pursuer, evader)
        self.assertEqual(len(result.controls_x), result.times.size - 1)
        self.assertEqual(len(result.controls_y), result.times.size - 1)
        np.testing.assert_allclose(_replay(pursuer[0], pursuer[1], result.controls_x, config.dt),
                                   result.trajectory_x, rtol=0.0, atol=1e-9)
        np.testing.assert_allclose(_replay(evader[0], evader[1], result.controls_y, config.dt),
                                   result.trajectory_y, rtol=0.0, atol=1e-9)

    def test_bounded_speed_against_random_evader(self):
        self.check_replay(EngagementConfig(dt=0.05, t_max=3.0),
                          (BoundedSpeed(1.5), VehicleState([0.0, 0.0]), LeafPlanPursuit(replan_every=5)),
                          (BoundedSpeed(1.0), VehicleState([2.0, 1.0]), RandomManeuver(seed=9, dwell=0.2)))

    def test_dubins_against_greedy_escape(self):
        self.check_replay(EngagementConfig(dt=0.02, t_max=2.0, capture_radius=0.05),
                          (Dubins(1.5, 0.5), VehicleState([0.0, 0.0], heading=0.0), PurePursuit()),
                          (Dubins(1.0, 1.0), VehicleState([1.0, 0.5], heading=1.0), GreedyEscape(horizon=0.5)))

    def test_budgeted_double_integrator(self):
        self.check_replay(EngagementConfig(dt=0.01, t_max=2.0),
                          (DoubleIntegrator(1.0, dv_budget=0.3), VehicleState([0.0, 0.0]), PurePursuit()),
                          (DoubleIntegrator(0.5), VehicleState([1.0, 0.0], velocity=[0.0, 0.2]),
                           StraightLine(direction=(0.0, 1.0))))


class TestCaptureRule(unittest.TestCase):
    def test_positive_radius_is_exact(self):
        self.assertTrue(_captured(0.1, 0.1))
        self.assertFalse(_captured(0.1 + 5e-10, 0.1))

    def test_zero_radius_uses_tolerance(self):
        tol = Settings()['CAPTURE_TOLERANCE']
        self.assertTrue(_captured(0.0, 0.0))
        self.assertTrue(_captured(0.5 * tol, 0.0))
        self.assertFalse(_captured(2.0 * tol, 0.0))


if __name__ == '__main__':
    unittest.main()
