"""
    Author: julij.jegorov
    Date: 17/10/2026
    Description: Unit tests for vehicle models, control clamping and the flow-map step.
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

from futurecone.libs.dynamics import (
    BoundedSpeed,
    ControlInput,
    DoubleIntegrator,
    Dubins,
    VehicleState,
    clamp_control,
    limit_to_budget,
    model_from_dict,
    normalize_heading,
    step,
)
from futurecone.libs.errors import (
    BudgetExhausted,
    ConfigError,
    FutureConeError,
    InadmissibleControl,
    NonpositiveHorizon,
    VariantMismatch,
)


class TestClampControl(unittest.TestCase):
    def test_velocity_rescaled_to_bound(self):
        out = clamp_control(BoundedSpeed(1.0), ControlInput.velocity([3.0, 0.0]))
        np.testing.assert_allclose(out.value, [1.0, 0.0])

    def test_turn_rate_capped(self):
        out = clamp_control(Dubins(speed=1.0, r_min=1.0), ControlInput.turn_rate(5.0))
        self.assertEqual(float(out.value), 1.0)
        out = clamp_control(Dubins(speed=1.0, r_min=1.0), ControlInput.turn_rate(-5.0))
        self.assertEqual(float(out.value), -1.0)

    def test_admissible_control_returned_unchanged(self):
        raw = ControlInput.acceleration([0.5, 0.0])
        self.assertIs(clamp_control(DoubleIntegrator(1.0), raw), raw)

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        model = BoundedSpeed(1.5)
        for _ in range(200):
            once = clamp_control(model, ControlInput.velocity(rng.normal(scale=3.0, size=3)))
            twice = clamp_control(model, once)
            np.testing.assert_array_equal(once.value, twice.value)
            self.assertLessEqual(once.magnitude, model.v_max + 1e-12)

    def test_direction_preserved(self):
        out = clamp_control(BoundedSpeed(2.0), ControlInput.velocity([3.0, 4.0]))
        np.testing.assert_allclose(out.value, [1.2, 1.6])

    def test_variant_mismatch(self):
        with self.assertRaises(VariantMismatch):
            clamp_control(BoundedSpeed(1.0), ControlInput.acceleration([1.0, 0.0]))
        with self.assertRaises(VariantMismatch):
            clamp_control(Dubins(1.0, 1.0), ControlInput.velocity([1.0, 0.0]))


class TestStep(unittest.TestCase):
    def test_bounded_speed_straight_line(self):
        s = step(BoundedSpeed(1.0), VehicleState([0.0, 0.0]), ControlInput.velocity([1.0, 0.0]), 0.5)
        np.testing.assert_allclose(s.position, [0.5, 0.0])
        self.assertEqual(s.time, 0.5)

    def test_double_integrator_half_a_t_squared(self):
        s = step(DoubleIntegrator(1.0), VehicleState([0.0, 0.0], velocity=[0.0, 0.0]),
                 ControlInput.acceleration([1.0, 0.0]), 1.0)
        np.testing.assert_allclose(s.position, [0.5, 0.0])
        np.testing.assert_allclose(s.velocity, [1.0, 0.0])

    def test_dubins_quarter_circle(self):
        s = step(Dubins(speed=1.0, r_min=1.0), VehicleState([0.0, 0.0], heading=0.0),
                 ControlInput.turn_rate(1.0), math.pi / 2)
        np.testing.assert_allclose(s.position, [1.0, 1.0], atol=1e-12)
        self.assertAlmostEqual(s.heading, math.pi / 2, places=12)

    def test_dubins_straight_when_rate_is_zero(self):
        s = step(Dubins(speed=2.0, r_min=1.0), VehicleState([0.0, 0.0], heading=math.pi / 2),
                 ControlInput.turn_rate(0.0), 0.5)
        np.testing.assert_allclose(s.position, [0.0, 1.0], atol=1e-12)

    def test_dubins_chord_bounded_by_arc_length(self):
        model = Dubins(speed=1.0, r_min=0.5)
        start = VehicleState([0.0, 0.0], heading=0.3)
        for rate in np.linspace(-2.0, 2.0, 9):
            s = step(model, start, ControlInput.turn_rate(rate), 0.7)
            self.assertLessEqual(np.linalg.norm(s.position - start.position), 0.7 + 1e-12)
            np.testing.assert_allclose(np.linalg.norm(s.velocity), 1.0)

    def test_bounded_speed_displacement_bound(self):
        rng = np.random.default_rng(11)
        model = BoundedSpeed(1.3)
        start = VehicleState([1.0, -2.0])
        for _ in range(100):
            u = clamp_control(model, ControlInput.velocity(rng.normal(size=2) * 2.0))
            s = step(model, start, u, 0.25)
            self.assertLessEqual(np.linalg.norm(s.position - start.position), 1.3 * 0.25 + 1e-9)

    def test_composition(self):
        cases = [
            (BoundedSpeed(2.0), VehicleState([0.1, 0.2]), ControlInput.velocity([1.0, -1.0])),
            (DoubleIntegrator(1.0), VehicleState([0.0, 1.0, 2.0], velocity=[0.3, 0.0, -0.1]),
             ControlInput.acceleration([0.0, 0.6, 0.8])),
            (Dubins(1.0, 2.0), VehicleState([1.0, 1.0], heading=-2.0), ControlInput.turn_rate(0.4)),
        ]
        for model, s, u in cases:
            whole = step(model, s, u, 0.7)
            split = step(model, step(model, s, u, 0.3), u, 0.4)
            np.testing.assert_allclose(whole.position, split.position, atol=1e-12)
            np.testing.assert_allclose(whole.velocity, split.velocity, atol=1e-12)

    def test_nonpositive_dt(self):
        with self.assertRaises(NonpositiveHorizon):
            step(BoundedSpeed(1.0), VehicleState([0.0, 0.0]), ControlInput.velocity([1.0, 0.0]), 0.0)

    def test_inadmissible_control(self):
        with self.assertRaises(InadmissibleControl):
            step(BoundedSpeed(1.0), VehicleState([0.0, 0.0]), ControlInput.velocity([1.1, 0.0]), 0.1)

    def test_tolerance_admits_rounding(self):
        u = ControlInput.velocity([1.0 + 1e-13, 0.0])
        s = step(BoundedSpeed(1.0), VehicleState([0.0, 0.0]), u, 1.0)
        self.assertAlmostEqual(s.position[0], 1.0)

    def test_budget_decremented(self):
        model = DoubleIntegrator(1.0, dv_budget=2.0)
        s = step(model, VehicleState([0.0, 0.0]), ControlInput.acceleration([1.0, 0.0]), 1.0)
        self.assertAlmostEqual(s.dv_remaining, 1.0)

    def test_budget_exhausted(self):
        model = DoubleIntegrator(1.0, dv_budget=0.5)
        with self.assertRaises(BudgetExhausted):
            step(model, VehicleState([0.0, 0.0]), ControlInput.acceleration([1.0, 0.0]), 1.0)

    def test_heading_normalized(self):
        s = VehicleState([0.0, 0.0], heading=3 * math.pi / 2)
        self.assertAlmostEqual(s.heading, -math.pi / 2)
        self.assertAlmostEqual(float(normalize_heading(math.pi)), -math.pi)


class TestLimitToBudget(unittest.TestCase):
    def test_unbudgeted_unchanged(self):
        u = ControlInput.acceleration([1.0, 0.0])
        self.assertIs(limit_to_budget(DoubleIntegrator(1.0), VehicleState([0.0, 0.0]), u, 1.0), u)

    def test_scaled_to_remaining(self):
        model = DoubleIntegrator(1.0, dv_budget=1.0)
        state = VehicleState([0.0, 0.0], dv_remaining=0.05)
        out = limit_to_budget(model, state, ControlInput.acceleration([0.0, 1.0]), 0.1)
        np.testing.assert_allclose(out.value, [0.0, 0.5])
        after = step(model, state, out, 0.1)
        self.assertAlmostEqual(after.dv_remaining, 0.0)

    def test_exhausted_vehicle_coasts(self):
        model = DoubleIntegrator(1.0, dv_budget=1.0)
        state = VehicleState([0.0, 0.0], velocity=[1.0, 0.0], dv_remaining=0.0)
        out = limit_to_budget(model, state, ControlInput.acceleration([0.0, 1.0]), 0.1)
        np.testing.assert_array_equal(out.value, [0.0, 0.0])
        np.testing.assert_allclose(step(model, state, out, 0.5).position, [0.5, 0.0])


class TestModels(unittest.TestCase):
    def test_model_from_dict(self):
        model = model_from_dict({'model': 'dubins', 'params': {'speed': 1.0, 'r_min': 2.0}})
        self.assertEqual(model, Dubins(1.0, 2.0))
        self.assertAlmostEqual(model.bound, 0.5)

    def test_round_trip_dict(self):
        model = DoubleIntegrator(2.0, dv_budget=3.0)
        self.assertEqual(model_from_dict(model.to_dict()), model)

    def test_unknown_model(self):
        with self.assertRaises(ConfigError):
            model_from_dict({'model': 'rocket', 'params': {}})

    def test_bad_params(self):
        with self.assertRaises(ConfigError):
            model_from_dict({'model': 'bounded_speed', 'params': {'speed': 1.0}})

    def test_nonpositive_params(self):
        with self.assertRaises(ConfigError):
            BoundedSpeed(0.0)
        with self.assertRaises(ConfigError):
            Dubins(1.0, -1.0)
        with self.assertRaises(ConfigError):
            DoubleIntegrator(1.0, dv_budget=-0.1)

    def test_state_dimension(self):
        with self.assertRaises(FutureConeError):
            VehicleState([0.0, 0.0, 0.0, 0.0])
        with self.assertRaises(FutureConeError):
            VehicleState([0.0, float('nan')])

    def test_state_dict_round_trip(self):
        s = VehicleState([1.0, 2.0], velocity=[0.5, 0.0], heading=0.25, time=3.0, dv_remaining=1.5)
        back = VehicleState.from_dict(s.to_dict())
        np.testing.assert_array_equal(back.position, s.position)
        np.testing.assert_array_equal(back.velocity, s.velocity)
        self.assertAlmostEqual(back.heading, 0.25, places=12)
        self.assertEqual((back.time, back.dv_remaining), (3.0, 1.5))


if __name__ == '__main__':
    unittest.main()
