"""
    Author: julij.jegorov
    Date: 12/10/2026
    Description: futurecone package: future cones (reachable sets) of bounded vehicles,
                 intercept containment checks and pursuit/evasion validation.
"""

__version__ = "0.1.0"
__author__ = "julij.jegorov"
__license__ = "MIT"

# Vehicle models and single-step flow maps
from futurecone.libs.dynamics import (
    BoundedSpeed,
    ControlInput,
    ControlKind,
    DoubleIntegrator,
    Dubins,
    VehicleState,
    clamp_control,
    limit_to_budget,
    model_from_dict,
    step,
)

# Cones, leaves and containment
from futurecone.libs.cones import (
    ContainmentReport,
    ContainmentVerdict,
    FutureCone,
    Leaf,
    analytic_leaf,
    build_cone,
    build_cone_on_grid,
    cone_contains,
    cone_nests,
    leaf_contains,
    sampled_leaf,
    sampling_tolerance,
)

# Strategies
from futurecone.libs.strategies import (
    GreedyEscape,
    InterceptPlan,
    LeafPlanPursuit,
    ObservedHistory,
    PurePursuit,
    RandomManeuver,
    StraightLine,
    escape_control,
    make_strategy,
    plan_intercept_point,
    pursuit_control,
    strategy_from_dict,
)

# Engagement simulation
from futurecone.libs.engagement import (
    EngagementConfig,
    EngagementResult,
    Outcome,
    min_separation,
    simulate,
)

# Monte Carlo validation
from futurecone.libs.montecarlo import (
    DecoyReport,
    DecoyScenario,
    ScenarioDistribution,
    ValidationReport,
    replay_failure,
    run_decoy,
    validate_necessity,
    validate_sufficiency,
)

# Scenario files and configuration
from futurecone.libs.scenario import Scenario, load_scenario, parse_scenario, write_scenario
from futurecone.libs.config import Settings
from futurecone.libs.errors import FutureConeError

__all__ = [
    # Version info
    "__version__",
    "__author__",
    "__license__",

    # Dynamics
    "BoundedSpeed",
    "ControlInput",
    "ControlKind",
    "DoubleIntegrator",
    "Dubins",
    "VehicleState",
    "clamp_control",
    "limit_to_budget",
    "model_from_dict",
    "step",

    # Cones
    "ContainmentReport",
    "ContainmentVerdict",
    "FutureCone",
    "Leaf",
    "analytic_leaf",
    "build_cone",
    "build_cone_on_grid",
    "cone_contains",
    "cone_nests",
    "leaf_contains",
    "sampled_leaf",
    "sampling_tolerance",

    # Strategies
    "GreedyEscape",
    "InterceptPlan",
    "LeafPlanPursuit",
    "ObservedHistory",
    "PurePursuit",
    "RandomManeuver",
    "StraightLine",
    "escape_control",
    "make_strategy",
    "plan_intercept_point",
    "pursuit_control",
    "strategy_from_dict",

    # Engagement
    "EngagementConfig",
    "EngagementResult",
    "Outcome",
    "min_separation",
    "simulate",

    # Validation
    "DecoyReport",
    "DecoyScenario",
    "ScenarioDistribution",
    "ValidationReport",
    "replay_failure",
    "run_decoy",
    "validate_necessity",
    "validate_sufficiency",

    # Scenario files, config, errors
    "Scenario",
    "load_scenario",
    "parse_scenario",
    "write_scenario",
    "Settings",
    "FutureConeError",
]
