"""
    Author: julij.jegorov
    Date: 16/10/2026
    Description: Command implementations behind the futurecone CLI: cone export,
                 containment check, engagement simulation and validation suites.
                 Each returns the process exit code; cli.py validates flags first.
"""

import json
import logging
import sys

from futurecone.libs.config import Settings
from futurecone.libs.cones import build_cone, cone_contains
from futurecone.libs.engagement import EngagementConfig, simulate
from futurecone.libs.errors import ConfigError
from futurecone.libs.export import leaves_frame, render_svg, write_csv
from futurecone.libs.montecarlo import (
    DECOY,
    NECESSITY,
    SUFFICIENCY,
    DecoyScenario,
    ScenarioDistribution,
    run_decoy,
    validate_necessity,
    validate_sufficiency,
)
from futurecone.libs.scenario import load_scenario
from futurecone.libs.strategies import PURSUIT, EVASION, RandomManeuver, strategy_from_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_CAPABILITY = 3

MODES = (SUFFICIENCY, NECESSITY, DECOY)


def _emit(document, path=None):
    """Write a JSON document to `path`, or to stdout when no path is given."""
    text = json.dumps(document, indent=2)
    if path:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
        logger.info('wrote %s', path)
    else:
        sys.stdout.write(text + '\n')


def _player_cone(scenario, which, method):
    spec = scenario.player(which)
    return build_cone(spec.model, spec.state(), scenario.t_start, scenario.t_end, scenario.n_leaves,
                      method=method, workers=Settings()['THREADS'])


def cone_export(scenario_path, player='x', method='analytic', out=None, svg=None):
    """Write the leaves of one player's cone as CSV (stdout when out is None)."""
    scenario = load_scenario(scenario_path)
    cone = _player_cone(scenario, player, method)
    frame = leaves_frame(cone)
    write_csv(frame, out if out else sys.stdout)
    if svg:
        render_svg(svg, cone=cone, title='%s cone (%s)' % (scenario.player(player).model.name, method))
    return EXIT_OK


def containment_check(scenario_path, tol=None, json_out=None):
    """Does the pursuer cone contain the evader cone at some grid time?"""
    scenario = load_scenario(scenario_path)
    outer = build_cone(scenario.pursuer.model, scenario.pursuer.state(), scenario.t_start, scenario.t_end,
                       scenario.n_leaves, method='analytic', fallback=True, workers=Settings()['THREADS'])
    inner = build_cone(scenario.evader.model, scenario.evader.state(), scenario.t_start, scenario.t_end,
                       scenario.n_leaves, method='analytic', fallback=True, workers=Settings()['THREADS'])
    report = cone_contains(outer, inner, tol)
    _emit(report.to_dict())
    if json_out:
        _emit(report.to_dict(), json_out)
    return EXIT_OK if report.contained_any else EXIT_NEGATIVE


def _strategy(name, role, seed):
    kind = strategy_from_dict({'kind': name})
    if kind.role != role:
        raise ConfigError('%s is not a %s strategy' % (name, role))
    if isinstance(kind, RandomManeuver):
        kind = RandomManeuver(seed=seed, dwell=Settings()['VALIDATION']['RANDOM_DWELL'])
    return kind


def engagement_run(scenario_path, pursuit='pure_pursuit', evade='straight_line', traj=None, svg=None):
    """Simulate one engagement; print the outcome as one JSON line."""
    scenario = load_scenario(scenario_path)
    config = scenario.engagement_config()
    result = simulate(config,
                      (scenario.pursuer.model, scenario.pursuer.state(),
                       _strategy(pursuit, PURSUIT, scenario.seed)),
                      (scenario.evader.model, scenario.evader.state(),
                       _strategy(evade, EVASION, scenario.seed)))
    if traj:
        write_csv(result.to_frame(), traj)
    if svg:
        render_svg(svg, result=result, title='%s vs %s' % (pursuit, evade))
    sys.stdout.write(json.dumps(result.outcome_dict()) + '\n')
    return EXIT_OK if result.outcome.is_intercept else EXIT_NEGATIVE


def _suite(mode):
    suites = Settings()['SUITES']
    if mode not in suites:
        raise ConfigError('no %s suite in the configuration' % mode)
    return suites[mode]


def validation_run(mode, n=None, seed=0, json_out=None):
    """Run one of the configured suites and write its report."""
    if mode not in MODES:
        raise ConfigError('unknown mode %r, expected one of %s' % (mode, '|'.join(MODES)))
    suite = _suite(mode)
    if mode == DECOY:
        sc = DecoyScenario.from_dict(suite, seed=seed)
        config = EngagementConfig(dt=suite['dt'], t_max=suite['t_max'],
                                  capture_radius=suite.get('capture_radius', Settings()['CAPTURE_RADIUS']))
        report = run_decoy(sc, config, suite.get('n_trials', 300) if n is None else n)
        _emit(report.to_dict(), json_out)
        return EXIT_OK if report.claim_holds else EXIT_NEGATIVE

    dist = ScenarioDistribution.from_dict(suite, seed=seed)
    policies = suite.get('policies', [])
    n = 100 if n is None else n
    if mode == SUFFICIENCY:
        report = validate_sufficiency(dist, n, policies)
    else:
        report = validate_necessity(dist, n, policies)
    _emit(report.to_dict(), json_out)
    return EXIT_OK if report.success_rate == 1.0 else EXIT_NEGATIVE
