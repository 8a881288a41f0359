"""
    Author: julij.jegorov
    Date: 16/10/2026
    Description: futurecone command-line entry point; parses and validates flags for the
                 cone/check/simulate/validate subcommands and delegates to libs.commands.
"""

import argparse
import logging
import sys
from functools import wraps

import futurecone.libs.commands as cmd
from futurecone import __version__
from futurecone.libs.config import Settings
from futurecone.libs.errors import ConfigError, FutureConeError, UnsupportedAnalytic
from futurecone.libs.validation import (
    _ERROR_PREFIX,
    _check_choice,
    _check_number,
    _check_required,
)

logger = logging.getLogger('futurecone')


def _return_exit_codes(f):
    """Decorator: map exceptions onto the exit-code contract and report them on stderr.

    UnsupportedAnalytic -> 3, any other futurecone or I/O error -> 2.
    """
    @wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except UnsupportedAnalytic as e:
            sys.stderr.write(_ERROR_PREFIX + '%s: %s\n' % (type(e).__name__, e))
            return cmd.EXIT_CAPABILITY
        except (FutureConeError, OSError) as e:
            sys.stderr.write(_ERROR_PREFIX + '%s: %s\n' % (type(e).__name__, e))
            return cmd.EXIT_USAGE
    return wrapper


def _usage_error(err):
    sys.stderr.write(err + '\n')
    return cmd.EXIT_USAGE


@_return_exit_codes
def cmd_cone(args):
    """Write one player's future cone leaves as CSV."""
    err = _check_required('scenario', args.scenario)
    if err:
        return _usage_error(err)
    return cmd.cone_export(args.scenario, args.player, args.method, args.out, args.svg)


@_return_exit_codes
def cmd_check(args):
    """Containment verdict: exit 0 when the pursuer cone contains the evader cone somewhere."""
    err = _check_required('scenario', args.scenario) or _check_number('--tol', args.tol, minimum=0, allow_none=True)
    if err:
        return _usage_error(err)
    return cmd.containment_check(args.scenario, args.tol, args.json)


@_return_exit_codes
def cmd_simulate(args):
    """Simulate one engagement: exit 0 on intercept, 1 on escape."""
    err = _check_required('scenario', args.scenario)
    if err:
        return _usage_error(err)
    return cmd.engagement_run(args.scenario, args.pursuit, args.evade, args.traj, args.svg)


@_return_exit_codes
def cmd_validate(args):
    """Run a validation suite: exit 0 when every run succeeds (or the decoy claim holds)."""
    err = (_check_choice('--mode', args.mode, cmd.MODES)
           or _check_number('--n', args.n, minimum=0, integer=True, allow_none=True)
           or _check_number('--seed', args.seed, minimum=0, integer=True))
    if err:
        return _usage_error(err)
    return cmd.validation_run(args.mode, args.n, args.seed, args.json)


def build_parser():
    parser = argparse.ArgumentParser(prog='futurecone',
                                     description='Future cones, intercept containment and pursuit/evasion games.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v info, -vv debug (stderr)')
    parser.add_argument('--config', help='alternative futurecone.json')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('cone', help='write cone leaves as CSV')
    p.add_argument('scenario')
    p.add_argument('--player', choices=('x', 'y'), default='x', help='x = pursuer, y = evader')
    p.add_argument('--method', choices=('analytic', 'sampled'), default='analytic')
    p.add_argument('--out', help='CSV path (stdout when omitted)')
    p.add_argument('--svg', help='also render leaf outlines to this SVG file')
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser('check', help='decide cone containment')
    p.add_argument('scenario')
    p.add_argument('--tol', type=float, default=None, help='containment tolerance [m]')
    p.add_argument('--json', help='also write the report to this file')
    p.set_defaults(func=cmd_check)

    p = sub.add_parser('simulate', help='run one engagement')
    p.add_argument('scenario')
    p.add_argument('--pursuit', default='pure_pursuit', help='pure_pursuit | leaf_plan_pursuit')
    p.add_argument('--evade', default='straight_line', help='straight_line | greedy_escape | random_maneuver')
    p.add_argument('--traj', help='trajectory CSV path')
    p.add_argument('--svg', help='render the engagement to this SVG file')
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('validate', help='run a Monte Carlo validation suite')
    p.add_argument('--mode', required=True, help='|'.join(cmd.MODES))
    p.add_argument('--n', type=int, default=None, help='scenarios (trials for decoy)')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--json', help='report path (stdout when omitted)')
    p.set_defaults(func=cmd_validate)
    return parser


def _configure_logging(verbosity):
    level = logging.WARNING if verbosity <= 0 else (logging.INFO if verbosity == 1 else logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return cmd.EXIT_USAGE if e.code else cmd.EXIT_OK
    _configure_logging(args.verbose)
    if args.config:
        try:
            Settings().reload(args.config, strict=True)
        except ConfigError as e:
            return _usage_error(_ERROR_PREFIX + 'ConfigError: %s' % e)
    return args.func(args)


if __name__ == '__main__':
    sys.exit(main())
