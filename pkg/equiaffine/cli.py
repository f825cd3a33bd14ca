"""
The ``equiaffine`` command line, with the subcommands

* ``generate``, writing the grid of a surface built from l(v) and f(v),
* ``analyze``, computing the invariants of a grid or expression surface,
* ``verify``, running the checks of `equiaffine.verify` on a grid,
* ``export``, converting a grid into an OBJ mesh or a CSV table.

Exit codes are 0 on success, 1 if a verification fails, 2 for malformed
input, 3 if the integration diverges and 4 if the analysis does not apply.
"""
import argparse
import json
import logging
import sys

import numpy as np

from . import generator, invariants, verify
from .errors import (
    EXIT_FAILED, EXIT_FORMAT, EXIT_INAPPLICABLE, EXIT_OK, EquiaffineError,
    exit_code_for
)
from .extensions import (
    grid_to_dict, read_grid, write_grid, write_grid_csv, write_obj,
    write_report_csv
)
from .helpers import atomic_write
from .surfaces import ExprSurface
from .version import __version__

_log = logging.getLogger(__name__)

LOG_FORMAT = '[%(levelname) 5s/%(asctime)s] %(name)s: %(message)s'


class _UsageError(Exception):
    pass


# region Parser


def _add_grid_flags(parser):
    parser.add_argument('--u-min', type=float, default=-1.0)
    parser.add_argument('--u-max', type=float, default=1.0)
    parser.add_argument('--v-min', type=float, default=-1.0)
    parser.add_argument('--v-max', type=float, default=1.0)
    parser.add_argument('--nu', type=int, default=21,
                        help='samples along u (default: %(default)s)')
    parser.add_argument('--nv', type=int, default=41,
                        help='samples along v (default: %(default)s)')


def build_parser():
    """
    Builds the argument parser. The subcommand parsers are reachable
    through its ``subcommands`` attribute.
    """
    parser = argparse.ArgumentParser(
        prog='equiaffine',
        description='Equiaffine invariants of surfaces, and generation of '
                    'hyperbolic affine-flat, affine-minimal surfaces.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    parser.add_argument('--config', metavar='FILE.json',
                        help='JSON object with default values for the flags')
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for INFO and -vv for DEBUG logging')

    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    parser.subcommands = {}

    p = sub.add_parser('generate', help='generate a surface grid')
    p.add_argument('--ell', help='the function l(v)')
    p.add_argument('--f', help='the function f(v)')
    p.add_argument('--preset', choices=list(generator.PRESETS),
                   help='write a closed form preset instead')
    p.add_argument('--a', type=float, default=3.0,
                   help='parameter of the cosh and cos presets')
    _add_grid_flags(p)
    p.add_argument('--rk-step', type=float,
                   default=generator.DEFAULT_RK_STEP)
    p.add_argument('--out', metavar='FILE.json',
                   help='where to write the grid (default: standard output)')
    p.add_argument('--obj', metavar='FILE.obj', help='also write a mesh')
    p.add_argument('--frames', action='store_true',
                   help='store the frames along with the points')
    parser.subcommands['generate'] = p

    p = sub.add_parser('analyze', help='compute the invariants of a surface')
    p.add_argument('--in', dest='input', metavar='FILE.json')
    p.add_argument('--surface', metavar='"X;Y;Z"',
                   help='the surface as three expressions in u and v')
    _add_grid_flags(p)
    p.add_argument('--no-affine', action='store_true',
                   help='only classify the points')
    p.add_argument('--asymptotic-tol', type=float)
    p.add_argument('--read-tol', type=float)
    p.add_argument('--report', metavar='FILE.json')
    p.add_argument('--csv', metavar='FILE.csv')
    parser.subcommands['analyze'] = p

    p = sub.add_parser('verify', help='verify a generated grid')
    p.add_argument('--in', dest='input', metavar='FILE.json')
    p.add_argument('--ell', help='l(v), to check the normal form')
    p.add_argument('--f', help='f(v), to check the normal form')
    p.add_argument('--tol', type=float,
                   help='tolerance of the flat and minimal checks')
    p.add_argument('--report', metavar='FILE.json')
    parser.subcommands['verify'] = p

    p = sub.add_parser('export', help='convert a grid to OBJ or CSV')
    p.add_argument('--in', dest='input', metavar='FILE.json')
    p.add_argument('--obj', metavar='FILE.obj')
    p.add_argument('--csv', metavar='FILE.csv')
    parser.subcommands['export'] = p

    return parser


def _config_keys(parser):
    """Maps ``long_flag_name`` to the destination of every option."""
    keys = {}
    for action in parser._actions:
        for option in action.option_strings:
            if option.startswith('--') and action.dest != 'help':
                keys[option[2:].replace('-', '_')] = action.dest
    return keys


def _load_config(path, parser, subparser):
    try:
        with open(path, encoding='utf-8') as file:
            config = json.load(file)
    except (OSError, ValueError) as e:
        raise _UsageError('cannot read the config file {}: {}'
                          .format(path, e)) from e
    if not isinstance(config, dict):
        raise _UsageError('the config file must hold a JSON object')

    top, sub = _config_keys(parser), _config_keys(subparser)
    top.pop('config', None)
    top.pop('version', None)
    top_defaults, sub_defaults = {}, {}
    for key, value in config.items():
        if key in sub:
            sub_defaults[sub[key]] = value
        elif key in top:
            top_defaults[top[key]] = value
        else:
            raise _UsageError('unknown key {!r} in the config file'
                              .format(key))
    return top_defaults, sub_defaults


def parse_args(argv=None):
    """
    Parses the arguments. Values from ``--config`` become the defaults,
    so explicit flags override them.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.error('a command is required')

    if args.config:
        subparser = parser.subcommands[args.command]
        try:
            top, sub = _load_config(args.config, parser, subparser)
        except _UsageError as e:
            parser.error(str(e))
        parser.set_defaults(**top)
        subparser.set_defaults(**sub)
        args = parser.parse_args(argv)

    return parser, args


def _configure_logging(args):
    level = args.log_level
    if args.verbose >= 2:
        level = 'DEBUG'
    elif args.verbose == 1:
        level = 'INFO'
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT)


# endregion

# region Commands


def _grid_values(args):
    if args.nu < 2 or args.nv < 2:
        raise _UsageError('--nu and --nv must be 2 or more')
    return (np.linspace(args.u_min, args.u_max, args.nu),
            np.linspace(args.v_min, args.v_max, args.nv))


def cmd_generate(args):
    if args.preset:
        if args.ell is not None:
            raise _UsageError('--ell cannot be combined with --preset')
        u, v = _grid_values(args)
        grid = generator.closed_form_preset(
            args.preset, u, v, a=args.a, f=args.f, rk_step=args.rk_step)
    else:
        if args.ell is None or args.f is None:
            raise _UsageError('generate needs --ell and --f, or --preset')
        grid = generator.generate(generator.GeneratorInput(
            args.ell, args.f,
            u_range=(args.u_min, args.u_max),
            v_range=(args.v_min, args.v_max),
            nu=args.nu, nv=args.nv, rk_step=args.rk_step
        ))

    if args.out:
        write_grid(grid, args.out, frames=args.frames)
    else:
        json.dump(grid_to_dict(grid, frames=args.frames), sys.stdout)
        sys.stdout.write('\n')

    if args.obj:
        write_obj(grid, args.obj)
    return EXIT_OK


def cmd_analyze(args):
    if (args.input is None) == (args.surface is None):
        raise _UsageError('analyze needs exactly one of --in and --surface')

    if args.input is not None:
        surface, u, v = read_grid(args.input), None, None
    else:
        surface = ExprSurface.parse(args.surface)
        u, v = _grid_values(args)

    analysis = invariants.analyze(
        surface, u, v, affine=not args.no_affine,
        asymptotic_tol=args.asymptotic_tol, read_tol=args.read_tol)

    if args.report:
        with atomic_write(args.report) as file:
            json.dump(analysis.to_dict(), file, indent=1)
    if args.csv:
        write_report_csv(analysis, args.csv)

    print(analysis.summary_line())
    if analysis.requested and not analysis.affine:
        print('affine invariants not available: {}'.format(analysis.skipped),
              file=sys.stderr)
        return EXIT_INAPPLICABLE
    return EXIT_OK


def cmd_verify(args):
    if args.input is None:
        raise _UsageError('verify needs --in')
    if (args.ell is None) != (args.f is None):
        raise _UsageError('--ell and --f must be given together')

    grid = read_grid(args.input)
    report = verify.run_verification(grid, ell=args.ell, f=args.f,
                                     tol=args.tol)
    print(report.format_table())
    if args.report:
        with atomic_write(args.report) as file:
            json.dump(report.to_dict(), file, indent=1)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_export(args):
    if args.input is None or not (args.obj or args.csv):
        raise _UsageError('export needs --in and at least one of --obj '
                          'and --csv')

    grid = read_grid(args.input)
    if args.obj:
        write_obj(grid, args.obj)
    if args.csv:
        write_grid_csv(grid, args.csv)
    return EXIT_OK


COMMANDS = {
    'generate': cmd_generate,
    'analyze': cmd_analyze,
    'verify': cmd_verify,
    'export': cmd_export,
}


# endregion


def main(argv=None):
    """Runs the command line and returns its exit code."""
    try:
        parser, args = parse_args(argv)
    except SystemExit as e:
        if e.code is None:
            return EXIT_OK
        return e.code if isinstance(e.code, int) else EXIT_FORMAT

    _configure_logging(args)
    try:
        return COMMANDS[args.command](args)
    except _UsageError as e:
        print('{}: error: {}'.format(parser.prog, e), file=sys.stderr)
        return EXIT_FORMAT
    except EquiaffineError as e:
        code = exit_code_for(e)
        if code is None:
            raise
        print('{}: error: {}'.format(parser.prog, e), file=sys.stderr)
        return code
    except ValueError as e:
        # Invalid input values, such as an empty range
        print('{}: error: {}'.format(parser.prog, e), file=sys.stderr)
        return EXIT_FORMAT
    except OSError as e:
        print('{}: error: {}'.format(parser.prog, e), file=sys.stderr)
        return EXIT_FORMAT
