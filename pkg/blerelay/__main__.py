# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""This module defines the command line interface of blerelay.

The interface is accessible via the `blerelay` command and allows users to
run single scenarios and parameter sweeps defined in JSON documents.

Execute `blerelay --help` for more information.
"""
import argparse
import contextlib
import logging
import sys
import traceback

from . import __version__
from .errors import ScenarioError, SweepError
from .ledger import RateReport
from .render import emit_summary, format_table
from .scenario import load_scenario, load_sweep, simulate
from .sweep import run_sweep, sweep_columns, write_csv
from .util import config as blerelay_config
from .util.misc import _positive_int


logger = logging.getLogger(__name__)


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, 'w') as file:
            yield file
        logger.info("Wrote output to '{}'.".format(path))


def _float_format():
    return blerelay_config.get_config_value('float_format', default='.6f')


def main_run(args):
    "Run a single scenario and print its summary or CSV row."
    scenario = load_scenario(args.file)
    sim = simulate(scenario, seed=args.seed, trace=args.trace is not None)
    report = sim.report
    if args.trace is not None:
        with open(args.trace, 'w') as file:
            sim.write_trace(file)
        logger.info("Wrote {} trace line(s) to '{}'.".format(len(sim.trace), args.trace))
    with _output(args.out) as file:
        if args.format == 'csv':
            write_csv([report.as_row()], RateReport.ROW_COLUMNS, file,
                      float_format=_float_format())
        else:
            file.write(emit_summary([report], power_model=scenario.power))


def main_sweep(args):
    "Execute all runs of a sweep and print the rows as CSV or as a table."
    spec = load_sweep(args.file, seed=args.seed)
    columns = sweep_columns(spec)
    jobs = args.jobs or blerelay_config.get_config_value('jobs', default=1)
    progress = args.progress or blerelay_config.get_config_flag('progress')
    try:
        rows = run_sweep(spec, jobs=int(jobs), progress=progress, workspace=args.workspace)
    except SweepError as error:
        # Preserve everything that completed before the fault.
        with _output(args.out) as file:
            write_csv(getattr(error, 'rows', []), columns, file,
                      float_format=_float_format(), aborted=str(error))
        raise
    with _output(args.out) as file:
        if args.format == 'table':
            file.write(format_table(rows, columns))
        else:
            write_csv(rows, columns, file, float_format=_float_format())


def main(argv=None):
    """Main entry function for the 'blerelay' command line tool.

    :param argv:
        The command line arguments; defaults to ``sys.argv[1:]``.
    :returns:
        The exit status.
    """
    parser = argparse.ArgumentParser(
        description="blerelay simulates duty-cycled relays in BLE advertising networks "
                    "and measures per-hop reception rates.")
    base_parser = argparse.ArgumentParser(add_help=False)

    # argparse does not merge options shared by the main parser and the subparsers,
    # hence the separate destinations which are merged below.
    for prefix, _parser in (('main_', parser), ('', base_parser)):
        _parser.add_argument(
            '-v', '--verbose',
            dest=prefix + 'verbose',
            action='count',
            default=0,
            help="Increase output verbosity.")
        _parser.add_argument(
            '--show-traceback',
            dest=prefix + 'show_traceback',
            action='store_true',
            help="Show the full traceback on error.")
        _parser.add_argument(
            '--debug',
            dest=prefix + 'debug',
            action='store_true',
            help="This option implies `-vv --show-traceback`.")
    parser.add_argument(
        '--version',
        action='store_true',
        help="Display the version number and exit.")

    subparsers = parser.add_subparsers()

    parser_run = subparsers.add_parser(
        'run', parents=[base_parser],
        help="Run a single scenario.")
    parser_run.set_defaults(func=main_run)
    parser_run.add_argument(
        'file',
        help="Path to the scenario document.")
    parser_run.add_argument(
        '--seed',
        type=int,
        help="Override the scenario's seed.")
    parser_run.add_argument(
        '--out',
        help="Write the output to this file instead of standard output.")
    parser_run.add_argument(
        '--trace',
        help="Write the event trace to this file.")
    parser_run.add_argument(
        '--format',
        choices=('table', 'csv'),
        default='table',
        help="Print a summary table (default) or one CSV row.")

    parser_sweep = subparsers.add_parser(
        'sweep', parents=[base_parser],
        help="Execute a parameter sweep.")
    parser_sweep.set_defaults(func=main_sweep)
    parser_sweep.add_argument(
        'file',
        help="Path to the sweep document.")
    parser_sweep.add_argument(
        '--seed',
        type=int,
        help="Override the first seed of the base scenario. "
             "Rejected for sweeps with an explicit seed list.")
    parser_sweep.add_argument(
        '--out',
        help="Write the rows to this file instead of standard output.")
    parser_sweep.add_argument(
        '-j', '--jobs',
        type=_positive_int,
        help="Number of worker processes (default: 1, or 'jobs' from the configuration).")
    parser_sweep.add_argument(
        '--format',
        choices=('csv', 'table'),
        default='csv',
        help="Print CSV (default) or aligned columns.")
    parser_sweep.add_argument(
        '--progress',
        action='store_true',
        help="Show a progress bar.")
    parser_sweep.add_argument(
        '--workspace',
        help="Store every run as a job of a signac workspace in this directory; "
             "completed runs are reused.")

    argv = sys.argv[1:] if argv is None else list(argv)
    if '--version' in argv:
        print('blerelay', __version__)
        return 0

    args = parser.parse_args(argv)
    if not hasattr(args, 'func'):
        parser.print_usage()
        return 2

    for dest in ('verbose', 'show_traceback', 'debug'):
        setattr(args, dest, getattr(args, 'main_' + dest) or getattr(args, dest))
        delattr(args, 'main_' + dest)

    # Do not overwrite with False if not present in the config file.
    if blerelay_config.get_config_flag('show_traceback'):
        args.show_traceback = True

    if args.debug:  # Implies '-vv' and '--show-traceback'
        args.verbose = max(2, args.verbose)
        args.show_traceback = True

    logging.basicConfig(level=max(0, logging.WARNING - 10 * args.verbose))

    def _show_traceback_and_exit(error):
        if args.show_traceback:
            traceback.print_exception(type(error), error, error.__traceback__)
        else:
            print("Execute with '--show-traceback' or '--debug' to get more "
                  "information.", file=sys.stderr)
        return 1

    try:
        args.func(args)
    except ScenarioError as error:
        print("ERROR: Invalid document: {}".format(error), file=sys.stderr)
        return _show_traceback_and_exit(error)
    except SweepError as error:
        print("ERROR: Sweep aborted: {}".format(error), file=sys.stderr)
        return _show_traceback_and_exit(error)
    except OSError as error:
        print("ERROR: {}".format(error), file=sys.stderr)
        return _show_traceback_and_exit(error)
    except KeyboardInterrupt:
        print("\nInterrupted.", file=sys.stderr)
        return 1
    except Exception as error:
        if str(error):
            print("ERROR: Encountered error during program execution: "
                  "'{}'\n".format(error), file=sys.stderr)
        else:
            print("ERROR: Encountered error during program execution.\n", file=sys.stderr)
        return _show_traceback_and_exit(error)
    return 0


if __name__ == '__main__':
    sys.exit(main())
