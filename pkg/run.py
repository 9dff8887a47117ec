# -*- coding: utf-8 -*-

import argparse
import logging

from hext.core import ExtensionError
from hext.experiment import ExperimentConfig, load_config, run_experiment, run_suite, EXIT_ERROR

DESCRIPTION = 'Estimate extensions of set functions by Hausdorff-metric refinement ladders.'


parser = argparse.ArgumentParser(description=DESCRIPTION)

COMMAND_RUN = 'run'
COMMAND_SUITE = 'suite'

# general
subparsers = parser.add_subparsers(help='Command', dest='command')
parser.add_argument(
    '--jobs', type=int, default=1, dest='jobs',
    help="Levels (run) or configs (suite) evaluated concurrently",
)
parser.add_argument(
    '--seed', type=int, default=None, dest='seed',
    help="Seed overriding the config's seed",
)
parser.add_argument(
    '--out', type=str, default=None, dest='out',
    help="Trace CSV path (run) or output directory (suite)",
)
parser.add_argument(
    '-v', '--verbose', action='count', default=0, dest='verbose',
    help="-v for progress, -vv for every ladder level",
)

# run
parser_run = subparsers.add_parser(COMMAND_RUN, help='Run one experiment')
parser_run.add_argument(
    'config', type=str,
    help="Experiment config (in YAML format)",
)

# suite
parser_suite = subparsers.add_parser(COMMAND_SUITE, help='Run every config of a directory')
parser_suite.add_argument(
    'directory', type=str,
    help="Directory of experiment configs",
)


def configure_logging(verbose):
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')


if __name__ == "__main__":
    args = parser.parse_args()
    configure_logging(args.verbose)
    if args.command == COMMAND_RUN:
        mapping = load_config(args.config)
        if not mapping:
            exit("Terminating: Missing or empty config file.")
        try:
            config = ExperimentConfig.from_dict(mapping)
            result = run_experiment(config, out=args.out, seed=args.seed, jobs=args.jobs)
        except ExtensionError as e:
            exit("Terminating: {}".format(e))
        print(result.line())
        exit(result.exit_code)
    elif args.command == COMMAND_SUITE:
        code, _ = run_suite(args.directory, jobs=args.jobs, out=args.out, seed=args.seed)
        exit(code)
    else:
        parser.print_help()
        exit(EXIT_ERROR)
