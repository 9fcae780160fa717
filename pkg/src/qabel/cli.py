"""Command line front end.

::

    qabel verify {all,quaternion,forms,group,bundle,chern-simons,tubular}
    qabel abel curve [--tau T,...] [--P p,...] [--Q q,...]
    qabel abel threefold

The report goes to stdout (or ``--out``), the log to stderr.  The exit
code is ``0`` when no check failed, ``1`` otherwise and ``2`` for a
configuration or usage error.

"""
from __future__ import annotations

import argparse
from pathlib import Path
import sys
from typing import TYPE_CHECKING

from qabel.exceptions import ConfigError
from qabel.log import logger
from qabel.settings import parse_complex
from qabel.settings import Settings
from qabel.suites import SUITES
from qabel.suites import VERIFY_ALL
from qabel.suites.checks import run_checks
from qabel.suites.checks import RunContext
from qabel.suites.report import exit_code
from qabel.suites.report import render
from qabel.suites.report import write_series

__all__ = ('main', 'parse_args', 'run')


if sys.version_info < (3, 8):
    raise RuntimeError('This package requires Python 3.8+!')


if TYPE_CHECKING:
    from typing import List
    from typing import Optional
    from typing import Sequence
    from typing import Tuple

    from qabel.qa_collections import CheckRecord


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f'{text} is not a positive integer')
    return value


def _complex_list(text: str) -> str:
    try:
        for item in text.split(','):
            parse_complex(item)
    except ConfigError as error:
        raise argparse.ArgumentTypeError(str(error)) from error
    return text


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument(
        '--tolerance',
        type=float,
        default=None,
        help='override every configured tolerance',
    )
    parser.add_argument(
        '--samples',
        type=_positive_int,
        default=None,
        help='override every configured sample count',
    )
    parser.add_argument(
        '--format', choices=('json', 'text'), default='json', dest='output'
    )
    parser.add_argument('--out', type=Path, default=None)
    parser.add_argument(
        '--series',
        type=Path,
        default=None,
        help='write excision series; CSV for a .csv suffix, else JSON',
    )
    parser.add_argument('--config', default=None)
    parser.add_argument(
        '--timings', action='store_true', help='record runtime_ms'
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qabel',
        description='Numerical checks of quaternionic Abel identities.',
    )
    commands = parser.add_subparsers(dest='command', required=True)
    verify = commands.add_parser('verify', help='run identity suites')
    verify.add_argument('suite', choices=('all',) + VERIFY_ALL)
    _add_common(verify)
    abel = commands.add_parser('abel', help='run the Abel experiments')
    abel.add_argument('experiment', choices=('curve', 'threefold'))
    abel.add_argument('--tau', type=_complex_list, default=None)
    abel.add_argument('--P', type=_complex_list, default=None, dest='poles')
    abel.add_argument('--Q', type=_complex_list, default=None, dest='zeros')
    _add_common(abel)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse the command line.

    ``--tau``, ``--P`` and ``--Q`` describe the curve experiment; with
    ``threefold`` they are a usage error.

    :param argv: The arguments without the program name.

    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == 'abel' and args.experiment == 'threefold':
        if any((args.tau, args.poles, args.zeros)):
            parser.error('--tau, --P and --Q apply to the curve only')
    return args


def _suite_names(args: argparse.Namespace) -> Tuple[str, ...]:
    if args.command == 'abel':
        return (args.experiment,)
    return VERIFY_ALL if args.suite == 'all' else (args.suite,)


def _configure(settings: Settings, args: argparse.Namespace) -> int:
    if args.config:
        settings.load(str(Path(args.config).resolve()))
    for key in ('tau', 'poles', 'zeros'):
        value = getattr(args, key, None)
        if value:
            option = 'taus' if key == 'tau' else key
            settings.override('abel-curve', option, value)
    if args.seed is not None:
        return args.seed
    return settings.get_int('qabel', 'seed', 0)


def run(args: argparse.Namespace) -> Tuple[List[CheckRecord], int]:
    """Run the selected suites and write the report.

    :param args: The parsed command line.

    :returns: The records and the exit code.

    """
    settings = Settings()
    try:
        seed = _configure(settings, args)
    except ConfigError as error:
        logger.error(str(error))
        return [], 2
    context = RunContext(
        settings,
        seed=seed,
        tolerance=args.tolerance,
        samples=args.samples,
        timings=args.timings,
    )
    logger.debug(f'{seed=} {args.tolerance=} {args.samples=}')
    records: List[CheckRecord] = []
    try:
        for name in _suite_names(args):
            logger.info(f'Suite {name}')
            records.extend(run_checks(context, SUITES[name]))
    except ConfigError as error:
        logger.error(str(error))
        return records, 2
    text = render(records, args.output)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding='utf-8')
    if args.series is not None:
        write_series(args.series, context.series)
    return records, exit_code(records)


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Parse the command line, run and exit with the report status.

    :param argv: The arguments without the program name.

    """
    _, code = run(parse_args(argv))
    sys.exit(code)
