"""Command-line front end: ``qpresheaf check``, ``qpresheaf report`` and ``qpresheaf demo``.

Exit codes: 0 when every checked law holds, 1 when a law is violated and 2
when the input cannot be read or validated. Reports go to stdout, logs to
stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, TextIO

from qpresheaf.cli.report import build_report, format_table, render_json, render_text
from qpresheaf.cli.scenario import POLICIES, Scenario, bundled_fixture, load_scenario
from qpresheaf.cli.suites import SUITE_NAMES, run_suites
from qpresheaf.config import ENV_TOL, Tolerances, use_tolerances
from qpresheaf.errors import Error

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not an integer') from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError('the seed must be an unsigned 64-bit integer')
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not a number') from None
    if not value > 0:
        raise argparse.ArgumentTypeError('the tolerance must be positive')
    return value


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not an integer') from None
    if value < 0:
        raise argparse.ArgumentTypeError('the count must not be negative')
    return value


def _add_common(parser: argparse.ArgumentParser, with_scenario: bool = True) -> None:
    if with_scenario:
        parser.add_argument('scenario', nargs='?', type=Path, help='scenario JSON file (default: the bundled fixture)')
    parser.add_argument('--tol', type=_positive_float, help=f'law-check tolerance (overrides the scenario and {ENV_TOL})')
    parser.add_argument('--seed', type=_seed, default=42, help='seed of every random instance (default: %(default)s)')
    parser.add_argument('--output', choices=('json', 'text'), help='output format')
    parser.add_argument('--contexts', choices=POLICIES, help='context closure policy (default: the scenario policy)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='qpresheaf', description='Order-theoretic checks of classical and quantum probability.')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='log more (repeat for debug output)')
    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser('check', help='run the law-check suites')
    _add_common(check)
    check.add_argument('--suite', choices=('all', *SUITE_NAMES), default='all')
    check.add_argument('--random-count', type=_count, default=100, help='random instances per suite (default: %(default)s)')

    report = commands.add_parser('report', help='print Table 1 or Table 2 for a scenario')
    _add_common(report)
    report.add_argument('--table', type=int, choices=(1, 2), default=1)

    demo = commands.add_parser('demo', help='print both tables for the bundled fixture')
    _add_common(demo, with_scenario=False)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def _tolerances(base: Tolerances, scenario: Scenario | None, override: float | None) -> Tolerances:
    if override is not None:
        return base.replace(tol=override)
    if scenario is not None and scenario.tolerance is not None:
        return base.replace(tol=scenario.tolerance)
    return base


def _load(args: argparse.Namespace) -> Scenario:
    path = getattr(args, 'scenario', None)
    if path is None:
        return bundled_fixture()
    return load_scenario(path)


def _render_check(result: dict[str, Any]) -> str:
    lines = [f'seed={result["seed"]}  tolerance={result["tolerance"]}  scenario={result["scenario"]}', '']
    summary = [
        {'suite': name, 'checked': suite['checked'], 'violations': len(suite['violations'])}
        for name, suite in sorted(result['suites'].items())
    ]
    lines.extend(format_table(summary))
    for name, suite in sorted(result['suites'].items()):
        if suite['violations']:
            lines.extend(['', f'{name} violations:'])
            lines.extend(format_table(suite['violations'], ('module', 'law', 'inputs')))
        for note in suite['notes']:
            lines.append(f'note ({name}): {note}')
    lines.extend(['', 'PASSED' if result['passed'] else 'FAILED'])
    return '\n'.join(lines) + '\n'


def _check(args: argparse.Namespace, scenario: Scenario, out: TextIO) -> int:
    result = run_suites(scenario, args.suite, args.seed, args.random_count, args.contexts)
    out.write(_render_check(result) if args.output == 'text' else render_json(result))
    return EXIT_OK if result['passed'] else EXIT_VIOLATION


def _report(args: argparse.Namespace, scenario: Scenario, out: TextIO) -> int:
    report = build_report(scenario, args.table, args.seed, args.contexts)
    out.write(render_json(report) if args.output == 'json' else render_text(report))
    return EXIT_OK


def _demo(args: argparse.Namespace, scenario: Scenario, out: TextIO) -> int:
    reports = [build_report(scenario, table, args.seed, args.contexts) for table in (1, 2)]
    if args.output == 'json':
        out.write(render_json({'tables': reports}))
    else:
        out.write('\n'.join(render_text(report) for report in reports))
    return EXIT_OK


COMMANDS = {'check': _check, 'report': _report, 'demo': _demo}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        base = _tolerances(Tolerances.from_env(), None, args.tol)
        with use_tolerances(base):
            scenario = _load(args)
        with use_tolerances(_tolerances(Tolerances.from_env(), scenario, args.tol)) as tolerances:
            logger.info('running %s on %s with tolerance %g', args.command, scenario.source, tolerances.tol)
            return COMMANDS[args.command](args, scenario, sys.stdout)
    except Error as error:
        message = f'error: {error}'
        if error.invariant:
            message += f' [{error.invariant}]'
        print(message, file=sys.stderr)
        return EXIT_INPUT
    except OSError as error:
        print(f'error: {error}', file=sys.stderr)
        return EXIT_INPUT


__all__ = ('EXIT_INPUT', 'EXIT_OK', 'EXIT_VIOLATION', 'build_parser', 'main')
