"""
qspine - Main CLI Commands

Quantum invariants of 2-complexes from the command line.

Exit codes:
    0  success
    1  usage or parse error
    2  mathematical refusal (Euler characteristic too small, width guard)
    3  verification failure or fuzz discrepancy
    4  internal error
"""

import logging
import sys
import time
from typing import Optional

import click

from caching import JWStore
from config import Config, RunConfig, get_config
from core.category import sl2_class0
from core.fuzz import run_fuzz
from core.homology import homology_of, q_invariant_homological
from core.linkdiag import standard_link
from core.presentation import dual, euler_char, serialize
from core.skein import SkeinEvaluator
from core.verify import run_identities
from utils.error_handler import (
    EXIT_FAILURE,
    EXIT_INTERNAL,
    EXIT_USAGE,
    ChiTooSmall,
    QSpineError,
)
from utils.structured_logging import get_logger, setup_structured_logging

from .helpers import echo_json, parse_primes, print_error, read_link, read_presentation
from .reports import (
    envelope,
    invariant_result,
    link_info_result,
    render_fuzz,
    render_invariant,
    render_link_info,
    render_verify,
    rtw_result,
)

logger = logging.getLogger(__name__)
events = get_logger(__name__)

VERSION = '1.0.0'


class QSpineGroup(click.Group):
    """Click group that maps errors to the documented exit codes."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args=args, prog_name=prog_name, complete_var=complete_var,
                              standalone_mode=False, **extra)
            code = rv if isinstance(rv, int) else 0
        except click.ClickException as e:
            e.show()
            code = EXIT_USAGE
        except click.Abort:
            print_error("Aborted")
            code = EXIT_USAGE
        except QSpineError as e:
            print_error(str(e))
            code = e.exit_code
        except Exception as e:
            logger.error(f"internal error: {e}", exc_info=True)
            print_error(f"internal error: {e}")
            code = EXIT_INTERNAL
        if standalone_mode:
            sys.exit(code)
        return code


def _run_config(ctx: click.Context, **flags) -> RunConfig:
    return RunConfig.from_sources(ctx.obj['config'], **flags)


def _evaluator(ctx: click.Context, rc: RunConfig) -> SkeinEvaluator:
    store = JWStore(rc.cache_dir) if rc.cache_dir else None
    return SkeinEvaluator(sl2_class0(rc.p), guard=rc.guard, workers=rc.workers,
                          show_progress=ctx.obj['progress'], store=store)


@click.group(cls=QSpineGroup)
@click.version_option(version=VERSION)
@click.option('--log-level', default=None,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='Log level for stderr and log files')
@click.option('--log-dir', type=click.Path(file_okay=False), default=None,
              help='Write rotating JSON logs to this directory')
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='Settings file (default: config.yaml in the project root)')
@click.option('--progress', is_flag=True, help='Show progress bars on stderr')
@click.pass_context
def cli(ctx, log_level, log_dir, config_path, progress):
    """
    qspine - quantum invariants of 2-complexes at a prime root of unity

    Common Commands:
      qspine invariant FILE.pres   - Z_Q of a presentation complex
      qspine verify                - Run the identity suite
      qspine fuzz-ac               - Random Andrews-Curtis orbits
      qspine dual FILE.pres        - Dual presentation
      qspine link-info FILE.link   - Linking matrix and signature
      qspine rtw FILE.link         - RTW value of a surgery diagram

    Examples:
      qspine invariant data/presentations/cyclic3.pres --p 5 --method both
      qspine verify --p 5,7,11,13
      qspine fuzz-ac --p 5 --cases 20 --moves 6 --method skein --guard 12

    For help on specific command:
      qspine COMMAND --help
    """
    config = get_config(config_path) if config_path else Config()
    level = log_level or config.log_level
    setup_structured_logging(log_level=level, log_dir=log_dir or config.log_dir,
                             enable_json=config.log_json, console_level=level)
    ctx.obj = {'config': config, 'progress': progress}


@cli.command()
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--p', 'p', type=int, default=None, help='Prime (>= 5)')
@click.option('--method', type=click.Choice(['homology', 'skein', 'both']), default=None,
              help='Route to Z_Q (default: both for chi >= 1, skein otherwise)')
@click.option('--guard', type=int, default=None, help='Maximum total cable width')
@click.option('--workers', type=int, default=None, help='Threads for the coloring sum')
@click.option('--cache-dir', type=click.Path(file_okay=False), default=None,
              help='Persist Jones-Wenzl idempotents here')
@click.option('--timing', is_flag=True, help='Add timing to JSON output')
@click.option('--json', 'as_json', is_flag=True, help='Print a JSON report')
@click.pass_context
def invariant(ctx, file, p, method, guard, workers, cache_dir, timing, as_json):
    """
    Compute Z_Q of a presentation complex

    Examples:
      qspine invariant cyclic3.pres --p 5 --method both
      qspine invariant commutator.pres --p 7 --method skein --json
    """
    start = time.time()
    P = read_presentation(file)
    rc = _run_config(ctx, p=p, method=method, guard=guard, workers=workers,
                     cache_dir=cache_dir, timing=timing or None)
    cat = sl2_class0(rc.p)
    chi = euler_char(P)
    how = rc.method or ('both' if chi >= 1 else 'skein')

    z_homology = None
    if how in ('homology', 'both'):
        try:
            z_homology = q_invariant_homological(cat, P)
        except ChiTooSmall as e:
            if how == 'homology':
                events.log_refusal('invariant', e, p=rc.p)
                raise

    skein = None
    if how in ('skein', 'both'):
        try:
            skein = _evaluator(ctx, rc).invariant(standard_link(P))
        except QSpineError as e:
            events.log_refusal('invariant', e, p=rc.p)
            raise

    result = invariant_result(serialize(P), how, chi, homology_of(P), z_homology, skein)
    events.log_invariant('invariant', rc.p, how, duration=time.time() - start)
    if as_json:
        echo_json(envelope('invariant', result, p=rc.p,
                           seconds=time.time() - start if rc.timing else None))
    else:
        for line in render_invariant(rc.p, result):
            click.echo(line)
    return EXIT_FAILURE if result['agree'] is False else 0


@cli.command()
@click.option('--p', 'primes', default=None, help='Comma-separated primes (default from config)')
@click.option('--guard', type=int, default=None, help='Maximum total cable width')
@click.option('--json', 'as_json', is_flag=True, help='Print a JSON report')
@click.pass_context
def verify(ctx, primes, guard, as_json):
    """
    Run the ring, category and skein identity suite

    Examples:
      qspine verify
      qspine verify --p 5,7 --json
    """
    config = ctx.obj['config']
    prime_list = parse_primes(primes) if primes else config.verify_primes
    checked = [_run_config(ctx, p=q, guard=guard) for q in prime_list]
    report = run_identities([rc.p for rc in checked], guard=checked[0].guard)
    if as_json:
        echo_json(envelope('verify', report.to_dict()))
    else:
        for line in render_verify(report):
            click.echo(line)
    return 0 if report.ok else EXIT_FAILURE


@cli.command('fuzz-ac')
@click.option('--p', 'p', type=int, default=None, help='Prime (>= 5)')
@click.option('--cases', type=int, default=None, help='Number of random presentations')
@click.option('--moves', type=int, default=None, help='AC moves per presentation')
@click.option('--seed', type=int, default=None, help='Seed; identical seeds give identical reports')
@click.option('--method', type=click.Choice(['homology', 'skein', 'both']), default=None,
              help='Route to Z_Q (default: per case)')
@click.option('--guard', type=int, default=None, help='Maximum total cable width')
@click.option('--workers', type=int, default=None, help='Threads over cases')
@click.option('--failure-log', type=click.Path(dir_okay=False), default=None,
              help='Append discrepant cases here as JSON lines')
@click.option('--max-generators', type=int, default=None)
@click.option('--max-relators', type=int, default=None)
@click.option('--max-length', type=int, default=None)
@click.option('--json', 'as_json', is_flag=True, help='Print a JSON report')
@click.pass_context
def fuzz_ac(ctx, p, cases, moves, seed, method, guard, workers, failure_log,
            max_generators, max_relators, max_length, as_json):
    """
    Check Z_Q along random Andrews-Curtis orbits

    Examples:
      qspine fuzz-ac --p 5 --cases 100 --moves 20 --method homology
      qspine fuzz-ac --p 5 --cases 20 --moves 6 --method skein --guard 12
    """
    config: Config = ctx.obj['config']
    rc = _run_config(ctx, p=p, cases=cases, moves=moves, seed=seed, method=method,
                     guard=guard, workers=workers)
    report = run_fuzz(
        sl2_class0(rc.p), cases=rc.cases, moves=rc.moves, seed=rc.seed, method=rc.method,
        guard=rc.guard, workers=rc.workers,
        failure_log=failure_log or config.failure_log,
        max_generators=max_generators or config.get('fuzz.max_generators', 3),
        max_relators=max_relators or config.get('fuzz.max_relators', 4),
        max_length=max_length or config.get('fuzz.max_length', 8),
        show_progress=ctx.obj['progress'],
    )
    data = report.to_dict()
    data.pop('p')
    if as_json:
        echo_json(envelope('fuzz-ac', data, p=rc.p))
    else:
        for line in render_fuzz(report):
            click.echo(line)
    return 0 if report.ok else EXIT_FAILURE


@cli.command('dual')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--json', 'as_json', is_flag=True, help='Print a JSON report')
def dual_command(file, as_json):
    """
    Print the dual presentation

    Examples:
      qspine dual circle.pres      # < | 1>
    """
    P = read_presentation(file)
    text = serialize(dual(P))
    if as_json:
        echo_json(envelope('dual', {'presentation': serialize(P), 'dual': text}))
    else:
        click.echo(text)
    return 0


@cli.command('link-info')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--json', 'as_json', is_flag=True, help='Print a JSON report')
def link_info(file, as_json):
    """
    Show components, linking matrix and signature of a link file

    Examples:
      qspine link-info data/links/hopf.link
    """
    result = link_info_result(read_link(file))
    if as_json:
        echo_json(envelope('link-info', result))
    else:
        for line in render_link_info(result):
            click.echo(line)
    return 0


@cli.command()
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--p', 'p', type=int, default=None, help='Prime (>= 5)')
@click.option('--guard', type=int, default=None, help='Maximum total cable width')
@click.option('--workers', type=int, default=None, help='Threads for the coloring sum')
@click.option('--cache-dir', type=click.Path(file_okay=False), default=None,
              help='Persist Jones-Wenzl idempotents here')
@click.option('--fold-root', is_flag=True,
              help='Fold a leftover X into the value when p = 3 mod 4')
@click.option('--timing', is_flag=True, help='Add timing to JSON output')
@click.option('--json', 'as_json', is_flag=True, help='Print a JSON report')
@click.pass_context
def rtw(ctx, file, p, guard, workers, cache_dir, fold_root, timing, as_json):
    """
    RTW value of the boundary of a link's thickening (dots forgotten)

    Examples:
      qspine rtw data/links/hopf.link --p 7 --fold-root
    """
    start = time.time()
    L = read_link(file)
    rc = _run_config(ctx, p=p, guard=guard, workers=workers, cache_dir=cache_dir,
                     fold_root=fold_root or None, timing=timing or None)
    value = _evaluator(ctx, rc).z_rtw(L, fold_root=rc.fold_root)
    note = None
    if rc.p % 4 == 3:
        note = "X = g1/(v - v^-1) with sign fixing its leading Ohtsuki coefficient in 1..(p-1)/2"
    result = rtw_result(value, note)
    events.log_invariant('rtw', rc.p, 'skein', duration=time.time() - start)
    if as_json:
        echo_json(envelope('rtw', result, p=rc.p, seconds=time.time() - start if rc.timing else None))
    else:
        click.echo(f"{value.label}: {value.format()}")
    return 0


def main() -> None:
    cli(prog_name='qspine')


if __name__ == '__main__':
    main()
