"""
Andrews-Curtis Fuzzing Module

Random presentations, random AC moves and a runner that recomputes Z_Q
along each orbit. Every case owns a seed derived from (seed, case index),
so a single case can be replayed without rerunning the whole batch:

    rng = random.Random(case_seed(seed, index))

Refusals (width guard, Euler characteristic below 1) skip a step; only a
change of value between evaluated steps counts as a discrepancy.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from progress import ordered_map
from utils.error_handler import CableTooWide, ChiTooSmall
from utils.structured_logging import get_logger

from .category import CategoryData
from .homology import q_invariant_homological
from .presentation import (
    ConjugateRelator,
    Destabilize,
    InvertRelator,
    Move,
    MultiplyRelator,
    Presentation,
    Stabilize,
    Word,
    ac_move,
    destabilizable,
    euler_char,
    free_reduce,
    move_name,
    serialize,
)
from .skein import DEFAULT_GUARD, SkeinEvaluator

logger = logging.getLogger(__name__)
events = get_logger(__name__)

METHODS = ('homology', 'skein', 'both')
GENERATOR_NAMES = ('x', 'y', 'z', 'w')
MAX_STRANDS = 8


def case_seed(seed: int, index: int) -> int:
    """Replay seed of one case."""
    return (seed * 1_000_003 + index) % (1 << 63)


# ============================================================================
# Random Generation
# ============================================================================

def random_word(rng: random.Random, n: int, max_length: int = 8) -> Word:
    """Freely reduced word of length at most max_length (possibly empty)."""
    if n == 0:
        return Word()
    length = rng.randint(1, max_length)
    letters = tuple((rng.randrange(n), rng.choice((1, -1))) for _ in range(length))
    return free_reduce(Word(letters))


def random_presentation(rng: random.Random, max_generators: int = 3, max_relators: int = 4,
                        max_length: int = 8, chi_bias: float = 2 / 3) -> Presentation:
    """
    Random presentation with 1..max_generators generators.

    With probability chi_bias the relator count is at least the generator
    count (chi >= 1); otherwise it is smaller.
    """
    n = rng.randint(1, max_generators)
    if rng.random() < chi_bias and n <= max_relators:
        m = rng.randint(n, max_relators)
    else:
        m = rng.randint(0, min(n - 1, max_relators))
    names = GENERATOR_NAMES[:n] if n <= len(GENERATOR_NAMES) else tuple(f"g{i + 1}" for i in range(n))
    relators = tuple(random_word(rng, n, max_length) for _ in range(m))
    return Presentation(tuple(names), relators)


def random_move(rng: random.Random, P: Presentation, max_strands: int = MAX_STRANDS) -> Move:
    """
    A uniformly chosen applicable AC move.

    Stabilization is only offered while the thickening stays within
    max_strands strands.
    """
    options = []
    if P.m >= 1:
        options.append('invert')
        if P.n >= 1:
            options.append('conjugate')
    if P.m >= 2:
        options.append('multiply')
    if P.n + P.m + 2 <= max_strands:
        options.append('stabilize')
    removable = [i for i in range(P.m) if destabilizable(P, i) is not None]
    if removable:
        options.append('destabilize')
    if not options:
        return Stabilize()

    kind = rng.choice(options)
    if kind == 'invert':
        return InvertRelator(rng.randrange(P.m))
    if kind == 'conjugate':
        return ConjugateRelator(rng.randrange(P.m), rng.randrange(P.n), rng.choice((1, -1)))
    if kind == 'multiply':
        i, j = rng.sample(range(P.m), 2)
        return MultiplyRelator(i, j)
    if kind == 'stabilize':
        return Stabilize()
    return Destabilize(rng.choice(removable))


# ============================================================================
# Reports
# ============================================================================

@dataclass
class CaseResult:
    """One fuzz orbit."""

    index: int
    seed: int
    start: str
    moves: List[str] = field(default_factory=list)
    values: List[Optional[int]] = field(default_factory=list)
    skipped_steps: int = 0
    status: str = 'ok'
    detail: str = ''

    def to_dict(self) -> Dict[str, object]:
        return {
            'index': self.index,
            'seed': self.seed,
            'start': self.start,
            'moves': list(self.moves),
            'values': list(self.values),
            'skipped_steps': self.skipped_steps,
            'status': self.status,
            'detail': self.detail,
        }


@dataclass
class FuzzReport:
    """Results of a fuzz run, in case-index order."""

    p: int
    method: Optional[str]
    seed: int
    moves: int
    cases: List[CaseResult] = field(default_factory=list)

    @property
    def discrepancies(self) -> List[CaseResult]:
        return [c for c in self.cases if c.status == 'discrepancy']

    @property
    def skipped(self) -> int:
        return sum(1 for c in self.cases if c.status == 'skipped')

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def to_dict(self) -> Dict[str, object]:
        return {
            'p': self.p,
            'method': self.method or 'auto',
            'seed': self.seed,
            'cases': len(self.cases),
            'moves': self.moves,
            'discrepancies': len(self.discrepancies),
            'skipped_cases': self.skipped,
            'skipped_steps': sum(c.skipped_steps for c in self.cases),
            'results': [c.to_dict() for c in self.cases],
        }


# ============================================================================
# Runner
# ============================================================================

def resolve_method(P: Presentation, method: Optional[str]) -> str:
    """'both' for chi >= 1 and 'skein' otherwise unless a method is given."""
    if method is not None:
        if method not in METHODS:
            raise ValueError(f"unknown method '{method}', expected one of {METHODS}")
        return method
    return 'both' if euler_char(P) >= 1 else 'skein'


def _evaluate(cat: CategoryData, evaluator: SkeinEvaluator, P: Presentation,
              method: str) -> Tuple[Optional[int], str]:
    """Value of one orbit step, plus a mismatch note when methods disagree."""
    homological = skein = None
    if method in ('homology', 'both'):
        try:
            homological = q_invariant_homological(cat, P)
        except ChiTooSmall:
            pass
    if method in ('skein', 'both'):
        try:
            skein = evaluator.z_q(P)
        except CableTooWide:
            pass
    if homological is not None and skein is not None and homological != skein:
        return skein, f"homology gives {homological}, skein gives {skein}"
    return (skein if skein is not None else homological), ''


def run_case(cat: CategoryData, evaluator: SkeinEvaluator, index: int, seed: int, moves: int,
             method: Optional[str], max_generators: int = 3, max_relators: int = 4,
             max_length: int = 8) -> CaseResult:
    """Generate one presentation and follow a random AC orbit from it."""
    cs = case_seed(seed, index)
    rng = random.Random(cs)
    P = random_presentation(rng, max_generators, max_relators, max_length)
    how = resolve_method(P, method)
    result = CaseResult(index=index, seed=cs, start=serialize(P))

    max_strands = max(MAX_STRANDS, P.n + P.m)
    first = None
    for step in range(moves + 1):
        if step:
            move = random_move(rng, P, max_strands)
            P = ac_move(P, move)
            result.moves.append(move_name(move))
        value, mismatch = _evaluate(cat, evaluator, P, how)
        result.values.append(value)
        if value is None:
            result.skipped_steps += 1
            continue
        if mismatch:
            result.status, result.detail = 'discrepancy', f"step {step}: {mismatch}"
        elif first is None:
            first = value
        elif value != first and result.status != 'discrepancy':
            result.status = 'discrepancy'
            result.detail = f"step {step}: value {value} differs from {first} ({serialize(P)})"
        if result.status == 'discrepancy':
            events.log_discrepancy(index, cs, result.moves[-1] if result.moves else 'start',
                                   p=cat.p, method=how)
            break

    if result.status == 'ok' and first is None:
        result.status = 'skipped'
    events.log_fuzz_case(index, cs, len(result.values), p=cat.p, method=how)
    return result


def append_failures(report: FuzzReport, path: Union[str, Path]) -> int:
    """Append discrepant cases as JSON lines; returns the number written."""
    failures = report.discrepancies
    if not failures:
        return 0
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('a', encoding='utf-8') as fh:
        for case in failures:
            entry = {'p': report.p, 'method': report.method or 'auto', **case.to_dict()}
            fh.write(json.dumps(entry, sort_keys=True) + '\n')
    return len(failures)


def run_fuzz(cat: CategoryData, cases: int = 100, moves: int = 20, seed: int = 0,
             method: Optional[str] = None, guard: int = DEFAULT_GUARD, workers: int = 1,
             failure_log: Optional[Union[str, Path]] = None, max_generators: int = 3,
             max_relators: int = 4, max_length: int = 8, show_progress: bool = False) -> FuzzReport:
    """
    Run ``cases`` random orbits of ``moves`` AC moves each.

    The report is identical for identical arguments regardless of worker
    count.
    """
    if method is not None and method not in METHODS:
        raise ValueError(f"unknown method '{method}', expected one of {METHODS}")
    evaluator = SkeinEvaluator(cat, guard=guard)
    results = ordered_map(
        lambda i: run_case(cat, evaluator, i, seed, moves, method,
                           max_generators, max_relators, max_length),
        range(cases), workers=workers, desc=f"fuzz-ac (p={cat.p})", show_progress=show_progress,
    )
    report = FuzzReport(p=cat.p, method=method, seed=seed, moves=moves, cases=results)
    if failure_log is not None:
        append_failures(report, failure_log)
    logger.info(f"fuzz run finished: {len(report.discrepancies)} discrepancies in {cases} cases",
                extra={'p': cat.p, 'method': method or 'auto', 'seed': seed})
    return report
