"""
Temperley-Lieb Module

The concrete diagram calculus behind the skein evaluator.

PlanarMatching
    A non-crossing perfect matching of 2N boundary points: bottom points
    0..N-1 and top points N..2N-1 (top point N+j sits above bottom j).
TLVector
    A linear combination of matchings with RingElem coefficients. Closed
    loops are replaced by delta = -v - v^-1 = -[2].
Jones-Wenzl idempotents
    Built by the Wenzl recursion and cached per (p, w).
Link states
    Basis of the standard modules: each of N points is either paired by a
    non-crossing arc or is a defect, and no defect sits under an arc. The
    generators act on them with the usual rules; the action is cached.

Stacking convention: tl_compose(x, y) puts x below y, matching the
bottom-to-top reading of braid words.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from utils.error_handler import ColorOutOfRange, WidthMismatch

from .cyclo import RingElem, check_prime, exact_div, monomial, quantum_int, ring_one, ring_zero

logger = logging.getLogger(__name__)


# ============================================================================
# Planar Matchings
# ============================================================================

def _circle_position(i: int, n: int) -> int:
    return i if i < n else 3 * n - 1 - i


def _is_noncrossing(partner: Sequence[int], n: int) -> bool:
    order = sorted(range(2 * n), key=lambda i: _circle_position(i, n))
    stack: List[int] = []
    for i in order:
        j = partner[i]
        if _circle_position(j, n) > _circle_position(i, n):
            stack.append(i)
        elif not stack or stack.pop() != j:
            return False
    return not stack


@dataclass(frozen=True)
class PlanarMatching:
    """Non-crossing perfect matching on 2N boundary points."""

    partner: Tuple[int, ...]

    def __post_init__(self):
        partner = tuple(self.partner)
        object.__setattr__(self, 'partner', partner)
        size = len(partner)
        if size % 2:
            raise ValueError("a matching needs an even number of points")
        for i, j in enumerate(partner):
            if not 0 <= j < size or j == i or partner[j] != i:
                raise ValueError(f"not a perfect matching: {partner}")
        if not _is_noncrossing(partner, size // 2):
            raise ValueError(f"matching is not planar: {partner}")

    @classmethod
    def _trusted(cls, partner: Tuple[int, ...]) -> 'PlanarMatching':
        obj = cls.__new__(cls)
        object.__setattr__(obj, 'partner', partner)
        return obj

    @property
    def width(self) -> int:
        return len(self.partner) // 2

    def through_strands(self) -> int:
        n = self.width
        return sum(1 for i in range(n) if self.partner[i] >= n)


@lru_cache(maxsize=None)
def identity_matching(n: int) -> PlanarMatching:
    return PlanarMatching._trusted(tuple(list(range(n, 2 * n)) + list(range(n))))


@lru_cache(maxsize=None)
def generator_matching(n: int, i: int) -> PlanarMatching:
    """e_i joining points i and i+1 (0-based) at the bottom and at the top."""
    if not 0 <= i < n - 1:
        raise ValueError(f"no generator e_{i} in width {n}")
    partner = list(identity_matching(n).partner)
    partner[i], partner[i + 1] = i + 1, i
    partner[n + i], partner[n + i + 1] = n + i + 1, n + i
    return PlanarMatching._trusted(tuple(partner))


@lru_cache(maxsize=1 << 18)
def stack(lower: PlanarMatching, upper: PlanarMatching) -> Tuple[PlanarMatching, int]:
    """
    Glue the top of ``lower`` to the bottom of ``upper``.

    Returns:
        the resulting matching and the number of closed loops
    """
    n = lower.width
    if upper.width != n:
        raise WidthMismatch("cannot stack matchings of different widths", left=n, right=upper.width)
    lo, up = lower.partner, upper.partner
    seen = [False] * n
    out = [-1] * (2 * n)

    def follow(in_upper: bool, point: int) -> int:
        while True:
            if in_upper:
                q = up[point]
                if q >= n:
                    return q
                seen[q] = True
                in_upper, point = False, n + q
            else:
                q = lo[point]
                if q < n:
                    return q
                seen[q - n] = True
                in_upper, point = True, q - n

    for i in range(n):
        if out[i] < 0:
            j = follow(False, i)
            out[i], out[j] = j, i
    for i in range(n, 2 * n):
        if out[i] < 0:
            j = follow(True, i)
            out[i], out[j] = j, i

    loops = 0
    for start in range(n):
        if seen[start]:
            continue
        loops += 1
        mid = start
        while True:
            seen[mid] = True
            q = up[mid]
            seen[q] = True
            mid = lo[n + q] - n
            if mid == start:
                break
    return PlanarMatching._trusted(tuple(out)), loops


@lru_cache(maxsize=1 << 16)
def closure_loops(m: PlanarMatching) -> int:
    """Number of circles in the trace closure (top j joined to bottom j)."""
    n = m.width
    seen = [False] * (2 * n)
    loops = 0
    for start in range(2 * n):
        if seen[start]:
            continue
        loops += 1
        i = start
        while not seen[i]:
            seen[i] = True
            j = m.partner[i]
            seen[j] = True
            i = j + n if j < n else j - n
    return loops


def tensor_matching(left: PlanarMatching, right: PlanarMatching) -> PlanarMatching:
    """Place two matchings side by side."""
    a, b = left.width, right.width
    n = a + b

    def place_left(i: int) -> int:
        return i if i < a else n + (i - a)

    def place_right(i: int) -> int:
        return a + i if i < b else n + a + (i - b)

    partner = [0] * (2 * n)
    for i, j in enumerate(left.partner):
        partner[place_left(i)] = place_left(j)
    for i, j in enumerate(right.partner):
        partner[place_right(i)] = place_right(j)
    return PlanarMatching._trusted(tuple(partner))


# ============================================================================
# Temperley-Lieb Vectors
# ============================================================================

@lru_cache(maxsize=None)
def loop_value(p: int) -> RingElem:
    """delta = -A^2 - A^-2 = -v - v^-1"""
    check_prime(p)
    return -(monomial(p, 1) + monomial(p, -1))


@lru_cache(maxsize=4096)
def loop_power(p: int, k: int) -> RingElem:
    return loop_value(p) ** k


class TLVector:
    """
    Formal combination of planar matchings of one width.

    Zero coefficients are never stored.
    """

    __slots__ = ('p', 'width', 'terms')

    def __init__(self, p: int, width: int, terms: Optional[Dict[PlanarMatching, RingElem]] = None):
        self.p = p
        self.width = width
        self.terms: Dict[PlanarMatching, RingElem] = {
            m: c for m, c in (terms or {}).items() if not c.is_zero()
        }

    @classmethod
    def identity(cls, p: int, width: int) -> 'TLVector':
        return cls(p, width, {identity_matching(width): ring_one(p)})

    @classmethod
    def generator(cls, p: int, width: int, i: int) -> 'TLVector':
        """e_i, 0-based."""
        return cls(p, width, {generator_matching(width, i): ring_one(p)})

    def _check(self, other: 'TLVector') -> None:
        if other.width != self.width:
            raise WidthMismatch("Temperley-Lieb widths differ", left=self.width, right=other.width)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: 'TLVector') -> 'TLVector':
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return TLVector(self.p, self.width, out)

    def __neg__(self) -> 'TLVector':
        return TLVector(self.p, self.width, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: 'TLVector') -> 'TLVector':
        return self + (-other)

    def scale(self, c: RingElem) -> 'TLVector':
        return TLVector(self.p, self.width, {m: c * a for m, a in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TLVector):
            return NotImplemented
        return self.width == other.width and (self - other).is_zero()

    __hash__ = None

    def compose(self, other: 'TLVector') -> 'TLVector':
        """self below other."""
        self._check(other)
        out: Dict[PlanarMatching, RingElem] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                m, loops = stack(a, b)
                c = ca * cb
                if loops:
                    c = c * loop_power(self.p, loops)
                out[m] = out[m] + c if m in out else c
        return TLVector(self.p, self.width, out)

    def trace(self) -> RingElem:
        """Closure trace: each closed circle counts delta."""
        total = ring_zero(self.p)
        for m, c in self.terms.items():
            total = total + c * loop_power(self.p, closure_loops(m))
        return total

    def embed(self, left: int, right: int) -> 'TLVector':
        """Add ``left`` and ``right`` vertical strands on either side."""
        if not left and not right:
            return self
        lid, rid = identity_matching(left), identity_matching(right)
        out = {}
        for m, c in self.terms.items():
            out[tensor_matching(tensor_matching(lid, m), rid)] = c
        return TLVector(self.p, self.width + left + right, out)

    def drop_bottom_turnbacks(self, upto: int) -> 'TLVector':
        """Remove terms with a bottom arc joining two points below ``upto``."""
        keep = {}
        for m, c in self.terms.items():
            if not any(j < upto for i, j in enumerate(m.partner[:upto]) if i < j):
                keep[m] = c
        return TLVector(self.p, self.width, keep)


def tl_compose(x: TLVector, y: TLVector) -> TLVector:
    """Bilinear stacking (x below y) with delta per closed loop."""
    return x.compose(y)


# ============================================================================
# Jones-Wenzl Idempotents
# ============================================================================

@lru_cache(maxsize=None)
def jones_wenzl(p: int, w: int) -> TLVector:
    """
    The Jones-Wenzl idempotent of width w, 0 <= w <= p - 3.

    Wenzl recursion:
        f_(n+1) = f_n (x) 1 + ([n]/[n+1]) (f_n (x) 1) e_n (f_n (x) 1)

    Terms of e_n (f_n (x) 1) with a turnback among the first n bottom points
    are killed by the lower copy of f_n (x) 1 and are dropped before the
    product. The quotients [n]/[n+1] stay in R since [n+1] is a unit.
    """
    check_prime(p)
    if not 0 <= w <= p - 3:
        raise ColorOutOfRange("Jones-Wenzl width outside 0..p-3", color=w, p=p)
    if w == 0:
        return TLVector(p, 0, {PlanarMatching._trusted(()): ring_one(p)})
    if w == 1:
        return TLVector.identity(p, 1)
    n = w - 1
    lifted = jones_wenzl(p, n).embed(0, 1)
    middle = TLVector.generator(p, w, n - 1).compose(lifted).drop_bottom_turnbacks(n)
    ratio = exact_div(quantum_int(p, n), quantum_int(p, n + 1))
    result = lifted + lifted.compose(middle).scale(ratio)
    logger.debug(f"Jones-Wenzl width {w}: {len(result)} terms",
                 extra={'p': p, 'width': w, 'event_type': 'jones_wenzl'})
    return result


def chebyshev_delta(p: int, k: int) -> RingElem:
    """Delta_k = (-1)^k [k+1], the trace of the width-k idempotent."""
    q = quantum_int(p, k + 1)
    return -q if k % 2 else q


# ============================================================================
# Link States (standard modules)
# ============================================================================

LinkState = Tuple[int, ...]
DEFECT = -1

LOOP, ZERO, MOVE = 0, 1, 2


@lru_cache(maxsize=None)
def link_states(n: int, k: int) -> Tuple[LinkState, ...]:
    """All link states on n points with k defects, no defect under an arc."""
    if k > n or (n - k) % 2:
        return ()
    out: List[LinkState] = []

    def build(pos: int, state: List[int], open_arcs: List[int], defects: int) -> None:
        remaining = n - pos
        if remaining < len(open_arcs) + (k - defects):
            return
        if pos == n:
            if not open_arcs and defects == k:
                out.append(tuple(state))
            return
        if not open_arcs and defects < k:
            state.append(DEFECT)
            build(pos + 1, state, open_arcs, defects + 1)
            state.pop()
        state.append(0)
        open_arcs.append(pos)
        build(pos + 1, state, open_arcs, defects)
        open_arcs.pop()
        state.pop()
        if open_arcs:
            start = open_arcs.pop()
            state[start] = pos
            state.append(start)
            build(pos + 1, state, open_arcs, defects)
            state.pop()
            state[start] = 0
            open_arcs.append(start)

    build(0, [], [], 0)
    return tuple(out)


def good_states(blocks: Sequence[Tuple[int, int]], n: int, k: int) -> Tuple[LinkState, ...]:
    """Link states with no arc inside one (start, width) block."""
    owner = [-1] * n
    for b, (start, width) in enumerate(blocks):
        for i in range(start, start + width):
            owner[i] = b
    return tuple(
        s for s in link_states(n, k)
        if not any(j > i and owner[i] == owner[j] >= 0 for i, j in enumerate(s) if j != DEFECT)
    )


@lru_cache(maxsize=1 << 20)
def act_generator(state: LinkState, i: int) -> Tuple[int, Optional[LinkState]]:
    """
    Apply e_i (points i, i+1) to a link state.

    Returns:
        (LOOP, state) for a factor delta, (ZERO, None), or (MOVE, new_state)
    """
    a, b = state[i], state[i + 1]
    if a == i + 1:
        return LOOP, state
    if a == DEFECT and b == DEFECT:
        return ZERO, None
    new = list(state)
    if a != DEFECT and b != DEFECT:
        new[a], new[b] = b, a
    elif a == DEFECT:
        new[b] = DEFECT
    else:
        new[a] = DEFECT
    new[i], new[i + 1] = i + 1, i
    return MOVE, tuple(new)
