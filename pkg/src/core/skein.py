"""
Skein Evaluation Module

Colored evaluation of framed braid closures in the Kauffman-bracket model of
the class-0 SL(2) category, and the invariants built from it:

    Z(L)      = sum over colorings of prod rank(z_i) * <L, z>
    Zhat(L)   = Z(L) / X^(2 * #dotted)
    Z_RTW(L)  = Z(L) / (C+^s+ C-^s- X^s0)
    Z_Q(P)    = phi_p(Zhat(L_P))

Bracket calibration: A = v^((p-1)/2) so A^2 = v^-1. A positive elementary
crossing expands as A * id + A^-1 * e_i, the loop value is -[2] and a
positive kink on a color-w cable contributes v^t(w).

Two engines compute the colored bracket <L, z>:

standard
    Each cable of width w = 2z carries a Jones-Wenzl projector. The projectors
    commute with the cabled braid, so the closure trace decomposes over the
    standard modules V_k and only link states with no arc inside a cable
    contribute. Coefficients live in Z[v]/(v^p - 1) during the sweep.
tl
    The reference sweep: a TLVector of the full cable width with one
    projector per component, closed up at the end.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

from progress import ordered_map
from utils.error_handler import CableTooWide, ColorOutOfRange, ErrorContext

from .category import CategoryData, root_of_global_dim
from .cyclo import FieldElem, RingElem, exact_div, monomial, ohtsuki_coeffs, phi_p, ring_zero
from .linkdiag import FramedLink, linking_matrix, signature_counts, standard_link, without_dots
from .presentation import Presentation
from .temperley_lieb import (
    LOOP,
    ZERO,
    PlanarMatching,
    TLVector,
    act_generator,
    good_states,
    jones_wenzl,
)

if TYPE_CHECKING:
    from caching import JWStore

logger = logging.getLogger(__name__)

DEFAULT_GUARD = 14
ENGINES = ('standard', 'tl')
RTW_LABEL = "RTW of boundary (adopted normalization)"

Coeff = Tuple[int, ...]


# ============================================================================
# Cabling
# ============================================================================

@lru_cache(maxsize=4096)
def cabled_crossings(letters: Tuple[Tuple[int, int], ...],
                     profile: Tuple[int, ...]) -> Tuple[Tuple[int, int], ...]:
    """
    Elementary crossings (left position, sign) of a cabled braid.

    ``profile`` holds the cable width at each bottom position. For y_j the
    whole left cable passes to the right across the right cable, rightmost
    strand first.
    """
    widths = list(profile)
    out: List[Tuple[int, int]] = []
    for j, sign in letters:
        left = j - 2
        offset = sum(widths[:left])
        a, b = widths[left], widths[left + 1]
        for s in range(a - 1, -1, -1):
            for t in range(b):
                out.append((offset + s + t, sign))
        widths[left], widths[left + 1] = b, a
    return tuple(out)


def _bracket_exponent(p: int, mirror: bool) -> int:
    a = (p - 1) // 2
    return (p - a) % p if mirror else a


# ============================================================================
# Z[v]/(v^p - 1) helpers for the standard engine
# ============================================================================

def _rot(c: Coeff, k: int) -> Coeff:
    k %= len(c)
    return c[-k:] + c[:-k] if k else c


def _loop_times(c: Coeff) -> Coeff:
    up, down = _rot(c, 1), _rot(c, -1)
    return tuple(-(a + b) for a, b in zip(up, down))


def _accumulate(target: Dict, key, c: Coeff) -> None:
    old = target.get(key)
    target[key] = c if old is None else tuple(a + b for a, b in zip(old, c))


def _convolve(x: Coeff, y: Coeff) -> Coeff:
    p = len(x)
    out = [0] * p
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                if b:
                    out[(i + j) % p] += a * b
    return tuple(out)


def _chebyshev_coeff(p: int, k: int) -> Coeff:
    """(-1)^k [k+1] as a length-p vector."""
    out = [0] * p
    sign = -1 if k % 2 else 1
    for j in range(k + 1):
        out[(k - 2 * j) % p] += sign
    return tuple(out)


def _propagate(p: int, start, crossings: Sequence[Tuple[int, int]], a_exp: int) -> Dict:
    unit = (1,) + (0,) * (p - 1)
    vec = {start: unit}
    for q, sign in crossings:
        id_exp = a_exp if sign > 0 else -a_exp
        nxt: Dict = {}
        for state, c in vec.items():
            _accumulate(nxt, state, _rot(c, id_exp))
            kind, moved = act_generator(state, q)
            if kind == ZERO:
                continue
            turned = _rot(c, -id_exp)
            if kind == LOOP:
                _accumulate(nxt, state, _loop_times(turned))
            else:
                _accumulate(nxt, moved, turned)
        vec = {s: c for s, c in nxt.items() if any(c)}
        if not vec:
            break
    return vec


@lru_cache(maxsize=8192)
def _standard_bracket(p: int, mirror: bool, letters: Tuple[Tuple[int, int], ...],
                      profile: Tuple[int, ...]) -> Coeff:
    n = sum(profile)
    if n == 0:
        return (1,) + (0,) * (p - 1)
    crossings = cabled_crossings(letters, profile)
    blocks = []
    start = 0
    for w in profile:
        blocks.append((start, w))
        start += w
    a_exp = _bracket_exponent(p, mirror)

    total = (0,) * p
    for k in range(n % 2, n + 1, 2):
        diagonal = (0,) * p
        for state in good_states(tuple(blocks), n, k):
            image = _propagate(p, state, crossings, a_exp)
            c = image.get(state)
            if c is not None:
                diagonal = tuple(x + y for x, y in zip(diagonal, c))
        if any(diagonal):
            total = tuple(x + y for x, y in zip(total, _convolve(_chebyshev_coeff(p, k), diagonal)))
    return total


# ============================================================================
# Jones-Wenzl Cache
# ============================================================================

class JWCache:
    """
    Jones-Wenzl idempotents for one prime, optionally persisted to disk.

    Built before any parallel evaluation and read-only afterwards.
    """

    def __init__(self, p: int, store: Optional['JWStore'] = None):
        self.p = p
        self.store = store
        self._table: Dict[int, TLVector] = {}

    def get(self, w: int) -> TLVector:
        if w in self._table:
            return self._table[w]
        vec = None
        if self.store is not None:
            plain = self.store.get(self.p, w)
            if plain is not None:
                vec = _jw_from_plain(self.p, w, plain)
        if vec is None:
            vec = jones_wenzl(self.p, w)
            if self.store is not None:
                self.store.set(self.p, w, _jw_to_plain(vec))
        self._table[w] = vec
        return vec

    def warm(self, widths) -> None:
        for w in sorted(set(widths)):
            self.get(w)


def _jw_to_plain(vec: TLVector):
    return tuple((m.partner, c.numerators, c.denominator) for m, c in vec.terms.items())


def _jw_from_plain(p: int, w: int, plain) -> TLVector:
    return TLVector(p, w, {PlanarMatching(tuple(partner)): RingElem(p, num, den)
                           for partner, num, den in plain})


# ============================================================================
# Results
# ============================================================================

@dataclass(frozen=True)
class RTWValue:
    """
    Z_RTW as value * X^x_power.

    X lies in Q(v) only for p = 3 mod 4, so an odd nullity leaves one formal
    factor of X unless it has been folded in.
    """

    value: FieldElem
    x_power: int = 0
    label: str = RTW_LABEL

    def format(self) -> str:
        text = self.value.format()
        if not self.x_power:
            return text
        return "X" if self.value == 1 else f"({text}) * X"

    def to_json(self) -> Dict[str, object]:
        return {'value': self.value.to_json(), 'x_power': self.x_power, 'label': self.label}


@dataclass
class InvariantResult:
    """Z, Zhat and derived data of one thickening."""

    p: int
    z: RingElem
    zhat: RingElem
    z_q: int
    ohtsuki: List[int]
    colorings: int
    duration: float = field(default=0.0, compare=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            'Z': self.z.to_json(),
            'Zhat': self.zhat.to_json(),
            'phi_p_Zhat': self.z_q,
            'ohtsuki': list(self.ohtsuki),
            'colorings': self.colorings,
        }


# ============================================================================
# Evaluator
# ============================================================================

class SkeinEvaluator:
    """
    Evaluates colored framed links for one category.

    Args:
        cat: Category table
        guard: Maximum total cable width
        engine: 'standard' or 'tl'
        mirror: Swap A and A^-1
        workers: Threads for the coloring sum
        show_progress: Draw a progress bar over colorings
        store: Optional JWStore for the tl engine
    """

    def __init__(self, cat: CategoryData, guard: int = DEFAULT_GUARD, engine: str = 'standard',
                 mirror: bool = False, workers: int = 1, show_progress: bool = False,
                 store: Optional['JWStore'] = None):
        if engine not in ENGINES:
            raise ValueError(f"unknown engine '{engine}', expected one of {ENGINES}")
        if guard < 2:
            raise ValueError("width guard must be at least 2")
        self.cat = cat
        self.p = cat.p
        self.guard = guard
        self.engine = engine
        self.mirror = mirror
        self.workers = workers
        self.show_progress = show_progress
        self.jw = JWCache(cat.p, store)

    # ------------------------------------------------------------------ guard

    def max_width(self, L: FramedLink) -> int:
        return 2 * max(self.cat.labels) * L.braid.strands

    def check_width(self, L: FramedLink) -> None:
        """Refuse up front when the widest coloring exceeds the guard."""
        width = self.max_width(L)
        if width > self.guard:
            raise CableTooWide("cabled diagram exceeds the width guard", width=width, guard=self.guard)

    # ---------------------------------------------------------------- bracket

    def _profile(self, L: FramedLink, coloring: Sequence[int]) -> Tuple[int, ...]:
        owner = L.position_component
        return tuple(self.cat.weight(coloring[owner[i]]) for i in range(L.braid.strands))

    def _tl_bracket(self, L: FramedLink, profile: Tuple[int, ...]) -> RingElem:
        p = self.p
        n = sum(profile)
        starts = [sum(profile[:i]) for i in range(len(profile))]
        vec = TLVector.identity(p, n)
        for cycle in L.components:
            pos = cycle[0] - 1
            w = profile[pos]
            if w:
                vec = vec.compose(self.jw.get(w).embed(starts[pos], n - starts[pos] - w))
        a_exp = _bracket_exponent(p, self.mirror)
        a, a_inv = monomial(p, a_exp), monomial(p, -a_exp)
        for q, sign in cabled_crossings(L.braid.letters, profile):
            turned = vec.compose(TLVector.generator(p, n, q))
            if sign > 0:
                vec = vec.scale(a) + turned.scale(a_inv)
            else:
                vec = vec.scale(a_inv) + turned.scale(a)
        return vec.trace()

    def bracket(self, L: FramedLink, coloring: Sequence[int]) -> RingElem:
        """Colored bracket of the blackboard-framed closure, before offsets."""
        profile = self._profile(L, coloring)
        width = sum(profile)
        if width > self.guard:
            raise CableTooWide("cabled diagram exceeds the width guard", width=width, guard=self.guard)
        if self.engine == 'tl':
            return self._tl_bracket(L, profile)
        ext = _standard_bracket(self.p, self.mirror, L.braid.letters, profile)
        return RingElem.from_extended(self.p, ext)

    def eval_colored(self, L: FramedLink, coloring: Sequence[int]) -> RingElem:
        """
        Scalar value of L with component i colored by label coloring[i].

        Raises:
            ColorOutOfRange: a label outside the category
            CableTooWide: total cable width above the guard
        """
        coloring = tuple(coloring)
        if len(coloring) != L.component_count:
            raise ValueError(f"expected {L.component_count} colors, got {len(coloring)}")
        for z in coloring:
            if z not in self.cat.labels:
                raise ColorOutOfRange("color not in the label set", color=z, p=self.p)
        value = self.bracket(L, coloring)
        twist = sum(f * self.cat.twist_exp(z) for f, z in zip(L.framing_offset, coloring))
        return value.shift(twist)

    # ------------------------------------------------------------- invariants

    def _weighted(self, L: FramedLink, coloring: Tuple[int, ...]) -> RingElem:
        weight = None
        for z in coloring:
            r = self.cat.rank(z)
            weight = r if weight is None else weight * r
        value = self.eval_colored(L, coloring)
        logger.debug(f"coloring {coloring} evaluated",
                     extra={'p': self.p, 'engine': self.engine, 'event_type': 'coloring'})
        return value if weight is None else weight * value

    def Z(self, L: FramedLink) -> RingElem:
        """Sum over all colorings, weighted by ranks; dots are ignored."""
        self.check_width(L)
        colorings = list(product(self.cat.labels, repeat=L.component_count))
        if self.engine == 'tl':
            self.jw.warm(self.cat.weight(z) for z in self.cat.labels if z)
        start = time.time()
        with ErrorContext('Z', p=self.p, components=L.component_count):
            terms = ordered_map(lambda c: self._weighted(L, c), colorings, workers=self.workers,
                                desc=f"Z (p={self.p})", show_progress=self.show_progress)
        total = ring_zero(self.p)
        for t in terms:
            total = total + t
        logger.info(f"Z computed over {len(colorings)} colorings",
                    extra={'p': self.p, 'components': L.component_count, 'colorings': len(colorings),
                           'engine': self.engine, 'duration': time.time() - start})
        return total

    def zhat(self, L: FramedLink) -> RingElem:
        """Z(L) / X^(2n) with n dotted components; exact in R for thickenings."""
        return exact_div(self.Z(L), self.cat.x2 ** L.dotted_count)

    def invariant(self, L: FramedLink) -> InvariantResult:
        start = time.time()
        z = self.Z(L)
        zh = exact_div(z, self.cat.x2 ** L.dotted_count)
        return InvariantResult(p=self.p, z=z, zhat=zh, z_q=phi_p(zh), ohtsuki=ohtsuki_coeffs(zh),
                               colorings=len(self.cat.labels) ** L.component_count,
                               duration=time.time() - start)

    def z_rtw(self, L: FramedLink, fold_root: bool = False) -> RTWValue:
        """
        Z(L) / (C+^s+ C-^s- X^s0) for L read as a surgery diagram.

        With fold_root and p = 3 mod 4 an odd nullity is folded into the
        value using X = +-g1/(v - v^-1).
        """
        surgery = without_dots(L)
        plus, minus, null = signature_counts(linking_matrix(surgery))
        z = self.Z(surgery)
        denominator = (self.cat.c_plus ** plus) * (self.cat.c_minus ** minus) \
            * (self.cat.x2 ** ((null + 1) // 2))
        value = z / denominator
        x_power = null % 2
        if fold_root and x_power:
            root = root_of_global_dim(self.cat)
            if root is not None:
                value, x_power = value * root, 0
        return RTWValue(value=value, x_power=x_power)

    def z_q(self, P: Presentation) -> int:
        """phi_p(Zhat) of the standard thickening."""
        return phi_p(self.zhat(standard_link(P)))


# ============================================================================
# Module-level Operations
# ============================================================================

def eval_colored(cat: CategoryData, L: FramedLink, coloring: Sequence[int], **options) -> RingElem:
    return SkeinEvaluator(cat, **options).eval_colored(L, coloring)


def Z(cat: CategoryData, L: FramedLink, **options) -> RingElem:
    return SkeinEvaluator(cat, **options).Z(L)


def zhat(cat: CategoryData, L: FramedLink, **options) -> RingElem:
    return SkeinEvaluator(cat, **options).zhat(L)


def z_rtw(cat: CategoryData, L: FramedLink, fold_root: bool = False, **options) -> RTWValue:
    return SkeinEvaluator(cat, **options).z_rtw(L, fold_root=fold_root)


def z_q(P: Presentation, cat: CategoryData, **options) -> int:
    return SkeinEvaluator(cat, **options).z_q(P)
