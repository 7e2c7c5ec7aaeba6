"""
Link Diagram Module

Framed links encoded as decorated braid closures:

- BraidWord: strand count plus letters (j, +-1) for y_j^(+-1), the crossing
  of positions j-1 and j (1-based). y_j is the positive crossing: the strand
  coming from position j-1 passes over.
- FramedLink: a braid word with one dotted flag and one framing offset per
  closure component. Components are the cycles of the braid permutation,
  indexed by their smallest strand.

Also here: the standard thickening link L_P of a presentation, linking
matrices, exact inertia of symmetric matrices, diagram mutations used by the
invariance tests, a small text format and the handle-slide fixture catalog.

Link text format:
    braid 3: 2 2 -3
    dotted: 1
    offsets: 0 0
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Matrix

from utils.error_handler import IndexOutOfRange, NotSymmetric, ParseError

from .presentation import Presentation

logger = logging.getLogger(__name__)

BraidLetter = Tuple[int, int]


# ============================================================================
# Braid Words
# ============================================================================

@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group on ``strands`` strands."""

    strands: int
    letters: Tuple[BraidLetter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'letters', tuple(tuple(l) for l in self.letters))
        if self.strands < 0:
            raise ValueError("strand count must be nonnegative")
        for j, s in self.letters:
            if not 2 <= j <= self.strands or s not in (1, -1):
                raise ValueError(f"letter ({j}, {s}) invalid on {self.strands} strands")

    @classmethod
    def from_ints(cls, strands: int, word: Sequence[int]) -> 'BraidWord':
        """Signed integers: +j for y_j, -j for y_j^-1."""
        return cls(strands, tuple((abs(x), 1 if x > 0 else -1) for x in word))

    def to_ints(self) -> List[int]:
        return [j * s for j, s in self.letters]

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: 'BraidWord') -> 'BraidWord':
        if other.strands != self.strands:
            raise ValueError("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> 'BraidWord':
        return BraidWord(self.strands, tuple((j, -s) for j, s in reversed(self.letters)))

    def permutation(self) -> Tuple[int, ...]:
        """perm[i] = top position (0-based) reached by the strand starting at i."""
        where = list(range(self.strands))   # position -> starting strand
        for j, _ in self.letters:
            where[j - 2], where[j - 1] = where[j - 1], where[j - 2]
        perm = [0] * self.strands
        for pos, start in enumerate(where):
            perm[start] = pos
        return tuple(perm)


def r_word(j: int, k: int) -> Tuple[BraidLetter, ...]:
    """r_{j,k} = y_{j+1} y_{j+2} ... y_k, empty when j >= k."""
    return tuple((i, 1) for i in range(j + 1, k + 1))


def _invert(fragment: Sequence[BraidLetter]) -> Tuple[BraidLetter, ...]:
    return tuple((i, -s) for i, s in reversed(fragment))


def psi(j: int, k: int, m: int, sign: int = 1) -> Tuple[BraidLetter, ...]:
    """
    Image of x_k^sign under psi_j:

        r_{j,m+k-1} y_{m+k}^(2 sign) r_{j,m+k-1}^-1

    The relator strand j travels over the strands in between to the position
    next to generator strand m + k, links it, and travels back.
    """
    r = r_word(j, m + k - 1)
    return r + ((m + k, sign),) * 2 + _invert(r)


# ============================================================================
# Framed Links
# ============================================================================

@dataclass(frozen=True)
class FramedLink:
    """
    Framed link as a braid closure.

    Attributes:
        braid: the braid word
        dotted: per component, True for 1-handle (dotted) circles
        framing_offset: per component, full twists beyond blackboard framing
    """

    braid: BraidWord
    dotted: Tuple[bool, ...] = None
    framing_offset: Tuple[int, ...] = None
    components: Tuple[Tuple[int, ...], ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        perm = self.braid.permutation()
        seen = set()
        cycles = []
        for start in range(self.braid.strands):
            if start in seen:
                continue
            cycle = []
            i = start
            while i not in seen:
                seen.add(i)
                cycle.append(i + 1)
                i = perm[i]
            cycles.append(tuple(sorted(cycle)))
        object.__setattr__(self, 'components', tuple(cycles))
        c = len(cycles)
        dotted = tuple(bool(d) for d in self.dotted) if self.dotted is not None else (False,) * c
        offsets = tuple(int(f) for f in self.framing_offset) if self.framing_offset is not None else (0,) * c
        if len(dotted) != c or len(offsets) != c:
            raise ValueError(f"expected {c} dotted flags and offsets, got {len(dotted)} and {len(offsets)}")
        object.__setattr__(self, 'dotted', dotted)
        object.__setattr__(self, 'framing_offset', offsets)

    @property
    def component_count(self) -> int:
        return len(self.components)

    @cached_property
    def position_component(self) -> Tuple[int, ...]:
        """Component index of each bottom position (0-based)."""
        owner = [0] * self.braid.strands
        for idx, cycle in enumerate(self.components):
            for pos in cycle:
                owner[pos - 1] = idx
        return tuple(owner)

    @cached_property
    def crossings(self) -> Tuple[Tuple[int, int, int], ...]:
        """(component of left strand, component of right strand, sign) per letter."""
        where = list(range(self.braid.strands))
        owner = self.position_component
        out = []
        for j, s in self.braid.letters:
            a, b = where[j - 2], where[j - 1]
            out.append((owner[a], owner[b], s))
            where[j - 2], where[j - 1] = b, a
        return tuple(out)

    def self_writhe(self, i: int) -> int:
        return sum(s for a, b, s in self.crossings if a == i and b == i)

    def total_framing(self, i: int) -> int:
        return self.self_writhe(i) + self.framing_offset[i]

    @property
    def dotted_count(self) -> int:
        return sum(self.dotted)

    def _check_component(self, i: int) -> None:
        if not 0 <= i < self.component_count:
            raise IndexOutOfRange("component index out of range", index=i,
                                  size=self.component_count)


# ============================================================================
# Constructors
# ============================================================================

def closure(strands: int, word: Sequence[int], dotted: Optional[Sequence[bool]] = None,
            offsets: Optional[Sequence[int]] = None) -> FramedLink:
    """Closure of a braid given as signed integers."""
    return FramedLink(BraidWord.from_ints(strands, word),
                      tuple(dotted) if dotted is not None else None,
                      tuple(offsets) if offsets is not None else None)


def empty_link() -> FramedLink:
    return FramedLink(BraidWord(0))


def unknot(framing: int = 0, dotted: bool = False) -> FramedLink:
    return FramedLink(BraidWord(1), (dotted,), (framing,))


def torus_link(n: int, offsets: Tuple[int, int] = (0, 0)) -> FramedLink:
    """Closure of y_2^(2n): two unknots with linking number n."""
    sign = 1 if n >= 0 else -1
    return FramedLink(BraidWord(2, ((2, sign),) * (2 * abs(n))), (False, False), offsets)


def hopf(offsets: Tuple[int, int] = (0, 0)) -> FramedLink:
    return torus_link(1, offsets)


def standard_link(P: Presentation) -> FramedLink:
    """
    The thickening link L_P: the closure of psi_1(R_1) ... psi_m(R_m) on
    n + m strands.

    Strands 1..m are the relators (undotted 2-handles), strands m+1..m+n the
    generators (dotted 1-handles). Every component is 0-framed and
    lk(relator l, generator k) is the total exponent of x_k in R_l.
    """
    m, n = P.m, P.n
    letters: List[BraidLetter] = []
    for j, relator in enumerate(P.relators, start=1):
        for g, s in relator.letters:
            letters.extend(psi(j, g + 1, m, s))
    braid = BraidWord(n + m, tuple(letters))
    dotted = (False,) * m + (True,) * n
    link = FramedLink(braid, dotted, (0,) * (n + m))
    if link.component_count != n + m:
        # psi fragments are pure braids; this cannot happen
        raise AssertionError("standard link braid is not pure")
    return link


# ============================================================================
# Linking Matrix and Inertia
# ============================================================================

def linking_matrix(L: FramedLink) -> List[List[int]]:
    """
    Symmetric c x c matrix: total framings on the diagonal, pairwise linking
    numbers off it. Dots are ignored.
    """
    c = L.component_count
    doubled = [[0] * c for _ in range(c)]
    for a, b, s in L.crossings:
        if a != b:
            doubled[a][b] += s
            doubled[b][a] += s
    M = [[doubled[i][j] // 2 for j in range(c)] for i in range(c)]
    for i in range(c):
        M[i][i] = L.total_framing(i)
    return M


def _sign_variations(coeffs: Sequence[int]) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signature_counts(M: Sequence[Sequence[int]]) -> Tuple[int, int, int]:
    """
    (sigma_+, sigma_-, sigma_0) of a symmetric integer matrix, exactly.

    The characteristic polynomial of a symmetric matrix has only real roots,
    so Descartes' rule of signs counts positive and negative eigenvalues
    exactly; sigma_0 is the multiplicity of the root 0.

    Raises:
        NotSymmetric: M is not square and symmetric
    """
    size = len(M)
    if size == 0:
        return (0, 0, 0)
    if any(len(row) != size for row in M) or any(
            M[i][j] != M[j][i] for i in range(size) for j in range(i)):
        raise NotSymmetric("linking matrix must be symmetric", shape=(size, len(M[0])))
    coeffs = [int(c) for c in Matrix(M).charpoly().all_coeffs()]
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1
    degree = len(coeffs) - 1
    positive = _sign_variations(coeffs)
    negative = _sign_variations([c * (-1) ** (degree - k) for k, c in enumerate(coeffs)])
    return positive, negative, zero


# ============================================================================
# Mutations
# ============================================================================

def flip_crossing(L: FramedLink, index: int) -> Tuple[FramedLink, bool]:
    """
    Negate the sign of one letter.

    Returns:
        the new link and whether either strand at that crossing is dotted
    """
    if not 0 <= index < len(L.braid):
        raise IndexOutOfRange("letter index out of range", index=index, size=len(L.braid))
    a, b, _ = L.crossings[index]
    letters = list(L.braid.letters)
    j, s = letters[index]
    letters[index] = (j, -s)
    flipped = FramedLink(BraidWord(L.braid.strands, tuple(letters)), L.dotted, L.framing_offset)
    return flipped, L.dotted[a] or L.dotted[b]


def add_framing_twist(L: FramedLink, component: int, sign: int = 1) -> FramedLink:
    """Add one full twist (sign = +-1) to a component's framing offset."""
    L._check_component(component)
    if sign not in (1, -1):
        raise ValueError("twist sign must be +1 or -1")
    offsets = list(L.framing_offset)
    offsets[component] += sign
    return replace(L, framing_offset=tuple(offsets))


def split_union(L: FramedLink, K: FramedLink) -> FramedLink:
    """Place K to the right of L, unlinked."""
    shift = L.braid.strands
    letters = L.braid.letters + tuple((j + shift, s) for j, s in K.braid.letters)
    return FramedLink(BraidWord(shift + K.braid.strands, letters),
                      L.dotted + K.dotted, L.framing_offset + K.framing_offset)


def mirror(L: FramedLink) -> FramedLink:
    """Reverse every crossing and framing."""
    braid = BraidWord(L.braid.strands, tuple((j, -s) for j, s in L.braid.letters))
    return FramedLink(braid, L.dotted, tuple(-f for f in L.framing_offset))


def with_unknot(L: FramedLink, framing: int, dotted: bool = False) -> FramedLink:
    """Adjoin a split unknot of the given framing."""
    return split_union(L, unknot(framing, dotted))


def with_cancelling_pair(L: FramedLink) -> FramedLink:
    """
    Adjoin a split Hopf pair: a dotted circle and a 0-framed 2-handle
    linking it once. The pair cancels, so Zhat does not change.
    """
    pair = FramedLink(hopf().braid, (True, False), (0, 0))
    return split_union(L, pair)


def without_dots(L: FramedLink) -> FramedLink:
    """The same diagram read as a surgery link."""
    return replace(L, dotted=(False,) * L.component_count)


# ============================================================================
# Text Format
# ============================================================================

def _ints(text: str, line_no: int, offset: int, full: str) -> List[int]:
    try:
        return [int(tok) for tok in text.replace(',', ' ').split()]
    except ValueError:
        raise ParseError(f"expected integers on line {line_no}", position=offset, text=full)


def parse_link(text: str) -> FramedLink:
    """
    Parse the link text format.

    Raises:
        ParseError: malformed lines, letters out of range or count mismatches
    """
    strands: Optional[int] = None
    word: List[int] = []
    dotted_idx: List[int] = []
    offsets: Optional[List[int]] = None
    offset = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if line:
            head, sep, rest = line.partition(':')
            if not sep:
                raise ParseError(f"expected 'key: value' on line {line_no}", position=offset, text=text)
            head = head.strip().lower()
            if head.startswith('braid'):
                count = head[len('braid'):].strip()
                if not count.isdigit():
                    raise ParseError("braid line needs a strand count", position=offset, text=text)
                strands = int(count)
                word = _ints(rest, line_no, offset, text)
            elif head == 'dotted':
                dotted_idx = _ints(rest, line_no, offset, text)
            elif head == 'offsets':
                offsets = _ints(rest, line_no, offset, text)
            else:
                raise ParseError(f"unknown key {head!r}", position=offset, text=text)
        offset += len(raw) + 1
    if strands is None:
        raise ParseError("missing 'braid <s>:' line", position=0, text=text)
    try:
        braid = BraidWord.from_ints(strands, word)
        bare = FramedLink(braid)
        c = bare.component_count
        if any(not 0 <= i < c for i in dotted_idx):
            raise ValueError(f"dotted index out of range for {c} components")
        dotted = tuple(i in dotted_idx for i in range(c))
        return FramedLink(braid, dotted, tuple(offsets) if offsets is not None else None)
    except ValueError as e:
        raise ParseError(str(e), text=text) from e


def format_link(L: FramedLink) -> str:
    """Serialise in the link text format."""
    word = ' '.join(str(x) for x in L.braid.to_ints())
    dotted = ' '.join(str(i) for i, d in enumerate(L.dotted) if d)
    offsets = ' '.join(str(f) for f in L.framing_offset)
    return f"braid {L.braid.strands}: {word}\ndotted: {dotted}\noffsets: {offsets}\n"


def read_link_file(path: Union[str, Path]) -> FramedLink:
    return parse_link(Path(path).read_text(encoding='utf-8'))


# ============================================================================
# Handle-Slide Fixtures
# ============================================================================

@dataclass(frozen=True)
class SlidePair:
    """Two diagrams related by handle slides."""

    name: str
    left: FramedLink
    right: FramedLink


def slide_fixture_catalog() -> List[SlidePair]:
    """
    Pairs of links whose Z must agree.

    All but the first are related by a handle slide. The first, y_2^2 against
    split unknots framed +1 and -1, is not a slide: both sides equal X^2 by the
    killing property.

    - the Hopf link against copies whose first or second component has been
      slid over the other 0-framed one (framing changed by +-2)
    - the mirrored Hopf link and its slid copy
    - the Hopf link against an explicit three-strand braid of the slid copy
    """
    pairs = [SlidePair('linked-vs-split', hopf(), closure(2, [], offsets=(1, -1)))]
    for offsets in ((2, 0), (-2, 0), (0, 2), (0, -2)):
        pairs.append(SlidePair(f"hopf-slide{offsets}", hopf(), hopf(offsets)))
    pairs.append(SlidePair('mirror-hopf-slide', mirror(hopf()), mirror(hopf((2, 0)))))
    pairs.append(SlidePair('hopf-braided-slide', hopf(), closure(3, [2, 2, 3], offsets=(0, 1))))
    return pairs
