"""
Presentation Module

Finite group presentations <x_1, ..., x_n | R_1, ..., R_m> as the
combinatorial model of a 2-complex with one 0-cell: words in the free group,
a parser for the bracket notation, Euler characteristic, Andrews-Curtis
moves, the dual presentation and the wedge (1-point union).

Text format:
    <x, y | x^3 y^2 x^2 y^-1, x^-2 y^2>

- exponents may be written x^-1, x-1, x^{-1} or omitted (default 1)
- juxtaposed factors need no spaces when the letters are declared
  generators (xyx^-1y^-1)
- the token 1 is the empty relator; the relator list may be empty
- in .pres files, lines starting with # are comments

Relators are kept as written. Moves return freely reduced relators.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from utils.error_handler import InvalidMove, ParseError, UnknownGenerator

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]

NAME_RE = re.compile(r'[A-Za-z][A-Za-z0-9_]*\Z')


# ============================================================================
# Words
# ============================================================================

@dataclass(frozen=True)
class Word:
    """A word in the free group: a sequence of (generator index, +-1)."""

    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        for g, s in self.letters:
            if g < 0 or s not in (1, -1):
                raise ValueError(f"invalid letter ({g}, {s})")

    @classmethod
    def from_powers(cls, powers: Iterable[Tuple[int, int]]) -> 'Word':
        """Build from (generator, exponent) syllables."""
        letters: List[Letter] = []
        for g, e in powers:
            s = 1 if e > 0 else -1
            letters.extend([(g, s)] * abs(e))
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: 'Word') -> 'Word':
        return Word(self.letters + other.letters)

    def inverse(self) -> 'Word':
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def conjugate(self, generator: int, sign: int) -> 'Word':
        """g^s * w * g^-s"""
        return Word(((generator, sign),) + self.letters + ((generator, -sign),))

    @property
    def freely_reduced(self) -> bool:
        return all(a[0] != b[0] or a[1] != -b[1]
                   for a, b in zip(self.letters, self.letters[1:]))

    def exponent_sum(self, generator: int) -> int:
        return sum(s for g, s in self.letters if g == generator)

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def syllables(self) -> List[Tuple[int, int]]:
        """Maximal runs of one generator as (generator, exponent) pairs."""
        out: List[Tuple[int, int]] = []
        for g, s in self.letters:
            if out and out[-1][0] == g and (out[-1][1] > 0) == (s > 0):
                out[-1] = (g, out[-1][1] + s)
            else:
                out.append((g, s))
        return out

    def reindexed(self, mapping: dict) -> 'Word':
        return Word(tuple((mapping[g], s) for g, s in self.letters))


def free_reduce(w: Word) -> Word:
    """Cancel adjacent inverse pairs to a fixed point."""
    stack: List[Letter] = []
    for g, s in w.letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return Word(tuple(stack))


def cyclic_reduce(w: Word) -> Word:
    """Freely reduce, then cancel inverse pairs between the two ends."""
    letters = free_reduce(w).letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    return Word(letters[i:j + 1])


# ============================================================================
# Presentations
# ============================================================================

@dataclass(frozen=True)
class Presentation:
    """
    Generators plus relator words.

    Attributes:
        generator_names: distinct identifiers [A-Za-z][A-Za-z0-9_]*
        relators: words over the generator indices
    """

    generator_names: Tuple[str, ...]
    relators: Tuple[Word, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'generator_names', tuple(self.generator_names))
        object.__setattr__(self, 'relators', tuple(self.relators))
        if len(set(self.generator_names)) != len(self.generator_names):
            raise ValueError(f"duplicate generator names: {self.generator_names}")
        for name in self.generator_names:
            if not NAME_RE.match(name):
                raise ValueError(f"invalid generator name: {name!r}")
        n = len(self.generator_names)
        for w in self.relators:
            for g, _ in w.letters:
                if g >= n:
                    raise ValueError(f"generator index {g} out of range for {n} generators")

    @property
    def n(self) -> int:
        """Number of generators (1-cells)."""
        return len(self.generator_names)

    @property
    def m(self) -> int:
        """Number of relators (2-cells)."""
        return len(self.relators)

    def euler_char(self) -> int:
        return euler_char(self)

    def exponent_matrix(self) -> List[List[int]]:
        return exponent_matrix(self)

    def __str__(self) -> str:
        return serialize(self)

    @classmethod
    def parse(cls, text: str) -> 'Presentation':
        return parse(text)

    @classmethod
    def parse_file(cls, path: Union[str, Path]) -> 'Presentation':
        """Read a .pres file, skipping # comment lines."""
        lines = Path(path).read_text(encoding='utf-8').splitlines()
        body = '\n'.join(line for line in lines if not line.lstrip().startswith('#'))
        return parse(body)


def euler_char(P: Presentation) -> int:
    """chi = 1 - n + m"""
    return 1 - P.n + P.m


def exponent_matrix(P: Presentation) -> List[List[int]]:
    """m x n matrix whose (l, k) entry is the total exponent of x_k in R_l."""
    return [[w.exponent_sum(k) for k in range(P.n)] for w in P.relators]


def serialize(P: Presentation) -> str:
    """Canonical text form, e.g. '<x, y | x^2 y^-1, 1>'."""
    def factor(g: int, e: int) -> str:
        name = P.generator_names[g]
        return name if e == 1 else f"{name}^{e}"

    rels = []
    for w in P.relators:
        if len(w) == 0:
            rels.append('1')
        else:
            rels.append(' '.join(factor(g, e) for g, e in w.syllables()))
    gens = ', '.join(P.generator_names)
    if not rels:
        return f"<{gens} |>"
    return f"<{gens} | {', '.join(rels)}>"


# ============================================================================
# Parser
# ============================================================================

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<sym>[<>|,^{}+\-])
""", re.VERBOSE)


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", position=pos, text=text)
        kind = match.lastgroup
        if kind != 'ws':
            tokens.append(_Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(_Token('end', '', len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.names: Tuple[str, ...] = ()

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def _error(self, message: str) -> ParseError:
        return ParseError(message, position=self.tok.pos, text=self.text)

    def expect(self, text: str) -> _Token:
        if self.tok.text != text:
            found = self.tok.text or 'end of input'
            raise self._error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self) -> Presentation:
        self.expect('<')
        names: List[str] = []
        if self.tok.kind == 'ident':
            names.append(self.tok.text)
            self.i += 1
            while self.accept(','):
                if self.tok.kind != 'ident':
                    raise self._error("expected generator name")
                names.append(self.tok.text)
                self.i += 1
        if len(set(names)) != len(names):
            raise self._error("duplicate generator name")
        self.names = tuple(names)
        self.expect('|')

        relators: List[Word] = []
        if self.tok.text != '>':
            relators.append(self.relator())
            while self.accept(','):
                relators.append(self.relator())
        self.expect('>')
        if self.tok.kind != 'end':
            raise self._error("trailing input after '>'")
        return Presentation(self.names, tuple(relators))

    def relator(self) -> Word:
        if self.tok.kind == 'int' and self.tok.text == '1':
            self.i += 1
            return Word()
        powers: List[Tuple[int, int]] = []
        if self.tok.kind != 'ident':
            raise self._error("expected a relator")
        while self.tok.kind == 'ident':
            powers.extend(self.factor())
        return Word.from_powers(powers)

    def factor(self) -> List[Tuple[int, int]]:
        tok = self.tok
        self.i += 1
        if tok.text in self.names:
            parts = [(self.names.index(tok.text), 1)]
        else:
            parts = self.segment(tok)
        exponent = self.exponent()
        if exponent is not None:
            g, e = parts[-1]
            parts[-1] = (g, e * exponent)
        return parts

    def segment(self, tok: _Token) -> List[Tuple[int, int]]:
        # split an undeclared identifier by longest generator prefix, digits as exponents
        s = tok.text
        parts: List[Tuple[int, int]] = []
        pos = 0
        while pos < len(s):
            best = max((g for g in self.names if s.startswith(g, pos)), key=len, default=None)
            if best is None:
                ident = re.match(r'[A-Za-z][A-Za-z0-9_]*', s[pos:]).group()
                raise UnknownGenerator(f"unknown generator {ident!r}", name=ident,
                                       position=tok.pos + pos)
            pos += len(best)
            digits = re.match(r'[0-9]*', s[pos:]).group()
            pos += len(digits)
            parts.append((self.names.index(best), int(digits) if digits else 1))
        return parts

    def exponent(self) -> Optional[int]:
        caret = self.accept('^')
        brace = self.accept('{')
        sign = 1
        if self.tok.text in ('+', '-'):
            sign = -1 if self.tok.text == '-' else 1
            self.i += 1
        elif not (caret or brace):
            if self.tok.kind == 'int':
                raise self._error("exponent needs '^' or a sign")
            return None
        if self.tok.kind != 'int':
            raise self._error("expected integer exponent")
        value = sign * int(self.tok.text)
        self.i += 1
        if brace:
            self.expect('}')
        return value


def parse(text: str) -> Presentation:
    """
    Parse the bracket notation into a Presentation.

    Raises:
        ParseError: malformed text (carries the character position)
        UnknownGenerator: a relator letter that is not declared

    Example:
        >>> parse("<x,y | x y x^-1 y^-1>").m
        1
    """
    return _Parser(text).parse()


# ============================================================================
# Andrews-Curtis Moves
# ============================================================================

@dataclass(frozen=True)
class InvertRelator:
    """R_i -> R_i^-1"""
    i: int


@dataclass(frozen=True)
class ConjugateRelator:
    """R_i -> g^s R_i g^-s"""
    i: int
    generator: int
    sign: int = 1


@dataclass(frozen=True)
class MultiplyRelator:
    """R_i -> R_i R_j for i != j"""
    i: int
    j: int


@dataclass(frozen=True)
class Stabilize:
    """Add a fresh generator t together with the relator t."""


@dataclass(frozen=True)
class Destabilize:
    """Remove a generator and a relator consisting of that single letter."""
    relator: Optional[int] = None


Move = Union[InvertRelator, ConjugateRelator, MultiplyRelator, Stabilize, Destabilize]


def move_name(move: Move) -> str:
    """Short description used in logs and reports."""
    if isinstance(move, InvertRelator):
        return f"invert({move.i})"
    if isinstance(move, ConjugateRelator):
        return f"conjugate({move.i}, {move.generator}, {move.sign:+d})"
    if isinstance(move, MultiplyRelator):
        return f"multiply({move.i}, {move.j})"
    if isinstance(move, Stabilize):
        return "stabilize"
    return "destabilize" if move.relator is None else f"destabilize({move.relator})"


def _check_relator(P: Presentation, i: int, move: str) -> None:
    if not 0 <= i < P.m:
        raise InvalidMove(f"relator index {i} out of range (m={P.m})", move=move)


def fresh_name(taken: Iterable[str], stem: str = 't') -> str:
    taken = set(taken)
    k = 1
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def destabilizable(P: Presentation, i: int) -> Optional[int]:
    w = free_reduce(P.relators[i])
    if len(w) != 1:
        return None
    g = w.letters[0][0]
    if any(g in r.generators() for k, r in enumerate(P.relators) if k != i):
        return None
    return g


def ac_move(P: Presentation, move: Move) -> Presentation:
    """
    Apply one Andrews-Curtis move; every relator of the result is freely reduced.

    Raises:
        InvalidMove: preconditions fail (bad indices, i == j, nothing to destabilize)
    """
    name = move_name(move)
    rels = list(P.relators)
    names = P.generator_names

    if isinstance(move, InvertRelator):
        _check_relator(P, move.i, name)
        rels[move.i] = rels[move.i].inverse()
    elif isinstance(move, ConjugateRelator):
        _check_relator(P, move.i, name)
        if not 0 <= move.generator < P.n or move.sign not in (1, -1):
            raise InvalidMove(f"invalid conjugating letter ({move.generator}, {move.sign})",
                              move=name)
        rels[move.i] = rels[move.i].conjugate(move.generator, move.sign)
    elif isinstance(move, MultiplyRelator):
        _check_relator(P, move.i, name)
        _check_relator(P, move.j, name)
        if move.i == move.j:
            raise InvalidMove("cannot multiply a relator by itself", move=name)
        rels[move.i] = rels[move.i] * rels[move.j]
    elif isinstance(move, Stabilize):
        names = names + (fresh_name(names),)
        rels.append(Word(((P.n, 1),)))
    elif isinstance(move, Destabilize):
        candidates = [move.relator] if move.relator is not None else reversed(range(P.m))
        target = None
        for i in candidates:
            _check_relator(P, i, name)
            g = destabilizable(P, i)
            if g is not None:
                target = (i, g)
                break
        if target is None:
            raise InvalidMove("no relator is a lone generator absent from the others", move=name)
        i, g = target
        del rels[i]
        mapping = {k: (k if k < g else k - 1) for k in range(P.n) if k != g}
        rels = [r.reindexed(mapping) for r in rels]
        names = names[:g] + names[g + 1:]
    else:
        raise InvalidMove(f"unknown move {move!r}")

    return Presentation(names, tuple(free_reduce(r) for r in rels))


def apply_moves(P: Presentation, moves: Sequence[Move]) -> Presentation:
    for move in moves:
        P = ac_move(P, move)
    return P


# ============================================================================
# Dual and Wedge
# ============================================================================

def dual(P: Presentation) -> Presentation:
    """
    The dual presentation <r_1..r_m | X_1..X_n> with
    X_k = r_1^(f_k^1) r_2^(f_k^2) ... r_m^(f_k^m).
    """
    matrix = exponent_matrix(P)
    names = tuple(f"r{j + 1}" for j in range(P.m))
    relators = tuple(
        Word.from_powers((l, matrix[l][k]) for l in range(P.m) if matrix[l][k])
        for k in range(P.n)
    )
    return Presentation(names, relators)


def wedge(P: Presentation, Q: Presentation) -> Presentation:
    """
    1-point union: generators and relators side by side.

    Generators of Q whose names clash get the smallest free numeric suffix.
    """
    used = set(P.generator_names)
    renamed = []
    for name in Q.generator_names:
        new = name
        k = 2
        while new in used or (new != name and new in Q.generator_names):
            new = f"{name}{k}"
            k += 1
        used.add(new)
        renamed.append(new)
    shift = {g: g + P.n for g in range(Q.n)}
    relators = P.relators + tuple(r.reindexed(shift) for r in Q.relators)
    return Presentation(P.generator_names + tuple(renamed), relators)


# ============================================================================
# Standard Examples
# ============================================================================

def circle() -> Presentation:
    """S^1 = <x |>"""
    return Presentation(('x',), ())


def sphere() -> Presentation:
    """S^2 = < | 1>"""
    return Presentation((), (Word(),))


def cyclic(n: int) -> Presentation:
    """<x | x^n>"""
    return Presentation(('x',), (Word.from_powers([(0, n)]),))


def commutator() -> Presentation:
    """<x, y | x y x^-1 y^-1>"""
    return Presentation(('x', 'y'), (Word(((0, 1), (1, 1), (0, -1), (1, -1))),))
