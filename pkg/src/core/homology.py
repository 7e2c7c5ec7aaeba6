"""
Homology Module

Integer homology of a presentation complex from the Smith normal form of its
exponent matrix, and the closed-form routes to the mod-p invariant:

- the cyclic route: phi_p(F(q) F(-q) / X^2) for <x | x^q>
- the homological route: 0 if b2 > 0 or p | t1, else t1^-2 mod p
- the generic route: multiplicativity over the wedge normal form

The closed forms hold only for Euler characteristic >= 1; below that the
caller must use the skein evaluator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Sequence, Tuple

from sympy import Matrix, ZZ, factorint
from sympy.matrices.normalforms import invariant_factors

from utils.error_handler import ChiTooSmall

from .category import CategoryData, F
from .cyclo import exact_div, inverse_mod, phi_p
from .presentation import Presentation, euler_char, exponent_matrix

logger = logging.getLogger(__name__)


# ============================================================================
# Smith Normal Form
# ============================================================================

@dataclass(frozen=True)
class SmithForm:
    """Rank and elementary divisors d_1 | d_2 | ... (all positive)."""

    rank: int
    divisors: Tuple[int, ...]


def _divisibility_chain(values: Sequence[int]) -> Tuple[int, ...]:
    # invariant_factors ordering and divisibility differ across sympy releases;
    # normalise here so callers can rely on d_1 | d_2 | ... for every version
    # (a, b) -> (gcd, lcm) keeps the product and terminates in a chain
    ds = sorted(abs(v) for v in values)
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds[i], ds[j]
                if b % a:
                    g = gcd(a, b)
                    ds[i], ds[j] = g, a * b // g
                    changed = True
        ds.sort()
    return tuple(ds)


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithForm:
    """
    Rank and elementary divisors of an integer matrix.

    Examples:
        >>> smith_normal_form([[2, 0], [0, 3]])
        SmithForm(rank=2, divisors=(1, 6))
        >>> smith_normal_form([[0, 0]])
        SmithForm(rank=0, divisors=())
    """
    rows = [list(r) for r in M]
    if not rows or not rows[0] or all(x == 0 for r in rows for x in r):
        return SmithForm(rank=0, divisors=())
    factors = invariant_factors(Matrix(rows), domain=ZZ)
    nonzero = [int(f) for f in factors if int(f) != 0]
    return SmithForm(rank=len(nonzero), divisors=_divisibility_chain(nonzero))


# ============================================================================
# Homology Summary
# ============================================================================

@dataclass(frozen=True)
class HomologySummary:
    """
    H_1 = Z^b1 + torsion, H_2 = Z^b2 for a presentation complex.

    Attributes:
        b1: n - rank(M)
        b2: m - rank(M)
        torsion: elementary divisors > 1
        t1: order of the torsion subgroup of H_1
    """

    b1: int
    b2: int
    torsion: Tuple[int, ...]
    t1: int

    def to_dict(self) -> Dict[str, object]:
        return {'b1': self.b1, 'b2': self.b2, 'torsion': list(self.torsion), 't1': self.t1}


def homology_of(P: Presentation) -> HomologySummary:
    """
    Homology of the presentation complex.

    Example:
        >>> homology_of(parse("<x | x^3>"))
        HomologySummary(b1=0, b2=0, torsion=(3,), t1=3)
    """
    snf = smith_normal_form(exponent_matrix(P))
    torsion = tuple(d for d in snf.divisors if d > 1)
    t1 = 1
    for d in torsion:
        t1 *= d
    return HomologySummary(b1=P.n - snf.rank, b2=P.m - snf.rank, torsion=torsion, t1=t1)


# ============================================================================
# Closed-Form Invariants
# ============================================================================

def _require_chi(P: Presentation) -> None:
    chi = euler_char(P)
    if chi < 1:
        raise ChiTooSmall("closed form requires Euler characteristic >= 1", chi=chi)


def q_invariant_cyclic(cat: CategoryData, q: int) -> int:
    """
    Z_Q(<x | x^q>) computed as phi_p(F(q) F(-q) / X^2).

    Equals 0 when p | q and q_bar^2 mod p otherwise.
    """
    if q < 1:
        raise ValueError(f"cyclic order must be positive, got {q}")
    quotient = exact_div(F(cat, q) * F(cat, -q), cat.x2)
    return phi_p(quotient)


def q_invariant_homological(cat: CategoryData, P: Presentation) -> int:
    """
    0 if b2 > 0 or p divides t1, else t1^-2 in Z/pZ.

    Raises:
        ChiTooSmall: chi(P) <= 0, where the formula is false
    """
    _require_chi(P)
    h = homology_of(P)
    p = cat.p
    if h.b2 > 0 or h.t1 % p == 0:
        return 0
    return pow(inverse_mod(h.t1, p), 2, p)


@dataclass(frozen=True)
class WedgeNormalForm:
    """Homology type as a wedge of circles, spheres and cyclic complexes."""

    circles: int
    spheres: int
    cyclic: Tuple[int, ...]

    def to_dict(self) -> Dict[str, object]:
        return {'circles': self.circles, 'spheres': self.spheres, 'cyclic': list(self.cyclic)}


def wedge_normal_form(P: Presentation) -> WedgeNormalForm:
    """b1 circles, b2 spheres and one <x | x^q> per prime-power factor q of the torsion."""
    h = homology_of(P)
    cyclic: List[int] = []
    for d in h.torsion:
        cyclic.extend(prime ** power for prime, power in factorint(d).items())
    return WedgeNormalForm(circles=h.b1, spheres=h.b2, cyclic=tuple(sorted(cyclic)))


def q_invariant_generic(cat: CategoryData, P: Presentation) -> int:
    """
    Multiply the factor invariants of the wedge normal form: 1 per circle,
    0 per sphere and the cyclic invariant per torsion factor.
    """
    _require_chi(P)
    form = wedge_normal_form(P)
    if form.spheres:
        return 0
    value = 1
    for q in form.cyclic:
        value = (value * q_invariant_cyclic(cat, q)) % cat.p
    return value


def duality_factor(cat: CategoryData, P: Presentation) -> int:
    """
    phi_p(X^(2(m-n))), the factor with Z_Q(P) = duality_factor * Z_Q(P*).

    Only defined for m >= n; otherwise apply it to the dual.
    """
    if P.m < P.n:
        raise ValueError("duality factor needs at least as many relators as generators")
    return pow(phi_p(cat.x2), P.m - P.n, cat.p)
