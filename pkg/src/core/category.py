"""
Category Data Module

The class-0 SL(2) category at a p-th root of unity as a finite data table:
simple objects are the even weights w = 2z, 0 <= w <= p - 3, with

    rank(z)      = [2z + 1]
    twist_exp(z) = -2z(z + 1) mod p      (twist = v^twist_exp)

From the table we derive the nondegeneracy constants

    X^2 = sum rank^2,    C+- = sum rank^2 * v^(+-twist_exp)

and the twisted sums F(n) together with their Gauss-sum closed form.

The evaluator only talks to the small CategoryTable interface, so other
category data can be plugged in without touching the skein code.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Protocol, Tuple, runtime_checkable

from utils.error_handler import DegenerateConstant, NDivisibleByP

from .cyclo import (
    FieldElem,
    RingElem,
    check_prime,
    exact_div,
    gauss_sum,
    inverse_mod,
    legendre,
    monomial,
    ohtsuki_coeffs,
    quantum_int,
    ring_zero,
    v_minus_vinv,
)

logger = logging.getLogger(__name__)


# ============================================================================
# Category Interface
# ============================================================================

@runtime_checkable
class CategoryTable(Protocol):
    """What the evaluator needs from a category."""

    p: int
    labels: Tuple[int, ...]

    def rank(self, z: int) -> RingElem: ...

    def twist_exp(self, z: int) -> int: ...

    def weight(self, z: int) -> int: ...


@dataclass(frozen=True, eq=False)
class CategoryData:
    """
    Simple-object table of the class-0 SL(2) category.

    Attributes:
        p: the odd prime (>= 5)
        labels: z = 0..(p-3)/2, the simple object of weight 2z
        ranks: z -> [2z + 1]
        twist_exps: z -> -2z(z + 1) mod p
        x2: cached X^2
        c_plus, c_minus: cached C+ and C-
    """

    p: int
    labels: Tuple[int, ...]
    ranks: Dict[int, RingElem] = field(repr=False)
    twist_exps: Dict[int, int] = field(repr=False)
    x2: RingElem = field(repr=False)
    c_plus: RingElem = field(repr=False)
    c_minus: RingElem = field(repr=False)

    def rank(self, z: int) -> RingElem:
        return self.ranks[z]

    def twist_exp(self, z: int) -> int:
        return self.twist_exps[z]

    def weight(self, z: int) -> int:
        return 2 * z

    def theta(self, z: int) -> RingElem:
        """Twist eigenvalue v^t(2z)."""
        return monomial(self.p, self.twist_exps[z])

    @property
    def label_count(self) -> int:
        return len(self.labels)


# ============================================================================
# Construction
# ============================================================================

def _twist_sum(p: int, ranks: Dict[int, RingElem], exps: Dict[int, int], sign: int) -> RingElem:
    total = ring_zero(p)
    for z, r in ranks.items():
        total = total + (r * r).shift(sign * exps[z])
    return total


@lru_cache(maxsize=None)
def sl2_class0(p: int) -> CategoryData:
    """
    Build the class-0 SL(2) table for the prime p.

    Raises:
        NotPrime: p composite
        PrimeTooSmall: p < 5
        DegenerateConstant: X^2 or C+- vanish (never for this family)
    """
    check_prime(p)

    labels = tuple(range((p - 1) // 2))
    ranks = {z: quantum_int(p, 2 * z + 1) for z in labels}
    exps = {z: (-2 * z * (z + 1)) % p for z in labels}

    x2 = ring_zero(p)
    for r in ranks.values():
        x2 = x2 + r * r
    c_plus = _twist_sum(p, ranks, exps, +1)
    c_minus = _twist_sum(p, ranks, exps, -1)

    for name, value in (('X^2', x2), ('C+', c_plus), ('C-', c_minus)):
        if value.is_zero():
            raise DegenerateConstant("nondegeneracy constant vanishes", constant=name, p=p)

    logger.debug(f"built class-0 SL(2) table with {len(labels)} labels",
                 extra={'p': p, 'event_type': 'category_built'})
    return CategoryData(p=p, labels=labels, ranks=ranks, twist_exps=exps,
                        x2=x2, c_plus=c_plus, c_minus=c_minus)


def global_dim(cat: CategoryData) -> RingElem:
    """X^2 = sum of squared ranks."""
    return cat.x2


def c_constants(cat: CategoryData) -> Tuple[RingElem, RingElem]:
    """(C+, C-)"""
    return cat.c_plus, cat.c_minus


# ============================================================================
# Twisted Sums
# ============================================================================

def F(cat: CategoryData, n: int) -> RingElem:
    """
    F(n) = sum over all labels z of [2z+1]^2 * v^(n * t(2z)).

    The sum includes z = 0, so F(kp) = X^2.
    """
    p = cat.p
    total = ring_zero(p)
    for z in cat.labels:
        r = cat.rank(z)
        total = total + (r * r).shift(n * cat.twist_exp(z))
    return total


def F_closed(cat: CategoryData, n: int) -> RingElem:
    """
    Gauss-sum closed form of F(n) for p not dividing n:

        F(n) = (-n/2 | p) * g1 * v^((n^2 + 2)/(2n)) * [n_bar] / (v - v^-1)

    with n_bar = n^-1 mod p and every exponent taken mod p.
    """
    p = cat.p
    if n % p == 0:
        raise NDivisibleByP("closed form needs n coprime to p", n=n, p=p)
    n_bar = inverse_mod(n, p)
    half = inverse_mod(2, p)
    sign = legendre(-n * half, p)
    exponent = ((n * n + 2) * inverse_mod(2 * n, p)) % p
    numerator = gauss_sum(p).shift(exponent) * quantum_int(p, n_bar) * sign
    return exact_div(numerator, v_minus_vinv(p))


# ============================================================================
# Square Root of X^2
# ============================================================================

def root_of_global_dim(cat: CategoryData) -> Optional[FieldElem]:
    """
    A square root X of X^2 inside Q(v), or None when none exists there.

    X^2 = -p/(v - v^-1)^2 is a square in Q(v) exactly when -p = g1^2, i.e.
    when p = 3 mod 4. Then X = +-g1/(v - v^-1); the sign is fixed so that
    the first nonzero Ohtsuki coefficient of X lies in 1..(p-1)/2.
    """
    p = cat.p
    if p % 4 != 3:
        return None
    root = exact_div(gauss_sum(p), v_minus_vinv(p))
    lead = next(a for a in ohtsuki_coeffs(root) if a)
    if lead > (p - 1) // 2:
        root = -root
    return root.to_field()
