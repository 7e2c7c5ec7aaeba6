"""
Cyclotomic Arithmetic Module

Exact arithmetic in the ring R = Z_(p)[v]/<1 + v + ... + v^(p-1)> (integers
localized at p, adjoined a primitive p-th root of unity) and in its field of
fractions Q(v).

Elements are stored in the canonical power basis {1, v, ..., v^(p-2)} as a
tuple of integer numerators over one positive common denominator, reduced to
lowest terms. An element lies in R exactly when p does not divide that
denominator.

Also provided here:
- quantum integers [n] and the quadratic Gauss sum g1
- Legendre symbols
- the reduction phi_p : R -> Z/pZ (evaluate at v = 1, reduce mod p)
- coefficients of the (1 - v)-adic (Ohtsuki) expansion and the valuation
- exact division in R routed through field inversion
- JSON (de)serialisation used by CLI reports
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache, reduce
from math import comb, gcd
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from sympy import Poly, QQ, Symbol, cyclotomic_poly, isprime, legendre_symbol

from utils.error_handler import (
    DenominatorDivisibleByP,
    DivisionByZero,
    MixedPrime,
    NotDivisibleInR,
    NotPrime,
    PrimeTooSmall,
)

logger = logging.getLogger(__name__)

MIN_PRIME = 5

# Z_(p) is modelled by Fraction plus a locality check (see plocal)
PLocalRational = Fraction

Scalar = Union[int, Fraction]


# ============================================================================
# Primes and Scalars
# ============================================================================

@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """
    Validate the ambient prime.

    Raises:
        PrimeTooSmall: for p = 2, 3
        NotPrime: for composite p or p < 2
    """
    if not isinstance(p, int) or isinstance(p, bool):
        raise NotPrime(f"prime must be an integer, got {p!r}")
    if p in (2, 3):
        raise PrimeTooSmall(f"p must be at least {MIN_PRIME}", p=p)
    if p < 2 or not isprime(p):
        raise NotPrime(f"{p} is not prime", p=p)
    return p


def plocal(value: Union[Scalar, str], p: int) -> Fraction:
    """Coerce ``value`` into Z_(p), raising if its denominator is divisible by p."""
    q = Fraction(value)
    if q.denominator % p == 0:
        raise DenominatorDivisibleByP(
            "coefficient is not p-local", p=p, coefficient=str(q)
        )
    return q


def inverse_mod(a: int, p: int) -> int:
    """Inverse of a modulo p (a must be a unit)."""
    return pow(a % p, -1, p)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _canonical(p: int, ext: Sequence[int]) -> List[int]:
    # fold v^(p-1) = -(1 + v + ... + v^(p-2)); ext has length p
    top = ext[p - 1]
    if top == 0:
        return list(ext[: p - 1])
    return [c - top for c in ext[: p - 1]]


def _normalize(num: Sequence[int], den: int) -> Tuple[Tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = reduce(gcd, num, den)
    if g == 0 or all(c == 0 for c in num):
        return tuple(0 for _ in num), 1
    if g != 1:
        return tuple(c // g for c in num), den // g
    return tuple(num), den


# ============================================================================
# Element Types
# ============================================================================

class _CyclotomicElement:
    """Shared storage and arithmetic for RingElem and FieldElem."""

    __slots__ = ('p', '_num', '_den')

    def __init__(self, p: int, num: Sequence[int], den: int = 1):
        if len(num) != p - 1:
            raise ValueError(f"expected {p - 1} coefficients, got {len(num)}")
        self.p = p
        self._num, self._den = _normalize(list(num), den)
        self._validate()

    def _validate(self) -> None:
        pass

    @classmethod
    def _raw(cls, p: int, num: Sequence[int], den: int = 1):
        # internal constructor: skips length and locality checks
        obj = cls.__new__(cls)
        obj.p = p
        obj._num, obj._den = _normalize(list(num), den)
        return obj

    @classmethod
    def from_extended(cls, p: int, ext: Sequence[int], den: int = 1):
        """Build from a length-p vector over the exponents 0..p-1."""
        obj = cls._raw(p, _canonical(p, ext), den)
        obj._validate()
        return obj

    # ------------------------------------------------------------ accessors

    @property
    def numerators(self) -> Tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        """Canonical-basis coefficients as fractions."""
        return tuple(Fraction(c, self._den) for c in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def extended(self) -> List[int]:
        """Numerators padded to length p (coefficient of v^(p-1) is 0)."""
        return list(self._num) + [0]

    # --------------------------------------------------------- arithmetic

    def _coerce(self, other) -> '_CyclotomicElement':
        if isinstance(other, _CyclotomicElement):
            if other.p != self.p:
                raise MixedPrime("operands live over different primes",
                                 left=self.p, right=other.p)
            return other
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            num = [q.numerator] + [0] * (self.p - 2)
            cls = RingElem if q.denominator % self.p else FieldElem
            return cls._raw(self.p, num, q.denominator)
        return NotImplemented

    @staticmethod
    def _result_type(a, b):
        if isinstance(a, FieldElem) or isinstance(b, FieldElem):
            return FieldElem
        return RingElem

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        cls = self._result_type(self, other)
        if self._den == other._den:
            return cls._raw(self.p, [a + b for a, b in zip(self._num, other._num)], self._den)
        den = _lcm(self._den, other._den)
        fa, fb = den // self._den, den // other._den
        return cls._raw(self.p, [a * fa + b * fb for a, b in zip(self._num, other._num)], den)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.p, [-c for c in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        cls = self._result_type(self, other)
        ext = [0] * p
        b = other._num
        for i, ai in enumerate(self._num):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    ext[(i + j) % p] += ai * bj
        return cls._raw(p, _canonical(p, ext), self._den * other._den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return field_inv(self) ** (-n)
        result = type(self)._raw(self.p, [1] + [0] * (self.p - 2))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.to_field() * field_inv(other)

    # ------------------------------------------------------- automorphisms

    def shift(self, k: int):
        """Multiply by v^k."""
        p = self.p
        ext = [0] * p
        for i, c in enumerate(self._num):
            ext[(i + k) % p] = c
        return type(self)._raw(p, _canonical(p, ext), self._den)

    def conj(self):
        """Apply the Galois automorphism v -> v^-1."""
        return self.galois(-1)

    def galois(self, a: int):
        """Apply v -> v^a for a unit a mod p."""
        p = self.p
        ext = [0] * p
        for i, c in enumerate(self._num):
            ext[(i * a) % p] += c
        return type(self)._raw(p, _canonical(p, ext), self._den)

    def to_field(self) -> 'FieldElem':
        return FieldElem._raw(self.p, self._num, self._den)

    # ---------------------------------------------------------- comparisons

    def __eq__(self, other) -> bool:
        if isinstance(other, _CyclotomicElement):
            return (self.p == other.p and self._num == other._num
                    and self._den == other._den)
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return (self._den == q.denominator and self._num[0] == q.numerator
                    and not any(self._num[1:]))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self._num, self._den))

    # ------------------------------------------------------------- display

    def format(self, var: str = 'v') -> str:
        """Human-readable polynomial in the canonical basis."""
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = '' if i == 0 else (var if i == 1 else f"{var}^{i}")
            if c.denominator != 1:
                coeff = f"({c})"
            elif mono and abs(c) == 1:
                coeff = '' if c > 0 else '-'
            else:
                coeff = str(c)
            terms.append(f"{coeff}{mono}" if mono else coeff)
        if not terms:
            return '0'
        return ' + '.join(terms).replace('+ -', '- ')

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(p={self.p}, {self.format()})"

    def to_json(self) -> Dict[str, object]:
        """Serialise as {"p": p, "coeffs": [["num", "den"], ...]}."""
        return {
            'p': self.p,
            'coeffs': [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }


class RingElem(_CyclotomicElement):
    """Element of R; every coefficient is p-local."""

    __slots__ = ()

    def _validate(self) -> None:
        if self._den % self.p == 0:
            raise DenominatorDivisibleByP(
                "coefficient is not p-local", p=self.p, coefficient=f"1/{self._den}"
            )


class FieldElem(_CyclotomicElement):
    """Element of Q(v); no locality constraint."""

    __slots__ = ()

    def to_ring(self) -> RingElem:
        """Return this value as a RingElem, raising if it leaves R."""
        if self._den % self.p == 0:
            raise NotDivisibleInR("value is not p-local", p=self.p, operation='to_ring')
        return RingElem._raw(self.p, self._num, self._den)

    def is_plocal(self) -> bool:
        return self._den % self.p != 0


# ============================================================================
# Constructors
# ============================================================================

def ring_make(p: int, raw: Mapping[int, Union[Scalar, str]]) -> RingElem:
    """
    Build an element of R from a sparse exponent -> coefficient map.

    Exponents are arbitrary integers, read mod p.

    Example:
        >>> ring_make(5, {4: 1}).format()
        '-1 - v - v^2 - v^3'
    """
    check_prime(p)
    coeffs = [Fraction(0)] * p
    for exp, value in raw.items():
        coeffs[exp % p] += plocal(value, p)
    den = reduce(_lcm, (c.denominator for c in coeffs), 1)
    ext = [c.numerator * (den // c.denominator) for c in coeffs]
    return RingElem.from_extended(p, ext, den)


def ring_zero(p: int) -> RingElem:
    check_prime(p)
    return RingElem._raw(p, [0] * (p - 1))


def ring_one(p: int) -> RingElem:
    return monomial(p, 0)


def monomial(p: int, k: int, coeff: int = 1) -> RingElem:
    """coeff * v^k"""
    check_prime(p)
    ext = [0] * p
    ext[k % p] = coeff
    return RingElem.from_extended(p, ext)


def add(x: _CyclotomicElement, y: _CyclotomicElement):
    return x + y


def mul(x: _CyclotomicElement, y: _CyclotomicElement):
    return x * y


def neg(x: _CyclotomicElement):
    return -x


def scalar_mul(x: _CyclotomicElement, c: Union[Scalar, str]):
    """Multiply by a rational scalar; a RingElem stays in R only for p-local c."""
    q = Fraction(c)
    if isinstance(x, RingElem):
        q = plocal(q, x.p)
    return type(x)._raw(x.p, [a * q.numerator for a in x.numerators],
                        x.denominator * q.denominator)


# ============================================================================
# Quantum Integers and Gauss Sums
# ============================================================================

@lru_cache(maxsize=4096)
def quantum_int(p: int, n: int) -> RingElem:
    """
    The quantum integer [n] = (v^n - v^-n) / (v - v^-1).

    For n > 0 this is v^(n-1) + v^(n-3) + ... + v^(1-n); [-n] = -[n] and
    [0] = 0.
    """
    check_prime(p)
    if n == 0:
        return ring_zero(p)
    sign = 1 if n > 0 else -1
    n = abs(n)
    ext = [0] * p
    for k in range(n):
        ext[(n - 1 - 2 * k) % p] += sign
    return RingElem.from_extended(p, ext)


@lru_cache(maxsize=None)
def gauss_sum(p: int) -> RingElem:
    """g1 = sum over z in Z/pZ of v^(z^2)."""
    check_prime(p)
    ext = [0] * p
    for z in range(p):
        ext[(z * z) % p] += 1
    return RingElem.from_extended(p, ext)


@lru_cache(maxsize=None)
def gauss_sum_product(p: int) -> RingElem:
    """Product form: prod over k = 1..(p-1)/2 of (v^(2k-1) - v^-(2k-1))."""
    check_prime(p)
    result = ring_one(p)
    for k in range(1, (p - 1) // 2 + 1):
        result = result * (monomial(p, 2 * k - 1) - monomial(p, -(2 * k - 1)))
    return result


def v_minus_vinv(p: int) -> RingElem:
    """v - v^-1"""
    return monomial(p, 1) - monomial(p, -1)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a | p) in {-1, 0, 1}."""
    return int(legendre_symbol(a % p, p))


# ============================================================================
# Reduction mod p and the Ohtsuki Expansion
# ============================================================================

def phi_p(x: RingElem) -> int:
    """
    Reduce x to Z/pZ: evaluate at v = 1, then reduce mod p.

    Well defined on R because 1 + v + ... + v^(p-1) evaluates to p.
    """
    if isinstance(x, FieldElem):
        x = x.to_ring()
    p = x.p
    return (sum(x.numerators) * inverse_mod(x.denominator, p)) % p


def ohtsuki_coeffs(x: RingElem) -> List[int]:
    """
    Coefficients a_0..a_(p-2) mod p of x = sum a_j (1 - v)^j.

    a_0 always equals phi_p(x).
    """
    if isinstance(x, FieldElem):
        x = x.to_ring()
    p = x.p
    dinv = inverse_mod(x.denominator, p)
    num = x.numerators
    out = []
    for j in range(p - 1):
        # v^i = sum_j C(i, j) (-1)^j (1 - v)^j
        s = sum(c * comb(i, j) for i, c in enumerate(num) if c and i >= j)
        if j % 2:
            s = -s
        out.append((s * dinv) % p)
    return out


def from_ohtsuki(p: int, coeffs: Sequence[int]) -> RingElem:
    """Rebuild sum a_j (1 - v)^j from lifted integer coefficients."""
    u = ring_one(p) - monomial(p, 1)
    result = ring_zero(p)
    power = ring_one(p)
    for a in coeffs:
        if a:
            result = result + power * a
        power = power * u
    return result


def ohtsuki_valuation(x: RingElem) -> int:
    """
    The (1 - v)-adic valuation of a nonzero x in R.

    p = unit * (1 - v)^(p-1), so the p-adic content contributes p - 1 per
    power of p; the rest is the first nonzero Ohtsuki coefficient.
    """
    if isinstance(x, FieldElem):
        x = x.to_ring()
    if x.is_zero():
        raise ValueError("zero has no finite valuation")
    p = x.p
    content = reduce(gcd, x.numerators, 0)
    k = 0
    while content % p == 0:
        content //= p
        k += 1
    primitive = RingElem._raw(p, [c // p ** k for c in x.numerators], x.denominator)
    coeffs = ohtsuki_coeffs(primitive)
    first = next(i for i, a in enumerate(coeffs) if a)
    return (p - 1) * k + first


# ============================================================================
# Field Inversion and Exact Division
# ============================================================================

_V = Symbol('v')


@lru_cache(maxsize=None)
def _cyclotomic(p: int) -> Poly:
    return Poly(cyclotomic_poly(p, _V), _V, domain=QQ)


@lru_cache(maxsize=8192)
def _invert_numerators(p: int, num: Tuple[int, ...]) -> Tuple[Tuple[int, ...], int]:
    poly = Poly(list(reversed(num)), _V, domain=QQ)
    inv = poly.invert(_cyclotomic(p))
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
    coeffs += [Fraction(0)] * (p - 1 - len(coeffs))
    den = reduce(_lcm, (c.denominator for c in coeffs), 1)
    return tuple(c.numerator * (den // c.denominator) for c in coeffs), den


def to_field(x: _CyclotomicElement) -> FieldElem:
    return x.to_field()


def field_inv(x: _CyclotomicElement) -> FieldElem:
    """Inverse in Q(v); every nonzero element is invertible."""
    if x.is_zero():
        raise DivisionByZero("cannot invert zero", p=x.p)
    num, den = _invert_numerators(x.p, x.numerators)
    return FieldElem._raw(x.p, [c * x.denominator for c in num], den)


def field_mul(x: _CyclotomicElement, y: _CyclotomicElement) -> FieldElem:
    return (x * y).to_field()


def field_pow(x: _CyclotomicElement, n: int) -> FieldElem:
    return (x.to_field()) ** n


def exact_div(x: RingElem, y: RingElem) -> RingElem:
    """
    The unique q in R with q * y = x.

    Raises:
        DivisionByZero: y is zero
        NotDivisibleInR: the quotient leaves R
    """
    if isinstance(y, _CyclotomicElement) and y.is_zero():
        raise DivisionByZero("division by zero", p=y.p)
    q = x.to_field() * field_inv(y)
    if not q.is_plocal():
        raise NotDivisibleInR("quotient is not p-local", p=x.p, operation='exact_div')
    return q.to_ring()


# ============================================================================
# Serialisation
# ============================================================================

def _from_json(cls, data: Mapping[str, object]):
    p = check_prime(int(data['p']))
    coeffs = [Fraction(int(n), int(d)) for n, d in data['coeffs']]
    if len(coeffs) != p - 1:
        raise ValueError(f"expected {p - 1} coefficients, got {len(coeffs)}")
    den = reduce(_lcm, (c.denominator for c in coeffs), 1)
    return cls(p, [c.numerator * (den // c.denominator) for c in coeffs], den)


def ring_from_json(data: Mapping[str, object]) -> RingElem:
    return _from_json(RingElem, data)
