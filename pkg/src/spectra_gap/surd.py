"""Exact arithmetic for continued-fraction values.

Three value types live here:

* :class:`QuadSurd` -- a single quadratic irrational ``(p + r*sqrt(d)) / q``.
* :class:`RadicalSum` -- a canonical rational combination of square roots of
  pairwise non-equivalent radicands. Sign and equality are decidable because
  square roots of distinct squarefree integers are linearly independent over Q.
* :class:`RatInterval` -- a closed rational interval used for enclosures.

Nothing on the certified path touches floating point: square roots are
bracketed with integer square roots of scaled integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Mapping, Sequence, Union

Rational = Union[int, Fraction]

TRIAL_LIMIT = 10**6
RHO_STEPS = 20_000


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    s = isqrt(n)
    return s * s == n


@lru_cache(maxsize=None)
def square_part(n: int) -> tuple[int, int]:
    """Split ``n > 0`` as ``s*s*k`` with ``k`` as squarefree as can be proven.

    Trial division runs to :data:`TRIAL_LIMIT`; the remaining cofactor is
    settled by a square test, a primality test, and a bounded Pollard rho.
    A cofactor that resists all three is kept whole: :class:`RadicalSum`
    still merges radicands whose product is a perfect square, so equality
    stays decidable either way.
    """
    if n <= 0:
        raise ValueError(f"square_part needs a positive integer, got {n}")
    from sympy import factorint, isprime
    from sympy.ntheory import pollard_rho

    s, k = 1, 1
    factors = factorint(n, limit=TRIAL_LIMIT, use_rho=False, use_pm1=False, use_ecm=False)
    pending = []
    for p, e in factors.items():
        if p <= TRIAL_LIMIT or isprime(p):
            s *= p ** (e // 2)
            k *= p ** (e % 2)
        else:
            pending.extend([p] * e)
    # composite cofactors: all prime factors exceed TRIAL_LIMIT
    stubborn: dict[int, int] = {}
    while pending:
        m = pending.pop()
        if m == 1:
            continue
        if isprime(m):
            stubborn[m] = stubborn.get(m, 0) + 1
            continue
        if _is_square(m):
            r = isqrt(m)
            pending.extend([r, r])
            continue
        if m < TRIAL_LIMIT**3:
            # two distinct primes above the trial bound; squarefree
            stubborn[m] = stubborn.get(m, 0) + 1
            continue
        f = pollard_rho(m, retries=3, max_steps=RHO_STEPS)
        if f is None or f in (1, m):
            stubborn[m] = stubborn.get(m, 0) + 1
        else:
            pending.extend([f, m // f])
    for p, e in stubborn.items():
        s *= p ** (e // 2)
        k *= p ** (e % 2)
    return s, k


def squarefree_kernel(n: int) -> int:
    return square_part(n)[1]


@lru_cache(maxsize=4096)
def _isqrt_scaled(d: int, bits: int) -> int:
    """floor(sqrt(d) * 2**bits)."""
    return isqrt(d << (2 * bits))


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True, order=False)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Rational | "RatInterval") -> bool:
        if isinstance(x, RatInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __add__(self, other: "RatInterval | Rational") -> "RatInterval":
        if isinstance(other, RatInterval):
            return RatInterval(self.lo + other.lo, self.hi + other.hi)
        return RatInterval(self.lo + other, self.hi + other)

    def __sub__(self, other: "RatInterval | Rational") -> "RatInterval":
        if isinstance(other, RatInterval):
            return RatInterval(self.lo - other.hi, self.hi - other.lo)
        return RatInterval(self.lo - other, self.hi - other)

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def scale(self, c: Rational) -> "RatInterval":
        a, b = self.lo * c, self.hi * c
        return RatInterval(min(a, b), max(a, b))

    def __mul__(self, other: "RatInterval") -> "RatInterval":
        products = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return RatInterval(min(products), max(products))

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def sign(self) -> int | None:
        """+1/-1 when the interval excludes zero, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None


class RadicalSum:
    """Canonical finite sum ``sum c_k * sqrt(k)``; key 1 holds the rational part.

    Instances are immutable and hashable. Two sums are equal as real numbers
    iff their term tuples are equal.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for n, c in items:
            _accumulate(acc, int(n), Fraction(c))
        self.terms: tuple[tuple[int, Fraction], ...] = tuple(
            sorted((k, c) for k, c in acc.items() if c != 0)
        )
        self._hash = hash(self.terms)

    @classmethod
    def _raw(cls, terms: tuple[tuple[int, Fraction], ...]) -> "RadicalSum":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = hash(terms)
        return obj

    @classmethod
    def rational(cls, c: Rational) -> "RadicalSum":
        return cls({1: c})

    @classmethod
    def sqrt(cls, n: int, coeff: Rational = 1) -> "RadicalSum":
        return cls({n: coeff})

    @classmethod
    def coerce(cls, x: "RadicalSum | QuadSurd | Rational") -> "RadicalSum":
        if isinstance(x, RadicalSum):
            return x
        if isinstance(x, QuadSurd):
            return x.to_radsum()
        return cls.rational(x)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "RadicalSum | QuadSurd | Rational") -> "RadicalSum":
        other = RadicalSum.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for k, c in other.terms:
            _accumulate(acc, k, c, canonical=True)
        return RadicalSum._raw(tuple(sorted((k, c) for k, c in acc.items() if c != 0)))

    __radd__ = __add__

    def __neg__(self) -> "RadicalSum":
        return RadicalSum._raw(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "RadicalSum | QuadSurd | Rational") -> "RadicalSum":
        return self + (-RadicalSum.coerce(other))

    def __rsub__(self, other: "RadicalSum | QuadSurd | Rational") -> "RadicalSum":
        return RadicalSum.coerce(other) - self

    def scale(self, c: Rational) -> "RadicalSum":
        c = Fraction(c)
        if c == 0:
            return RadicalSum._raw(())
        return RadicalSum._raw(tuple((k, v * c) for k, v in self.terms))

    def __mul__(self, c: Rational) -> "RadicalSum":
        if isinstance(c, (RadicalSum, QuadSurd)):
            raise TypeError("products of radical sums are not supported")
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c: Rational) -> "RadicalSum":
        return self.scale(Fraction(1) / Fraction(c))

    # -- comparison -------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (RadicalSum, QuadSurd, int, Fraction)):
            return self.terms == RadicalSum.coerce(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "RadicalSum | QuadSurd | Rational") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "RadicalSum | QuadSurd | Rational") -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: "RadicalSum | QuadSurd | Rational") -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: "RadicalSum | QuadSurd | Rational") -> bool:
        return (self - other).sign() >= 0

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def radicands(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.terms if k != 1)

    def coefficient(self, k: int) -> Fraction:
        for key, c in self.terms:
            if key == k:
                return c
        return Fraction(0)

    # -- enclosure --------------------------------------------------------
    def scaled_bounds(self, bits: int) -> tuple[int, int]:
        """Integers (lo, hi) with lo <= value * 2**bits <= hi."""
        lo = hi = 0
        one = 1 << bits
        for k, c in self.terms:
            n, d = c.numerator, c.denominator
            if k == 1:
                lo += _floor_div(n * one, d)
                hi += _ceil_div(n * one, d)
                continue
            s = _isqrt_scaled(k, bits)
            if n >= 0:
                lo += _floor_div(n * s, d)
                hi += _ceil_div(n * (s + 1), d)
            else:
                lo += _floor_div(n * (s + 1), d)
                hi += _ceil_div(n * s, d)
        return lo, hi

    def sign(self) -> int:
        if not self.terms:
            return 0
        if len(self.terms) == 1:
            return 1 if self.terms[0][1] > 0 else -1
        bits = 64
        while True:
            lo, hi = self.scaled_bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def enclose(self, eps: Rational) -> RatInterval:
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("enclose needs a positive width")
        if all(k == 1 for k, _ in self.terms):
            v = self.coefficient(1)
            return RatInterval(v, v)
        bits = max(8, (eps.denominator // max(eps.numerator, 1)).bit_length() + 4)
        while True:
            lo, hi = self.scaled_bounds(bits)
            if Fraction(hi - lo, 1 << bits) <= eps:
                return RatInterval(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))
            bits += 8

    def __float__(self) -> float:
        if self.is_zero():
            return 0.0
        eps = Fraction(1, 1 << 60)
        while True:
            iv = self.enclose(eps)
            mid = (iv.lo + iv.hi) / 2
            # stop once the enclosure is tight relative to the value itself
            if iv.sign() is not None and iv.width <= abs(mid) / (1 << 60):
                return float(mid)
            eps /= 1 << 64

    # -- printing ---------------------------------------------------------
    def canonical(self) -> str:
        """Print as ``a/b + (c/d)*sqrt(D) + ...``, radicands ascending."""
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms:
            if k == 1:
                parts.append(str(c))
            else:
                parts.append(f"({c})*sqrt({k})")
        return " + ".join(parts)

    def common_denominator_form(self) -> tuple[int, dict[int, int]]:
        """(D, {k: n_k}) with value = sum n_k sqrt(k) / D and D minimal positive."""
        den = 1
        for _, c in self.terms:
            den = den * c.denominator // gcd(den, c.denominator)
        nums = {k: int(c * den) for k, c in self.terms}
        return den, nums

    def decimal(self, digits: int = 12) -> str:
        return to_decimal(self, digits)

    def __repr__(self) -> str:
        return f"RadicalSum({self.canonical()})"

    def to_json(self) -> dict:
        return {
            "exact": self.canonical(),
            "terms": [[k, str(c)] for k, c in self.terms],
        }

    @classmethod
    def from_json(cls, payload: dict | Sequence) -> "RadicalSum":
        terms = payload["terms"] if isinstance(payload, dict) else payload
        return cls((int(k), Fraction(c)) for k, c in terms)


def _accumulate(acc: dict[int, Fraction], n: int, c: Fraction, canonical: bool = False) -> None:
    """Add ``c*sqrt(n)`` into ``acc`` keeping radicands pairwise inequivalent."""
    if c == 0 or n == 0:
        return
    if n < 0:
        raise ValueError("negative radicand")
    if canonical:
        k = n
    else:
        s, k = square_part(n)
        c = c * s
    if k in acc:
        acc[k] += c
        return
    for e in list(acc):
        if e == 1 or k == 1:
            continue
        g = gcd(k, e)
        if _is_square(k // g) and _is_square(e // g):
            # sqrt(k) = sqrt(k*e)/e * sqrt(e)
            acc[e] += c * Fraction(isqrt(k * e), e)
            return
    acc[k] = c


@dataclass(frozen=True)
class QuadSurd:
    """``(p + r*sqrt(d)) / q`` in lowest terms; rational values carry r = d = 0."""

    p: int
    r: int
    q: int
    d: int

    @classmethod
    def make(cls, p: int, r: int, q: int, d: int) -> "QuadSurd":
        if q == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            raise ValueError("negative radicand")
        if r != 0 and d > 0:
            s, k = square_part(d)
            r *= s
            d = k
            if d == 1:
                p, r, d = p + r, 0, 0
        else:
            r, d = 0, 0
        if q < 0:
            p, r, q = -p, -r, -q
        g = gcd(gcd(p, r), q)
        if g > 1:
            p, r, q = p // g, r // g, q // g
        return cls(p, r, q, d)

    @property
    def is_rational(self) -> bool:
        return self.r == 0

    def to_radsum(self) -> RadicalSum:
        if self.r == 0:
            return RadicalSum._raw(((1, Fraction(self.p, self.q)),) if self.p else ())
        terms = []
        if self.p:
            terms.append((1, Fraction(self.p, self.q)))
        terms.append((self.d, Fraction(self.r, self.q)))
        return RadicalSum._raw(tuple(terms))

    def __add__(self, other: "QuadSurd | RadicalSum | Rational") -> RadicalSum:
        return self.to_radsum() + other

    def __sub__(self, other: "QuadSurd | RadicalSum | Rational") -> RadicalSum:
        return self.to_radsum() - other

    def sign(self) -> int:
        return self.to_radsum().sign()

    def __lt__(self, other) -> bool:
        return (self.to_radsum() - other).sign() < 0

    def __gt__(self, other) -> bool:
        return (self.to_radsum() - other).sign() > 0

    def __le__(self, other) -> bool:
        return (self.to_radsum() - other).sign() <= 0

    def __ge__(self, other) -> bool:
        return (self.to_radsum() - other).sign() >= 0

    def mobius(self, a: int, b: int, c: int, d: int) -> "QuadSurd":
        """Image under x -> (a x + b) / (c x + d)."""
        p, r, q, D = self.p, self.r, self.q, self.d
        num_p, num_r = a * p + b * q, a * r
        den_p, den_r = c * p + d * q, c * r
        if den_r == 0:
            if den_p == 0:
                raise ZeroDivisionError("Moebius image at the pole")
            return QuadSurd.make(num_p, num_r, den_p, D)
        norm = den_p * den_p - den_r * den_r * D
        if norm == 0:
            raise ZeroDivisionError("Moebius image at the pole")
        # multiply through by the conjugate of the denominator
        new_p = num_p * den_p - num_r * den_r * D
        new_r = num_r * den_p - num_p * den_r
        return QuadSurd.make(new_p, new_r, norm, D)

    def canonical(self) -> str:
        return self.to_radsum().canonical()

    def __repr__(self) -> str:
        return f"QuadSurd(({self.p} + {self.r}*sqrt({self.d}))/{self.q})"


def cf_matrix(digits: Iterable[int]) -> tuple[int, int, int, int]:
    """Product of [[a, 1], [1, 0]] over ``digits``; maps x to [a0; a1, ..., x]."""
    a, b, c, d = 1, 0, 0, 1
    for t in digits:
        a, b, c, d = a * t + b, a, c * t + d, c
    return a, b, c, d


@lru_cache(maxsize=65536)
def _periodic_fixed_point(period: tuple[int, ...]) -> QuadSurd:
    A, B, C, D = cf_matrix(period)
    disc = (A - D) ** 2 + 4 * B * C
    if disc <= 0 or C == 0:
        raise ArithmeticError(f"degenerate period {period!r}")
    # attracting fixed point is the positive root of C x^2 + (D - A) x - B = 0
    return QuadSurd.make(A - D, 1, 2 * C, disc)


def surd_from_periodic_cf(prefix: Sequence[int], period: Sequence[int]) -> QuadSurd:
    """Exact value of ``[prefix; per(period)]``.

    ``prefix`` may start with 0 (a value in (0, 1)); all other digits must be
    positive.
    """
    period = tuple(int(x) for x in period)
    if not period:
        raise ValueError("period must be nonempty")
    if any(x < 1 for x in period):
        raise ValueError("period digits must be positive")
    if any(x < 1 for x in list(prefix)[1:]) or (prefix and prefix[0] < 0):
        raise ValueError("prefix digits must be positive (leading 0 allowed)")
    x = _periodic_fixed_point(period)
    if not prefix:
        return x
    return x.mobius(*cf_matrix(prefix))


def convergents(digits: Iterable[int]) -> Iterable[Fraction]:
    """Successive convergents p_n/q_n of [a0; a1, ...]."""
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in digits:
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        yield Fraction(p0, q0)


def to_decimal(x: RadicalSum | QuadSurd | Rational, digits: int = 12) -> str:
    """Round-to-nearest decimal rendering.

    Values with magnitude >= 1e-3 print with ``digits`` places after the
    point; smaller ones print in scientific form with ``digits`` significant
    digits. An exact tie (only possible for rationals) is marked ``(tie)``.
    """
    x = RadicalSum.coerce(x)
    if x.is_zero():
        return "0"
    sign = x.sign()
    ax = x if sign > 0 else -x
    exp10 = 0
    scientific = ax < Fraction(1, 1000)
    if scientific:
        exp10 = _exponent10(ax)
        scale = Fraction(10) ** (digits - 1 - exp10)
    else:
        scale = Fraction(10) ** digits
    val = ax.scale(scale)
    # val in [n, n+1): nearest integer
    if all(k == 1 for k, _ in val.terms):
        v = val.coefficient(1)
        n = _round_half_up(v)
        tie = (v - int(v)) == Fraction(1, 2)
    else:
        # irrational: never a tie, refine until both ends round alike
        eps = Fraction(1, 16)
        tie = False
        while True:
            iv = val.enclose(eps)
            n = _round_half_up(iv.lo)
            if n == _round_half_up(iv.hi):
                break
            eps /= 256
    if scientific and len(str(n)) > digits:
        # rounding carried into a new decade
        exp10 += 1
        n = n // 10
    text = _format_digits(n, digits, scientific, exp10)
    if sign < 0:
        text = "-" + text
    if tie:
        text += " (tie)"
    return text


def _exponent10(ax: RadicalSum) -> int:
    """floor(log10(ax)) for a positive irrational-or-rational ax."""
    e = 0
    while ax < Fraction(10) ** e:
        e -= 1
    while ax >= Fraction(10) ** (e + 1):
        e += 1
    return e


def _round_half_up(v: Fraction) -> int:
    return int((v + Fraction(1, 2)) // 1)


def _format_digits(n: int, digits: int, scientific: bool, exp10: int) -> str:
    s = str(n)
    if scientific:
        s = s.rjust(digits, "0")
        mant = s[0] + ("." + s[1:] if len(s) > 1 else "")
        return f"{mant}e{exp10}"
    if digits == 0:
        return s
    s = s.rjust(digits + 1, "0")
    return s[:-digits] + "." + s[-digits:]


_TERM = re.compile(r"^\((-?\d+(?:/\d+)?)\)\*sqrt\((\d+)\)$")
_RAT = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_radsum(text: str) -> RadicalSum:
    """Inverse of :meth:`RadicalSum.canonical`."""
    text = text.strip()
    if text == "0":
        return RadicalSum()
    terms = []
    for part in text.split(" + "):
        part = part.strip()
        m = _TERM.match(part)
        if m:
            terms.append((int(m.group(2)), Fraction(m.group(1))))
        elif _RAT.match(part):
            terms.append((1, Fraction(part)))
        else:
            raise ValueError(f"cannot parse radical-sum term {part!r}")
    return RadicalSum(terms)
