from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectra_gap.surd import (
    QuadSurd,
    RadicalSum,
    convergents,
    parse_radsum,
    square_part,
    squarefree_kernel,
    surd_from_periodic_cf,
    to_decimal,
)


def mp_value(x: RadicalSum) -> mpmath.mpf:
    total = mpmath.mpf(0)
    for k, c in x.terms:
        total += mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(k)
    return total


def test_square_part_and_kernel():
    assert square_part(72) == (6, 2)
    assert square_part(49) == (7, 1)
    assert squarefree_kernel(151905) == 151905
    assert squarefree_kernel(4 * 87) == 87


def test_radicands_fold_to_squarefree_kernel():
    assert RadicalSum.sqrt(8) == RadicalSum.sqrt(2, 2)
    assert RadicalSum.sqrt(9) == RadicalSum.rational(3)
    assert RadicalSum.sqrt(12, Fraction(1, 2)).canonical() == "(1)*sqrt(3)"


def test_canonical_round_trip():
    x = RadicalSum({1: Fraction(-3, 7), 5: Fraction(2, 9), 87: Fraction(-1, 57)})
    assert x.canonical() == "-3/7 + (2/9)*sqrt(5) + (-1/57)*sqrt(87)"
    assert parse_radsum(x.canonical()) == x
    assert RadicalSum.from_json(x.to_json()) == x
    assert parse_radsum("0") == RadicalSum()


def test_common_denominator_form():
    x = RadicalSum({1: Fraction(1, 6), 2: Fraction(-3, 4)})
    den, nums = x.common_denominator_form()
    assert den == 12 and nums == {1: 2, 2: -9}


def test_sign_of_near_cancellation():
    # 665857/470832 - sqrt(2) is about 1.6e-12
    x = Fraction(665857, 470832) - RadicalSum.sqrt(2)
    assert x.sign() == 1
    assert (-x).sign() == -1
    assert RadicalSum().sign() == 0


def test_sign_matches_60_digit_oracle_on_random_sums():
    rng = random.Random(20261016)
    mpmath.mp.dps = 60
    for _ in range(10_000):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            k = rng.choice([1, 2, 3, 5, 6, 7, 10, 87, 18229, 151905])
            terms[k] = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        x = RadicalSum(terms)
        ref = mp_value(x)
        if abs(ref) < mpmath.mpf(10) ** -50:
            continue
        assert x.sign() == (1 if ref > 0 else -1)


def test_decimal_rounding():
    assert to_decimal(RadicalSum.sqrt(5), 10) == "2.2360679775"
    assert to_decimal(Fraction(1, 8), 2) == "0.13 (tie)"
    assert to_decimal(RadicalSum.sqrt(2, Fraction(1, 10**9)), 5) == "1.4142e-9"
    assert to_decimal(-RadicalSum.sqrt(3), 4) == "-1.7321"
    assert to_decimal(RadicalSum(), 4) == "0"


def test_periodic_cf_fixed_points():
    assert surd_from_periodic_cf((), (1,)).to_radsum() == (RadicalSum.sqrt(5) + 1) / 2
    assert surd_from_periodic_cf((), (2,)).to_radsum() == RadicalSum.sqrt(2) + 1
    x = surd_from_periodic_cf((0, 3), (1, 2))
    approx = list(convergents([0, 3] + [1, 2] * 30))[-1]
    assert abs(float(x.to_radsum()) - float(approx)) < 1e-15


def test_quadsurd_normalization():
    q = QuadSurd.make(2, 2, 4, 8)
    assert (q.p, q.r, q.q, q.d) == (1, 2, 2, 2)
    assert QuadSurd.make(1, 1, 1, 4).is_rational
    with pytest.raises(ZeroDivisionError):
        QuadSurd.make(1, 1, 0, 2)


coeff = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)
radicand = st.sampled_from([1, 2, 3, 5, 8, 12, 18, 50, 87])


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(radicand, coeff, max_size=4), st.dictionaries(radicand, coeff, max_size=4))
def test_addition_is_exact_and_consistent(a, b):
    x, y = RadicalSum(a), RadicalSum(b)
    assert (x + y) - y == x
    assert x + y == y + x
    assert math.isclose(float(x + y), float(x) + float(y), rel_tol=1e-9, abs_tol=1e-9)
    assert (x < y) == ((y - x).sign() > 0)


def test_float_conversion_is_relatively_accurate_for_tiny_values():
    x = RadicalSum.sqrt(2) - Fraction(665857, 470832)
    ref = mpmath.sqrt(2) - mpmath.mpf(665857) / 470832
    assert math.isclose(float(x), float(ref), rel_tol=1e-14)
    assert float(RadicalSum()) == 0.0
