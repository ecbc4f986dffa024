from __future__ import annotations

import itertools
import random

import mpmath
import pytest

from spectra_gap.perron import bound_pair, extremal_tails, lam, lam0, markov_sup, periodic_max
from spectra_gap.surd import RadicalSum
from spectra_gap.words import BiSeq, FiniteWord, PointedWord

from conftest import as_mpf, oracle_lambda, seq_digit


def random_biseq(rng: random.Random, alphabet=(1, 2, 3)) -> BiSeq:
    def block(lo, hi):
        return tuple(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))

    core = block(1, 8)
    return BiSeq(block(1, 4), core, rng.randrange(len(core)), block(1, 4))


def float_lambda(left_outward, right) -> float:
    """[right] + [0; left_outward] for finite digit lists evaluated in floats."""
    def cf(ds):
        x = float(ds[-1])
        for a in reversed(ds[:-1]):
            x = a + 1.0 / x
        return x
    return cf(right) + 1.0 / cf(left_outward)


def test_constant_sequences_give_sqrt_a2_plus_4():
    for a in range(1, 10):
        assert lam0(f"per({a}) {a}* per({a})") == RadicalSum.sqrt(a * a + 4)


def test_lambda_matches_mpmath_oracle():
    rng = random.Random(1)
    for _ in range(60):
        s = random_biseq(rng)
        k = rng.randint(-6, 6)
        ref = oracle_lambda(seq_digit(s), k)
        assert abs(as_mpf(lam0(s, k)) - ref) < mpmath.mpf(10) ** -40


def test_transpose_and_shift_identities_on_random_sequences():
    rng = random.Random(2)
    for _ in range(1000):
        s = random_biseq(rng)
        k = rng.randint(-5, 5)
        v = lam0(s, k)
        assert v == lam0(s.shift(k))
        assert v == lam0(s.transpose(), -k)


def test_lambda_parts_are_exact_surds():
    v = lam("per(12) 1* per(21)")
    assert v.right_part.to_radsum() + v.left_part.to_radsum() == v.value
    assert 0 < float(v.left_part.to_radsum()) < 1


def test_bound_pair_sandwich_against_depth_six_brute_force():
    rng = random.Random(3)
    ext = list(itertools.product((1, 2, 3), repeat=3))
    alt = {"13": [1, 3] * 20, "31": [3, 1] * 20}
    for _ in range(200):
        n = rng.randint(1, 6)
        digits = tuple(rng.choice((1, 2, 3)) for _ in range(n))
        w = PointedWord(FiniteWord(digits), rng.randrange(n))
        bp = bound_pair(w)
        lo, hi = float(bp.lo), float(bp.hi)
        best_lo, best_hi = float("inf"), float("-inf")
        for le in ext:
            for re_ in ext:
                left_out = list(w.left_arm[::-1]) + list(le)
                right = list(w.digits[w.pivot:]) + list(re_)
                for a, b in itertools.product(alt.values(), repeat=2):
                    v = float_lambda(left_out + a, right + b)
                    best_lo, best_hi = min(best_lo, v), max(best_hi, v)
        assert lo - 1e-12 <= best_lo <= lo + 1e-12
        assert hi - 1e-12 <= best_hi <= hi + 1e-12
        assert bp.lo == lam0(bp.lo_seq) and bp.hi == lam0(bp.hi_seq)


def test_extremal_tails_agree_with_bound_pair():
    w = PointedWord.of("21233*2111")
    left, right = extremal_tails(w, "min")
    assert lam0(BiSeq(left, w.digits, w.pivot, right)) == bound_pair(w).lo
    with pytest.raises(ValueError):
        extremal_tails(w, "sideways")


def test_markov_sup_equals_period_enumeration_on_periodic_words():
    rng = random.Random(4)
    for _ in range(200):
        block = tuple(rng.choice((1, 2, 3)) for _ in range(rng.randint(1, 9)))
        s = BiSeq.periodic(block, rng.randrange(len(block)))
        sup = markov_sup(s)
        brute = max(lam0(s, k) for k in range(len(block)))
        assert sup.value == brute and sup.attained
        assert sup.value == periodic_max(block)[0]
        ref = max(oracle_lambda(seq_digit(s), k, 80) for k in range(len(block)))
        assert abs(as_mpf(sup.value) - ref) < mpmath.mpf(10) ** -30


def test_markov_sup_on_mixed_sequences_matches_wide_scan():
    rng = random.Random(5)
    for _ in range(40):
        s = random_biseq(rng)
        sup = markov_sup(s)
        scan = max(lam0(s, k) for k in range(-40, 41))
        assert sup.value >= scan
        if sup.attained:
            assert sup.value == scan == lam0(s, sup.argmax)


def test_markov_sup_tie_prefers_smallest_index_then_negative():
    sup = markov_sup("per(1) 2 1* 2 per(1)")
    assert sup.argmax == -1
    assert markov_sup("per(1) 1* per(1)").argmax == 0
