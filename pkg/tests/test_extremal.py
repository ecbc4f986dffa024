from __future__ import annotations

import random
from functools import lru_cache

import pytest

from spectra_gap.extremal import Contradiction, WordSet, constrained_bounds, extremal, minimax_endpoint
from spectra_gap.perron import lam0
from spectra_gap.words import BiSeq, PartialSeq

FREE = 10


def cf_float(ds, tail: float) -> float:
    x = tail
    for a in reversed(ds):
        x = a + 1.0 / x
    return x


def brute_force(p: PartialSeq, words: set[tuple[int, ...]]):
    """All forbidden-free, infinitely extendable right completions of length FREE.

    Returns (prefix, lo, hi) where [lo, hi] encloses lambda_0 over every
    infinite continuation of the prefix.
    """
    context = p.left * 6 + p.core
    maxlen = max(len(w) for w in words)
    keep = maxlen - 1

    def clean_end(seq) -> bool:
        return not any(tuple(seq[-m:]) in words for m in range(1, maxlen + 1) if m <= len(seq))

    @lru_cache(maxsize=None)
    def extendable(state: tuple[int, ...], steps: int) -> bool:
        if steps == 0:
            return True
        for d in (1, 2, 3):
            nxt = state + (d,)
            if clean_end(nxt) and extendable(nxt[-keep:] if keep else (), steps - 1):
                return True
        return False

    left_outward = list(p.core[: p.pivot][::-1]) + list(p.left[::-1]) * 30
    left_val = 1.0 / cf_float(left_outward, 1.0)
    out = []

    def walk(seq: list[int], prefix: list[int]):
        if len(prefix) == FREE:
            if extendable(tuple(seq[-keep:]) if keep else (), 40):
                right = list(p.core[p.pivot:]) + prefix
                a = cf_float(right, 1.0) + left_val
                b = cf_float(right, 4.0) + left_val
                out.append((tuple(prefix), min(a, b), max(a, b)))
            return
        for d in (1, 2, 3):
            seq.append(d)
            prefix.append(d)
            if clean_end(seq):
                walk(seq, prefix)
            seq.pop()
            prefix.pop()

    walk(list(context), [])
    return out


def random_instance(rng: random.Random):
    words = {tuple(rng.choice((1, 2, 3)) for _ in range(rng.randint(2, 4))) for _ in range(rng.randint(2, 6))}
    left = tuple(rng.choice((1, 2, 3)) for _ in range(rng.randint(1, 3)))
    core = tuple(rng.choice((1, 2, 3)) for _ in range(rng.randint(1, 4)))
    return PartialSeq(left, core, rng.randrange(len(core)), None), words


def test_extremal_beats_exhaustive_enumeration():
    rng = random.Random(7)
    done = 0
    while done < 50:
        p, words = random_instance(rng)
        direction = rng.choice(["min", "max"])
        try:
            res = extremal(p, WordSet(words | {w[::-1] for w in words}), direction)
        except Contradiction:
            continue
        closed = words | {w[::-1] for w in words}
        cands = brute_force(p, closed)
        assert cands, "extremal found a completion the enumeration missed"
        v = float(res.value)
        if direction == "min":
            assert min(lo for _, lo, _ in cands) - 1e-12 <= v <= min(hi for _, _, hi in cands) + 1e-12
        else:
            assert max(lo for _, lo, _ in cands) - 1e-12 <= v <= max(hi for _, _, hi in cands) + 1e-12
        start = len(p.core) - p.pivot
        prefix = res.sequence.window(start, start + FREE - 1)
        assert prefix in {c[0] for c in cands}
        done += 1


def test_fixed_part_containing_forbidden_word_is_a_contradiction():
    with pytest.raises(Contradiction):
        extremal("per(12) 13* ", WordSet([(1, 3), (3, 1)]), "min")


def test_exempt_fixed_allows_words_inside_the_fixed_part():
    res = extremal("per(12) 13*", WordSet([(1, 3), (3, 1)]), "min", exempt_fixed=True)
    free = res.sequence.window(0, 12)
    assert all(free[i : i + 2] not in ((1, 3), (3, 1)) for i in range(len(free) - 1))


def test_no_admissible_digit():
    with pytest.raises(Contradiction):
        extremal("per(1) 1*", WordSet([(1, 1), (1, 2), (1, 3)]), "min")


def test_unconstrained_extremal_is_alternating_padding():
    # the first free digit sits at odd depth, where a larger digit lowers the value
    res = extremal("per(2) 2*", WordSet(()), "min")
    assert res.sequence == BiSeq.of("per(2) 2* per(31)")
    res = extremal("per(2) 2*", WordSet(()), "max")
    assert res.sequence == BiSeq.of("per(2) 2* per(13)")


def test_trace_records_rejections():
    res = extremal("per(2) 2*", WordSet([(2, 1)]), "max")
    rows = res.trace()
    assert rows[0]["side"] == "right" and rows[0]["digit"] == 2
    assert any(r["reason"].startswith("forbidden") for r in rows[0]["rejected"])


def test_constrained_bounds_bracket_all_completions():
    lo, hi = constrained_bounds("2*1", WordSet([(1, 1), (3, 3)]))
    assert lo.value <= lam0("per(12) 2*1 per(2)") <= hi.value


def test_minimax_crossing_and_failure():
    res = minimax_endpoint("per(1) 3* 2", (1,), 1, WordSet(()), n_max=5)
    assert res.n_star == 0 and res.l_values[0] >= res.L_values[0]
    with pytest.raises(ValueError):
        minimax_endpoint("per(1) 1* 3", (1,), 1, WordSet(()), n_max=3)
