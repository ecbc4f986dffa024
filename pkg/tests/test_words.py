from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectra_gap.notation import expand
from spectra_gap.words import (
    BiSeq,
    FiniteWord,
    LiteralError,
    PartialSeq,
    PointedWord,
    contains_subword,
    is_semisymmetric,
    parse,
    primitive_root,
)


def test_parse_narrowest_type():
    assert parse("123") == FiniteWord((1, 2, 3))
    assert parse("1*23") == PointedWord(FiniteWord((1, 2, 3)), 0)
    assert isinstance(parse("per(12) 3* per(3)"), BiSeq)
    assert isinstance(parse("12* per(3)"), PartialSeq)
    assert isinstance(parse("per(3) 12*"), PartialSeq)


def test_powers_and_starred_period():
    assert parse("(12)^3 1*") == PointedWord.of("1212121*")
    assert BiSeq.of("per(2212*112)") == BiSeq.periodic((2, 2, 1, 2, 1, 1, 2), 3)


@pytest.mark.parametrize("bad", ["12*3*", "per(12) 3 per(3)", "per(1*2) 3", "1x", "", "per(12"])
def test_malformed_literals(bad):
    with pytest.raises((LiteralError, ValueError)):
        BiSeq.of(bad)


def test_error_carries_position():
    with pytest.raises(LiteralError) as exc:
        parse("12*3x")
    assert exc.value.pos == 4


def test_canonical_core_is_minimal():
    s = BiSeq.of("per(12) 1212* 12 per(21)")
    assert s == BiSeq.of("per(21) 2*12 per(21)")
    assert str(s) == "per(21) 2*12 per(21)"
    assert BiSeq.of("per(1212) 1* per(11)") == BiSeq.of("per(12) 1* per(1)")


def test_indexing_and_window():
    s = BiSeq.of("per(12) 31*2 per(3)")
    assert s.window(-3, 3) == (1, 2, 3, 1, 2, 3, 3)
    assert s.shift(1)[0] == 2
    assert s.transpose()[1] == 3


def test_periodic_block_detection():
    s = BiSeq.of("per(W1) W1* per(W1)".replace("W1", "212332111"))
    assert s.period_block() is not None
    assert BiSeq.of("per(12) 3* per(12)").period_block() is None


def test_pointed_word_operations():
    w = PointedWord.of("212*33")
    assert w.left_arm == (2, 1) and w.right_arm == (3, 3)
    assert str(w.T) == "332*12"
    assert str(w.extend((1,), (2,))) == "1212*332"


def test_semisymmetry_and_primitive_root():
    assert is_semisymmetric("1221")
    assert not is_semisymmetric("212332111")
    assert not is_semisymmetric("2212112")
    assert primitive_root((1, 2, 1, 2)) == (1, 2)


def test_contains_subword_with_transpose():
    assert contains_subword("1232", "32", include_transpose=True) == [(1, True), (2, False)]


def test_named_blocks():
    assert expand("W1*") == "21233*2111"
    assert expand("W2 W2T") == "123332112 211233321"
    assert expand("WF*") == "2212*112"


digits = st.lists(st.integers(1, 3), min_size=1, max_size=6)


@settings(max_examples=300, deadline=None)
@given(digits, digits, digits, st.data())
def test_biseq_round_trips_through_its_literal(left, core, right, data):
    pivot = data.draw(st.integers(0, len(core) - 1))
    s = BiSeq(tuple(left), tuple(core), pivot, tuple(right))
    assert BiSeq.of(str(s)) == s
    for n in range(-15, 16):
        assert s.transpose()[n] == s[-n]
        assert s.shift(3)[n] == s[n + 3]
