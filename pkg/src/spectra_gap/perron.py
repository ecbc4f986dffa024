"""Perron's function on eventually periodic sequences.

``lambda_k(S) = [a_k; a_{k+1}, ...] + [0; a_{k-1}, a_{k-2}, ...]``, the Markov
value ``m(S) = sup_k lambda_k(S)``, and two-sided enclosures of ``lambda_0``
over all extensions of a finite pointed word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

from .surd import QuadSurd, RadicalSum, surd_from_periodic_cf
from .words import BiSeq, Digits, PointedWord

DEFAULT_ALPHABET = (1, 3)


@dataclass(frozen=True)
class LambdaValue:
    value: RadicalSum
    right_part: QuadSurd
    left_part: QuadSurd


def _right_cf(s: BiSeq, k: int) -> tuple[Digits, Digits]:
    """(prefix, period) of [a_k; a_{k+1}, ...]."""
    end = s.core_end
    if k <= end:
        return s.window(k, end), s.right
    p = len(s.right)
    j = (k - end - 1) % p
    return (), s.right[j:] + s.right[:j]


def _left_cf(s: BiSeq, k: int) -> tuple[Digits, Digits]:
    """(prefix, period) of [0; a_{k-1}, a_{k-2}, ...]."""
    start = s.core_start
    if k >= start:
        outward = s.window(start, k - 1)[::-1]
        return (0,) + outward, s.left[::-1]
    p = len(s.left)
    period = tuple(s[k - 1 - i] for i in range(p))
    return (0,), period


@lru_cache(maxsize=200_000)
def _lambda_cached(s: BiSeq, k: int) -> LambdaValue:
    rp, rper = _right_cf(s, k)
    lp, lper = _left_cf(s, k)
    right = surd_from_periodic_cf(rp, rper)
    left = surd_from_periodic_cf(lp, lper)
    return LambdaValue(right.to_radsum() + left.to_radsum(), right, left)


def lam(s: Union[BiSeq, str], k: int = 0) -> LambdaValue:
    """Exact lambda_k(s)."""
    return _lambda_cached(BiSeq.of(s), k)


def lam0(s: Union[BiSeq, str], k: int = 0) -> RadicalSum:
    """Exact value of lambda_k(s) as a RadicalSum."""
    return _lambda_cached(BiSeq.of(s), k).value


@dataclass(frozen=True)
class SupResult:
    value: RadicalSum
    attained: bool
    argmax: Union[int, str]
    window: tuple[int, int]
    tail_limits: tuple[RadicalSum, RadicalSum]


def periodic_max(block: Sequence[int]) -> tuple[RadicalSum, int]:
    """max over one period of lambda_k(per(block)), with the first maximizing phase."""
    s = BiSeq.periodic(tuple(block))
    best, arg = None, 0
    for k in range(len(s.left)):
        v = lam0(s, k)
        if best is None or v > best:
            best, arg = v, k
    return best, arg


def _tie_key(k: int) -> tuple[int, int]:
    return (abs(k), 0 if k < 0 else 1)


def markov_sup(s: Union[BiSeq, str]) -> SupResult:
    """Certified sup over k of lambda_k(s).

    Deep in the left tail, lambda_k(s) differs from the periodic value at the
    same phase only through the digits to the right of the core, and moving
    two periods further out applies an increasing contraction to that
    difference. So within a phase class the deviation keeps its sign and
    shrinks. Evaluating two full tail periods on either side of the core is
    therefore enough: sup = max(window values, left tail limit, right tail
    limit), attained iff the window reaches the larger tail limit.
    """
    s = BiSeq.of(s)
    t_left, _ = periodic_max(s.left)
    t_right, _ = periodic_max(s.right)
    a = s.core_start - 2 * len(s.left)
    b = s.core_end + 2 * len(s.right)
    best = None
    arg = 0
    for k in range(a, b + 1):
        v = lam0(s, k)
        if best is None or v > best or (v == best and _tie_key(k) < _tie_key(arg)):
            best, arg = v, k
    tail = t_left if t_left >= t_right else t_right
    if best >= tail:
        return SupResult(best, True, arg, (a, b), (t_left, t_right))
    marker = "left-tail" if t_left >= t_right else "right-tail"
    return SupResult(tail, False, marker, (a, b), (t_left, t_right))


def _alt_block(first: int, lo: int, hi: int) -> tuple[int, int]:
    return (first, hi if first == lo else lo)


def extremal_tails(
    w: PointedWord, direction: str, alphabet: tuple[int, int] = DEFAULT_ALPHABET
) -> tuple[Digits, Digits]:
    """Tail blocks (left, right) extremizing lambda_0 over extensions of ``w``.

    The free digit at continued-fraction depth ``i`` raises the value when
    ``i`` is even, so the extremal completion alternates the smallest and
    largest letters, starting according to the parity of each arm length.
    """
    lo, hi = alphabet
    n_left = w.pivot
    n_right = len(w) - w.pivot - 1
    # first free digit on the right sits at depth n_right + 1
    want_big_right = (n_right + 1) % 2 == 0
    want_big_left = (n_left + 1) % 2 == 0
    if direction == "min":
        want_big_right, want_big_left = not want_big_right, not want_big_left
    elif direction != "max":
        raise ValueError("direction must be 'min' or 'max'")
    r_first = hi if want_big_right else lo
    l_first = hi if want_big_left else lo
    right = _alt_block(r_first, lo, hi)
    # left block is written in reading order; its last digit touches the core
    left = _alt_block(l_first, lo, hi)[::-1]
    return left, right


@dataclass(frozen=True)
class BoundPair:
    lo: RadicalSum
    hi: RadicalSum
    lo_seq: BiSeq
    hi_seq: BiSeq
    case_values: tuple[tuple[str, RadicalSum], ...] = field(default=())

    def contains(self, x: RadicalSum) -> bool:
        return self.lo <= x <= self.hi


@lru_cache(maxsize=200_000)
def _bound_pair_cached(w: PointedWord, alphabet: tuple[int, int]) -> BoundPair:
    lo_d, hi_d = alphabet
    blocks = {"ab": (lo_d, hi_d), "ba": (hi_d, lo_d)}
    cases = []
    for lname, lblock in blocks.items():
        for rname, rblock in blocks.items():
            seq = BiSeq(lblock, w.digits, w.pivot, rblock)
            cases.append((f"per({_s(lblock)})|per({_s(rblock)})", seq, lam0(seq)))
    lo_case = min(cases, key=_Key)
    hi_case = max(cases, key=_Key)
    return BoundPair(
        lo_case[2], hi_case[2], lo_case[1], hi_case[1], tuple((name, v) for name, _, v in cases)
    )


class _Key:
    """Sort key wrapping exact comparison of RadicalSums."""

    __slots__ = ("v",)

    def __init__(self, case):
        self.v = case[2]

    def __lt__(self, other: "_Key") -> bool:
        return self.v < other.v


def _s(d: Sequence[int]) -> str:
    return "".join(map(str, d))


def bound_pair(w: Union[PointedWord, str], alphabet: tuple[int, int] = DEFAULT_ALPHABET) -> BoundPair:
    """Exact inf and sup of lambda_0 over all extensions of ``w`` with letters in ``alphabet``'s range.

    Both are attained by alternating smallest/largest letter tails; all four
    alternating paddings are evaluated and recorded.
    """
    return _bound_pair_cached(PointedWord.of(w), tuple(alphabet))
