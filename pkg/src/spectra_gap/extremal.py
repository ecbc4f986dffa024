"""Extremal completions of partially fixed sequences under a forbidden-word set.

For tails over {1, 2, 3}, a continued fraction ``[c0; c1, ...]`` lies strictly
inside ``(c0, c0 + 1)``, so two tails are ordered by their first differing
digit: a larger digit at even depth gives a larger value, at odd depth a
smaller one. Minimizing lambda_0 over one free side is therefore a greedy
choice of the extreme surviving digit at each depth, where "surviving"
means the digit completes no forbidden word and some infinite forbidden-free
continuation still exists. The greedy choice depends only on the last few
digits and the depth parity, so it closes into a periodic tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .perron import lam0
from .surd import RadicalSum
from .words import BiSeq, Digits, PartialSeq, PointedWord

ALPHABET = (1, 2, 3)


class Contradiction(ValueError):
    """Every candidate digit completes a forbidden word or dead-ends."""


class WordSet:
    """Finite set of forbidden words with a suffix automaton's worth of queries."""

    def __init__(self, words: Iterable[Sequence[int]], alphabet: Sequence[int] = ALPHABET):
        self.words = frozenset(tuple(w) for w in words)
        self.alphabet = tuple(alphabet)
        self.lengths = sorted({len(w) for w in self.words})
        self.keep = max(self.lengths, default=1) - 1
        self._alive: dict[Digits, bool] = {}

    def transposed(self) -> "WordSet":
        return WordSet((w[::-1] for w in self.words), self.alphabet)

    def union(self, other: Iterable[Sequence[int]]) -> "WordSet":
        return WordSet(set(self.words) | {tuple(w) for w in other}, self.alphabet)

    def __contains__(self, w: Sequence[int]) -> bool:
        return tuple(w) in self.words

    def ending_at(self, seq: Sequence[int]) -> Digits | None:
        """A forbidden word that is a suffix of ``seq``, if any."""
        n = len(seq)
        for m in self.lengths:
            if m > n:
                break
            tail = tuple(seq[n - m :])
            if tail in self.words:
                return tail
        return None

    def first_occurrence(self, seq: Sequence[int]) -> tuple[int, Digits] | None:
        seq = tuple(seq)
        for end in range(1, len(seq) + 1):
            hit = self.ending_at(seq[:end])
            if hit is not None:
                return end - len(hit), hit
        return None

    def state(self, seq: Sequence[int]) -> Digits:
        if self.keep == 0:
            return ()
        return tuple(seq[-self.keep :])

    def step(self, state: Digits, d: int) -> Digits | None:
        """Next state after appending ``d``, or None when a word completes."""
        ext = state + (d,)
        if self.ending_at(ext) is not None:
            return None
        return ext[len(ext) - self.keep :] if self.keep else ()

    def alive(self, state: Digits) -> bool:
        """True iff some infinite forbidden-free continuation exists."""
        memo = self._alive
        if state in memo:
            return memo[state]
        on_stack: set[Digits] = set()
        stack: list[tuple[Digits, list[Digits]]] = []

        def succ(s: Digits) -> list[Digits]:
            out = []
            for d in self.alphabet:
                t = self.step(s, d)
                if t is not None:
                    out.append(t)
            return out

        stack.append((state, succ(state)))
        on_stack.add(state)
        while stack:
            s, todo = stack[-1]
            found = False
            while todo:
                t = todo.pop()
                if t in on_stack or memo.get(t) is True:
                    found = True
                    break
                if t in memo:
                    continue
                stack.append((t, succ(t)))
                on_stack.add(t)
                break
            else:
                if not found:
                    memo[s] = False
                    on_stack.discard(s)
                    stack.pop()
                continue
            if found:
                for u, _ in stack:
                    memo[u] = True
                return True
        return memo[state]


@dataclass(frozen=True)
class Decision:
    depth: int
    digit: int
    rejected: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class SideResult:
    prefix: Digits
    period: Digits
    decisions: tuple[Decision, ...]


def _wants_small(direction: str, depth: int) -> bool:
    if direction == "min":
        return depth % 2 == 0
    if direction == "max":
        return depth % 2 == 1
    raise ValueError("direction must be 'min' or 'max'")


def greedy_side(
    context: Sequence[int],
    first_depth: int,
    direction: str,
    words: WordSet,
    max_digits: int = 100_000,
    exempt_context: bool = False,
) -> SideResult:
    """Extremal outward continuation of ``context`` (outward reading order).

    ``first_depth`` is the continued-fraction depth of the first free digit.
    Returns the transient digits and the repeating block. With
    ``exempt_context`` words lying inside ``context`` are not checked.
    """
    seq = list(context)
    hit = None if exempt_context else words.first_occurrence(seq)
    if hit is not None:
        raise Contradiction(f"fixed part already contains {''.join(map(str, hit[1]))}")
    state = words.state(seq)
    if not words.alive(state):
        raise Contradiction("fixed part admits no forbidden-free continuation")
    out: list[int] = []
    decisions: list[Decision] = []
    seen: dict[tuple[Digits, int], int] = {}
    depth = first_depth
    while len(out) < max_digits:
        key = (state, depth % 2)
        if key in seen:
            i = seen[key]
            return SideResult(tuple(out[:i]), tuple(out[i:]), tuple(decisions))
        seen[key] = len(out)
        order = sorted(words.alphabet, reverse=not _wants_small(direction, depth))
        rejected = []
        chosen = None
        for d in order:
            nxt = words.step(state, d)
            if nxt is None:
                bad = words.ending_at(state + (d,))
                rejected.append((d, "forbidden " + "".join(map(str, bad))))
                continue
            if not words.alive(nxt):
                rejected.append((d, "dead end"))
                continue
            chosen = d
            state = nxt
            break
        if chosen is None:
            raise Contradiction(f"no admissible digit at depth {depth}")
        decisions.append(Decision(depth, chosen, tuple(rejected)))
        out.append(chosen)
        depth += 1
    raise Contradiction("no periodic closure within the digit budget")


@dataclass(frozen=True)
class ExtremalResult:
    sequence: BiSeq
    value: RadicalSum
    direction: str
    at: int
    left: SideResult | None = None
    right: SideResult | None = None

    def trace(self) -> list[dict]:
        rows = []
        for side, res in (("left", self.left), ("right", self.right)):
            if res is None:
                continue
            for dec in res.decisions:
                rows.append(
                    {
                        "side": side,
                        "depth": dec.depth,
                        "digit": dec.digit,
                        "rejected": [{"digit": d, "reason": r} for d, r in dec.rejected],
                    }
                )
        return rows


def _context_right(p: PartialSeq, keep: int) -> Digits:
    """Digits left of the free right side, outward order, long enough for ``keep``."""
    core = p.core
    if p.left is None:
        return core
    reps = keep // len(p.left) + 1
    return p.left * reps + core


def extremal(
    fixed: Union[PartialSeq, PointedWord, str],
    words: WordSet | Iterable[Sequence[int]],
    direction: str = "min",
    at: int = 0,
    exempt_fixed: bool = False,
) -> ExtremalResult:
    """Optimize lambda_at over forbidden-free completions of the free sides.

    ``at`` is measured from the fixed part's pivot and must lie in its core.
    With both sides free the two sides are optimized independently, which
    ignores forbidden words straddling the whole core; the value is then the
    exact optimum of that relaxation (a sound bound for the joint problem).
    With ``exempt_fixed`` only forbidden words reaching into a free side
    count; occurrences inside the fixed part are allowed.
    """
    if isinstance(fixed, str):
        fixed = PartialSeq.of(fixed)
    elif isinstance(fixed, PointedWord):
        fixed = PartialSeq(None, fixed.digits, fixed.pivot, None)
    if not isinstance(words, WordSet):
        words = WordSet(words)
    piv = fixed.pivot + at
    if not 0 <= piv < len(fixed.core):
        raise ValueError("evaluation position must lie in the fixed core")
    left_res = right_res = None
    right_tail = fixed.right
    left_tail = fixed.left
    right_prefix: Digits = ()
    left_prefix: Digits = ()
    if fixed.right is None:
        ctx = _context_right(fixed, words.keep)
        first = len(fixed.core) - piv
        right_res = greedy_side(ctx, first, direction, words, exempt_context=exempt_fixed)
        right_prefix, right_tail = right_res.prefix, right_res.period
    if fixed.left is None:
        t = fixed.transpose()
        ctx = _context_right(t, words.keep)
        first = piv + 1
        left_res = greedy_side(ctx, first, direction, words.transposed(), exempt_context=exempt_fixed)
        left_prefix, left_tail = left_res.prefix[::-1], left_res.period[::-1]
    core = left_prefix + fixed.core + right_prefix
    seq = BiSeq(left_tail, core, piv + len(left_prefix), right_tail)
    return ExtremalResult(seq, lam0(seq), direction, at, left_res, right_res)


def constrained_bounds(
    w: Union[PointedWord, str], words: WordSet | Iterable[Sequence[int]]
) -> tuple[ExtremalResult, ExtremalResult]:
    """(min, max) of lambda_0 over forbidden-free extensions of ``w`` (independent sides)."""
    w = PointedWord.of(w)
    if not isinstance(words, WordSet):
        words = WordSet(words)
    return extremal(w, words, "min"), extremal(w, words, "max")


@dataclass(frozen=True)
class MinimaxResult:
    n_star: int
    value: RadicalSum
    sequence: BiSeq
    l_values: tuple[RadicalSum, ...]
    L_values: tuple[RadicalSum, ...]
    l_sequences: tuple[BiSeq, ...] = field(default=())
    L_sequences: tuple[BiSeq, ...] = field(default=())
    monotone: bool = True


def minimax_endpoint(
    template: Union[PartialSeq, str],
    filler: Sequence[int],
    pivot_b: int,
    words: WordSet | Iterable[Sequence[int]],
    n_max: int = 40,
) -> MinimaxResult:
    """First n where min lambda_0 meets max lambda_{pivot_b} over free right tails.

    The right side of ``template`` is free; ``[filler]_n`` (the first n digits
    of the periodic filler) is appended before optimizing.
    """
    if isinstance(template, str):
        template = PartialSeq.of(template)
    if template.right is not None:
        raise ValueError("template needs a free right side")
    if not isinstance(words, WordSet):
        words = WordSet(words)
    filler = tuple(filler)
    ls, Ls, lseq, Lseq = [], [], [], []
    monotone = True
    for n in range(n_max + 1):
        pad = tuple(filler[i % len(filler)] for i in range(n))
        p = PartialSeq(template.left, template.core + pad, template.pivot, None)
        lo = extremal(p, words, "min", 0)
        hi = extremal(p, words, "max", pivot_b)
        ls.append(lo.value)
        Ls.append(hi.value)
        lseq.append(lo.sequence)
        Lseq.append(hi.sequence)
        if n > 0 and (ls[-1] < ls[-2] or Ls[-1] > Ls[-2]):
            monotone = False
        if lo.value >= hi.value:
            return MinimaxResult(n, lo.value, lo.sequence, tuple(ls), tuple(Ls), tuple(lseq), tuple(Lseq), monotone)
    raise ValueError(f"no crossing up to n = {n_max}")
