"""Possibility trees around a pointed word and forced-extension propagation."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence, Union

from .certifier import Ledger, LedgerEntry
from .perron import BoundPair, bound_pair
from .surd import RadicalSum, to_decimal
from .words import BiSeq, Digits, PartialSeq, PointedWord

RED, BLUE, OPEN, PRUNED, SPINE = "red", "blue", "open", "pruned", "spine"
DOT_COLORS = {RED: "red", BLUE: "blue", OPEN: "black", SPINE: "black", PRUNED: "gray"}


def _dstr(d: Sequence[int]) -> str:
    return "".join(map(str, d))


@dataclass
class TreeNode:
    window: PointedWord
    status: str
    depth: int
    bound: BoundPair | None = None
    ledger_word: Digits | None = None
    children: list["TreeNode"] = field(default_factory=list)

    def walk(self) -> Iterator["TreeNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def to_json(self, digits: int = 12, threshold: RadicalSum | None = None) -> dict:
        out: dict = {"window": str(self.window), "status": self.status, "depth": self.depth}
        if self.bound is not None:
            out["lo"] = self.bound.lo.canonical()
            out["hi"] = self.bound.hi.canonical()
            if threshold is not None:
                out["lo_minus_threshold"] = to_decimal(self.bound.lo - threshold, digits)
                out["hi_minus_threshold"] = to_decimal(self.bound.hi - threshold, digits)
        if self.ledger_word is not None:
            out["ledger_word"] = _dstr(self.ledger_word)
        if self.children:
            out["children"] = [c.to_json(digits, threshold) for c in self.children]
        return out


@dataclass
class Tree:
    root: TreeNode
    threshold: RadicalSum
    complete: bool
    found: list[LedgerEntry]
    levels: list[list[TreeNode]]

    @property
    def spine(self) -> TreeNode | None:
        for n in self.root.walk():
            if n.status == SPINE:
                return n
        return None

    def open_leaves(self) -> list[TreeNode]:
        return [n for n in self.root.walk() if n.status == OPEN and not n.children]

    def to_json(self, digits: int = 12) -> dict:
        return {
            "complete": self.complete,
            "spine": None if self.spine is None else str(self.spine.window),
            "found_forbidden": [str(e.pointed) for e in self.found],
            "root": self.root.to_json(digits, self.threshold),
        }

    def to_dot(self) -> str:
        lines = ["digraph tree {", '  node [shape=box, fontname="monospace"];']
        ids: dict[int, str] = {}
        for i, n in enumerate(self.root.walk()):
            ids[id(n)] = f"n{i}"
            color = DOT_COLORS[n.status]
            style = ', style="bold"' if n.status == SPINE else ""
            lines.append(f'  n{i} [label="{n.window}", color={color}, fontcolor={color}{style}];')
        for n in self.root.walk():
            for c in n.children:
                lines.append(f"  {ids[id(n)]} -> {ids[id(c)]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _classify(
    w: PointedWord, depth: int, threshold: RadicalSum, running: Ledger
) -> TreeNode:
    hit = running.first_occurrence(w.digits)
    if hit is not None:
        return TreeNode(w, PRUNED, depth, ledger_word=hit[1].word)
    bp = bound_pair(w)
    if bp.lo > threshold:
        return TreeNode(w, RED, depth, bp)
    if bp.hi < threshold:
        return TreeNode(w, BLUE, depth, bp)
    return TreeNode(w, OPEN, depth, bp)


def build_tree(
    root: Union[PointedWord, str],
    threshold: RadicalSum,
    ledger: Ledger,
    max_depth: int = 8,
) -> Tree:
    """Expand ``root`` by letter pairs (s_l, s_r) level by level.

    Each child is pruned if it contains a ledger word, red if its padded
    infimum exceeds the threshold (and then joins the ledger for later
    nodes), blue if its padded supremum is below it, otherwise open.
    Expansion stops once the open frontier at some depth >= 1 is a single
    node, which is marked as the spine.
    """
    root = PointedWord.of(root)
    if any(d > 3 for d in root.digits):
        raise ValueError("tree exploration works over the alphabet {1,2,3}")
    running = ledger
    found: list[LedgerEntry] = []
    top = _classify(root, 0, threshold, running)
    levels = [[top]]
    frontier = [top] if top.status == OPEN else []
    depth = 0
    complete = True
    while frontier:
        if depth >= max_depth:
            complete = False
            break
        depth += 1
        nxt: list[TreeNode] = []
        for node in frontier:
            for sl, sr in product((1, 2, 3), repeat=2):
                w = node.window.extend(left=(sl,), right=(sr,))
                child = _classify(w, depth, threshold, running)
                node.children.append(child)
                if child.status == RED:
                    entry = LedgerEntry(w.digits, w.pivot, child.bound.lo - threshold, "certified")
                    found.append(entry)
                    running = running.with_entries([entry])
                elif child.status == OPEN:
                    nxt.append(child)
        levels.append([c for n in frontier for c in n.children])
        frontier = nxt
        if len(frontier) == 1:
            frontier[0].status = SPINE
            break
    return Tree(top, threshold, complete, found, levels)


@dataclass(frozen=True)
class Uniqueness:
    unique: bool
    window: PointedWord | None
    depth: int | None
    witnesses: tuple[PointedWord, ...] = ()

    def statement(self) -> str:
        if self.unique and self.window is not None:
            return f"every compatible window extends to {self.window}"
        if self.unique:
            return "no compatible window survives"
        return "not unique: " + ", ".join(str(w) for w in self.witnesses)


def local_uniqueness(tree: Tree) -> Uniqueness:
    """The unique surviving window of a finished tree, if there is one."""
    spine = tree.spine
    if spine is not None:
        return Uniqueness(True, spine.window, spine.depth)
    leaves = tree.open_leaves()
    if tree.complete and not leaves:
        return Uniqueness(True, None, None)
    return Uniqueness(False, None, None, tuple(n.window for n in leaves))


@dataclass(frozen=True)
class Step:
    before: PointedWord
    side: str
    letter: int
    rejected: tuple[tuple[int, tuple[Digits, ...]], ...]

    def to_json(self) -> dict:
        return {
            "before": str(self.before),
            "side": self.side,
            "letter": self.letter,
            "rejected": [
                {"letter": d, "ledger_words": [_dstr(w) for w in ws]} for d, ws in self.rejected
            ],
        }


@dataclass
class PropagationTrace:
    start: PointedWord
    steps: list[Step]
    final: PointedWord
    stop_reason: str
    contradiction: str | None = None

    @property
    def left_extent(self) -> int:
        return self.final.pivot

    @property
    def right_extent(self) -> int:
        return len(self.final) - 1 - self.final.pivot

    def ledger_words_used(self) -> set[Digits]:
        return {w for s in self.steps for _, ws in s.rejected for w in ws}

    def to_json(self) -> dict:
        return {
            "start": str(self.start),
            "final": str(self.final),
            "span": [-self.left_extent, self.right_extent],
            "stop_reason": self.stop_reason,
            "contradiction": self.contradiction,
            "steps": [s.to_json() for s in self.steps],
        }


def _new_hit(ledger: Ledger, w: PointedWord, side: str) -> Digits | None:
    """A ledger word touching the newly added end of ``w``."""
    d = w.digits
    for word in sorted(ledger.words, key=lambda x: (len(x), x)):
        m = len(word)
        if m > len(d):
            continue
        if side == "left" and d[:m] == word:
            return word
        if side == "right" and d[-m:] == word:
            return word
    return None


def _dead(ledger: Ledger, w: PointedWord, side: str, room: int, depth: int) -> tuple[Digits, ...] | None:
    """Ledger words ruling out every continuation of ``w`` on ``side``.

    Looks ``depth`` letters further out (never past ``room``); returns None
    if some continuation survives.
    """
    hit = _new_hit(ledger, w, side)
    if hit is not None:
        return (hit,)
    if depth == 0 or room == 0:
        return None
    used: list[Digits] = []
    for d in (1, 2, 3):
        ext = w.extend(left=(d,)) if side == "left" else w.extend(right=(d,))
        sub = _dead(ledger, ext, side, room - 1, depth - 1)
        if sub is None:
            return None
        used.extend(x for x in sub if x not in used)
    return tuple(used)


def _survivors(
    ledger: Ledger, w: PointedWord, side: str, room: int | None, lookahead: int
) -> tuple[list[int], list[tuple[int, tuple[Digits, ...]]]]:
    alive, dead = [], []
    for d in (1, 2, 3):
        ext = w.extend(left=(d,)) if side == "left" else w.extend(right=(d,))
        more = lookahead if room is None else min(lookahead, room - 1)
        words = _dead(ledger, ext, side, more, lookahead)
        if words is None:
            alive.append(d)
        else:
            dead.append((d, words))
    return alive, dead


def propagate(
    window: Union[PointedWord, str],
    ledger: Ledger,
    max_steps: int = 200,
    left_limit: int | None = None,
    right_limit: int | None = None,
    lookahead: int = 2,
    _watch: _PeriodWatch | None = None,
) -> PropagationTrace:
    """Append letters forced by the ledger, one side per step.

    On each step both sides are tested; the side with fewer surviving
    letters goes first (ties go left). A single survivor is appended; two or
    more on every open side stops the run, zero survivors is a
    contradiction. ``left_limit``/``right_limit`` cap how far from the pivot
    each side may grow. A letter is also ruled out when every continuation
    up to ``lookahead`` further letters (within the limit) hits the ledger.
    """
    w = PointedWord.of(window)
    start = w
    steps: list[Step] = []
    hit = ledger.first_occurrence(w.digits)
    if hit is not None:
        return PropagationTrace(start, steps, w, "contradiction", f"window contains {_dstr(hit[1].word)}")
    for _ in range(max_steps):
        options = []
        for side in ("left", "right"):
            extent = w.pivot if side == "left" else len(w) - 1 - w.pivot
            limit = left_limit if side == "left" else right_limit
            if limit is not None and extent >= limit:
                continue
            if _watch is not None and side in _watch.period:
                continue
            room = None if limit is None else limit - extent
            alive, dead = _survivors(ledger, w, side, room, lookahead)
            if not alive:
                return PropagationTrace(
                    start, steps, w, "contradiction", f"no admissible letter on the {side}"
                )
            options.append((len(alive), side, alive, dead))
        forced = [o for o in options if o[0] == 1]
        if not forced:
            return PropagationTrace(start, steps, w, "limits" if not options else "branching")
        _, side, alive, dead = forced[0]
        steps.append(Step(w, side, alive[0], tuple(dead)))
        w = w.extend(left=(alive[0],)) if side == "left" else w.extend(right=(alive[0],))
        if _watch is not None and _watch.record(w, side):
            return PropagationTrace(start, steps, w, "periodic")
    return PropagationTrace(start, steps, w, "max_steps")


class _PeriodWatch:
    def __init__(self, keep: int):
        self.keep = keep
        self.seen: dict[str, dict[Digits, int]] = {"left": {}, "right": {}}
        self.added: dict[str, list[int]] = {"left": [], "right": []}
        self.period: dict[str, Digits] = {}

    def record(self, w: PointedWord, side: str) -> bool:
        """Note the letter just added; True once both sides are periodic."""
        d = w.digits
        added = self.added[side]
        added.append(d[0] if side == "left" else d[-1])
        if len(d) > self.keep:
            state = d[: self.keep] if side == "left" else d[len(d) - self.keep :]
            seen = self.seen[side]
            if state in seen:
                block = tuple(added[seen[state] :])
                # letters were added outward; the left block reads inward
                self.period[side] = block[::-1] if side == "left" else block
            else:
                seen[state] = len(added)
        return len(self.period) == 2


@dataclass
class Replication:
    trace: PropagationTrace
    left_period: Digits | None
    right_period: Digits | None

    @property
    def sequence(self) -> BiSeq | PartialSeq:
        f = self.trace.final
        core, pivot = f.digits, f.pivot
        lp, rp = self.left_period, self.right_period
        while lp and core[: len(lp)] == lp and pivot >= len(lp):
            core, pivot = core[len(lp) :], pivot - len(lp)
        while rp and core[len(core) - len(rp) :] == rp and len(core) - len(rp) > pivot:
            core = core[: len(core) - len(rp)]
        if lp is not None and rp is not None:
            return BiSeq(lp, core, pivot, rp)
        return PartialSeq(lp, core, pivot, rp)

    @property
    def complete(self) -> bool:
        return self.left_period is not None and self.right_period is not None

    def describe(self) -> str:
        if self.complete:
            return str(self.sequence)
        f = self.trace.final
        parts = []
        if self.left_period is not None:
            parts.append(f"left tail forced to per({_dstr(self.left_period)})")
        else:
            parts.append(f"left side free beyond position {-f.pivot}")
        if self.right_period is not None:
            parts.append(f"right tail forced to per({_dstr(self.right_period)})")
        else:
            parts.append(f"right side free beyond position {len(f) - 1 - f.pivot}")
        return f"{self.sequence}: " + "; ".join(parts)


def replicate_to_period(
    window: Union[PointedWord, str], ledger: Ledger, max_steps: int = 2000, lookahead: int = 2
) -> Replication:
    """Propagate until each forced side provably repeats.

    The letter forced at an end depends only on the outermost ``k - 1``
    letters there (``k`` the longest ledger word), so once that end state
    recurs the side repeats forever with the letters added in between. A
    side is frozen once its period is known so the other side can proceed.
    """
    keep = max((len(w) for w in ledger.words), default=1) - 1 + lookahead
    watch = _PeriodWatch(keep)
    trace = propagate(window, ledger, max_steps, lookahead=lookahead, _watch=watch)
    return Replication(trace, watch.period.get("left"), watch.period.get("right"))
