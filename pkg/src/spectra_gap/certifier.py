"""Forbidden-word certificates and ledgers.

A word ``w`` pointed at index 0 is forbidden above a threshold ``t`` with
margin ``mu`` when every bi-infinite completion ``S`` has ``m(S) > t + mu``.
Three ways to establish it live here:

* padded: the exact infimum of lambda_0 over all {1,2,3} completions (the
  smaller of the alternating 1/3 paddings) exceeds ``t + mu``;
* constrained: completions containing a ledger word already have ``m > t +
  mu``, and the infimum over the remaining completions exceeds ``t + mu``;
* derived: every one-letter extension on some side closes, recursively,
  by a ledger word or a padded certificate at some position.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

from .extremal import Contradiction, WordSet, extremal
from .perron import bound_pair
from .surd import RadicalSum, parse_radsum, to_decimal
from .words import Digits, FiniteWord, PointedWord, find_all

PROVENANCES = ("certified", "derived", "assumed")


def _dstr(d: Sequence[int]) -> str:
    return "".join(map(str, d))


@dataclass(frozen=True)
class LedgerEntry:
    word: Digits
    pivot: int | None
    margin: RadicalSum | None
    provenance: str = "certified"
    label: str = ""

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "word", tuple(self.word))

    @property
    def pointed(self) -> PointedWord | None:
        if self.pivot is None:
            return None
        return PointedWord(FiniteWord(self.word), self.pivot)

    def transpose(self) -> "LedgerEntry":
        pivot = None if self.pivot is None else len(self.word) - 1 - self.pivot
        return replace(self, word=self.word[::-1], pivot=pivot, label=self.label + "^T" if self.label else "")

    def literal(self) -> str:
        if self.pivot is None:
            return _dstr(self.word)
        return str(self.pointed)

    def to_json(self, digits: int = 12) -> dict:
        return {
            "word": _dstr(self.word),
            "pivot": self.pivot,
            "margin_exact": None if self.margin is None else self.margin.canonical(),
            "margin_decimal": None if self.margin is None else to_decimal(self.margin, digits),
            "provenance": self.provenance,
            "label": self.label,
        }

    @classmethod
    def from_json(cls, row: dict) -> "LedgerEntry":
        margin = row.get("margin_exact")
        return cls(
            tuple(int(c) for c in row["word"]),
            row.get("pivot"),
            None if margin is None else parse_radsum(margin),
            row.get("provenance", "certified"),
            row.get("label", ""),
        )


class Ledger:
    """A threshold and a transpose-closed set of forbidden words."""

    def __init__(self, threshold: RadicalSum | None, entries: Iterable[LedgerEntry] = ()):
        self.threshold = threshold
        base: dict[Digits, LedgerEntry] = {}
        for e in entries:
            if e.word not in base:
                base[e.word] = e
        self.base = tuple(base.values())
        closed = dict(base)
        for e in self.base:
            closed.setdefault(e.word[::-1], e.transpose())
        self._by_word = closed
        self._wordset: WordSet | None = None

    def __len__(self) -> int:
        return len(self._by_word)

    def __iter__(self) -> Iterator[LedgerEntry]:
        return iter(self._by_word.values())

    def __contains__(self, w: Sequence[int]) -> bool:
        return tuple(w) in self._by_word

    def entry(self, w: Sequence[int]) -> LedgerEntry:
        return self._by_word[tuple(w)]

    @property
    def words(self) -> frozenset[Digits]:
        return frozenset(self._by_word)

    def wordset(self) -> WordSet:
        if self._wordset is None:
            self._wordset = WordSet(self._by_word)
        return self._wordset

    def occurrences(self, seq: Sequence[int]) -> list[tuple[int, LedgerEntry]]:
        seq = tuple(seq)
        hits = []
        for w, e in self._by_word.items():
            for i in find_all(seq, w):
                hits.append((i, e))
        return sorted(hits, key=lambda h: (h[0], len(h[1].word), h[1].word))

    def first_occurrence(self, seq: Sequence[int]) -> tuple[int, LedgerEntry] | None:
        hits = self.occurrences(seq)
        return hits[0] if hits else None

    def without(self, *words: Sequence[int]) -> "Ledger":
        drop = set()
        for w in words:
            drop.add(tuple(w))
            drop.add(tuple(w)[::-1])
        return Ledger(self.threshold, [e for e in self.base if e.word not in drop])

    def with_entries(self, entries: Iterable[LedgerEntry]) -> "Ledger":
        return Ledger(self.threshold, list(self.base) + list(entries))

    def restricted(self, min_margin: RadicalSum | None) -> "Ledger":
        """Entries whose margin is at least ``min_margin`` (assumed entries always kept)."""
        if min_margin is None:
            return self
        keep = [e for e in self.base if e.margin is None or e.margin >= min_margin]
        return Ledger(self.threshold, keep)

    def min_margin(self) -> RadicalSum | None:
        ms = [e.margin for e in self.base if e.margin is not None]
        if not ms:
            return None
        best = ms[0]
        for m in ms[1:]:
            if m < best:
                best = m
        return best

    # -- files ------------------------------------------------------------
    def dumps(self, digits: int = 12) -> str:
        lines = [json.dumps(e.to_json(digits), sort_keys=True) for e in self.base]
        return "\n".join(lines) + ("\n" if lines else "")

    def dump(self, path: Union[str, Path], digits: int = 12) -> None:
        Path(path).write_text(self.dumps(digits), encoding="utf-8")

    @classmethod
    def loads(cls, text: str, threshold: RadicalSum | None = None) -> "Ledger":
        entries = []
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                entries.append(LedgerEntry.from_json(json.loads(line)))
        return cls(threshold, entries)

    @classmethod
    def load(cls, path: Union[str, Path], threshold: RadicalSum | None = None) -> "Ledger":
        return cls.loads(Path(path).read_text(encoding="utf-8"), threshold)


@dataclass(frozen=True)
class ForbiddenCert:
    word: Digits
    pivot: int
    ok: bool
    lower_bound: RadicalSum | None
    margin: RadicalSum | None
    method: str
    case_values: tuple[tuple[str, RadicalSum], ...] = ()
    context: tuple[Digits, ...] = ()
    witness: str = ""
    tree: dict | None = None

    @property
    def pointed(self) -> PointedWord:
        return PointedWord(FiniteWord(self.word), self.pivot)

    def entry(self, label: str = "") -> LedgerEntry:
        prov = "derived" if self.method == "derived" else "certified"
        return LedgerEntry(self.word, self.pivot, self.margin, prov, label)

    def to_json(self, digits: int = 12) -> dict:
        out = {
            "word": str(self.pointed),
            "ok": self.ok,
            "method": self.method,
            "lower_bound": None if self.lower_bound is None else self.lower_bound.canonical(),
            "margin_exact": None if self.margin is None else self.margin.canonical(),
            "margin_decimal": None if self.margin is None else to_decimal(self.margin, digits),
            "case_values": [[name, v.canonical()] for name, v in self.case_values],
        }
        if self.context:
            out["context"] = sorted(_dstr(w) for w in self.context)
        if self.witness:
            out["witness"] = self.witness
        if self.tree is not None:
            out["tree"] = self.tree
        return out


def _min(values: Iterable[RadicalSum]) -> RadicalSum:
    it = iter(values)
    best = next(it)
    for v in it:
        if v < best:
            best = v
    return best


def certify_forbidden(
    w: Union[PointedWord, str],
    threshold: RadicalSum,
    context: Ledger | None = None,
    want: RadicalSum | None = None,
) -> ForbiddenCert:
    """Certify that ``w`` forces lambda_0 (or m, with context) above ``threshold``.

    The padded bound is tried first. When it is not positive, or falls short
    of ``want``, and a context ledger is given, the completions are
    restricted to those avoiding context words whose margin is at least the
    target; the resulting margin is capped by the smallest such margin.
    """
    w = PointedWord.of(w)
    bp = bound_pair(w)
    padded = bp.lo - threshold
    target_met = padded.sign() > 0 and (want is None or padded >= want)
    if target_met or context is None:
        if padded.sign() > 0:
            return ForbiddenCert(w.digits, w.pivot, True, bp.lo, padded, "padded", bp.case_values)
        return ForbiddenCert(
            w.digits, w.pivot, False, bp.lo, padded, "padded", bp.case_values, witness=str(bp.lo_seq)
        )
    ctx = context.restricted(want).without(w.digits)
    own = ctx.first_occurrence(w.digits)
    if own is not None:
        e = own[1]
        return ForbiddenCert(
            w.digits, w.pivot, True, None, e.margin, "contains", (), (e.word,)
        )
    try:
        lo = extremal(w, ctx.wordset(), "min")
    except Contradiction:
        cap = ctx.min_margin()
        ok = cap is not None and cap.sign() > 0
        return ForbiddenCert(w.digits, w.pivot, ok, None, cap, "no-completion", (), tuple(sorted(ctx.words)))
    margin = lo.value - threshold
    cap = ctx.min_margin()
    if cap is not None and cap < margin:
        margin = cap
    ok = margin.sign() > 0
    return ForbiddenCert(
        w.digits,
        w.pivot,
        ok,
        lo.value,
        margin,
        "constrained",
        (("constrained", lo.value),),
        tuple(sorted(ctx.words)),
        "" if ok else str(lo.sequence),
    )


@dataclass
class _Search:
    threshold: RadicalSum
    ledger: Ledger
    target: RadicalSum | None
    all_positions: bool
    max_nodes: int
    nodes: int = 0
    memo: dict = field(default_factory=dict)
    witness: str = ""

    def accept(self, margin: RadicalSum) -> bool:
        if margin.sign() <= 0:
            return False
        return self.target is None or margin >= self.target

    def leaf(self, w: PointedWord) -> tuple[RadicalSum, dict] | None:
        hit = self.ledger.first_occurrence(w.digits)
        if hit is not None:
            i, e = hit
            if e.margin is not None and self.accept(e.margin):
                return e.margin, {"word": str(w), "closed_by": "ledger", "ledger_word": _dstr(e.word), "at": i}
        positions = range(len(w)) if self.all_positions else [w.pivot]
        best = None
        for k in positions:
            m = bound_pair(w.repoint(k)).lo - self.threshold
            if self.accept(m) and (best is None or m > best[0]):
                best = (m, k)
        if best is not None:
            m, k = best
            return m, {"word": str(w), "closed_by": "bound", "position": k - w.pivot}
        return None

    def close(self, w: PointedWord, budget: int) -> tuple[RadicalSum, dict] | None:
        key = (w, budget)
        if key in self.memo:
            return self.memo[key]
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise _Budget()
        res = self.leaf(w)
        if res is None and budget > 0:
            for side in ("left", "right"):
                kids = []
                for d in (1, 2, 3):
                    child = w.extend(left=(d,)) if side == "left" else w.extend(right=(d,))
                    r = self.close(child, budget - 1)
                    if r is None:
                        if len(str(child)) > len(self.witness):
                            self.witness = str(child)
                        break
                    kids.append(r)
                else:
                    margin = _min(m for m, _ in kids)
                    res = (margin, {"word": str(w), "closed_by": "extension", "side": side,
                                    "children": [t for _, t in kids]})
                    break
        self.memo[key] = res
        return res


class _Budget(Exception):
    pass


def derive_forbidden(
    seed: Union[PointedWord, FiniteWord, str],
    ledger: Ledger,
    threshold: RadicalSum | None = None,
    max_extension: int = 12,
    target: RadicalSum | None = None,
    all_positions: bool = True,
    max_nodes: int = 20_000,
) -> ForbiddenCert:
    """Show every completion of ``seed`` has m above the threshold.

    A node closes when it contains a ledger word, when the padded bound at
    some position (or only the pivot) clears the threshold, or when on one
    side all three one-letter extensions close. Only ledger entries and
    bounds with margin at least ``target`` count. The derived margin is the
    minimum over the closing leaves.
    """
    if isinstance(seed, str):
        seed = PointedWord.of(seed) if "*" in seed else FiniteWord.of(seed)
    if isinstance(seed, FiniteWord):
        seed = PointedWord(seed, 0)
    thr = ledger.threshold if threshold is None else threshold
    if thr is None:
        raise ValueError("derive_forbidden needs a threshold")
    led = ledger.without(seed.digits)
    if target is not None:
        led = led.restricted(target)
    search = _Search(thr, led, target, all_positions, max_nodes)
    try:
        # iterative deepening keeps the closing tree as shallow as possible
        res = None
        for budget in range(max_extension + 1):
            search.memo.clear()
            res = search.close(seed, budget)
            if res is not None:
                break
    except _Budget:
        res = None
    if res is None:
        return ForbiddenCert(
            seed.digits, seed.pivot, False, None, None, "derived", witness=search.witness or str(seed)
        )
    margin, tree = res
    used = sorted({tuple(int(c) for c in n["ledger_word"]) for n in _walk(tree) if n.get("closed_by") == "ledger"})
    return ForbiddenCert(
        seed.digits, seed.pivot, True, None, margin, "derived", (), tuple(used), tree=tree
    )


def _walk(tree: dict) -> Iterator[dict]:
    yield tree
    for c in tree.get("children", ()):
        yield from _walk(c)


@dataclass(frozen=True)
class RecheckItem:
    entry: LedgerEntry
    ok: bool
    recomputed: RadicalSum | None
    note: str = ""


def recheck_entry(entry: LedgerEntry, ledger: Ledger, context: Ledger | None = None) -> RecheckItem:
    """Re-derive one entry from scratch and compare margins exactly.

    ``context`` is the ledger a constrained or derived entry may lean on;
    it defaults to the whole ledger minus the entry.
    """
    thr = ledger.threshold
    if entry.provenance == "assumed":
        return RecheckItem(entry, True, None, "assumed")
    if thr is None:
        return RecheckItem(entry, False, None, "ledger has no threshold")
    pw = entry.pointed or PointedWord(FiniteWord(entry.word), 0)
    if entry.provenance == "certified":
        cert = certify_forbidden(pw, thr)
        if cert.ok and cert.margin == entry.margin:
            return RecheckItem(entry, True, cert.margin)
        ctx = (context or ledger).without(entry.word)
        cert = certify_forbidden(pw, thr, ctx, entry.margin)
        ok = cert.ok and cert.margin is not None and cert.margin >= entry.margin
        return RecheckItem(entry, ok, cert.margin, "" if ok else "margin mismatch")
    cert = derive_forbidden(pw, context or ledger, thr, target=entry.margin)
    ok = cert.ok and cert.margin is not None and cert.margin >= entry.margin
    return RecheckItem(entry, ok, cert.margin, "" if ok else "derivation failed")


def recheck_ledger(ledger: Ledger) -> list[RecheckItem]:
    """Recheck every entry; each may only lean on the entries listed before it."""
    out = []
    for i, e in enumerate(ledger.base):
        prefix = Ledger(ledger.threshold, ledger.base[:i])
        out.append(recheck_entry(e, ledger, prefix))
    return out
