"""Region verification pipelines and the Hausdorff-distance bound.

Preset data (ledger schedules, word sets, endpoint templates, sample
members) lives in ``data/presets.json`` next to the generated ledgers; the
``SPECTRA_GAP_DATA`` environment variable points elsewhere.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Iterable, Sequence

from .certifier import Ledger, LedgerEntry, certify_forbidden, derive_forbidden, recheck_ledger
from .explorer import build_tree, local_uniqueness, propagate, replicate_to_period
from .extremal import WordSet, extremal, minimax_endpoint
from .notation import expand
from .perron import lam0, markov_sup
from .surd import RadicalSum, to_decimal
from .words import BiSeq, Digits, PointedWord

REPORT_VERSION = 1
CITED_PREMISES = (
    "Markov values of periodic sequences are dense in L",
    "limsup bookkeeping that turns the machine-checked word facts into the set statements",
)


class RegionError(RuntimeError):
    """A certificate the pipeline depends on is missing or fails."""


def data_dir() -> Path:
    env = os.environ.get("SPECTRA_GAP_DATA")
    return Path(env) if env else Path(__file__).with_name("data")


@lru_cache(maxsize=None)
def _presets(path: str) -> dict:
    return json.loads(Path(path, "presets.json").read_text(encoding="utf-8"))


def preset(name: str) -> dict:
    table = _presets(str(data_dir()))
    if name not in table:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(table))}")
    return table[name]


def preset_names() -> list[str]:
    return sorted(_presets(str(data_dir())))


def digits(literal: str) -> Digits:
    return tuple(int(c) for c in expand(literal).replace(" ", ""))


def seq(literal: str) -> BiSeq:
    return BiSeq.of(expand(literal))


def threshold(name: str) -> RadicalSum:
    return lam0(seq(preset(name)["threshold"]))


def _fraction(text: str) -> Fraction:
    return Fraction(text)


# -- ledgers -----------------------------------------------------------------
def build_ledger(name: str, groups: Iterable[str] | None = None) -> Ledger:
    """Certify a preset's schedule in order; each item may lean on earlier ones."""
    p = preset(name)
    thr = threshold(name)
    keep = None if groups is None else set(groups)
    entries: list[LedgerEntry] = []
    for item in p["schedule"]:
        if keep is not None and item["group"] not in keep:
            continue
        lit = expand(item["literal"])
        led = Ledger(thr, entries)
        if item.get("derive"):
            target = item.get("target")
            cert = derive_forbidden(lit, led, target=None if target is None else RadicalSum.rational(_fraction(target)))
        else:
            cert = certify_forbidden(lit, thr, led, RadicalSum.rational(_fraction(item["want"])))
        if not cert.ok:
            raise RegionError(f"{name}: cannot certify {item['literal']} ({cert.method}, witness {cert.witness})")
        entries.append(cert.entry(item["literal"]))
    return Ledger(thr, entries)


def load_ledger(name: str) -> Ledger:
    """The shipped ledger file of a preset (or a path to a JSONL ledger)."""
    if name in preset_names():
        p = preset(name)
        thr = threshold(name) if "threshold" in p else None
        return Ledger.load(data_dir() / p["ledger"], thr)
    return Ledger.load(name)


def freiman_words() -> WordSet:
    """The imported characterization's word constraints (not transpose-closed)."""
    p = preset("freiman")
    return WordSet([digits(w) for w in p["words"]], p["alphabet"])


def build_freiman_ledger() -> Ledger:
    p = preset("freiman")
    return Ledger(None, [LedgerEntry(digits(w), None, None, "assumed", w) for w in p["words"]])


def _covering(ledger: Ledger, w: Digits) -> LedgerEntry | None:
    hit = ledger.first_occurrence(w)
    return None if hit is None else hit[1]


def word_ledger(name: str, set_name: str, ledger: Ledger | None = None,
                drop: Sequence[str] = (), extra: Sequence[str] = ()) -> Ledger:
    """A named word set as a ledger; every word must contain a certified entry.

    Words listed in ``extra`` are region constraints rather than forbidden
    words and enter as assumed entries.
    """
    p = preset(name)
    ledger = load_ledger(name) if ledger is None else ledger
    named = {k: digits(v) for k, v in p.get("named", {}).items()}
    dropped = set()
    for d in drop:
        w = named[d]
        dropped |= {w, w[::-1]}
    entries = []
    for lit in p["word_sets"][set_name]:
        w = digits(lit)
        if w in dropped:
            continue
        cover = _covering(ledger, w)
        if cover is None:
            raise RegionError(f"{name}: no certificate covers {lit}")
        entries.append(LedgerEntry(w, None, cover.margin, "derived", lit))
    for lit in extra:
        entries.append(LedgerEntry(digits(lit), None, None, "assumed", lit))
    return Ledger(ledger.threshold, entries)


# -- endpoints ---------------------------------------------------------------
@dataclass
class Endpoint:
    name: str
    value: RadicalSum
    sequence: BiSeq
    expected: BiSeq
    n_star: int | None = None
    monotone: bool | None = None

    @property
    def matches(self) -> bool:
        return self.sequence == self.expected and lam0(self.expected) == self.value

    def to_json(self, j0: RadicalSum, digits: int) -> dict:
        out = {
            "name": self.name,
            "sequence": str(self.sequence),
            "exact": self.value.canonical(),
            "decimal": to_decimal(self.value, digits),
            "minus_j0": to_decimal(self.value - j0, digits),
            "matches_expected": self.matches,
        }
        if self.n_star is not None:
            out["n_star"] = self.n_star
            out["monotone"] = self.monotone
        return out


def endpoint(name: str, which: str, ledger: Ledger | None = None) -> Endpoint:
    p = preset(name)
    cfg = p["endpoints"][which]
    words = word_ledger(name, cfg["words"], ledger, cfg.get("drop", ())).wordset()
    expected = seq(cfg["expect"])
    if cfg["kind"] == "minimax":
        res = minimax_endpoint(expand(cfg["template"]), digits(cfg["filler"]), cfg["pivot_b"], words)
        return Endpoint(which, res.value, res.sequence, expected, res.n_star, res.monotone)
    res = extremal(expand(cfg["fixed"]), words, cfg["direction"])
    return Endpoint(which, res.value, res.sequence, expected)


def region_max(name: str, ledger: Ledger | None = None) -> Endpoint:
    """Largest value of the region's one-sided family by maximizing the free side."""
    cfg = preset(name)["region_max"]
    words = word_ledger(name, cfg["words"], ledger, cfg.get("drop", ()), cfg.get("extra", ())).wordset()
    res = extremal(expand(cfg["fixed"]), words, "max", exempt_fixed=cfg.get("exempt_fixed", False))
    return Endpoint("max", res.value, res.sequence, seq(cfg["expect"]))


# -- membership and witnesses --------------------------------------------------
@dataclass
class Membership:
    literal: str
    kind: str
    value: RadicalSum
    attained_at_pivot: bool
    argmax: Any
    in_range: bool

    @property
    def ok(self) -> bool:
        return self.attained_at_pivot and self.in_range

    def to_json(self, j0: RadicalSum, digits: int) -> dict:
        return {
            "literal": self.literal,
            "kind": self.kind,
            "minus_j0": to_decimal(self.value - j0, digits),
            "sup_attained_at_pivot": self.attained_at_pivot,
            "argmax": self.argmax,
            "in_range": self.in_range,
            "member": self.ok,
        }


def check_member(literal: str, lo: RadicalSum, hi: RadicalSum, kind: str = "") -> Membership:
    """m(S) = lambda_0(S) with lo <= lambda_0(S) < hi."""
    s = seq(literal)
    sup = markov_sup(s)
    v = lam0(s)
    at_pivot = sup.attained and sup.value == v
    return Membership(literal, kind, v, at_pivot, sup.argmax, lo <= v < hi)


def sample_region_members(name: str, lo: RadicalSum, hi: RadicalSum) -> list[Membership]:
    out = []
    for kind, lits in preset(name)["members"].items():
        for lit in lits:
            out.append(check_member(lit, lo, hi, kind))
    return out


@dataclass
class Witness:
    n: int
    sequence: BiSeq
    value: RadicalSum
    attained_at_pivot: bool


def lprime_witnesses(name: str, n_max: int = 6, n_min: int = 2) -> list[Witness]:
    """Periodic sequences whose Markov value sits at the pivot and tends to J from above."""
    cfg = preset(name)["lprime"]
    left, right = digits(cfg["left"]), digits(cfg["right"])
    middle = PointedWord.of(expand(cfg["middle"]))
    out = []
    for n in range(n_min, n_max + 1):
        block = left * n + middle.digits + right * n
        s = BiSeq.periodic(block, len(left) * n + middle.pivot)
        sup = markov_sup(s)
        v = lam0(s)
        out.append(Witness(n, s, v, sup.attained and sup.value == v))
    return out


# -- the pipeline --------------------------------------------------------------
@dataclass
class RegionReport:
    name: str
    j0: RadicalSum
    ledger_size: int
    ledger_rechecked: bool
    tree_complete: bool
    unique_window: str | None
    replication: list[dict]
    endpoints: dict[str, Endpoint]
    region_max: Endpoint
    members: list[Membership]
    witnesses: list[Witness]
    premises: dict[str, bool] = field(default_factory=dict)

    @property
    def gap_width(self) -> RadicalSum:
        return self.endpoints["J"].value - self.j0

    @property
    def ok(self) -> bool:
        return all(self.premises.values())

    def to_json(self, digits: int = 12) -> dict:
        j0 = self.j0
        return {
            "version": REPORT_VERSION,
            "preset": self.name,
            "j0": {"exact": j0.canonical(), "decimal": to_decimal(j0, digits)},
            "ledger": {"entries": self.ledger_size, "rechecked": self.ledger_rechecked},
            "tree": {"complete": self.tree_complete, "unique_window": self.unique_window},
            "replication": self.replication,
            "endpoints": {k: e.to_json(j0, digits) for k, e in self.endpoints.items()},
            "region_max": self.region_max.to_json(j0, digits),
            "gap_width": to_decimal(self.gap_width, digits),
            "members": [m.to_json(j0, digits) for m in self.members],
            "lprime_witnesses": [
                {"n": w.n, "minus_J": to_decimal(w.value - self.endpoints["J"].value, digits),
                 "sup_attained_at_pivot": w.attained_at_pivot}
                for w in self.witnesses
            ],
            "premises": self.premises,
            "status": "premises-verified" if self.ok else "failed",
            "cited_premises": list(CITED_PREMISES),
        }


def verify_region(name: str, ledger: Ledger | None = None, recheck: bool = True,
                  witness_max: int = 6) -> RegionReport:
    """Run every machine-checkable step for a preset region.

    Raises :class:`RegionError` when a certificate the later steps rely on is
    missing; numerical mismatches are recorded as failed premises instead.
    """
    p = preset(name)
    j0 = threshold(name)
    ledger = load_ledger(name) if ledger is None else ledger
    premises: dict[str, bool] = {}

    rechecked = True
    if recheck:
        rechecked = all(item.ok for item in recheck_ledger(ledger))
    premises["ledger rechecks"] = rechecked

    seed_groups = set(p["tree"]["seed_groups"])
    labels = {item["literal"] for item in p["schedule"] if item["group"] in seed_groups}
    seed = Ledger(j0, [e for e in ledger.base if e.label in labels])
    tree = build_tree(expand(p["tree"]["root"]), j0, seed)
    uniq = local_uniqueness(tree)
    window = None if uniq.window is None else str(uniq.window)
    premises["local uniqueness"] = tree.complete and uniq.unique and window == expand(p["tree"]["unique_window"]).replace(" ", "")

    full = word_ledger(name, "F_tot", ledger)
    rep_cfg = p["replication"]
    start = expand(rep_cfg["start"])
    replication = []
    for case in rep_cfg["cases"]:
        led = word_ledger(name, "F_tot", ledger, case["drop"])
        tr = propagate(start, led, left_limit=case["left_limit"], right_limit=case["right_limit"])
        got = str(tr.final)
        want = expand(case["expect"]).replace(" ", "")
        replication.append({"drop": case["drop"], "final": got, "expected": want, "match": got == want,
                            "steps": len(tr.steps)})
        premises[f"propagation without {case['drop'] or 'nothing'}"] = got == want
    rep = replicate_to_period(start, full)
    periodic_ok = rep.complete and rep.sequence == seq(rep_cfg["periodic"])
    replication.append({"drop": [], "replicates_to": str(rep.sequence), "periodic": periodic_ok})
    premises["replication to the periodic word"] = periodic_ok
    red = replicate_to_period(start, word_ledger(name, "F_tot", ledger, rep_cfg["reduced_drop"]))
    replication.append({"drop": rep_cfg["reduced_drop"], "replicates_to": red.describe()})

    ends = {k: endpoint(name, k, ledger) for k in p["endpoints"]}
    for k, e in ends.items():
        premises[f"endpoint {k} matches its sequence"] = e.matches
        premises[f"endpoint {k} is a Markov value"] = markov_sup(e.sequence).value == e.value
    order = [j0] + [ends[k].value for k in ("j", "jprime", "J") if k in ends]
    premises["endpoints increase"] = all(a < b for a, b in zip(order, order[1:]))
    if "J" in ends and ends["J"].n_star is not None:
        premises["minimax values monotone"] = bool(ends["J"].monotone)

    top = region_max(name, ledger)
    premises["region maximum matches"] = top.matches

    lo, hi = ends["j"].value, ends["J"].value
    members = sample_region_members(name, lo, hi)
    premises["sampled members certified"] = all(m.ok for m in members)

    wits = lprime_witnesses(name, witness_max)
    premises["witnesses attain at pivot"] = all(w.attained_at_pivot for w in wits)
    vals = [w.value for w in wits]
    # l_n lies in L and L misses (j0, J), so the witnesses approach J from above
    premises["witnesses decrease to J"] = all(a > b for a, b in zip(vals, vals[1:])) and all(v > hi for v in vals)

    return RegionReport(name, j0, len(ledger.base), rechecked, tree.complete, window, replication,
                        ends, top, members, wits, premises)


# -- Hausdorff distance --------------------------------------------------------
_CLOSED = re.compile(r"^\((?P<num>.+)\)/(?P<den>\d+)$")
_NUM_TERM = re.compile(r"([+-]?)\s*(\d+)(?:\*sqrt\((\d+)\))?")


def parse_closed_form(text: str) -> RadicalSum:
    """Parse ``(a + b*sqrt(n) - ...)/d`` into a RadicalSum."""
    text = text.replace(" ", "")
    m = _CLOSED.match(text)
    if not m:
        raise ValueError(f"not a closed form: {text!r}")
    den = int(m.group("den"))
    total = RadicalSum()
    pos = 0
    num = m.group("num")
    while pos < len(num):
        t = _NUM_TERM.match(num, pos)
        if not t or t.end() == pos:
            raise ValueError(f"bad term at {num[pos:]!r}")
        sign = -1 if t.group(1) == "-" else 1
        coeff = Fraction(sign * int(t.group(2)), den)
        total = total + (RadicalSum.rational(coeff) if t.group(3) is None else RadicalSum.sqrt(int(t.group(3)), coeff))
        pos = t.end()
    return total


@dataclass
class HausdorffBound:
    b_inf: RadicalSum
    B_inf: RadicalSum
    m1: RadicalSum
    midpoint: RadicalSum
    eps0: RadicalSum
    delta0: RadicalSum
    closed_form: RadicalSum
    bracket_low: RadicalSum
    bracket_high: RadicalSum
    m1_sequence: BiSeq
    bracket_low_sequence: BiSeq
    bracket_high_sequence: BiSeq
    slack_low: Fraction
    slack_high: Fraction

    @property
    def matches_closed_form(self) -> bool:
        return self.delta0 == self.closed_form

    @property
    def brackets_ok(self) -> bool:
        return (self.bracket_low <= self.midpoint - self.slack_low
                and self.bracket_high >= self.midpoint + self.slack_high)

    def to_json(self, digits: int = 12) -> dict:
        den, nums = self.delta0.common_denominator_form()
        return {
            "b_inf": to_decimal(self.b_inf, digits),
            "B_inf_minus_b_inf": to_decimal(self.B_inf - self.b_inf, digits),
            "m1_minus_midpoint": to_decimal(self.eps0, digits),
            "delta0": {
                "exact": self.delta0.canonical(),
                "common_denominator": {"denominator": den, "numerators": {str(k): n for k, n in nums.items()}},
                "decimal": to_decimal(self.delta0, digits),
                "matches_closed_form": self.matches_closed_form,
            },
            "brackets": {
                "low_minus_midpoint": to_decimal(self.bracket_low - self.midpoint, digits),
                "high_minus_midpoint": to_decimal(self.bracket_high - self.midpoint, digits),
                "ok": self.brackets_ok,
            },
            "m1_sequence": str(self.m1_sequence),
        }


def hausdorff_bound() -> HausdorffBound:
    """delta_0 = B_inf - m_1 with the bracketing inequalities and greedy m_1."""
    p = preset("freiman")
    alphabet = tuple(p["alphabet"])
    b = lam0(seq(p["lower"]))
    B = lam0(seq(p["upper"]))
    mid = (b + B) / 2
    words = freiman_words()
    # the fixed part itself contains 12w22; only words reaching left count
    m1_res = extremal(expand(p["m1_fixed"]), words, "min", exempt_fixed=True)
    m1 = lam0(seq(p["m1"]))
    if m1_res.value != m1:
        raise RegionError("greedy minimization does not reproduce m_1")
    free = WordSet((), alphabet)
    low = extremal(expand(p["bracket_low"]["fixed"]), free, "max")
    high = extremal(expand(p["bracket_high"]["fixed"]), free, "min")
    if low.value != lam0(seq(p["bracket_low"]["sequence"])) or high.value != lam0(seq(p["bracket_high"]["sequence"])):
        raise RegionError("bracket sequences are not the extremal completions")
    return HausdorffBound(
        b, B, m1, mid, m1 - mid, B - m1, parse_closed_form(p["delta0"]),
        low.value, high.value, m1_res.sequence, low.sequence, high.sequence,
        _fraction(p["bracket_low"]["slack"]), _fraction(p["bracket_high"]["slack"]),
    )
