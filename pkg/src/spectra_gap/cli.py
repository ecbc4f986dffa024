"""Command-line entry point: ``spectra-gap <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
Literals may use the named blocks W1, W2, WF (and their transposes W1T, ...).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__, regions
from .certifier import Ledger, certify_forbidden, recheck_ledger
from .explorer import build_tree, local_uniqueness, propagate, replicate_to_period
from .extremal import Contradiction, WordSet, extremal
from .notation import expand
from .perron import bound_pair, lam, markov_sup
from .surd import RadicalSum, parse_radsum, to_decimal
from .words import BiSeq, LiteralError

ENDPOINTS = {
    "omega1-j": ("omega1", "j"),
    "omega1-J": ("omega1", "J"),
    "omega2-j": ("omega2", "j"),
    "omega2-jprime": ("omega2", "jprime"),
    "omega2-J": ("omega2", "J"),
}


class UsageError(Exception):
    pass


def _emit(args: argparse.Namespace, payload: dict, text: str) -> None:
    if args.stamp:
        payload = dict(payload, generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"))
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text)


def _threshold(value: str | None) -> RadicalSum:
    if value is None:
        raise UsageError("a threshold is needed (--threshold or --preset)")
    if value in regions.preset_names():
        return regions.threshold(value)
    return regions.lam0(regions.seq(value))


def _ledger(value: str | None, thr: RadicalSum | None) -> Ledger:
    if value is None:
        return Ledger(thr)
    if value in regions.preset_names():
        led = regions.load_ledger(value)
    else:
        path = Path(value)
        if not path.exists():
            raise UsageError(f"no ledger file {value}")
        led = Ledger.load(path)
    return Ledger(thr if thr is not None else led.threshold, led.base)


def _number(text: str) -> RadicalSum:
    try:
        return RadicalSum.rational(Fraction(text))
    except ValueError:
        return parse_radsum(text)


def _value_json(x: RadicalSum, digits: int) -> dict:
    return {"exact": x.canonical(), "decimal": to_decimal(x, digits)}


# -- commands ------------------------------------------------------------------
def cmd_eval(args: argparse.Namespace) -> int:
    s = BiSeq.of(expand(args.literal))
    v = lam(s, args.at).value
    text = to_decimal(v, args.digits)
    if args.exact:
        text += "\n" + v.canonical()
    _emit(args, {"sequence": str(s), "at": args.at, **_value_json(v, args.digits)}, text)
    return 0


def cmd_sup(args: argparse.Namespace) -> int:
    s = BiSeq.of(expand(args.literal))
    r = markov_sup(s)
    payload = {
        "sequence": str(s),
        **_value_json(r.value, args.digits),
        "attained": r.attained,
        "argmax": r.argmax,
        "window": list(r.window),
        "tail_limits": [to_decimal(t, args.digits) for t in r.tail_limits],
    }
    where = f"at k = {r.argmax}" if r.attained else f"approached in the {r.argmax}"
    _emit(args, payload, f"{to_decimal(r.value, args.digits)} ({where})")
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    bp = bound_pair(expand(args.literal))
    payload = {
        "lo": _value_json(bp.lo, args.digits),
        "hi": _value_json(bp.hi, args.digits),
        "lo_sequence": str(bp.lo_seq),
        "hi_sequence": str(bp.hi_seq),
        "cases": {name: to_decimal(v, args.digits) for name, v in bp.case_values},
    }
    _emit(args, payload, f"[{to_decimal(bp.lo, args.digits)}, {to_decimal(bp.hi, args.digits)}]")
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    thr = _threshold(args.threshold or args.preset)
    ctx = _ledger(args.ledger, thr) if args.ledger else None
    want = None if args.want is None else _number(args.want)
    cert = certify_forbidden(expand(args.literal), thr, ctx, want)
    ok = cert.ok and (want is None or (cert.margin is not None and cert.margin >= want))
    margin = "none" if cert.margin is None else to_decimal(cert.margin, args.digits)
    text = f"{'certified' if ok else 'FAILED'} {cert.pointed} margin {margin} ({cert.method})"
    _emit(args, dict(cert.to_json(args.digits), meets_target=ok), text)
    return 0 if ok else 1


def cmd_ledger(args: argparse.Namespace) -> int:
    if args.action == "build":
        if not args.preset:
            raise UsageError("ledger build needs --preset")
        led = regions.build_ledger(args.preset)
        out = led.dumps(args.digits)
        if args.out:
            Path(args.out).write_text(out, encoding="utf-8")
        else:
            sys.stdout.write(out)
        return 0
    if not args.file:
        raise UsageError("ledger check needs a file")
    thr = _threshold(args.threshold or args.preset) if (args.threshold or args.preset) else None
    led = _ledger(args.file, thr)
    if led.threshold is None:
        raise UsageError("ledger check needs --threshold or --preset")
    items = recheck_ledger(led)
    bad = [i for i in items if not i.ok]
    payload = {
        "entries": len(items),
        "failures": [{"word": i.entry.literal(), "note": i.note} for i in bad],
        "ok": not bad,
    }
    lines = [f"{'ok  ' if i.ok else 'FAIL'} {i.entry.literal()} {i.note}".rstrip() for i in items]
    lines.append(f"{len(items) - len(bad)}/{len(items)} entries recheck")
    _emit(args, payload, "\n".join(lines))
    return 0 if not bad else 1


def cmd_tree(args: argparse.Namespace) -> int:
    thr = _threshold(args.threshold or args.preset)
    if args.ledger:
        seed = _ledger(args.ledger, thr)
    elif args.preset:
        p = regions.preset(args.preset)
        groups = set(p["tree"]["seed_groups"])
        labels = {i["literal"] for i in p["schedule"] if i["group"] in groups}
        full = regions.load_ledger(args.preset)
        seed = Ledger(thr, [e for e in full.base if e.label in labels])
    else:
        seed = Ledger(thr)
    tree = build_tree(expand(args.literal), thr, seed, args.max_depth)
    uniq = local_uniqueness(tree)
    if args.dot:
        Path(args.dot).write_text(tree.to_dot(), encoding="utf-8")
    payload = dict(tree.to_json(args.digits), uniqueness=uniq.statement())
    status = "complete" if tree.complete else "INCOMPLETE"
    _emit(args, payload, f"tree {status}, {len(tree.found)} red words; {uniq.statement()}")
    return 0 if tree.complete else 1


def _word_ledger(args: argparse.Namespace) -> Ledger:
    if args.ledger in regions.preset_names():
        return regions.word_ledger(args.ledger, args.word_set, drop=args.drop)
    if args.drop:
        raise UsageError("--drop needs a preset ledger")
    return _ledger(args.ledger, None)


def cmd_propagate(args: argparse.Namespace) -> int:
    if not args.ledger:
        raise UsageError("propagate needs --ledger")
    led = _word_ledger(args)
    start = expand(args.literal)
    if args.replicate:
        rep = replicate_to_period(start, led, lookahead=args.lookahead)
        payload = {"trace": rep.trace.to_json(), "result": rep.describe(), "complete": rep.complete}
        _emit(args, payload, rep.describe())
        return 0
    tr = propagate(start, led, left_limit=args.left_limit, right_limit=args.right_limit, lookahead=args.lookahead)
    _emit(args, tr.to_json(), f"{tr.final} (stop: {tr.stop_reason})")
    return 1 if tr.stop_reason == "contradiction" else 0


def cmd_extremal(args: argparse.Namespace) -> int:
    if args.ledger == "freiman":
        # imported constraints: one-sided, not closed under transposition
        words = regions.freiman_words()
    elif args.ledger:
        words = _word_ledger(args).wordset()
    else:
        words = WordSet(())
    try:
        res = extremal(expand(args.fix), words, args.direction, args.at, exempt_fixed=args.exempt_fixed)
    except Contradiction as exc:
        _emit(args, {"contradiction": str(exc)}, f"no completion: {exc}")
        return 1
    payload = {"sequence": str(res.sequence), **_value_json(res.value, args.digits), "trace": res.trace()}
    _emit(args, payload, f"{res.sequence}\n{to_decimal(res.value, args.digits)}")
    return 0


def cmd_endpoint(args: argparse.Namespace) -> int:
    name, which = ENDPOINTS[args.preset]
    e = regions.endpoint(name, which)
    j0 = regions.threshold(name)
    payload = e.to_json(j0, args.digits)
    text = f"{e.sequence}\n{to_decimal(e.value, args.digits)} (j0 + {to_decimal(e.value - j0, args.digits)})"
    if e.n_star is not None:
        text += f"\ncrossing at n = {e.n_star}"
    _emit(args, payload, text)
    return 0 if e.matches else 1


def cmd_verify_region(args: argparse.Namespace) -> int:
    rep = regions.verify_region(args.preset, recheck=not args.no_recheck)
    payload = rep.to_json(args.digits)
    if args.stamp:
        payload["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    lines = [f"{'ok  ' if v else 'FAIL'} {k}" for k, v in rep.premises.items()]
    lines.append(f"gap width J - j0 = {to_decimal(rep.gap_width, args.digits)}")
    lines.append(f"status: {payload['status']}")
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))
    return 0 if rep.ok else 1


def cmd_hausdorff(args: argparse.Namespace) -> int:
    h = regions.hausdorff_bound()
    payload = h.to_json(args.digits)
    text = to_decimal(h.delta0, args.digits)
    if args.exact:
        den, nums = h.delta0.common_denominator_form()
        terms = " ".join(
            (f"{n:+d}" if k == 1 else f"{n:+d}*sqrt({k})") for k, n in sorted(nums.items())
        )
        text += f"\n{h.delta0.canonical()}\n({terms.lstrip('+')})/{den}"
    _emit(args, payload, text)
    return 0 if h.matches_closed_form and h.brackets_ok else 1


# -- parser --------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=12, help="significant digits in decimals")
    common.add_argument("--json", action="store_true", help="print JSON")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker cap (computations are sequential; accepted for scripting)")
    common.add_argument("--stamp", action="store_true", help="add a UTC timestamp to JSON output")

    ap = argparse.ArgumentParser(prog="spectra-gap", description="Exact certified computations on the Markov and Lagrange spectra.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="exact lambda_k of a sequence")
    p.add_argument("literal")
    p.add_argument("--at", type=int, default=0)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sup", parents=[common], help="certified Markov value sup_k lambda_k")
    p.add_argument("literal")
    p.set_defaults(func=cmd_sup)

    p = sub.add_parser("bound", parents=[common], help="min and max of lambda_0 over all extensions")
    p.add_argument("literal")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("certify", parents=[common], help="certify a forbidden pointed word")
    p.add_argument("literal")
    p.add_argument("--threshold", help="preset name or sequence literal")
    p.add_argument("--preset")
    p.add_argument("--ledger", help="context ledger (file or preset)")
    p.add_argument("--want", help="required margin, e.g. 1e-5")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("ledger", parents=[common], help="recheck or rebuild a ledger")
    p.add_argument("action", choices=["check", "build"])
    p.add_argument("file", nargs="?")
    p.add_argument("--threshold")
    p.add_argument("--preset")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("tree", parents=[common], help="possibility tree around a pointed word")
    p.add_argument("literal")
    p.add_argument("--threshold")
    p.add_argument("--preset")
    p.add_argument("--ledger")
    p.add_argument("--dot", help="write Graphviz DOT here")
    p.add_argument("--max-depth", type=int, default=8)
    p.set_defaults(func=cmd_tree)

    for name, func, help_ in (("propagate", cmd_propagate, "forced extension of a window"),
                              ("extremal", cmd_extremal, "extremal completion of free sides")):
        p = sub.add_parser(name, parents=[common], help=help_)
        if name == "propagate":
            p.add_argument("literal")
            p.add_argument("--left-limit", type=int)
            p.add_argument("--right-limit", type=int)
            p.add_argument("--lookahead", type=int, default=2)
            p.add_argument("--replicate", action="store_true", help="run until both sides are periodic")
        else:
            p.add_argument("--fix", required=True, help="partial sequence; a side without a per(...) tail is free")
            p.add_argument("--direction", choices=["min", "max"], default="min")
            p.add_argument("--at", type=int, default=0)
            p.add_argument("--exempt-fixed", action="store_true",
                           help="ignore forbidden words lying inside the fixed part")
        p.add_argument("--ledger", help="ledger file or preset")
        p.add_argument("--word-set", default="F_tot", help="preset word set")
        p.add_argument("--drop", action="append", default=[], help="named preset word to leave out")
        p.set_defaults(func=func)

    p = sub.add_parser("endpoint", parents=[common], help="region endpoints")
    p.add_argument("--preset", required=True, choices=sorted(ENDPOINTS))
    p.set_defaults(func=cmd_endpoint)

    p = sub.add_parser("verify-region", parents=[common], help="run a region's full pipeline")
    p.add_argument("--preset", required=True, choices=["omega1", "omega2"])
    p.add_argument("--out")
    p.add_argument("--no-recheck", action="store_true", help="skip re-deriving the ledger")
    p.set_defaults(func=cmd_verify_region)

    p = sub.add_parser("hausdorff", parents=[common], help="exact lower bound on d_H(M, L)")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_hausdorff)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, LiteralError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except regions.RegionError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
