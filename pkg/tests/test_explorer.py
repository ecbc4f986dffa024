from __future__ import annotations

import pytest

from spectra_gap import regions
from spectra_gap.certifier import Ledger
from spectra_gap.explorer import (
    RED,
    SPINE,
    build_tree,
    local_uniqueness,
    propagate,
    replicate_to_period,
)
from spectra_gap.notation import expand
from spectra_gap.words import BiSeq, PointedWord


def seed_ledger(name: str) -> Ledger:
    p = regions.preset(name)
    labels = {i["literal"] for i in p["schedule"] if i["group"] == "short"}
    full = regions.load_ledger(name)
    return Ledger(full.threshold, [e for e in full.base if e.label in labels])


@pytest.fixture(scope="module")
def omega1_tree():
    return build_tree(expand("W1*"), regions.threshold("omega1"), seed_ledger("omega1"))


def test_tree_reaches_a_single_spine(omega1_tree):
    assert omega1_tree.complete
    spine = omega1_tree.spine
    assert spine is not None and spine.status == SPINE
    assert str(spine.window) == expand("2111 W1* 2123").replace(" ", "")
    u = local_uniqueness(omega1_tree)
    assert u.unique and "extends to" in u.statement()


def test_red_nodes_clear_the_threshold(omega1_tree):
    thr = omega1_tree.threshold
    for node in omega1_tree.root.walk():
        if node.status == RED and node.bound is not None:
            assert node.bound.lo > thr
    for entry in omega1_tree.found:
        assert entry.margin.sign() > 0


def test_tree_exports(omega1_tree):
    dot = omega1_tree.to_dot()
    assert dot.startswith("digraph") and "color=red" in dot
    data = omega1_tree.to_json(8)
    assert data["complete"] and data["spine"] == str(omega1_tree.spine.window)


def test_shallow_tree_is_flagged_incomplete():
    tree = build_tree(expand("W1*"), regions.threshold("omega1"), seed_ledger("omega1"), max_depth=1)
    assert not tree.complete
    assert not local_uniqueness(tree).unique


def test_tree_rejects_large_digits():
    with pytest.raises(ValueError):
        build_tree("4*", regions.threshold("omega1"), Ledger(None))


def test_propagation_cites_only_ledger_words():
    led = regions.word_ledger("omega1", "F_tot")
    tr = propagate(expand("2111 W1* 2123"), led, left_limit=17, right_limit=17)
    assert str(tr.final) == expand("2111 W1 W1* W1 2123").replace(" ", "")
    assert tr.ledger_words_used() <= led.words
    assert tr.to_json()["span"] == [-tr.left_extent, tr.right_extent]


def test_propagation_contradiction():
    led = Ledger(None, [regions.LedgerEntry((1, 1), None, None, "assumed"),
                        regions.LedgerEntry((1, 2), None, None, "assumed"),
                        regions.LedgerEntry((1, 3), None, None, "assumed")])
    tr = propagate("1*", led)
    assert tr.stop_reason == "contradiction"


def test_replication_reaches_periodic_word():
    rep = replicate_to_period(expand("2111 W1* 2123"), regions.word_ledger("omega1", "F_tot"))
    assert rep.complete
    assert rep.sequence == BiSeq.periodic(PointedWord.of(expand("W1*")).digits, 4)
