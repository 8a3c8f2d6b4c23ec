"""Top-level category selection: scores, greedy cover, audits, submatrix."""

import random

import numpy as np
import pytest

from facetnav import (
    Selection,
    TlcConfig,
    build_index,
    dominant_submatrix,
    evaluate,
    relevance_scores,
    select_tlc,
    verify_audit,
)
from facetnav.datasets import broad_detail_corpus

from conftest import random_assignments


def test_relevance_scores_reference(fig_index):
    scores = relevance_scores(fig_index)
    named = {fig_index.category_name(c): int(s) for c, s in enumerate(scores)}
    assert named == {"a": 4, "b": 4, "c": 6, "d": 2, "e": 2}


def test_relevance_identity_on_random_indexes():
    # summed per-category scores equal the summed per-item C*(C-1)
    rng = random.Random(808)
    for _ in range(30):
        idx = build_index(
            random_assignments(rng, rng.randint(2, 40), rng.randint(2, 12))
        )
        per_item = np.diff(idx.item_indptr)
        assert relevance_scores(idx).sum() == (per_item * (per_item - 1)).sum()


def test_small_vocabulary_keeps_everything(fig_index):
    tlc, dc, audit = select_tlc(fig_index, config=TlcConfig(seed_size=100))
    assert list(tlc) == list(range(fig_index.n))
    assert dc == ()
    assert audit.complete
    assert verify_audit(fig_index, tlc, dc, audit)


def test_broad_detail_selection():
    rows = broad_detail_corpus(broad_count=20, details_per_broad=50)
    idx = build_index(rows)
    config = TlcConfig(seed_size=20, residual_threshold=50)
    tlc, dc, audit = select_tlc(idx, config=config)
    assert len(tlc) == 20
    names = {idx.category_name(c) for c in tlc}
    assert names == {f"broad{k:02d}" for k in range(20)}
    assert audit.complete
    assert len(dc) == 20 * 50
    assert verify_audit(idx, tlc, dc, audit)


def test_witnesses_replay_through_the_engine():
    rows = broad_detail_corpus(broad_count=6, details_per_broad=10)
    idx = build_index(rows)
    config = TlcConfig(seed_size=6, residual_threshold=10)
    tlc, dc, audit = select_tlc(idx, config=config)
    tlc_set = set(tlc)
    for d, combo in audit.witnesses.items():
        assert 1 <= len(combo) <= 2
        assert set(combo) <= tlc_set
        res = evaluate(idx, Selection.of(*combo))
        assert d in res.available
        listed = [c for c in res.available if c in set(dc)]
        assert len(listed) <= config.residual_threshold


def test_incomplete_coverage_is_reported():
    # one broad hub over thirty leaves, a head of one, and a residual
    # budget far below the leaf count: most leaves cannot be witnessed
    rows = [("hub", ["big"])] + [
        (f"x{k}", ["big", f"leaf{k}"]) for k in range(30)
    ]
    idx = build_index(rows)
    config = TlcConfig(seed_size=1, residual_threshold=1, pool_multiplier=2)
    tlc, dc, audit = select_tlc(idx, config=config)
    assert not audit.complete
    assert audit.uncovered
    assert verify_audit(idx, tlc, dc, audit)


def test_dominant_submatrix(fig_index):
    config = TlcConfig(seed_size=2, residual_threshold=2, pool_multiplier=2)
    tlc, dc, audit = select_tlc(fig_index, config=config)
    sub = dominant_submatrix(fig_index, tlc)
    assert sub.category_ids == tuple(sorted(tlc))
    for c in tlc:
        assert sub.postings(c).tolist() == fig_index.postings(c).tolist()
    with pytest.raises(KeyError):
        sub.postings(dc[0])
    covered = set()
    for c in tlc:
        covered.update(int(j) for j in fig_index.postings(c))
    assert set(sub.empty_items) == set(range(fig_index.N)) - covered


def test_dominant_submatrix_flags_stranded_items():
    idx = build_index([("X", ["p"]), ("Y", ["q"]), ("Z", ["p", "q"])])
    sub = dominant_submatrix(idx, (idx.category_id("p"),))
    assert list(sub.empty_items) == [idx.item_id("Y")]
    assert sub.link_count == 2


def test_select_tlc_with_precomputed_scores(fig_index):
    scores = relevance_scores(fig_index)
    a = select_tlc(fig_index, scores, TlcConfig(seed_size=2, residual_threshold=2))
    b = select_tlc(fig_index, None, TlcConfig(seed_size=2, residual_threshold=2))
    assert a[0] == b[0] and a[1] == b[1]
