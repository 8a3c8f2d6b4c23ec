"""Query engine against hand-worked values and the dense brute-force oracle."""

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facetnav import (
    ANY,
    Entry,
    FirstClickCache,
    Selection,
    SelectionError,
    StaleCacheError,
    UnknownCategoryError,
    build_index,
    evaluate,
    first_click,
    matching_items,
    refine,
)

from conftest import brute_evaluate, random_assignments


def sel(index, *names, negated=()):
    s = Selection()
    for nm in names:
        s = s.select(index.category_id(nm))
    for nm in negated:
        s = s.negate(index.category_id(nm))
    return s


# ---------------------------------------------------------------- reference

def test_single_click_c(fig_index):
    res = evaluate(fig_index, sel(fig_index, "c"))
    assert [fig_index.item_name(j) for j in res.items] == ["A", "B", "C"]
    named = {fig_index.category_name(c): k for c, k in res.counts().items()}
    assert named == {"a": 2, "b": 2, "c": 3, "d": 1, "e": 1}
    assert res.unavailable == ()


def test_second_click_a(fig_index):
    res = evaluate(fig_index, sel(fig_index, "c", "a"))
    assert [fig_index.item_name(j) for j in res.items] == ["A", "C"]
    named = {fig_index.category_name(c): k for c, k in res.counts().items()}
    assert named == {"a": 2, "b": 1, "c": 2, "e": 1}
    assert [fig_index.category_name(c) for c in res.unavailable] == ["d"]
    assert not res.is_fruitful(fig_index.category_id("d"))
    assert res.is_fruitful(fig_index.category_id("b"))


def test_empty_selection_offers_everything(fig_index):
    res = evaluate(fig_index, Selection())
    assert res.item_count == 3
    assert len(res.available) == 5
    assert res.selected == {}


def test_negation(fig_index):
    res = evaluate(fig_index, sel(fig_index, "c", negated=["b"]))
    assert [fig_index.item_name(j) for j in res.items] == ["C"]
    # negated entry shows 0 in the selected contributions
    assert res.selected[fig_index.category_id("b")] == 0
    assert res.selected[fig_index.category_id("c")] == 1


def test_refine_and_deselect(fig_index):
    res = evaluate(fig_index, sel(fig_index, "c"))
    res2 = refine(fig_index, res.selection, fig_index.category_id("a"))
    assert res2 == evaluate(fig_index, sel(fig_index, "c", "a"))
    back = res2.selection.deselect(fig_index.category_id("a"))
    assert evaluate(fig_index, back) == res
    with pytest.raises(SelectionError):
        back.deselect(fig_index.category_id("e"))


def test_selecting_same_category_twice_is_stable(fig_index):
    c = fig_index.category_id("c")
    assert Selection.of(c).select(c) == Selection.of(c)
    # re-selecting with flipped polarity replaces the entry
    flipped = Selection.of(c).negate(c)
    assert flipped.entries == (Entry(c, True),)


def test_out_of_range_category_rejected(fig_index):
    with pytest.raises(UnknownCategoryError):
        evaluate(fig_index, Selection.of(99))


# ---------------------------------------------------------------- oracle

def test_matches_brute_force_on_random_corpora():
    rng = random.Random(90125)
    for _ in range(40):
        rows = random_assignments(rng, rng.randint(2, 30), rng.randint(2, 10))
        idx = build_index(rows)
        picks = rng.sample(range(idx.n), rng.randint(0, min(3, idx.n)))
        negs = [c for c in range(idx.n) if c not in picks and rng.random() < 0.15]
        s = Selection.of(*picks, negated=negs)
        res = evaluate(idx, s)
        items, counts, unavailable = brute_evaluate(idx, s)
        assert res.items.tolist() == items
        assert res.available == counts
        assert list(res.unavailable) == unavailable


def test_matches_brute_force_with_any_groups():
    rng = random.Random(101)
    for _ in range(30):
        n_cats = rng.randint(3, 9)
        rows = random_assignments(rng, rng.randint(3, 25), n_cats)
        cats = sorted({c for _, row in rows for c in row})
        or_members = rng.sample(cats, max(2, len(cats) // 2))
        grouping = {c: ("or-group", ANY) for c in or_members}
        idx = build_index(rows, grouping=grouping)
        picks = rng.sample(range(idx.n), rng.randint(1, min(4, idx.n)))
        s = Selection.of(*picks)
        res = evaluate(idx, s)
        items, counts, unavailable = brute_evaluate(idx, s)
        assert res.items.tolist() == items
        assert res.available == counts
        assert list(res.unavailable) == unavailable


@st.composite
def corpora(draw):
    n_cats = draw(st.integers(2, 8))
    n_items = draw(st.integers(1, 15))
    rows = []
    for j in range(n_items):
        cats = draw(
            st.sets(st.integers(0, n_cats - 1), min_size=1, max_size=n_cats)
        )
        rows.append((f"i{j}", [f"c{k}" for k in sorted(cats)]))
    return rows


@settings(max_examples=60, deadline=None)
@given(corpora(), st.data())
def test_evaluate_equals_brute_force_generatively(rows, data):
    idx = build_index(rows)
    k = data.draw(st.integers(0, min(3, idx.n)))
    picks = data.draw(
        st.lists(
            st.integers(0, idx.n - 1), min_size=k, max_size=k, unique=True
        )
    )
    s = Selection.of(*picks)
    res = evaluate(idx, s)
    items, counts, unavailable = brute_evaluate(idx, s)
    assert res.items.tolist() == items
    assert res.available == counts
    assert list(res.unavailable) == unavailable
    for c, v in res.available.items():
        assert v >= 1  # the offer is the guarantee


def test_every_offered_category_is_fruitful():
    rng = random.Random(555)
    for _ in range(20):
        rows = random_assignments(rng, rng.randint(2, 25), rng.randint(2, 8))
        idx = build_index(rows)
        s = Selection()
        res = evaluate(idx, s)
        while res.available and res.item_count > 1:
            c = rng.choice(sorted(res.available))
            expected = res.available[c]
            s = s.select(c)
            res = evaluate(idx, s)
            assert res.item_count == expected
            assert res.item_count >= 1


# ---------------------------------------------------------------- cache

def test_first_click_cache_matches_evaluate(fig_index):
    cache = FirstClickCache(fig_index)
    for c in range(fig_index.n):
        assert cache.result(fig_index, c) == evaluate(fig_index, Selection.of(c))


def test_first_click_cache_on_any_groups():
    rows = [("X", ["p", "q"]), ("Y", ["q", "r"]), ("Z", ["p", "s"])]
    grouping = {"p": ("g", ANY), "r": ("g", ANY)}
    idx = build_index(rows, grouping=grouping)
    cache = FirstClickCache(idx)
    for c in range(idx.n):
        assert cache.result(idx, c) == evaluate(idx, Selection.of(c))


def test_first_click_cache_pair_counts(fig_index):
    cache = FirstClickCache(fig_index)
    a, c = fig_index.category_id("a"), fig_index.category_id("c")
    assert cache.pair_count(a, c) == 2
    assert cache.pair_count(a, a) == 2
    assert cache.pair_count(fig_index.category_id("d"), a) == 0


def test_stale_cache_detected(fig_index):
    cache = FirstClickCache(fig_index)
    other = build_index([("X", ["p"])])
    with pytest.raises(StaleCacheError):
        first_click(other, cache, 0)


def test_first_click_helper(fig_index):
    cache = FirstClickCache(fig_index)
    c = fig_index.category_id("c")
    assert first_click(fig_index, cache, c) == evaluate(fig_index, Selection.of(c))


def test_matching_items_shortcut(fig_index):
    s = sel(fig_index, "c", "a")
    assert matching_items(fig_index, s).tolist() == [0, 2]
