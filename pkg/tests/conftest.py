"""Shared fixtures and independent brute-force oracles.

The oracles here recompute every engine answer from a dense boolean
matrix using nothing but numpy set algebra and python loops. They share
no code with the package under test, so agreement is evidence, not
tautology.
"""

from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from facetnav import AssociationIndex, Selection, build_index

REFERENCE_ROWS = [
    ("A", ["a", "b", "c"]),
    ("B", ["b", "c", "d"]),
    ("C", ["a", "c", "e"]),
]


@pytest.fixture
def fig_index() -> AssociationIndex:
    return build_index(REFERENCE_ROWS)


def random_assignments(
    rng: random.Random,
    item_count: int,
    category_count: int,
    min_cats: int = 1,
    max_cats: int = 4,
) -> list[tuple[str, list[str]]]:
    """Random corpus where every category name is used at least once."""
    cats = [f"c{k}" for k in range(category_count)]
    rows = []
    for j in range(item_count):
        k = rng.randint(min_cats, min(max_cats, category_count))
        rows.append((f"item{j}", rng.sample(cats, k)))
    # force every category to appear so ids are dense
    for k, c in enumerate(cats):
        j = k % item_count
        if c not in rows[j][1]:
            rows[j][1].append(c)
    return rows


def dense_matrix(index: AssociationIndex) -> np.ndarray:
    """n x N boolean association matrix, built item by item."""
    mat = np.zeros((index.n, index.N), dtype=bool)
    for j in range(index.N):
        for c in index.cats_of(j):
            mat[int(c), j] = True
    return mat


def brute_evaluate(
    index: AssociationIndex, selection: Selection
) -> tuple[list[int], dict[int, int], list[int]]:
    """Reference answer: (matching items, hypothetical counts, unavailable).

    Works directly on the dense matrix with python set logic. Grouped ANY
    categories are OR-ed; everything else is AND-ed; negated entries are
    AND-NOT. The hypothetical count for an unselected category c is the
    number of items that would match after additionally clicking c.
    """
    mat = dense_matrix(index)
    n, N = mat.shape

    def matches(entries) -> np.ndarray:
        ok = np.ones(N, dtype=bool)
        by_group: dict[int, list] = {}
        for cat, neg in entries:
            if neg:
                ok &= ~mat[cat]
            else:
                by_group.setdefault(int(index.group_of[cat]), []).append(cat)
        for g, members in by_group.items():
            if index.group_combinators[g] == "ANY":
                ok &= np.logical_or.reduce([mat[c] for c in members])
            else:
                for c in members:
                    ok &= mat[c]
        return ok

    base_entries = [(e.cat, e.negated) for e in selection.entries]
    current = matches(base_entries)
    chosen = {e.cat for e in selection.entries}
    counts: dict[int, int] = {}
    unavailable: list[int] = []
    for c in range(n):
        if c in chosen:
            continue
        would = matches(base_entries + [(c, False)])
        k = int(would.sum())
        if k:
            counts[c] = k
        else:
            unavailable.append(c)
    items = [j for j in range(N) if current[j]]
    return items, counts, unavailable


def brute_granularity(index: AssociationIndex) -> dict[int, int]:
    mat = dense_matrix(index)
    out = {}
    for j in range(index.N):
        ok = np.ones(index.N, dtype=bool)
        for c in np.flatnonzero(mat[:, j]):
            ok &= mat[c]
        out[j] = int(ok.sum())
    return out


def brute_inference_counts(index: AssociationIndex) -> dict[int, int]:
    sigs = [frozenset(int(c) for c in index.cats_of(j)) for j in range(index.N)]
    return {j: sigs.count(sigs[j]) for j in range(index.N)}


def brute_mean_shared_cats(index: AssociationIndex) -> float:
    """Average over ordered distinct item pairs of |cats(i) & cats(j)|."""
    sets = [set(int(c) for c in index.cats_of(j)) for j in range(index.N)]
    total = sum(
        len(a & b) for a, b in itertools.permutations(sets, 2)
    )
    return total / (index.N * (index.N - 1))


def brute_mean_shared_items(index: AssociationIndex) -> float:
    sets = [set(int(j) for j in index.postings(c)) for c in range(index.n)]
    total = sum(
        len(a & b) for a, b in itertools.permutations(sets, 2)
    )
    return total / (index.n * (index.n - 1))
