"""Categorization-quality analytics: matrix ordering, duplicate-structure
detection, granularity, and co-occurrence statistics.

Everything here is a read-only pass over an index. The reports exist for
the humans curating a category vocabulary: near-duplicate items, synonymous
categories, items whose category sets cannot pin them down, and how much
structural overlap the matrix carries compared with a random one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import SizeGuardError
from .index import ALL, DEFAULT_GROUP, AssociationIndex, build_index
from .postings import intersect_many

# Equal-sum runs longer than this skip the pairwise chaining pass and fall
# back to ascending-ID order (the chain search is quadratic in run length).
CHAIN_LIMIT = 1000

PAIRWISE_SIZE_GUARD = 2000


# ---------------------------------------------------------------------------
# Ordered matrix


@dataclass(frozen=True)
class OrderedMatrix:
    """Permutations that expose the block structure of the association matrix.

    ``row_perm`` lists category IDs with item counts non-increasing;
    ``col_perm`` lists item IDs (global) with category counts non-increasing.
    Within a run of equal sums, members with identical vectors sit together,
    and distinct vectors are chained so that neighbors differ in as few
    places as possible (exact for Hamming distance 2, ascending IDs beyond).
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]


def _vector_key(vec: np.ndarray) -> bytes:
    return vec.tobytes()


def _ordered_axis(
    ids: Sequence[int],
    sums: np.ndarray,
    vector_of: Mapping[int, np.ndarray],
    chain_limit: int,
) -> tuple[int, ...]:
    by_sum = sorted(ids, key=lambda x: (-int(sums[x]), x))
    out: list[int] = []
    start = 0
    while start < len(by_sum):
        stop = start
        s = sums[by_sum[start]]
        while stop < len(by_sum) and sums[by_sum[stop]] == s:
            stop += 1
        out.extend(_order_run(by_sum[start:stop], vector_of, chain_limit))
        start = stop
    return tuple(out)


def _order_run(
    run: list[int],
    vector_of: Mapping[int, np.ndarray],
    chain_limit: int,
) -> list[int]:
    if len(run) <= 2:
        return run
    # Collapse identical vectors first; each group is one chaining node.
    groups: dict[bytes, list[int]] = {}
    for x in run:
        groups.setdefault(_vector_key(vector_of[x]), []).append(x)
    nodes = sorted(groups.values(), key=lambda g: g[0])
    if len(nodes) > chain_limit:
        return [x for g in nodes for x in g]

    sets = [frozenset(vector_of[g[0]].tolist()) for g in nodes]
    placed = [False] * len(nodes)
    order: list[int] = []
    cursor = 0
    for _ in nodes:
        if placed[cursor]:
            cursor = min(i for i in range(len(nodes)) if not placed[i])
        placed[cursor] = True
        order.append(cursor)
        # Equal sums make every symmetric difference even; 2 is as close
        # as two distinct vectors get.
        nxt = None
        for i in range(len(nodes)):
            if not placed[i] and len(sets[cursor] ^ sets[i]) == 2:
                nxt = i
                break
        cursor = nxt if nxt is not None else cursor
    return [x for i in order for x in nodes[i]]


def order_matrix(index: AssociationIndex, chain_limit: int = CHAIN_LIMIT) -> OrderedMatrix:
    """Deterministic row/column orderings, heaviest sums first."""
    per_cat, per_item = index.degrees()
    cat_vectors = {c: index.postings(c) for c in range(index.n)}
    base = index.item_base
    item_ids = [base + j for j in range(index.N)]
    item_vectors = {base + j: index.cats_of(base + j) for j in range(index.N)}
    item_sums = {base + j: per_item[j] for j in range(index.N)}

    row_perm = _ordered_axis(range(index.n), per_cat, cat_vectors, chain_limit)
    # Items are addressed by global ID, so wrap the sums for the shared helper.
    col_perm = _ordered_axis(
        item_ids,
        _Offset(item_sums),
        item_vectors,
        chain_limit,
    )
    return OrderedMatrix(row_perm=row_perm, col_perm=col_perm)


class _Offset:
    """Dict-backed __getitem__ so one helper serves both axes."""

    def __init__(self, table: Mapping[int, int]):
        self._table = table

    def __getitem__(self, key: int) -> int:
        return self._table[key]


# ---------------------------------------------------------------------------
# Duplicate structure: equal category sets, equal postings, supersets


@dataclass(frozen=True)
class InferenceReport:
    """Items grouped by exact category-set equality.

    ``counts`` maps each global item ID to the size of its equality class
    (1 means the item's category set is unique). ``max_count`` is the worst
    case and ``witness`` one class attaining it.
    """

    counts: dict[int, int]
    max_count: int
    witness: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    mean: float
    std: float


def inference_sets(index: AssociationIndex) -> InferenceReport:
    groups: dict[bytes, list[int]] = {}
    for j in range(index.N):
        gid = index.item_base + j
        groups.setdefault(index.cats_of(gid).tobytes(), []).append(gid)
    classes = tuple(tuple(g) for g in groups.values())
    counts = {gid: len(g) for g in classes for gid in g}
    sizes = np.asarray([counts[index.item_base + j] for j in range(index.N)])
    max_count = int(sizes.max())
    witness = next(g for g in classes if len(g) == max_count)
    return InferenceReport(
        counts=counts,
        max_count=max_count,
        witness=witness,
        classes=classes,
        mean=float(sizes.mean()),
        std=float(sizes.std()),
    )


@dataclass(frozen=True)
class SynonymReport:
    """Categories grouped by exact posting equality (interchangeable labels)."""

    counts: dict[int, int]
    classes: tuple[tuple[int, ...], ...]


def synonym_sets(index: AssociationIndex) -> SynonymReport:
    groups: dict[bytes, list[int]] = {}
    for c in range(index.n):
        groups.setdefault(index.postings(c).tobytes(), []).append(c)
    classes = tuple(tuple(g) for g in groups.values())
    counts = {c: len(g) for g in classes for c in g}
    return SynonymReport(counts=counts, classes=classes)


def granularity(index: AssociationIndex) -> dict[int, int]:
    """Per item, how many items carry *all* of its categories (itself included).

    This is what a user who selects the item's whole category set is left
    with: 1 means the set pins the item down exactly.
    """
    out: dict[int, int] = {}
    for j in range(index.N):
        gid = index.item_base + j
        rows = [index.postings(c) for c in index.cats_of(gid)]
        out[gid] = len(intersect_many(rows))
    return out


@dataclass(frozen=True)
class FlagReport:
    """Items whose category sets fail the duplication/granularity thresholds."""

    flagged: tuple[int, ...]
    q_threshold: int
    g_threshold: int
    derived: AssociationIndex | None


def flag_badly_categorized(
    index: AssociationIndex,
    q_threshold: int = 20,
    g_threshold: int = 20,
    descriptor: str | None = None,
) -> FlagReport:
    """Flag items with too many exact twins or too coarse a category set.

    With ``descriptor`` set, also returns a rebuilt index in which every
    flagged item carries that extra category, so curators can navigate
    straight to the problem items.
    """
    if q_threshold < 1 or g_threshold < 1:
        raise ValueError("thresholds must be >= 1")
    if descriptor is not None and descriptor in index.category_names:
        raise ValueError(f"descriptor {descriptor!r} is already a category")
    q = inference_sets(index).counts
    g = granularity(index)
    flagged = tuple(
        gid
        for gid in (index.item_base + j for j in range(index.N))
        if q[gid] > q_threshold or g[gid] > g_threshold
    )
    derived = None
    if descriptor is not None and flagged:
        flagged_set = set(flagged)
        grouping = {
            index.category_names[c]: (
                index.group_names[index.group_of[c]],
                index.group_combinators[index.group_of[c]],
            )
            for c in range(index.n)
        }
        grouping[descriptor] = (DEFAULT_GROUP, ALL)
        gids = (index.item_base + j for j in range(index.N))
        derived = build_index(
            (
                (name, cats + (descriptor,) if gid in flagged_set else cats)
                for gid, (name, cats) in zip(gids, index.items())
            ),
            grouping=grouping,
        )
    return FlagReport(
        flagged=flagged,
        q_threshold=q_threshold,
        g_threshold=g_threshold,
        derived=derived,
    )


# ---------------------------------------------------------------------------
# Co-occurrence statistics


@dataclass(frozen=True)
class CooccurrenceReport:
    """How much two random rows or columns of the matrix overlap.

    The exact means come from a degree identity that needs no pair
    enumeration: across all ordered item pairs, shared-category incidences
    total Σ F_i(F_i − 1), so the mean over distinct pairs is
    (n⟨F²⟩ − S)/(N(N−1)); transposing gives the item-overlap mean. The
    ``*_approx`` fields keep only the variance part of ⟨F²⟩ (resp. ⟨C²⟩),
    which undercounts whenever the mean degree is above 1; both values are
    reported side by side, plus the variance-ratio shortcut for their
    quotient. ``None`` marks a ratio with a zero denominator.
    """

    mean_shared_cats_exact: float
    mean_shared_items_exact: float
    mean_shared_cats_approx: float
    mean_shared_items_approx: float
    mean_shared_cats_corrected: float
    mean_shared_items_corrected: float
    sigma_F: float
    sigma_C: float
    ratio_exact: float | None
    ratio_approx: float | None

    def as_dict(self) -> dict:
        return {
            "mean_shared_cats_exact": self.mean_shared_cats_exact,
            "mean_shared_items_exact": self.mean_shared_items_exact,
            "mean_shared_cats_approx": self.mean_shared_cats_approx,
            "mean_shared_items_approx": self.mean_shared_items_approx,
            "mean_shared_cats_corrected": self.mean_shared_cats_corrected,
            "mean_shared_items_corrected": self.mean_shared_items_corrected,
            "sigma_F": self.sigma_F,
            "sigma_C": self.sigma_C,
            "ratio_exact": self.ratio_exact,
            "ratio_approx": self.ratio_approx,
        }


def cooccurrence_stats(index: AssociationIndex) -> CooccurrenceReport:
    if index.N < 2 or index.n < 2:
        raise ValueError("co-occurrence needs at least 2 items and 2 categories")
    per_cat, per_item = index.degrees()
    n, N, S = index.n, index.N, index.link_count
    F_av, C_av = S / n, S / N
    sigma_F = float(np.std(per_cat))
    sigma_C = float(np.std(per_item))
    # integer numerators: the exact means are ratios of whole link counts
    sum_F_sq = int(np.sum(per_cat.astype(np.int64) ** 2))
    sum_C_sq = int(np.sum(per_item.astype(np.int64) ** 2))

    cats_exact = (sum_F_sq - S) / (N * (N - 1))
    items_exact = (sum_C_sq - S) / (n * (n - 1))
    cats_approx = n * sigma_F**2 / (N * (N - 1))
    items_approx = N * sigma_C**2 / (n * (n - 1))
    cats_corrected = (n * sigma_F**2 + n * F_av * (F_av - 1)) / (N * (N - 1))
    items_corrected = (N * sigma_C**2 + N * C_av * (C_av - 1)) / (n * (n - 1))

    ratio_exact = cats_exact / items_exact if items_exact else None
    ratio_approx = (
        n**3 * sigma_F**2 / (N**3 * sigma_C**2) if sigma_C else None
    )
    return CooccurrenceReport(
        mean_shared_cats_exact=cats_exact,
        mean_shared_items_exact=items_exact,
        mean_shared_cats_approx=cats_approx,
        mean_shared_items_approx=items_approx,
        mean_shared_cats_corrected=cats_corrected,
        mean_shared_items_corrected=items_corrected,
        sigma_F=sigma_F,
        sigma_C=sigma_C,
        ratio_exact=ratio_exact,
        ratio_approx=ratio_approx,
    )


def _dense(index: AssociationIndex) -> np.ndarray:
    mat = np.zeros((index.N, index.n), dtype=np.int64)
    for j in range(index.N):
        mat[j, index.cats_of(index.item_base + j)] = 1
    return mat


def pairwise_shared_cats_mean(
    index: AssociationIndex, size_guard: int = PAIRWISE_SIZE_GUARD
) -> float:
    """Mean shared-category count over distinct item pairs, by materializing
    the full pair table. Quadratic in N; guarded."""
    if index.N > size_guard:
        raise SizeGuardError(
            f"{index.N} items exceeds the pairwise size guard {size_guard}"
        )
    mat = _dense(index)
    table = mat @ mat.T
    total = int(table.sum()) - int(np.trace(table))
    return total / (index.N * (index.N - 1))


def pairwise_shared_items_mean(
    index: AssociationIndex, size_guard: int = PAIRWISE_SIZE_GUARD
) -> float:
    """Mean shared-item count over distinct category pairs; quadratic in n."""
    if index.n > size_guard:
        raise SizeGuardError(
            f"{index.n} categories exceeds the pairwise size guard {size_guard}"
        )
    mat = _dense(index)
    table = mat.T @ mat
    total = int(table.sum()) - int(np.trace(table))
    return total / (index.n * (index.n - 1))
