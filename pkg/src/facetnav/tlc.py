"""Top-level category selection.

Large vocabularies get split into a small head of broadly connected
categories and a long tail of detailed ones. A category's relevance is the
number of links its items have to other categories; the head is seeded with
the top scorers and grown greedily until every tail category is reachable:
some one- or two-category head selection must list it among at most
``residual_threshold`` available tail categories. Each covered tail
category keeps the witnessing selection in the audit so the claim can be
replayed against the query engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .index import AssociationIndex
from .query import Selection, evaluate

SEED_SIZE = 100
RESIDUAL_THRESHOLD = 1000
POOL_MULTIPLIER = 5


def relevance_scores(index: AssociationIndex) -> np.ndarray:
    """Per category, the total link count of its items to other categories.

    Every item contributes its category count minus one to each of its
    categories, so the scores total Σ_j C_j(C_j − 1) over items. A score of
    0 means the category appears only on single-category items.
    """
    per_item = np.diff(index.item_indptr)
    weights = np.repeat(per_item - 1, per_item).astype(np.float64)
    return np.bincount(index.item_data, weights=weights, minlength=index.n).astype(
        np.int64
    )


@dataclass(frozen=True)
class TlcConfig:
    seed_size: int = SEED_SIZE
    residual_threshold: int = RESIDUAL_THRESHOLD
    pool_multiplier: int = POOL_MULTIPLIER

    def __post_init__(self) -> None:
        if self.seed_size < 1:
            raise ValueError("seed_size must be >= 1")
        if self.residual_threshold < 1:
            raise ValueError("residual_threshold must be >= 1")
        if self.pool_multiplier < 1:
            raise ValueError("pool_multiplier must be >= 1")


@dataclass(frozen=True)
class TlcAudit:
    """Evidence for the discrimination claim.

    ``witnesses`` maps each covered detail category to the head selection
    (one or two category IDs) under which it shows up among at most
    ``residual_threshold`` available detail categories; ``uncovered`` lists
    detail categories for which no such witness was found before the
    candidate pool ran out. ``selection_order`` is the order the head was
    assembled in, seed first.
    """

    complete: bool
    witnesses: dict[int, tuple[int, ...]]
    uncovered: tuple[int, ...]
    selection_order: tuple[int, ...]
    pool_size: int
    residual_threshold: int


def _witness_search(
    index: AssociationIndex,
    selections: list[tuple[int, ...]],
    dc_set: frozenset[int],
    threshold: int,
    witnesses: dict[int, tuple[int, ...]],
    pending: set[int],
) -> None:
    """Record witnesses for pending detail categories; mutates both dicts."""
    for combo in selections:
        if not pending:
            return
        res = evaluate(index, Selection.of(*combo))
        listed = [c for c in res.available if c in dc_set]
        if len(listed) > threshold:
            continue
        for d in listed:
            if d in pending:
                witnesses[d] = combo
                pending.discard(d)


def select_tlc(
    index: AssociationIndex,
    scores: np.ndarray | None = None,
    config: TlcConfig = TlcConfig(),
) -> tuple[tuple[int, ...], tuple[int, ...], TlcAudit]:
    """Greedy head/tail split: (head IDs, tail IDs, audit), both ascending.

    Seeds with the ``seed_size`` best-scored categories (ties by ascending
    ID), then appends further candidates in score order whenever doing so
    newly covers some failing tail category; a candidate that cannot help
    is skipped. The pool holds ``pool_multiplier`` times the seed; anything
    still uncovered when it runs out is reported, not raised.
    """
    if scores is None:
        scores = relevance_scores(index)
    if len(scores) != index.n:
        raise ValueError("scores length does not match the category count")
    ranked = sorted(range(index.n), key=lambda c: (-int(scores[c]), c))
    if index.n <= config.seed_size + 1:
        # A tail of at most one category is pointless; keep everything.
        return (
            tuple(range(index.n)),
            (),
            TlcAudit(
                complete=True,
                witnesses={},
                uncovered=(),
                selection_order=tuple(ranked),
                pool_size=index.n,
                residual_threshold=config.residual_threshold,
            ),
        )
    seed = ranked[: config.seed_size]
    pool = ranked[config.seed_size : config.pool_multiplier * config.seed_size]

    tlc = list(seed)
    order = list(seed)
    witnesses: dict[int, tuple[int, ...]] = {}
    dc_set = frozenset(ranked[config.seed_size :])
    pending = set(dc_set)

    seed_singles = [(t,) for t in seed]
    seed_pairs = [tuple(sorted(p)) for p in combinations(sorted(seed), 2)]
    _witness_search(
        index, seed_singles + seed_pairs, dc_set, config.residual_threshold,
        witnesses, pending,
    )
    for cand in pool:
        if not pending:
            break
        was_pending = cand in pending
        trial_dc = frozenset(d for d in dc_set if d != cand)
        trial_witnesses = dict(witnesses)
        trial_witnesses.pop(cand, None)
        trial_pending = set(pending)
        trial_pending.discard(cand)
        others_before = len(trial_pending)
        # Only selections involving the candidate can witness anything new.
        singles = [(cand,)]
        pairs = sorted((cand, u) if cand < u else (u, cand) for u in tlc)
        _witness_search(
            index, singles + pairs, trial_dc, config.residual_threshold,
            trial_witnesses, trial_pending,
        )
        if was_pending or len(trial_pending) < others_before:
            tlc.append(cand)
            order.append(cand)
            witnesses = trial_witnesses
            pending = trial_pending
            dc_set = trial_dc

    dc = tuple(sorted(dc_set))
    return (
        tuple(sorted(tlc)),
        dc,
        TlcAudit(
            complete=not pending,
            witnesses=witnesses,
            uncovered=tuple(sorted(pending)),
            selection_order=tuple(order),
            pool_size=len(seed) + len(pool),
            residual_threshold=config.residual_threshold,
        ),
    )


def verify_audit(
    index: AssociationIndex,
    tlc: tuple[int, ...],
    dc: tuple[int, ...],
    audit: TlcAudit,
) -> bool:
    """Replay every witness through the query engine.

    True when each witnessed detail category really is listed by its
    recorded selection among at most the threshold's worth of available
    detail categories, the witnesses use head categories only, and the
    covered/uncovered split matches the detail set.
    """
    tlc_set, dc_set = set(tlc), set(dc)
    if set(audit.witnesses) | set(audit.uncovered) != dc_set:
        return False
    if set(audit.witnesses) & set(audit.uncovered):
        return False
    for d, combo in audit.witnesses.items():
        if not (1 <= len(combo) <= 2) or not set(combo) <= tlc_set:
            return False
        res = evaluate(index, Selection.of(*combo))
        listed = [c for c in res.available if c in dc_set]
        if d not in listed or len(listed) > audit.residual_threshold:
            return False
    return True


@dataclass(frozen=True)
class DominantIndex:
    """The head rows of the matrix, postings intact, all items addressable.

    Items carrying no head category stay as empty columns and are listed in
    ``empty_items``; the structure answers head-only selections on its own,
    which is the point: it is small enough to pin in memory.
    """

    category_ids: tuple[int, ...]
    item_base: int
    item_count: int
    cat_indptr: np.ndarray
    cat_data: np.ndarray
    empty_items: tuple[int, ...]

    @property
    def link_count(self) -> int:
        return int(len(self.cat_data))

    @property
    def memory_estimate_bytes(self) -> int:
        return 4 * self.link_count

    def postings(self, cat: int) -> np.ndarray:
        pos = int(np.searchsorted(self.category_ids, cat))
        if pos >= len(self.category_ids) or self.category_ids[pos] != cat:
            raise KeyError(f"category {cat} is not a head category")
        return self.cat_data[self.cat_indptr[pos]:self.cat_indptr[pos + 1]]


def dominant_submatrix(
    index: AssociationIndex, tlc: tuple[int, ...]
) -> DominantIndex:
    """Restrict the matrix to the given head rows."""
    ids = tuple(sorted(set(tlc)))
    for c in ids:
        index.postings(c)  # raises on unknown ids
    rows = [index.postings(c) for c in ids]
    indptr = np.zeros(len(ids) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=indptr[1:])
    data = (
        np.concatenate(rows)
        if indptr[-1]
        else np.empty(0, dtype=index.cat_data.dtype)
    )
    covered = np.zeros(index.N, dtype=bool)
    if len(data):
        covered[data - index.item_base] = True
    empty = tuple(int(index.item_base + j) for j in np.flatnonzero(~covered))
    return DominantIndex(
        category_ids=ids,
        item_base=index.item_base,
        item_count=index.N,
        cat_indptr=indptr,
        cat_data=data,
        empty_items=empty,
    )
