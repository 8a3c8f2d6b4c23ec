"""Guided navigation over an association index.

A selection is an ordered set of category entries, each either positive or
negated. Positive entries combine through their category's group: ALL
groups AND their members, ANY groups OR theirs, and the per-group results
are ANDed together. Negated entries always subtract, whatever their group.

:func:`evaluate` answers the one question the whole interaction model rests
on: given this selection, which items match, and for every *other* category,
how many items would the user have after clicking it. Categories whose
hypothetical count is zero are reported unavailable so a UI can suppress
them; everything offered is guaranteed fruitful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import SelectionError, StaleCacheError, UnknownCategoryError
from .index import ANY, AssociationIndex
from .postings import difference, intersect_many, union_many
from .snapshot import fingerprint


@dataclass(frozen=True)
class Entry:
    """One selected category, possibly negated."""

    cat: int
    negated: bool = False


@dataclass(frozen=True)
class Selection:
    """Immutable ordered set of entries; at most one entry per category."""

    entries: tuple[Entry, ...] = ()

    @staticmethod
    def of(*cats: int, negated: Iterable[int] = ()) -> "Selection":
        sel = Selection()
        for c in cats:
            sel = sel.select(c)
        for c in negated:
            sel = sel.negate(c)
        return sel

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def entry_for(self, cat: int) -> Entry | None:
        for e in self.entries:
            if e.cat == cat:
                return e
        return None

    def _added(self, entry: Entry) -> "Selection":
        existing = self.entry_for(entry.cat)
        if existing == entry:
            return self
        if existing is not None:
            # Flip polarity in place rather than growing the selection.
            return Selection(
                tuple(entry if e.cat == entry.cat else e for e in self.entries)
            )
        return Selection(self.entries + (entry,))

    def select(self, cat: int) -> "Selection":
        return self._added(Entry(cat, False))

    def negate(self, cat: int) -> "Selection":
        return self._added(Entry(cat, True))

    def deselect(self, cat: int) -> "Selection":
        if self.entry_for(cat) is None:
            raise SelectionError(f"category {cat} is not selected")
        return Selection(tuple(e for e in self.entries if e.cat != cat))

    def positives(self) -> tuple[int, ...]:
        return tuple(e.cat for e in self.entries if not e.negated)

    def negatives(self) -> tuple[int, ...]:
        return tuple(e.cat for e in self.entries if e.negated)

    def cats(self) -> frozenset[int]:
        return frozenset(e.cat for e in self.entries)


@dataclass(frozen=True, eq=False)
class QueryResult:
    """Matching items plus the per-category outlook for the next click.

    ``available`` maps every unselected category to the number of items the
    user would have after clicking it (always >= 1 here); ``unavailable``
    lists the unselected categories a click on which would empty the result.
    ``selected`` maps each selected category to its count within the current
    matches (a negated entry always shows 0). The three parts partition the
    category set.
    """

    selection: Selection
    items: np.ndarray
    available: dict[int, int]
    unavailable: tuple[int, ...]
    selected: dict[int, int]

    def __eq__(self, other: object) -> bool:
        # Equality down to dict insertion order: two results that merely
        # enumerate the same counts differently are NOT equal.
        if not isinstance(other, QueryResult):
            return NotImplemented
        return (
            self.selection == other.selection
            and self.items.tobytes() == other.items.tobytes()
            and self.available == other.available
            and list(self.available) == list(other.available)
            and self.unavailable == other.unavailable
            and self.selected == other.selected
            and list(self.selected) == list(other.selected)
        )

    @property
    def item_count(self) -> int:
        return len(self.items)

    def counts(self) -> dict[int, int]:
        """Merged per-category view: available plus selected contributions."""
        merged = dict(self.available)
        merged.update(self.selected)
        return merged

    def is_fruitful(self, cat: int) -> bool:
        return cat in self.available


def _validate(index: AssociationIndex, selection: Selection) -> None:
    for e in selection.entries:
        if not 0 <= e.cat < index.n:
            raise UnknownCategoryError(f"category id {e.cat} out of range")


def _group_vectors(
    index: AssociationIndex, positives: tuple[int, ...]
) -> dict[int, np.ndarray]:
    """Per-group combined posting vector of the selected positives."""
    members: dict[int, list[int]] = {}
    for c in positives:
        members.setdefault(int(index.group_of[c]), []).append(c)
    out: dict[int, np.ndarray] = {}
    for g, cats in members.items():
        rows = [index.postings(c) for c in cats]
        if index.group_combinators[g] == ANY:
            out[g] = union_many(rows)
        else:
            out[g] = intersect_many(rows)
    return out


def _combine(
    index: AssociationIndex,
    group_vecs: dict[int, np.ndarray],
    negatives: tuple[int, ...],
) -> np.ndarray:
    if group_vecs:
        matching = intersect_many(list(group_vecs.values()))
    else:
        matching = index.all_items()
    if negatives and len(matching):
        matching = difference(matching, union_many([index.postings(c) for c in negatives]))
    return matching


def matching_items(index: AssociationIndex, selection: Selection) -> np.ndarray:
    """Just the matching item IDs, no availability analysis."""
    _validate(index, selection)
    return _combine(
        index, _group_vectors(index, selection.positives()), selection.negatives()
    )


def evaluate(index: AssociationIndex, selection: Selection) -> QueryResult:
    _validate(index, selection)
    positives = selection.positives()
    negatives = selection.negatives()
    group_vecs = _group_vectors(index, positives)
    matching = _combine(index, group_vecs, negatives)

    hist = index.category_counts_over(matching)
    hypothetical = hist.copy()

    # Inside an ANY group that already has picks, one more pick grows the
    # result instead of narrowing it: count the items the group currently
    # blocks that the candidate would let through.
    for g, vec in group_vecs.items():
        if index.group_combinators[g] != ANY:
            continue
        rest = _combine(
            index,
            {h: v for h, v in group_vecs.items() if h != g},
            negatives,
        )
        recovered = difference(rest, matching) if len(matching) else rest
        extra = index.category_counts_over(recovered)
        in_group = np.flatnonzero(index.group_of == g)
        hypothetical[in_group] = len(matching) + extra[in_group]

    chosen = selection.cats()
    available: dict[int, int] = {}
    unavailable: list[int] = []
    for c in range(index.n):
        if c in chosen:
            continue
        v = int(hypothetical[c])
        if v > 0:
            available[c] = v
        else:
            unavailable.append(c)
    selected = {e.cat: int(hist[e.cat]) for e in selection.entries}

    return QueryResult(
        selection=selection,
        items=matching,
        available=available,
        unavailable=tuple(unavailable),
        selected=selected,
    )


def refine(
    index: AssociationIndex,
    selection: Selection,
    cat: int,
    negated: bool = False,
) -> QueryResult:
    """Evaluate the selection with one more entry added."""
    nxt = selection.negate(cat) if negated else selection.select(cat)
    return evaluate(index, nxt)


class FirstClickCache:
    """Precomputed answers for every possible first click.

    Stores the full category co-occurrence count table: row i holds, for
    each category c, how many items carry both i and c (the diagonal is the
    plain per-category item count). A single positive selection can then be
    answered without touching the index postings at all, which is where a
    landing page spends nearly all of its query volume.

    The cache pins the fingerprint of the index it was built from;
    :meth:`result` refuses to serve a different index.
    """

    def __init__(self, index: AssociationIndex):
        n = index.n
        counts = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            counts[i] = index.category_counts_over(index.postings(i))
        counts.flags.writeable = False
        self.counts = counts
        self.item_counts = counts.diagonal().copy()
        self.index_fingerprint = fingerprint(index)

    @property
    def n(self) -> int:
        return len(self.item_counts)

    def pair_count(self, a: int, b: int) -> int:
        """Items carrying both categories."""
        return int(self.counts[a, b])

    def row(self, cat: int) -> np.ndarray:
        return self.counts[cat]

    def _check(self, index: AssociationIndex) -> None:
        if fingerprint(index) != self.index_fingerprint:
            raise StaleCacheError(
                "first-click cache was built from a different index"
            )

    def result(
        self, index: AssociationIndex, cat: int, verify: bool = False
    ) -> QueryResult:
        """The QueryResult for selecting just ``cat``, straight from cache.

        Byte-for-byte identical to ``evaluate(index, Selection.of(cat))``.
        With ``verify`` the index fingerprint is recomputed first, which
        costs more than the lookup saves; leave it off on trusted wiring.
        """
        if verify:
            self._check(index)
        elif index.n != self.n:
            # free structural guard; full hash check is opt-in
            raise StaleCacheError(
                "first-click cache was built from a different index"
            )
        if not 0 <= cat < self.n:
            raise UnknownCategoryError(f"category id {cat} out of range")
        row = self.counts[cat]
        matching = index.postings(cat)
        group = int(index.group_of[cat])
        if index.group_combinators[group] == ANY:
            # Same-group candidates OR with the pick: total both sides,
            # minus the overlap already inside the current matches.
            in_group = np.flatnonzero(index.group_of == group)
            hypothetical = row.copy()
            hypothetical[in_group] = (
                len(matching) + self.item_counts[in_group] - row[in_group]
            )
        else:
            hypothetical = row
        available: dict[int, int] = {}
        unavailable: list[int] = []
        for c in range(self.n):
            if c == cat:
                continue
            v = int(hypothetical[c])
            if v > 0:
                available[c] = v
            else:
                unavailable.append(c)
        return QueryResult(
            selection=Selection.of(cat),
            items=matching,
            available=available,
            unavailable=tuple(unavailable),
            selected={cat: int(row[cat])},
        )


def first_click(
    index: AssociationIndex, cache: FirstClickCache, cat: int
) -> QueryResult:
    """Cached single-category evaluation with a staleness check."""
    cache._check(index)
    return cache.result(index, cat)
