"""The association index: category↔item incidence kept as posting vectors.

The whole engine runs off one structure, a binary category-by-item matrix
stored in its ID-vector form: per category, the strictly increasing vector of
item IDs carrying it, and per item the strictly increasing vector of its
category IDs. Both directions are held CSR-style (one flat int32 data array
plus offsets) so a million-link index costs about 4 bytes per link per
direction, with no per-row object overhead.

An AssociationIndex is immutable after build: all arrays are marked
read-only and every operation in the package treats it as a value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import BuildError, ShardError, UnknownCategoryError
from .postings import ID_DTYPE, gather_ranges

ALL = "ALL"
ANY = "ANY"
COMBINATORS = (ALL, ANY)

DEFAULT_GROUP = "default"

# IDs are 32-bit by design (the 4-bytes-per-link memory model).
_MAX_IDS = 2**31 - 1


@dataclass(frozen=True)
class IndexStats:
    """Linear (degree/sum) statistics of an index.

    ``link_count`` is the total number of category↔item associations; the
    per-item and per-category means relate through
    mean_cats_per_item / mean_items_per_category = n / N, exactly.
    Standard deviations are population (divide by n resp. N).
    """

    n: int
    N: int
    link_count: int
    mean_cats_per_item: float
    mean_items_per_category: float
    std_cats_per_item: float
    std_items_per_category: float
    density: float
    memory_estimate_bytes: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "link_count": self.link_count,
            "mean_cats_per_item": self.mean_cats_per_item,
            "mean_items_per_category": self.mean_items_per_category,
            "std_cats_per_item": self.std_cats_per_item,
            "std_items_per_category": self.std_items_per_category,
            "density": self.density,
            "memory_estimate_bytes": self.memory_estimate_bytes,
        }


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(eq=False)
class AssociationIndex:
    """Immutable category↔item association matrix in posting-vector form.

    Item IDs are ``item_base .. item_base + N - 1``; a freshly built index
    has ``item_base == 0`` and shards produced by :meth:`shard` keep their
    parent's global item IDs. Category IDs are always ``0 .. n - 1`` against
    the full category table, which shards share with their parent (a shard
    may therefore hold categories with empty postings; a built index never
    does).
    """

    category_names: tuple[str, ...]
    item_names: tuple[str, ...]
    group_names: tuple[str, ...]
    group_combinators: tuple[str, ...]
    group_of: np.ndarray  # category id -> group id
    item_base: int
    # CSR storage. cat_data holds global item IDs row-per-category;
    # item_data holds category IDs row-per-item (local item order).
    cat_indptr: np.ndarray
    cat_data: np.ndarray
    item_indptr: np.ndarray
    item_data: np.ndarray
    _category_ids: dict[str, int] | None = field(default=None, repr=False)
    _item_ids: dict[str, int] | None = field(default=None, repr=False)

    # -- identity ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.category_names)

    @property
    def N(self) -> int:
        return len(self.item_names)

    @property
    def link_count(self) -> int:
        return int(len(self.cat_data))

    def item_id_bounds(self) -> tuple[int, int]:
        """Half-open global item ID range [lo, hi) this index holds."""
        return self.item_base, self.item_base + self.N

    def all_items(self) -> np.ndarray:
        out = np.arange(self.item_base, self.item_base + self.N, dtype=ID_DTYPE)
        return _freeze(out)

    # -- name tables ------------------------------------------------------

    def category_id(self, name: str) -> int:
        if self._category_ids is None:
            self._category_ids = {s: i for i, s in enumerate(self.category_names)}
        try:
            return self._category_ids[name]
        except KeyError:
            raise UnknownCategoryError(f"unknown category {name!r}") from None

    def item_id(self, name: str) -> int:
        if self._item_ids is None:
            self._item_ids = {s: j for j, s in enumerate(self.item_names)}
        return self._item_ids[name] + self.item_base

    def category_name(self, cat: int) -> str:
        return self.category_names[cat]

    def item_name(self, item: int) -> str:
        return self.item_names[item - self.item_base]

    # -- the relation -----------------------------------------------------

    def postings(self, cat: int) -> np.ndarray:
        """Global item IDs assigned category ``cat``, strictly increasing."""
        if not 0 <= cat < self.n:
            raise UnknownCategoryError(f"category id {cat} out of range")
        return self.cat_data[self.cat_indptr[cat]:self.cat_indptr[cat + 1]]

    def cats_of(self, item: int) -> np.ndarray:
        """Category IDs of global item ``item``, strictly increasing."""
        j = item - self.item_base
        if not 0 <= j < self.N:
            raise KeyError(f"item id {item} out of range")
        return self.item_data[self.item_indptr[j]:self.item_indptr[j + 1]]

    def category_counts_over(self, items: np.ndarray) -> np.ndarray:
        """Histogram of categories across the given global item IDs.

        Returns an int64 array of length n where slot i is the number of the
        given items carrying category i. This is the first-click/facet-count
        primitive: one gather plus one bincount, linear in the links touched.
        """
        local = np.asarray(items) - self.item_base
        cats = gather_ranges(self.item_data, self.item_indptr, local)
        return np.bincount(cats, minlength=self.n)

    def items(self) -> Iterator[tuple[str, tuple[str, ...]]]:
        """Yield (item name, category names) in item ID order: the dump
        that :func:`build_index` round-trips."""
        for j in range(self.N):
            cats = self.item_data[self.item_indptr[j]:self.item_indptr[j + 1]]
            yield self.item_names[j], tuple(self.category_names[c] for c in cats)

    # -- linear statistics --------------------------------------------------

    def degrees(self) -> tuple[np.ndarray, np.ndarray]:
        """(items per category, categories per item) as int64 arrays.

        The first is indexed by category ID; the second by local item
        position (global ID minus ``item_base``).
        """
        per_cat = np.diff(self.cat_indptr)
        per_item = np.diff(self.item_indptr)
        return per_cat, per_item

    def stats(self) -> IndexStats:
        per_cat, per_item = self.degrees()
        s = self.link_count
        return IndexStats(
            n=self.n,
            N=self.N,
            link_count=s,
            mean_cats_per_item=s / self.N,
            mean_items_per_category=s / self.n,
            std_cats_per_item=float(np.std(per_item)),
            std_items_per_category=float(np.std(per_cat)),
            density=s / (self.n * self.N),
            memory_estimate_bytes=4 * s,
        )

    # -- sharding -----------------------------------------------------------

    def shard(self, k: int) -> list["AssociationIndex"]:
        """Split into ``k`` contiguous item-range shards.

        Every shard keeps the full category table (global category IDs) and
        global item IDs; concatenating the shards' relations reconstructs
        this index exactly.
        """
        if k < 1:
            raise ShardError(f"shard count must be >= 1, got {k}")
        if k > self.N:
            raise ShardError(f"shard count {k} exceeds item count {self.N}")
        bounds = np.linspace(0, self.N, k + 1).astype(int)
        shards = []
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            item_ptr = (self.item_indptr[lo:hi + 1] - self.item_indptr[lo]).copy()
            item_dat = self.item_data[self.item_indptr[lo]:self.item_indptr[hi]].copy()
            glo = self.item_base + int(lo)
            ghi = self.item_base + int(hi)
            cat_rows = []
            for c in range(self.n):
                row = self.postings(c)
                a, b = np.searchsorted(row, (glo, ghi))
                cat_rows.append(row[a:b])
            cat_ptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum([len(r) for r in cat_rows], out=cat_ptr[1:])
            cat_dat = (
                np.concatenate(cat_rows).astype(ID_DTYPE)
                if cat_ptr[-1]
                else np.empty(0, dtype=ID_DTYPE)
            )
            shards.append(
                AssociationIndex(
                    category_names=self.category_names,
                    item_names=self.item_names[lo:hi],
                    group_names=self.group_names,
                    group_combinators=self.group_combinators,
                    group_of=self.group_of,
                    item_base=glo,
                    cat_indptr=_freeze(cat_ptr),
                    cat_data=_freeze(cat_dat),
                    item_indptr=_freeze(item_ptr),
                    item_data=_freeze(item_dat),
                )
            )
        return shards


def build_index(
    assignments: Iterable[tuple[str, Iterable[str]]],
    grouping: Mapping[str, tuple[str, str]] | None = None,
) -> AssociationIndex:
    """Build an index from (item name, category names) pairs.

    Item IDs follow input order; category IDs follow first appearance, with
    each item's category set scanned lexicographically (the input carries
    *sets*, so a within-item order is fixed to keep snapshots bit-stable).

    ``grouping`` maps a category name to its (group name, combinator); any
    category not mentioned lands in the implicit ALL group. Groups drive the
    implied operator between selected members (ALL = AND, ANY = OR).

    Raises BuildError on duplicate item names, an item with no categories,
    or a grouping entry for a category no item uses.
    """
    grouping = dict(grouping or {})
    item_names: list[str] = []
    seen_items: set[str] = set()
    cat_ids: dict[str, int] = {}
    cat_names: list[str] = []
    item_rows: list[np.ndarray] = []
    cat_rows: list[list[int]] = []

    for item_name, cats in assignments:
        names = sorted(set(cats))
        if not names:
            raise BuildError(f"item {item_name!r} has no categories")
        if item_name in seen_items:
            raise BuildError(f"duplicate item name {item_name!r}")
        seen_items.add(item_name)
        j = len(item_names)
        item_names.append(item_name)
        row = []
        for name in names:
            c = cat_ids.get(name)
            if c is None:
                c = len(cat_names)
                cat_ids[name] = c
                cat_names.append(name)
                cat_rows.append([])
            row.append(c)
            cat_rows[c].append(j)
        row.sort()
        item_rows.append(np.asarray(row, dtype=ID_DTYPE))

    if not item_names:
        raise BuildError("no items to index")
    if len(cat_names) > _MAX_IDS or len(item_names) > _MAX_IDS:
        raise BuildError("index exceeds 32-bit ID space")

    unused = sorted(set(grouping) - set(cat_ids))
    if unused:
        raise BuildError(f"grouping references unused categories: {unused}")

    group_ids: dict[str, int] = {}
    group_names: list[str] = []
    group_combs: list[str] = []
    group_of = np.zeros(len(cat_names), dtype=ID_DTYPE)
    for c, name in enumerate(cat_names):
        gname, comb = grouping.get(name, (DEFAULT_GROUP, ALL))
        if comb not in COMBINATORS:
            raise BuildError(f"bad combinator {comb!r} for category {name!r}")
        g = group_ids.get(gname)
        if g is None:
            g = len(group_names)
            group_ids[gname] = g
            group_names.append(gname)
            group_combs.append(comb)
        elif group_combs[g] != comb:
            raise BuildError(f"group {gname!r} declared with conflicting combinators")
        group_of[c] = g

    item_indptr = np.zeros(len(item_names) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in item_rows], out=item_indptr[1:])
    item_data = np.concatenate(item_rows).astype(ID_DTYPE)
    cat_indptr = np.zeros(len(cat_names) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in cat_rows], out=cat_indptr[1:])
    cat_data = np.asarray(
        [j for row in cat_rows for j in row], dtype=ID_DTYPE
    )

    return AssociationIndex(
        category_names=tuple(cat_names),
        item_names=tuple(item_names),
        group_names=tuple(group_names),
        group_combinators=tuple(group_combs),
        group_of=_freeze(group_of),
        item_base=0,
        cat_indptr=_freeze(cat_indptr),
        cat_data=_freeze(cat_data),
        item_indptr=_freeze(item_indptr),
        item_data=_freeze(item_data),
    )


def from_arrays(
    item_cats: Sequence[np.ndarray],
    n: int,
    item_names: Sequence[str] | None = None,
    category_names: Sequence[str] | None = None,
) -> AssociationIndex:
    """Fast constructor from per-item category-ID arrays (one implicit group).

    Used by the simulation harness where names are synthetic; rows must be
    strictly increasing arrays of category IDs below ``n`` and every category
    must be used at least once.
    """
    N = len(item_cats)
    if N == 0:
        raise BuildError("no items to index")
    item_indptr = np.zeros(N + 1, dtype=np.int64)
    np.cumsum([len(r) for r in item_cats], out=item_indptr[1:])
    item_data = (
        np.concatenate(item_cats).astype(ID_DTYPE)
        if item_indptr[-1]
        else np.empty(0, dtype=ID_DTYPE)
    )
    if item_indptr[-1] == 0 or np.any(np.diff(item_indptr) == 0):
        raise BuildError("every item needs at least one category")
    if item_data.min() < 0 or item_data.max() >= n:
        raise BuildError("category id out of range")

    # Transpose: stable sort by category keeps item order within each row.
    # Unused category ids are allowed here (their postings stay empty), the
    # caller owns the category table.
    items_flat = np.repeat(
        np.arange(N, dtype=ID_DTYPE), np.diff(item_indptr)
    )
    order = np.argsort(item_data, kind="stable")
    cat_data = items_flat[order]
    counts = np.bincount(item_data, minlength=n)
    cat_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=cat_indptr[1:])

    if item_names is None:
        width = len(str(N - 1))
        item_names = tuple(f"item{j:0{width}d}" for j in range(N))
    if category_names is None:
        width = len(str(n - 1))
        category_names = tuple(f"cat{i:0{width}d}" for i in range(n))

    return AssociationIndex(
        category_names=tuple(category_names),
        item_names=tuple(item_names),
        group_names=(DEFAULT_GROUP,),
        group_combinators=(ALL,),
        group_of=_freeze(np.zeros(n, dtype=ID_DTYPE)),
        item_base=0,
        cat_indptr=_freeze(cat_indptr),
        cat_data=_freeze(cat_data),
        item_indptr=_freeze(item_indptr),
        item_data=_freeze(item_data),
    )
