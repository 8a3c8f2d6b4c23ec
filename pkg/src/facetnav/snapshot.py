"""Canonical persistence for association indexes.

A snapshot is one JSON document with a fixed key order, compact separators
and raw (non-escaped) UTF-8, so equal indexes always serialize to identical
bytes. The SHA-256 of those bytes is the index fingerprint, used for cache
staleness checks and shard compatibility. Round-trips are byte-exact:
``canonical_bytes(load_bytes(canonical_bytes(ix))) == canonical_bytes(ix)``.

Layout::

    {"format":"tie-snapshot-1",
     "categories":[{"id":0,"name":...,"group":...,"combinator":"ALL"},...],
     "items":[{"id":0,"name":...,"cats":[0,3]},...]}

Both arrays are sorted by id; item ids are global (a shard snapshot starts
at the shard's base id) and must be contiguous. Categories with empty
postings are legal here, shards produce them.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ShardError, SnapshotError
from .index import ALL, COMBINATORS, AssociationIndex, _freeze
from .postings import ID_DTYPE

FORMAT = "tie-snapshot-1"


def canonical_bytes(index: AssociationIndex) -> bytes:
    """Serialize to the canonical byte form."""
    group = index.group_of
    categories = [
        {
            "id": i,
            "name": index.category_names[i],
            "group": index.group_names[group[i]],
            "combinator": index.group_combinators[group[i]],
        }
        for i in range(index.n)
    ]
    indptr = index.item_indptr
    data = index.item_data
    items = [
        {
            "id": index.item_base + j,
            "name": index.item_names[j],
            "cats": [int(c) for c in data[indptr[j]:indptr[j + 1]]],
        }
        for j in range(index.N)
    ]
    doc = {"format": FORMAT, "categories": categories, "items": items}
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def fingerprint(index: AssociationIndex) -> str:
    """SHA-256 hex digest of the canonical bytes."""
    return hashlib.sha256(canonical_bytes(index)).hexdigest()


def category_table_fingerprint(index: AssociationIndex) -> str:
    """Digest of the category table alone; shards of one parent share it."""
    group = index.group_of
    categories = [
        {
            "id": i,
            "name": index.category_names[i],
            "group": index.group_names[group[i]],
            "combinator": index.group_combinators[group[i]],
        }
        for i in range(index.n)
    ]
    blob = json.dumps(categories, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def save(index: AssociationIndex, path: str | Path) -> str:
    """Write the snapshot file; returns its fingerprint."""
    blob = canonical_bytes(index)
    Path(path).write_bytes(blob)
    return hashlib.sha256(blob).hexdigest()


def load(path: str | Path, expected_fingerprint: str | None = None) -> AssociationIndex:
    """Read a snapshot file back into an index.

    When ``expected_fingerprint`` is given the file's digest must match it
    before any parsing happens.
    """
    blob = Path(path).read_bytes()
    return load_bytes(blob, expected_fingerprint)


def load_bytes(
    blob: bytes, expected_fingerprint: str | None = None
) -> AssociationIndex:
    if expected_fingerprint is not None:
        digest = hashlib.sha256(blob).hexdigest()
        if digest != expected_fingerprint:
            raise SnapshotError(
                f"fingerprint mismatch: expected {expected_fingerprint}, got {digest}"
            )
    try:
        doc = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SnapshotError(f"unreadable snapshot: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise SnapshotError(f"unsupported snapshot format {doc.get('format')!r}")

    try:
        raw_cats = doc["categories"]
        raw_items = doc["items"]
    except KeyError as exc:
        raise SnapshotError(f"snapshot missing key {exc}") from exc
    if not raw_items:
        raise SnapshotError("snapshot has no items")
    if not raw_cats:
        raise SnapshotError("snapshot has no categories")

    cat_names: list[str] = []
    group_ids: dict[str, int] = {}
    group_names: list[str] = []
    group_combs: list[str] = []
    group_of = np.zeros(len(raw_cats), dtype=ID_DTYPE)
    for i, rec in enumerate(raw_cats):
        try:
            if rec["id"] != i:
                raise SnapshotError(f"category ids not contiguous at {i}")
            name, gname, comb = rec["name"], rec["group"], rec["combinator"]
        except (KeyError, TypeError) as exc:
            raise SnapshotError(f"bad category record at {i}: {exc}") from exc
        if comb not in COMBINATORS:
            raise SnapshotError(f"bad combinator {comb!r} for category {name!r}")
        g = group_ids.get(gname)
        if g is None:
            g = len(group_names)
            group_ids[gname] = g
            group_names.append(gname)
            group_combs.append(comb)
        elif group_combs[g] != comb:
            raise SnapshotError(f"group {gname!r} has conflicting combinators")
        cat_names.append(name)
        group_of[i] = g
    if len(set(cat_names)) != len(cat_names):
        raise SnapshotError("duplicate category names")

    n = len(cat_names)
    base = raw_items[0].get("id")
    if not isinstance(base, int):
        raise SnapshotError("bad item id in first record")
    item_names: list[str] = []
    rows: list[list[int]] = []
    for j, rec in enumerate(raw_items):
        try:
            gid, name, cats = rec["id"], rec["name"], rec["cats"]
        except (KeyError, TypeError) as exc:
            raise SnapshotError(f"bad item record at {j}: {exc}") from exc
        if gid != base + j:
            raise SnapshotError(f"item ids not contiguous at {gid}")
        if not cats:
            raise SnapshotError(f"item {name!r} has no categories")
        if any(cats[k] >= cats[k + 1] for k in range(len(cats) - 1)):
            raise SnapshotError(f"item {name!r} categories not strictly increasing")
        if cats[0] < 0 or cats[-1] >= n:
            raise SnapshotError(f"item {name!r} references unknown category id")
        item_names.append(name)
        rows.append(cats)
    if len(set(item_names)) != len(item_names):
        raise SnapshotError("duplicate item names")

    N = len(rows)
    item_indptr = np.zeros(N + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=item_indptr[1:])
    item_data = np.asarray([c for row in rows for c in row], dtype=ID_DTYPE)

    # Transpose to per-category postings; stable sort keeps item order.
    items_flat = np.repeat(
        np.arange(base, base + N, dtype=ID_DTYPE), np.diff(item_indptr)
    )
    order = np.argsort(item_data, kind="stable")
    cat_data = items_flat[order]
    cat_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(item_data, minlength=n), out=cat_indptr[1:])

    return AssociationIndex(
        category_names=tuple(cat_names),
        item_names=tuple(item_names),
        group_names=tuple(group_names),
        group_combinators=tuple(group_combs),
        group_of=_freeze(group_of),
        item_base=base,
        cat_indptr=_freeze(cat_indptr),
        cat_data=_freeze(cat_data.astype(ID_DTYPE)),
        item_indptr=_freeze(item_indptr),
        item_data=_freeze(item_data),
    )


def merge_shards(shards: Sequence[AssociationIndex]) -> AssociationIndex:
    """Reassemble contiguous shards into one index.

    All shards must share one category table and their item ranges must
    tile a contiguous span; merging a full shard set reproduces the parent
    byte-for-byte (equal fingerprints).
    """
    if not shards:
        raise ShardError("no shards to merge")
    table = category_table_fingerprint(shards[0])
    for s in shards[1:]:
        if category_table_fingerprint(s) != table:
            raise ShardError("shards disagree on the category table")
    parts = sorted(shards, key=lambda s: s.item_base)
    for prev, cur in zip(parts, parts[1:]):
        if prev.item_base + prev.N != cur.item_base:
            raise ShardError(
                f"item ranges not contiguous at {prev.item_base + prev.N}"
            )

    first = parts[0]
    n = first.n
    item_names = tuple(name for s in parts for name in s.item_names)
    item_data = np.concatenate([s.item_data for s in parts])
    counts = np.concatenate([np.diff(s.item_indptr) for s in parts])
    item_indptr = np.zeros(len(item_names) + 1, dtype=np.int64)
    np.cumsum(counts, out=item_indptr[1:])

    cat_rows = [np.concatenate([s.postings(c) for s in parts]) for c in range(n)]
    cat_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum([len(r) for r in cat_rows], out=cat_indptr[1:])
    cat_data = (
        np.concatenate(cat_rows).astype(ID_DTYPE)
        if cat_indptr[-1]
        else np.empty(0, dtype=ID_DTYPE)
    )

    return AssociationIndex(
        category_names=first.category_names,
        item_names=item_names,
        group_names=first.group_names,
        group_combinators=first.group_combinators,
        group_of=first.group_of,
        item_base=first.item_base,
        cat_indptr=_freeze(cat_indptr),
        cat_data=_freeze(cat_data),
        item_indptr=_freeze(item_indptr),
        item_data=_freeze(item_data),
    )
