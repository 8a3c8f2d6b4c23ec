"""Set algebra over posting vectors.

A posting vector is a strictly increasing numpy array of int32 IDs. Binary
product (AND) and binary addition (OR) of the underlying 0/1 vectors are
realized directly on the ID form as merge intersection and merge union, so
costs stay linear in the combined input length instead of in the universe
size.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

ID_DTYPE = np.int32

_EMPTY = np.empty(0, dtype=ID_DTYPE)
_EMPTY.flags.writeable = False

# Below this size ratio the smaller side is binary-searched into the larger,
# which costs min*log(max): under the linear-merge budget for skewed inputs.
_GALLOP_RATIO = 16


def empty() -> np.ndarray:
    return _EMPTY


def as_postings(ids: Iterable[int]) -> np.ndarray:
    """Coerce ``ids`` to a validated posting vector (strictly increasing int32)."""
    arr = np.asarray(list(ids) if not isinstance(ids, (np.ndarray, Sequence)) else ids)
    arr = arr.astype(ID_DTYPE, copy=True).reshape(-1)
    if arr.size > 1 and not np.all(arr[1:] > arr[:-1]):
        raise ValueError("posting vector must be strictly increasing")
    arr.flags.writeable = False
    return arr


def _coerce(v) -> np.ndarray:
    return v if isinstance(v, np.ndarray) else as_postings(v)


def intersect(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """IDs present in both vectors (boolean AND of the binary vectors)."""
    v1, v2 = _coerce(v1), _coerce(v2)
    if len(v1) == 0 or len(v2) == 0:
        return _EMPTY
    small, large = (v1, v2) if len(v1) <= len(v2) else (v2, v1)
    if len(small) * _GALLOP_RATIO < len(large):
        pos = np.searchsorted(large, small)
        pos[pos == len(large)] = 0  # any in-range slot; mismatch filtered below
        out = small[large[pos] == small]
    else:
        # Merge path: stable sort on the concatenation is a radix pass for
        # int32, so duplicates (= members of both inputs) surface in linear time.
        merged = np.concatenate([v1, v2])
        merged.sort(kind="stable")
        out = merged[:-1][merged[1:] == merged[:-1]]
    out = np.ascontiguousarray(out)
    out.flags.writeable = False
    return out


def union_b(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """IDs present in either vector (binary addition / boolean OR)."""
    v1, v2 = _coerce(v1), _coerce(v2)
    if len(v1) == 0:
        return v2
    if len(v2) == 0:
        return v1
    merged = np.concatenate([v1, v2])
    merged.sort(kind="stable")
    keep = np.empty(len(merged), dtype=bool)
    keep[0] = True
    np.not_equal(merged[1:], merged[:-1], out=keep[1:])
    out = merged[keep]
    out.flags.writeable = False
    return out


def difference(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """IDs of ``v1`` not present in ``v2`` (AND NOT)."""
    v1, v2 = _coerce(v1), _coerce(v2)
    if len(v1) == 0 or len(v2) == 0:
        return v1
    pos = np.searchsorted(v2, v1)
    pos[pos == len(v2)] = 0
    out = v1[v2[pos] != v1]
    out.flags.writeable = False
    return out


def intersect_many(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Fold of :func:`intersect`, smallest inputs first so the running
    intersection shrinks as early as possible."""
    if not vectors:
        raise ValueError("intersect_many needs at least one vector")
    acc = None
    for v in sorted(vectors, key=len):
        acc = v if acc is None else intersect(acc, v)
        if len(acc) == 0:
            return _EMPTY
    return acc


def union_many(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """n-way binary addition via one concatenation and one stable sort."""
    vectors = [v for v in vectors if len(v)]
    if not vectors:
        return _EMPTY
    if len(vectors) == 1:
        return vectors[0]
    merged = np.concatenate(vectors)
    merged.sort(kind="stable")
    keep = np.empty(len(merged), dtype=bool)
    keep[0] = True
    np.not_equal(merged[1:], merged[:-1], out=keep[1:])
    out = merged[keep]
    out.flags.writeable = False
    return out


def gather_ranges(data: np.ndarray, indptr: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Concatenate ``data[indptr[r]:indptr[r+1]]`` for every r in ``rows``.

    Vectorized multi-range gather over CSR-style storage; the workhorse for
    counting categories across a set of matching items.
    """
    if len(rows) == 0:
        return _EMPTY
    starts = indptr[rows]
    lengths = indptr[rows + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return _EMPTY
    # Positions within the output, shifted back to source offsets per range.
    bounds = np.cumsum(lengths)
    take = np.arange(total, dtype=np.int64)
    take += np.repeat(starts.astype(np.int64) - (bounds - lengths), lengths)
    return data[take]
