"""Stateless HTTP facade over the query engine and the typeahead index.

Selections travel in the request, so any replica holding the same snapshot
gives byte-identical answers: response JSON is rendered with a fixed key
order and compact separators, and the sharded backend is exact, not
approximate: answers merged from shards match the unsharded index down to
the byte.

Endpoints: GET /meta, POST /query, POST /typeahead, GET /healthz. Category
references in requests may be names or IDs; responses carry IDs plus a
name map. Errors are JSON {code, message, detail}.
"""

from __future__ import annotations

import json
from typing import Any, Sequence

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import Response

from .alpha import (
    MODES,
    POSITION_INDEPENDENT,
    AlphaIndex,
    build_alpha_index,
    complete,
    type_key,
)
from .errors import (
    FacetnavError,
    KeystrokeRejected,
    ShardError,
    UnknownCategoryError,
)
from .index import AssociationIndex
from .query import FirstClickCache, QueryResult, Selection, evaluate
from .snapshot import fingerprint, merge_shards

DEFAULT_PAGE_LIMIT = 50


# ---------------------------------------------------------------------------
# Scatter-gather


def _compatible(shards: Sequence[AssociationIndex]) -> None:
    first = shards[0]
    for s in shards[1:]:
        # shard() hands every shard the parent's tuple, so identity is the
        # common case; distinct objects get a real comparison.
        if s.category_names is not first.category_names and (
            s.category_names != first.category_names
            or s.group_names != first.group_names
            or s.group_combinators != first.group_combinators
            or not np.array_equal(s.group_of, first.group_of)
        ):
            raise ShardError("shards disagree on the category table")
    cursor = None
    for s in sorted(shards, key=lambda s: s.item_base):
        if cursor is not None and s.item_base != cursor:
            raise ShardError(f"item ranges not contiguous at {cursor}")
        cursor = s.item_base + s.N


def scatter_gather(
    shards: Sequence[AssociationIndex],
    selection: Selection,
    validate: bool = True,
) -> QueryResult:
    """Evaluate on every shard and merge: concatenated items, summed counts.

    Exactly equals evaluating the unsharded index; the per-shard counts
    are disjoint contributions, so addition is the whole merge. A missing
    shard (None in the sequence) fails the request; partial answers would
    silently break the fruitfulness contract.
    """
    if not shards:
        raise ShardError("no shards")
    missing = [k for k, s in enumerate(shards) if s is None]
    if missing:
        raise ShardError(f"shard {missing[0]} unavailable")
    if validate:
        _compatible(shards)
    parts = sorted(shards, key=lambda s: s.item_base)
    results = [evaluate(s, selection) for s in parts]
    if len(results) == 1:
        return results[0]

    n = parts[0].n
    items = np.concatenate([r.items for r in results])
    items.flags.writeable = False
    totals = np.zeros(n, dtype=np.int64)
    for r in results:
        for c, v in r.available.items():
            totals[c] += v
    chosen = selection.cats()
    available: dict[int, int] = {}
    unavailable: list[int] = []
    for c in range(n):
        if c in chosen:
            continue
        if totals[c] > 0:
            available[c] = int(totals[c])
        else:
            unavailable.append(c)
    selected: dict[int, int] = {e.cat: 0 for e in selection.entries}
    for r in results:
        for c, v in r.selected.items():
            selected[c] += v
    return QueryResult(
        selection=selection,
        items=items,
        available=available,
        unavailable=tuple(unavailable),
        selected=selected,
    )


# ---------------------------------------------------------------------------
# Backends


class LocalBackend:
    """One in-process index, single selections answered from the cache."""

    def __init__(self, index: AssociationIndex, use_cache: bool = True):
        self.index = index
        self.fingerprint = fingerprint(index)
        self.cache = FirstClickCache(index) if use_cache else None

    def evaluate(self, selection: Selection) -> QueryResult:
        if (
            self.cache is not None
            and len(selection.entries) == 1
            and not selection.entries[0].negated
        ):
            return self.cache.result(self.index, selection.entries[0].cat)
        return evaluate(self.index, selection)


class ShardedBackend:
    """In-process shard set behind the same interface.

    Compatibility is checked once here; the public fingerprint is the
    merged parent's, so replicas serving shards and replicas serving the
    whole index report the same identity.
    """

    def __init__(self, shards: Sequence[AssociationIndex]):
        if not shards or any(s is None for s in shards):
            raise ShardError("incomplete shard set")
        _compatible(shards)
        self.shards = sorted(shards, key=lambda s: s.item_base)
        merged = merge_shards(self.shards)
        self.index = merged
        self.fingerprint = fingerprint(merged)
        self.cache = None

    def evaluate(self, selection: Selection) -> QueryResult:
        return scatter_gather(self.shards, selection, validate=False)


# ---------------------------------------------------------------------------
# FastAPI app


def _resolve_cat(index: AssociationIndex, ref: Any) -> int:
    if isinstance(ref, bool):
        raise UnknownCategoryError(f"bad category reference {ref!r}")
    if isinstance(ref, int):
        if not 0 <= ref < index.n:
            raise UnknownCategoryError(f"category id {ref} out of range")
        return ref
    if isinstance(ref, str):
        return index.category_id(ref)
    raise UnknownCategoryError(f"bad category reference {ref!r}")


def _parse_selection(index: AssociationIndex, raw: Any) -> Selection:
    if raw is None:
        return Selection()
    if not isinstance(raw, list):
        raise ValueError("selection must be a list")
    sel = Selection()
    for entry in raw:
        if not isinstance(entry, dict) or "cat" not in entry:
            raise ValueError("selection entries are objects with a 'cat' key")
        cat = _resolve_cat(index, entry["cat"])
        neg = bool(entry.get("neg", False))
        sel = sel.negate(cat) if neg else sel.select(cat)
    return sel


def _page(raw: Any, key: str, default: int) -> int:
    if raw is None:
        return default
    if not isinstance(raw, int) or isinstance(raw, bool) or raw < 0:
        raise ValueError(f"{key} must be a non-negative integer")
    return raw


def _query_body(
    index: AssociationIndex, result: QueryResult, offset: int, limit: int
) -> dict:
    groups: dict[int, list[dict]] = {}
    for c, count in result.available.items():
        groups.setdefault(int(index.group_of[c]), []).append(
            {"cat": c, "count": count}
        )
    available = [
        {
            "group": g,
            "name": index.group_names[g],
            "combinator": index.group_combinators[g],
            "categories": groups[g],
        }
        for g in sorted(groups)
    ]
    page = result.items[offset : offset + limit]
    names: dict[str, str] = {}
    for c in result.available:
        names[str(c)] = index.category_names[c]
    for c in result.unavailable:
        names[str(c)] = index.category_names[c]
    for e in result.selection.entries:
        names[str(e.cat)] = index.category_names[e.cat]
    return {
        "selection": [
            {"cat": e.cat, "neg": e.negated} for e in result.selection.entries
        ],
        "item_count": result.item_count,
        "offset": offset,
        "limit": limit,
        "items": [
            {"id": int(j), "name": index.item_name(int(j))} for j in page
        ],
        "available": available,
        "unavailable": [int(c) for c in result.unavailable],
        "selected": [
            {"cat": e.cat, "count": result.selected[e.cat], "neg": e.negated}
            for e in result.selection.entries
        ],
        "names": names,
    }


def create_app(
    index: AssociationIndex | None = None,
    shards: Sequence[AssociationIndex] | None = None,
    use_cache: bool = True,
    typeahead_modes: Sequence[str] = MODES,
):
    """Wire an app around one index or one shard set (exactly one of them)."""
    if (index is None) == (shards is None):
        raise ValueError("pass exactly one of index or shards")
    backend = (
        LocalBackend(index, use_cache=use_cache)
        if index is not None
        else ShardedBackend(shards)
    )
    served = backend.index

    alpha_by_mode: dict[str, AlphaIndex] = {
        mode: build_alpha_index(served.item_names, mode)
        for mode in typeahead_modes
    }

    class CanonicalJSON(Response):
        media_type = "application/json"

        def render(self, content: Any) -> bytes:
            return json.dumps(
                content, ensure_ascii=False, separators=(",", ":")
            ).encode("utf-8")

    app = FastAPI(default_response_class=CanonicalJSON)

    def error_body(code: str, message: str, detail: Any = None) -> dict:
        return {"code": code, "message": message, "detail": detail}

    @app.exception_handler(FacetnavError)
    async def _facetnav_error(request: Request, exc: FacetnavError):
        return CanonicalJSON(
            error_body(exc.code, str(exc)), status_code=400
        )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return CanonicalJSON(
            error_body("bad_request", str(exc)), status_code=400
        )

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok", "fingerprint": backend.fingerprint}

    @app.get("/meta")
    async def meta():
        stats = served.stats()
        return {
            "fingerprint": backend.fingerprint,
            "n": served.n,
            "N": served.N,
            "groups": [
                {
                    "id": g,
                    "name": served.group_names[g],
                    "combinator": served.group_combinators[g],
                }
                for g in range(len(served.group_names))
            ],
            "stats": stats.as_dict(),
        }

    @app.post("/query")
    async def query(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return CanonicalJSON(
                error_body("bad_request", "body is not valid JSON"),
                status_code=400,
            )
        if not isinstance(payload, dict):
            raise ValueError("body must be an object")
        selection = _parse_selection(served, payload.get("selection"))
        offset = _page(payload.get("offset"), "offset", 0)
        limit = _page(payload.get("limit"), "limit", DEFAULT_PAGE_LIMIT)
        result = backend.evaluate(selection)
        return _query_body(served, result, offset, limit)

    @app.post("/typeahead")
    async def typeahead(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return CanonicalJSON(
                error_body("bad_request", "body is not valid JSON"),
                status_code=400,
            )
        if not isinstance(payload, dict):
            raise ValueError("body must be an object")
        typed = payload.get("typed", "")
        if not isinstance(typed, str):
            raise ValueError("typed must be a string")
        mode = payload.get("mode", POSITION_INDEPENDENT)
        if mode not in alpha_by_mode:
            raise ValueError(f"mode must be one of {sorted(alpha_by_mode)}")
        limit = _page(payload.get("limit"), "limit", DEFAULT_PAGE_LIMIT)
        alpha = alpha_by_mode[mode]

        state = alpha.start()
        rejected: list[str] = []
        for ch in typed:
            try:
                state, _ = type_key(alpha, state, ch)
            except KeystrokeRejected:
                rejected.append(ch)
        completed_count = None
        if state.typed:
            _, final = complete(alpha, state)
            completed_count = int(len(final))
        exact = alpha.exact_matches(state)
        page = state.candidates[:limit]
        # The body describes the resulting state, not the keystroke history:
        # in PI mode "teh" and "the" land on the same state and must render
        # byte-identically, so accepted/rejected are canonicalized there.
        accepted = state.typed
        if mode == POSITION_INDEPENDENT:
            accepted = "".join(sorted(set(accepted)))
            rejected = sorted(set(rejected))
        return {
            "accepted": accepted,
            "mode": mode,
            "candidate_count": state.candidate_count,
            "candidates": [
                {"id": int(j), "name": alpha.names[int(j)]} for j in page
            ],
            "exact": [int(j) for j in exact],
            "rejected": rejected,
            "completed_count": completed_count,
        }

    return app
