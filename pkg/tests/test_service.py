"""HTTP facade: endpoint contracts, canonical bodies, shard transparency."""

import random

import pytest
from fastapi.testclient import TestClient

from facetnav import (
    Selection,
    ShardError,
    build_index,
    create_app,
    evaluate,
    fingerprint,
    scatter_gather,
)

from conftest import REFERENCE_ROWS, random_assignments


@pytest.fixture
def client(fig_index):
    return TestClient(create_app(index=fig_index))


def test_healthz(client, fig_index):
    body = client.get("/healthz").json()
    assert body == {"status": "ok", "fingerprint": fingerprint(fig_index)}


def test_meta(client, fig_index):
    body = client.get("/meta").json()
    assert body["n"] == 5
    assert body["N"] == 3
    assert body["fingerprint"] == fingerprint(fig_index)
    assert body["groups"] == [
        {"id": 0, "name": "default", "combinator": "ALL"}
    ]
    assert body["stats"]["link_count"] == 9


def test_meta_fingerprint_is_load_stable(fig_index, tmp_path):
    from facetnav import load, save

    path = tmp_path / "x.snap"
    save(fig_index, path)
    again = TestClient(create_app(index=load(path)))
    assert (
        again.get("/meta").json()["fingerprint"]
        == TestClient(create_app(index=fig_index)).get("/meta").json()["fingerprint"]
    )


def test_query_by_names(client):
    body = client.post(
        "/query", json={"selection": [{"cat": "c"}, {"cat": "a"}]}
    ).json()
    assert [e["name"] for e in body["items"]] == ["A", "C"]
    assert body["item_count"] == 2
    assert body["unavailable"] == [3]
    counts = {
        c["cat"]: c["count"]
        for g in body["available"]
        for c in g["categories"]
    }
    assert counts == {1: 1, 4: 1}
    assert {e["cat"]: e["count"] for e in body["selected"]} == {0: 2, 2: 2}
    assert body["names"]["3"] == "d"


def test_query_by_ids_matches_names(client):
    by_name = client.post("/query", json={"selection": [{"cat": "c"}]})
    by_id = client.post("/query", json={"selection": [{"cat": 2}]})
    assert by_name.content == by_id.content


def test_query_negation(client):
    body = client.post(
        "/query",
        json={"selection": [{"cat": "c"}, {"cat": "b", "neg": True}]},
    ).json()
    assert [e["name"] for e in body["items"]] == ["C"]
    assert {"cat": 1, "count": 0, "neg": True} in body["selected"]


def test_query_paging_leaves_counts_alone(client):
    full = client.post("/query", json={"selection": []}).json()
    page = client.post(
        "/query", json={"selection": [], "offset": 1, "limit": 1}
    ).json()
    assert page["item_count"] == full["item_count"] == 3
    assert [e["name"] for e in page["items"]] == ["B"]
    assert page["available"] == full["available"]


def test_query_error_shapes(client):
    r = client.post("/query", json={"selection": [{"cat": "zzz"}]})
    assert r.status_code == 400
    assert r.json()["code"] == "unknown_category"

    r = client.post("/query", json={"selection": [{"cat": True}]})
    assert r.status_code == 400

    r = client.post("/query", json={"selection": "x"})
    assert r.status_code == 400

    r = client.post("/query", json={"selection": [], "offset": -1})
    assert r.status_code == 400

    r = client.post(
        "/query",
        content=b"not json",
        headers={"content-type": "application/json"},
    )
    assert r.status_code == 400
    assert r.json()["code"] == "bad_request"


def test_response_json_is_compact(client):
    r = client.post("/query", json={"selection": []})
    assert b": " not in r.content and b", " not in r.content


def test_identical_requests_identical_bodies(client):
    a = client.post("/query", json={"selection": [{"cat": "c"}]})
    b = client.post("/query", json={"selection": [{"cat": "c"}]})
    assert a.content == b.content


def test_cache_and_uncached_paths_agree(fig_index):
    cached = TestClient(create_app(index=fig_index, use_cache=True))
    plain = TestClient(create_app(index=fig_index, use_cache=False))
    for cat in "abcde":
        body = {"selection": [{"cat": cat}]}
        assert (
            cached.post("/query", json=body).content
            == plain.post("/query", json=body).content
        )


# ------------------------------------------------------------------ shards

def test_scatter_gather_identity(fig_index):
    s = Selection.of(2)
    assert scatter_gather([fig_index], s) == evaluate(fig_index, s)


def test_scatter_gather_matches_unsharded_reference(fig_index):
    for k in (2, 3):
        shards = fig_index.shard(k)
        for sel in (Selection.of(2), Selection.of(2, 0), Selection()):
            assert scatter_gather(shards, sel) == evaluate(fig_index, sel)


def test_scatter_gather_random_equivalence():
    rng = random.Random(31337)
    for _ in range(15):
        rows = random_assignments(rng, rng.randint(5, 60), rng.randint(2, 10))
        idx = build_index(rows)
        shards = idx.shard(rng.choice([2, 3, 5]))
        for _ in range(10):
            picks = rng.sample(range(idx.n), rng.randint(0, min(3, idx.n)))
            negs = [
                c for c in range(idx.n) if c not in picks and rng.random() < 0.1
            ]
            sel = Selection.of(*picks, negated=negs)
            assert scatter_gather(shards, sel) == evaluate(idx, sel)


def test_scatter_gather_rejects_foreign_shards(fig_index):
    other = build_index([("X", ["p"])])
    with pytest.raises(ShardError):
        scatter_gather([fig_index.shard(2)[0], other], Selection())


def test_sharded_app_bodies_match_single(fig_index):
    single = TestClient(create_app(index=fig_index, use_cache=False))
    sharded = TestClient(create_app(shards=fig_index.shard(3)))
    for body in (
        {"selection": [{"cat": "c"}]},
        {"selection": [{"cat": "c"}, {"cat": "a"}]},
        {"selection": []},
    ):
        assert (
            single.post("/query", json=body).content
            == sharded.post("/query", json=body).content
        )
    assert (
        single.get("/meta").content == sharded.get("/meta").content
    )


def test_create_app_wants_exactly_one_source(fig_index):
    with pytest.raises(ValueError):
        create_app()
    with pytest.raises(ValueError):
        create_app(index=fig_index, shards=fig_index.shard(2))


# --------------------------------------------------------------- typeahead

def test_typeahead_modes(client):
    pi = client.post("/typeahead", json={"typed": "ca", "mode": "pi"}).json()
    # 'c' narrows to the one name containing it; 'a' cannot extend that
    assert [e["name"] for e in pi["candidates"]] == ["C"]
    assert pi["rejected"] == ["a"]
    r = client.post("/typeahead", json={"typed": "x", "mode": "nope"})
    assert r.status_code == 400


def test_typeahead_empty_is_full_page(client):
    body = client.post("/typeahead", json={"typed": ""}).json()
    assert body["candidate_count"] == 3
    assert body["completed_count"] is None


def test_typeahead_limit(client):
    body = client.post("/typeahead", json={"typed": "", "limit": 1}).json()
    assert len(body["candidates"]) == 1
    assert body["candidate_count"] == 3


def test_typeahead_exact_match_flag(fig_index):
    idx = build_index([("Bart", ["x"]), ("Bora", ["x"])])
    client = TestClient(create_app(index=idx))
    body = client.post("/typeahead", json={"typed": "bart", "mode": "pd"}).json()
    assert body["exact"] == [0]
    assert body["completed_count"] == 1
