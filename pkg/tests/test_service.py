import pytest
from fastapi.testclient import TestClient

from fairmatch import __version__
from fairmatch.service import create_app

CONFIG = dict(x_lcap=0.0, x_ucap=3000.0, n_bucket=20, w_min=150.0,
              theta_r=0.5, theta_s=6.0, lobby_size=2)

CONFIG3 = dict(x_lcap=0.0, x_ucap=1000.0, n_bucket=3, w_min=100.0,
               theta_r=0.5, theta_s=4.0, lobby_size=3)


def lobby(lid, *ranks, tick=0):
    return {"id": lid, "ranks": list(ranks), "enqueued_at": tick}


@pytest.fixture
def client():
    return TestClient(create_app())


def test_health(client):
    body = client.get("/health").json()
    assert body == {"status": "ok", "version": __version__}


class TestBucketsEndpoint:
    def test_worked_scheme(self, client):
        resp = client.post("/buckets", json={"config": CONFIG3})
        assert resp.status_code == 200
        rows = resp.json()["buckets"]
        assert [r["index"] for r in rows] == [0, 1, 2]
        assert [r["width"] for r in rows] == pytest.approx([450.0, 100.0, 450.0], abs=1e-6)
        assert rows[0]["lower"] == 0.0 and rows[-1]["upper"] == 1000.0

    def test_infeasible_config_is_422(self, client):
        bad = dict(CONFIG3, n_bucket=11)
        resp = client.post("/buckets", json={"config": bad})
        assert resp.status_code == 422

    def test_missing_field_is_422(self, client):
        resp = client.post("/buckets", json={"config": {"x_lcap": 0}})
        assert resp.status_code == 422


class TestScoreEndpoint:
    def test_identical_pair(self, client):
        resp = client.post("/score", json={
            "config": CONFIG,
            "lobbies_a": [lobby("a", 500, 500)],
            "lobbies_b": [lobby("b", 500, 500)],
        })
        (pair,) = resp.json()["pairs"]
        assert (pair["id_a"], pair["id_b"]) == ("a", "b")
        assert pair["sr"] == 1.0
        assert pair["prefilter_pass"] is True
        assert pair["sanction"] == 0
        assert pair["range_a"] == {"lower": 350.0, "upper": 650.0}
        assert pair["range_a"] == pair["range_b"]

    def test_cross_product_rows(self, client):
        resp = client.post("/score", json={
            "config": CONFIG,
            "lobbies_a": [lobby("a1", 500, 500), lobby("a2", 700, 700)],
            "lobbies_b": [lobby("b1", 500, 500)],
        })
        ids = [(p["id_a"], p["id_b"]) for p in resp.json()["pairs"]]
        assert ids == [("a1", "b1"), ("a2", "b1")]

    def test_sanction_reported_even_when_prefilter_fails(self, client):
        resp = client.post("/score", json={
            "config": CONFIG,
            "lobbies_a": [lobby("lo", 100, 100)],
            "lobbies_b": [lobby("hi", 2900, 2900)],
        })
        (pair,) = resp.json()["pairs"]
        assert pair["prefilter_pass"] is False
        assert pair["sr"] == 0.0
        assert pair["sanction"] > 0

    def test_out_of_cap_ranks_are_clamped(self, client):
        resp = client.post("/score", json={
            "config": CONFIG,
            "lobbies_a": [lobby("a", -500, 4000)],
            "lobbies_b": [lobby("b", 0, 3000)],
        })
        (pair,) = resp.json()["pairs"]
        assert pair["sr"] == 1.0

    def test_size_mismatch_names_both_ids(self, client):
        resp = client.post("/score", json={
            "config": CONFIG,
            "lobbies_a": [lobby("two", 1, 2)],
            "lobbies_b": [{"id": "three", "ranks": [1, 2, 3], "enqueued_at": 0}],
        })
        assert resp.status_code == 422
        detail = resp.json()["detail"]
        assert "two" in detail and "three" in detail


class TestMatchEndpoint:
    def test_pairs_and_counters(self, client):
        resp = client.post("/match", json={
            "config": CONFIG,
            "strategy": "threshold",
            "lobbies": [lobby("a", 500, 500, tick=1), lobby("b", 500, 500, tick=2)],
        })
        body = resp.json()
        assert body["matches"] == [
            {"lobby_a": "a", "lobby_b": "b", "ruzicka": 1.0, "sanction": 0}]
        assert body["unmatched"] == []
        assert body["prefilter_evals"] == 1
        assert body["sanction_evals"] == 1

    def test_empty_lobby_list(self, client):
        resp = client.post("/match", json={"config": CONFIG, "lobbies": []})
        body = resp.json()
        assert body["matches"] == [] and body["unmatched"] == []
        assert body["prefilter_evals"] == 0 and body["sanction_evals"] == 0

    def test_duplicate_ids_rejected(self, client):
        resp = client.post("/match", json={
            "config": CONFIG,
            "lobbies": [lobby("dup", 500, 500), lobby("dup", 600, 600)],
        })
        assert resp.status_code == 422
        assert "dup" in resp.json()["detail"]

    def test_unknown_strategy_rejected(self, client):
        resp = client.post("/match", json={
            "config": CONFIG, "strategy": "psychic", "lobbies": []})
        assert resp.status_code == 422


class TestSimulateEndpoint:
    def test_zero_sigma(self, client):
        resp = client.post("/simulate", json={
            "config": CONFIG, "pairings": 123, "seed": 4, "gen_sigma": 0.0})
        body = resp.json()
        assert body["counts"] == {"0": 123}
        assert body["summary"]["total"] == 123
        assert body["summary"]["mean"] == 0.0
        assert body["summary"]["skewness"] is None

    def test_deterministic_across_workers(self, client):
        base = {"config": CONFIG, "pairings": 2000, "seed": 9}
        one = client.post("/simulate", json=dict(base, workers=1)).json()
        four = client.post("/simulate", json=dict(base, workers=4)).json()
        assert one == four

    def test_zero_pairings(self, client):
        body = client.post("/simulate", json={"config": CONFIG, "pairings": 0}).json()
        assert body["counts"] == {}
        assert body["summary"]["total"] == 0
        assert body["summary"]["mean"] is None

    def test_negative_pairings_rejected(self, client):
        resp = client.post("/simulate", json={"config": CONFIG, "pairings": -5})
        assert resp.status_code == 422


class TestQueueEndpoints:
    def test_lifecycle(self, client):
        created = client.post("/queues", json={"config": CONFIG, "strategy": "threshold"})
        assert created.status_code == 201
        qid = created.json()["queue_id"]

        enq = client.post(f"/queues/{qid}/lobbies", json={"lobby": lobby("w", 500, 500, tick=1)})
        assert enq.status_code == 201
        assert enq.json()["waiting"] == ["w"]

        miss = client.post(f"/queues/{qid}/find-match",
                           json={"candidate": lobby("c1", 2900, 2900, tick=2)})
        assert miss.json()["match"] is None

        hit = client.post(f"/queues/{qid}/find-match",
                          json={"candidate": lobby("c2", 500, 500, tick=3)})
        assert hit.json()["match"] == {
            "lobby_a": "c2", "lobby_b": "w", "ruzicka": 1.0, "sanction": 0}

        state = client.get(f"/queues/{qid}").json()
        assert state["waiting"] == []
        assert state["prefilter_evals"] == 2
        assert state["sanction_evals"] == 1

        assert client.delete(f"/queues/{qid}").status_code == 204
        assert client.get(f"/queues/{qid}").status_code == 404

    def test_match_pass_endpoint(self, client):
        qid = client.post("/queues", json={"config": CONFIG}).json()["queue_id"]
        for i, lid in enumerate(["a", "b", "c"]):
            client.post(f"/queues/{qid}/lobbies", json={"lobby": lobby(lid, 500, 500, tick=i)})
        body = client.post(f"/queues/{qid}/match-pass").json()
        assert [(m["lobby_a"], m["lobby_b"]) for m in body["matches"]] == [("a", "b")]
        assert body["unmatched"] == ["c"]

    def test_duplicate_enqueue_rejected(self, client):
        qid = client.post("/queues", json={"config": CONFIG}).json()["queue_id"]
        client.post(f"/queues/{qid}/lobbies", json={"lobby": lobby("dup", 500, 500)})
        resp = client.post(f"/queues/{qid}/lobbies", json={"lobby": lobby("dup", 600, 600)})
        assert resp.status_code == 422

    def test_wrong_size_enqueue_rejected(self, client):
        qid = client.post("/queues", json={"config": CONFIG}).json()["queue_id"]
        resp = client.post(f"/queues/{qid}/lobbies",
                           json={"lobby": {"id": "x", "ranks": [1, 2, 3], "enqueued_at": 0}})
        assert resp.status_code == 422

    def test_unknown_queue_is_404(self, client):
        assert client.get("/queues/nope").status_code == 404
        assert client.post("/queues/nope/match-pass").status_code == 404
