import json
import threading

import pytest
from fastapi.testclient import TestClient

from landscape.fixtures import data_path
from landscape.gateway import build_app


@pytest.fixture()
def client(tmp_path):
    app = build_app(tmp_path / "store")
    with TestClient(app) as c:
        yield c


def register_corpora(client):
    for name, filename in (
        ("mini", "mini_corpus.jsonl"),
        ("v2023", "validation_2023.jsonl"),
        ("v2024", "validation_2024.jsonl"),
        ("protocols", "aspect_protocols.jsonl"),
    ):
        r = client.post("/corpora", json={"name": name, "path": str(data_path(filename))})
        assert r.status_code == 200
    return client


def create_session(client, **overrides):
    body = {"corpus": "mini", "k": 6, "iterations": 60, "seed": 7}
    body.update(overrides)
    r = client.post("/sessions", json=body)
    assert r.status_code == 201, r.text
    return r.json()


def stage_aspect(client, session_id, label="protocols"):
    r = client.post(
        f"/sessions/{session_id}/aspects",
        json={"corpus": "protocols", "label": label},
    )
    assert r.status_code == 200, r.text
    return r.json()


class TestHealthAndCorpora:
    def test_health(self, client):
        r = client.get("/health")
        assert r.status_code == 200
        assert r.json() == {"status": "ok"}

    def test_register_and_list(self, client):
        register_corpora(client)
        listed = client.get("/corpora").json()["corpora"]
        assert set(listed) == {"mini", "v2023", "v2024", "protocols"}

    def test_register_missing_file_rejected(self, client):
        r = client.post("/corpora", json={"name": "x", "path": "/nope.jsonl"})
        assert r.status_code == 400
        assert r.json()["code"] == "invalid_request"


class TestSessionLifecycle:
    def test_create_then_get(self, client):
        register_corpora(client)
        created = create_session(client)
        r = client.get(f"/sessions/{created['id']}")
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "awaiting_aspect"
        assert body["iteration_count"] == 0
        assert len(body["topic_labels"]) == 6

    def test_unknown_session_404(self, client):
        r = client.get("/sessions/sess-doesnotexist")
        assert r.status_code == 404
        assert r.json()["code"] == "not_found"

    def test_full_loop(self, client):
        register_corpora(client)
        sid = create_session(client)["id"]

        staged = stage_aspect(client, sid)
        assert staged["staged_aspect"]["label"] == "protocols"

        r = client.post(f"/sessions/{sid}/iterations", json={"validation": "v2023"})
        assert r.status_code == 200, r.text
        record = r.json()
        assert record["index"] == 1
        assert len(record["selected_topics"]) == 5
        assert len(record["selected_topic_details"]) == 5
        assert record["selected_topic_details"][0]["keywords"]

        r = client.get(f"/sessions/{sid}/iterations/1")
        assert r.status_code == 200
        assert r.json()["selected_topics"] == record["selected_topics"]

        r = client.get(f"/sessions/{sid}/iterations/1/heatmap")
        assert r.status_code == 200
        bundle = r.json()
        assert len(bundle["similarity_matrix"]) == 6

        r = client.get(f"/sessions/{sid}/iterations/1/docsim")
        assert r.status_code == 200
        assert len(r.json()["doc_ids"]) == 10

        edited = {
            "label": "protocols (edited)",
            "entries": staged["staged_aspect"]["entries"],
        }
        r = client.post(
            f"/sessions/{sid}/decision",
            json={"continue": True, "notes": "promising", "edited_aspect": edited},
        )
        assert r.status_code == 200
        assert r.json()["status"] == "awaiting_aspect"

        r = client.post(f"/sessions/{sid}/iterations", json={"validation": "v2024"})
        assert r.status_code == 200
        assert r.json()["aspect_label"] == "protocols (edited)"

        r = client.post(f"/sessions/{sid}/decision", json={"continue": False})
        assert r.status_code == 200
        assert r.json()["status"] == "ended"

    def test_iteration_without_aspect_conflicts(self, client):
        register_corpora(client)
        sid = create_session(client)["id"]
        r = client.post(f"/sessions/{sid}/iterations", json={"validation": "v2023"})
        assert r.status_code == 409
        assert r.json()["code"] == "invalid_state"

    def test_decision_before_iteration_conflicts(self, client):
        register_corpora(client)
        sid = create_session(client)["id"]
        r = client.post(f"/sessions/{sid}/decision", json={"continue": True})
        assert r.status_code == 409
        assert r.json()["code"] == "invalid_state"

    def test_concurrent_decisions_one_wins(self, client):
        register_corpora(client)
        sid = create_session(client)["id"]
        stage_aspect(client, sid)
        assert client.post(
            f"/sessions/{sid}/iterations", json={"validation": "v2023"}
        ).status_code == 200

        codes = []
        barrier = threading.Barrier(2)

        def post_decision():
            barrier.wait()
            r = client.post(f"/sessions/{sid}/decision", json={"continue": False})
            codes.append(r.status_code)

        threads = [threading.Thread(target=post_decision) for _ in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(codes) == [200, 409]

    def test_read_after_write_consistency(self, client, tmp_path):
        register_corpora(client)
        sid = create_session(client)["id"]
        stage_aspect(client, sid)
        client.post(f"/sessions/{sid}/iterations", json={"validation": "v2023"})
        api_view = client.get(f"/sessions/{sid}").json()

        from landscape.session import load_session

        persisted = load_session(tmp_path / "store" / sid)
        assert persisted.status == api_view["status"]
        assert persisted.qtable.q == api_view["q"]


class TestIdempotency:
    def test_replay_returns_original(self, client):
        register_corpora(client)
        sid = create_session(client)["id"]
        stage_aspect(client, sid)
        headers = {"Idempotency-Key": "iter-1"}
        first = client.post(
            f"/sessions/{sid}/iterations", json={"validation": "v2023"}, headers=headers
        )
        assert first.status_code == 200
        replay = client.post(
            f"/sessions/{sid}/iterations", json={"validation": "v2023"}, headers=headers
        )
        assert replay.status_code == 200
        assert replay.json() == first.json()
        # no second iteration happened
        assert client.get(f"/sessions/{sid}").json()["iteration_count"] == 1

    def test_decision_replay(self, client):
        register_corpora(client)
        sid = create_session(client)["id"]
        stage_aspect(client, sid)
        client.post(f"/sessions/{sid}/iterations", json={"validation": "v2023"})
        headers = {"Idempotency-Key": "stop-1"}
        first = client.post(
            f"/sessions/{sid}/decision", json={"continue": False}, headers=headers
        )
        assert first.status_code == 200
        replay = client.post(
            f"/sessions/{sid}/decision", json={"continue": False}, headers=headers
        )
        assert replay.status_code == 200
        assert replay.json() == first.json()


class TestSweepEndpoint:
    def test_sweep_shape(self, client):
        register_corpora(client)
        sid = create_session(client)["id"]
        stage_aspect(client, sid)
        client.post(f"/sessions/{sid}/iterations", json={"validation": "v2023"})
        r = client.post(
            f"/sessions/{sid}/sweep",
            json={"alphas": [0.1, 0.2], "lambdas": [0.5, 1.5]},
        )
        assert r.status_code == 200
        body = r.json()
        assert len(body["pairs"]) == 4
        assert len(body["columns"]) == 5
        assert all(len(sel) == 5 for sel in body["selections"])

    def test_empty_grid_rejected(self, client):
        register_corpora(client)
        sid = create_session(client)["id"]
        stage_aspect(client, sid)
        client.post(f"/sessions/{sid}/iterations", json={"validation": "v2023"})
        r = client.post(f"/sessions/{sid}/sweep", json={"alphas": [], "lambdas": [0.5]})
        assert r.status_code == 400

    def test_sweep_before_iterations_fails_cleanly(self, client):
        register_corpora(client)
        sid = create_session(client)["id"]
        r = client.post(f"/sessions/{sid}/sweep", json={"alphas": [0.1], "lambdas": [0.5]})
        assert r.status_code == 422
        assert r.json()["code"] == "data_error"
