import json
import threading
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from quadlab.games import replay_transcript
from quadlab.service import create_app, run_job


@pytest.fixture
def client(tmp_path):
    app = create_app(str(tmp_path), workers=2)
    with TestClient(app) as c:
        c.data_dir = tmp_path
        yield c


def haw_payload(**over):
    payload = {
        "kind": {"variant": "haw", "dimension": 1, "beta": 0.1},
        "initial_ball": {"center": [0.0], "radius": 1.0},
        "engine_side": "alice",
        "engine_strategy": {"kind": "avoid_countable",
                            "targets": [[0.0], [0.5], [-0.25]]},
    }
    payload.update(over)
    return payload


def wait_job(client, jid, timeout=10.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        job = client.get(f"/jobs/{jid}").json()
        if job["status"] in ("done", "failed"):
            return job
        time.sleep(0.01)
    raise TimeoutError(jid)


class TestSessions:
    def test_create_engine_moves_first(self, client):
        r = client.post("/sessions", json=haw_payload())
        assert r.status_code == 201
        view = r.json()
        assert view["turn"] == "bob"
        assert len(view["pending_slabs"]) == 1
        assert view["pending_slabs"][0]["offset"] == 0.0

    def test_invalid_kind_names_rule(self, client):
        bad = haw_payload(kind={"variant": "hpw", "dimension": 1, "beta": 0.25})
        r = client.post("/sessions", json=bad)
        assert r.status_code == 400
        body = r.json()
        assert body["rule"] == "beta-range"
        assert "1/5" in body["message"]

    def test_idempotency_key(self, client):
        a = client.post("/sessions", json=haw_payload(idempotency_key="xyz")).json()
        b = client.post("/sessions", json=haw_payload(idempotency_key="xyz")).json()
        assert a["id"] == b["id"]

    def test_move_cycle_and_rejection(self, client):
        sid = client.post("/sessions", json=haw_payload()).json()["id"]
        r = client.post(f"/sessions/{sid}/moves",
                        json={"move": {"type": "ball", "center": [0.5], "radius": 0.05}})
        assert r.status_code == 422
        assert r.json()["rule"] == "radius-ratio"
        r = client.post(f"/sessions/{sid}/moves",
                        json={"move": {"type": "ball", "center": [0.5], "radius": 0.12}})
        assert r.status_code == 200
        view = r.json()
        assert len(view["engine_moves"]) == 1  # Alice replied
        assert view["turn"] == "bob"

    def test_unknown_session(self, client):
        assert client.get("/sessions/nope").status_code == 404
        r = client.post("/sessions/nope/moves", json={"move": {}})
        assert r.status_code == 404

    def test_finished_conflict(self, client):
        sid = client.post("/sessions", json=haw_payload()).json()["id"]
        move = {"move": {"type": "ball", "center": [0.5], "radius": 0.12},
                "final": True}
        assert client.post(f"/sessions/{sid}/moves", json=move).status_code == 200
        r = client.post(f"/sessions/{sid}/moves",
                        json={"move": {"type": "ball", "center": [0.5], "radius": 0.015}})
        assert r.status_code == 409
        assert r.json()["rule"] == "finished"

    def test_replay_determinism(self, client):
        sid = client.post("/sessions", json=haw_payload()).json()["id"]
        ball = {"type": "ball", "center": [0.5], "radius": 0.12}
        client.post(f"/sessions/{sid}/moves", json={"move": ball})
        ball2 = {"type": "ball", "center": [0.55], "radius": 0.015}
        client.post(f"/sessions/{sid}/moves", json={"move": ball2})
        view = client.get(f"/sessions/{sid}").json()
        state = replay_transcript(view["transcript"])
        assert state.current_ball.to_json() == view["current_ball"]
        assert state.index == view["index"]
        # the on-disk JSONL replays identically too
        disk = [json.loads(line) for line in
                (client.data_dir / "sessions" / f"{sid}.jsonl").read_text().splitlines()]
        state2 = replay_transcript(disk)
        assert state2.current_ball.to_json() == view["current_ball"]

    def test_concurrent_sessions_do_not_interfere(self, client):
        sids = [client.post("/sessions", json=haw_payload()).json()["id"]
                for _ in range(100)]
        errors = []

        def drive(sid):
            try:
                ball = {"type": "ball", "center": [0.5], "radius": 0.12}
                r = client.post(f"/sessions/{sid}/moves", json={"move": ball})
                assert r.status_code == 200, r.text
                view = client.get(f"/sessions/{sid}").json()
                replay_transcript(view["transcript"])
            except Exception as exc:  # noqa: BLE001
                errors.append((sid, exc))

        threads = [threading.Thread(target=drive, args=(sid,)) for sid in sids]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors


class TestAliceMode:
    def test_human_alice_engine_bob(self, client):
        payload = {
            "kind": {"variant": "haw", "dimension": 1, "beta": 0.1},
            "initial_ball": {"center": [0.0], "radius": 1.0},
            "engine_side": "bob",
            "engine_strategy": {"kind": "random", "seed": 12},
        }
        view = client.post("/sessions", json=payload).json()
        assert view["turn"] == "alice"  # engine waits for the human slab
        slab = {"type": "slab", "normal": [1.0], "offset": 0.2, "halfwidth": 0.1}
        r = client.post(f"/sessions/{view['id']}/moves", json={"move": slab})
        assert r.status_code == 200
        out = r.json()
        assert len(out["engine_moves"]) == 1  # engine Bob answered with a ball
        assert out["engine_moves"][0]["type"] == "ball"
        assert out["turn"] == "alice"

    def test_illegal_alice_slab_named(self, client):
        payload = {
            "kind": {"variant": "haw", "dimension": 1, "beta": 0.1},
            "initial_ball": {"center": [0.0], "radius": 1.0},
            "engine_side": "bob",
            "engine_strategy": {"kind": "shrinking"},
        }
        view = client.post("/sessions", json=payload).json()
        slab = {"type": "slab", "normal": [1.0], "offset": 0.2, "halfwidth": 0.5}
        r = client.post(f"/sessions/{view['id']}/moves", json={"move": slab})
        assert r.status_code == 422
        assert r.json()["rule"] == "halfwidth-bound"


class TestJobs:
    def test_count_job(self, client):
        r = client.post("/jobs", json={"kind": "count", "params": {
            "form": "q0", "interval": {"lo": -0.5, "hi": 0.5}, "t": 10}})
        assert r.status_code == 201
        job = wait_job(client, r.json()["id"])
        assert job["status"] == "done"
        assert job["result"]["count"] == 41

    def test_fourterm_job(self, client):
        r = client.post("/jobs", json={"kind": "fourterm", "params": {
            "M": 1, "alpha": 2.0, "beta": 1.0, "delta": 0.1}})
        job = wait_job(client, r.json()["id"])
        assert job["result"]["count"] == 6

    def test_fourterm_alpha_one_fails(self, client):
        r = client.post("/jobs", json={"kind": "fourterm", "params": {
            "M": 1, "alpha": 1.0, "beta": 1.0, "delta": 0.1}})
        job = wait_job(client, r.json()["id"])
        assert job["status"] == "failed"
        assert "alpha" in job["error"]["message"]

    def test_budget_exceeded_fails_with_reason(self, client):
        r = client.post("/jobs", json={"kind": "count", "params": {
            "form": "q0", "interval": {"lo": -0.5, "hi": 0.5}, "t": 1e6}})
        job = wait_job(client, r.json()["id"])
        assert job["status"] == "failed"
        assert job["error"]["rule"] == "budget"

    def test_unknown_kind_rejected_at_submit(self, client):
        r = client.post("/jobs", json={"kind": "nope", "params": {}})
        assert r.status_code == 400

    def test_correspond_job(self, client):
        phi = (1 + np.sqrt(5.0)) / 2.0
        r = client.post("/jobs", json={"kind": "correspond", "params": {
            "lattice": {"basis": [[1.0, phi], [0.0, 1.0]], "shift": [0, 0]},
            "s": 1 / np.sqrt(5.0), "R": 100, "T": 6, "dt": 0.05}})
        job = wait_job(client, r.json()["id"])
        assert job["status"] == "done"
        assert job["result"]["orbit_gap"] < 0.05

    def test_minsearch_job(self, client):
        r = client.post("/jobs", json={"kind": "minsearch", "params": {
            "family": {"k": 2, "alpha2": 2.0}, "N": 16}})
        job = wait_job(client, r.json()["id"])
        assert job["result"]["min_abs_value"] == 1.0
        assert job["result"]["argmin"] == [17, 12]

    def test_job_idempotence(self, client):
        params = {"form": "q0", "interval": {"lo": -0.5, "hi": 0.5}, "t": 8}
        jobs = []
        for _ in range(2):
            r = client.post("/jobs", json={"kind": "count", "params": params})
            jobs.append(wait_job(client, r.json()["id"]))
        assert jobs[0]["result"] == jobs[1]["result"]
        assert jobs[0]["result"] == run_job("count", params)

    def test_shrink_job(self, client):
        r = client.post("/jobs", json={"kind": "shrink", "params": {
            "form": "q0", "c": 1.0, "kappa": 0.0, "t_list": [4, 6, 8]}})
        job = wait_job(client, r.json()["id"])
        assert job["status"] == "done"
        assert [rec["count"] for rec in job["result"]["records"]] == [
            run_job("count", {"form": "q0",
                              "interval": {"lo": -0.5, "hi": 0.5}, "t": t})["count"]
            for t in (4, 6, 8)]

    def test_orbit_job_rows(self, client):
        r = client.post("/jobs", json={"kind": "orbit", "params": {
            "lattice": {"basis": [[1, 0], [0, 1]], "shift": [0, 0]},
            "t_lo": 0.0, "t_hi": 1.0, "dt": 0.5, "s": 1.0}})
        job = wait_job(client, r.json()["id"])
        rows = job["result"]["rows"]
        assert len(rows) == 3
        assert set(rows[0]) == {"t", "systole", "dist_to_Mv"}
