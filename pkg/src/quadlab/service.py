"""HTTP facade: game sessions for remote players plus asynchronous counting
and orbit jobs, with append-only JSONL persistence.

Endpoints: POST /sessions, GET /sessions/{id}, POST /sessions/{id}/moves,
POST /jobs, GET /jobs/{id}.  Error bodies are {rule, message, detail}.
"""

import json
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import counting, lattices
from .errors import BudgetExceededError, ValidationError
from .forms import form_from_json, named_form
from .games import (Ball, GameKind, IllegalMove, apply_move, dummy_alice,
                    alice_avoid_countable, move_from_json, new_game, random_bob,
                    shrinking_bob, StageWindowAlice, synthetic_oracle,
                    through_center_family, spread_family)


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if is_dataclass(x) and not isinstance(x, type):
        return {k: _jsonable(v) for k, v in asdict(x).items()}
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


class ApiError(Exception):
    def __init__(self, status, rule, message, detail=None):
        super().__init__(message)
        self.status = status
        self.body = {"rule": rule, "message": message, "detail": detail}


def _parse_form(spec):
    if isinstance(spec, str):
        return named_form(spec)
    return form_from_json(spec)


def _parse_interval(spec):
    lo, hi = float(spec["lo"]), float(spec["hi"])
    return counting.Interval(lo, hi, bool(spec.get("lo_open", True)),
                             bool(spec.get("hi_open", True)))


def _parse_lattice(spec):
    return lattices.lattice_from_json(spec)


def _parse_min_target(params):
    if "family" in params:
        fam = params["family"]
        form = counting.DiagonalPowerForm(int(fam["k"]), float(fam["alpha2"]),
                                          float(fam.get("alpha3", 0.0)))
        theta = params.get("theta", [0.0, 0.0, 0.0])
    else:
        f = _parse_form(params["form"])
        form, theta = f.form, params.get("theta", list(f.shift))
    return form, theta


def run_job(kind, params):
    """Execute one job kind; identical to calling the kernel directly."""
    if kind == "count":
        f = _parse_form(params["form"])
        return {"count": counting.count_in_interval(
            f, _parse_interval(params["interval"]), float(params["t"]),
            params.get("norm", "euclidean"), bool(params.get("strict", False)))}
    if kind == "shrink":
        f = _parse_form(params["form"])
        records = counting.shrinking_target_run(
            f, float(params["c"]), float(params["kappa"]),
            [float(t) for t in params["t_list"]],
            float(params.get("target", 0.0)), params.get("norm", "euclidean"),
            bool(params.get("strict", False)))
        out = {"records": _jsonable(records)}
        if sum(1 for r in records if r.count > 0) >= 3:
            out["fit"] = _jsonable(counting.fit_growth(records))
        return out
    if kind == "minsearch":
        form, theta = _parse_min_target(params)
        if "N" in params:
            rec = counting.min_search_delta(form, theta, int(params["N"]))
        else:
            rec = counting.min_abs_in_annulus(
                form, theta, int(params["lo"]), int(params["hi"]),
                bool(params.get("exclude_axes", False)))
        return _jsonable(rec)
    if kind == "fourterm":
        p = counting.FourTermParams(
            int(params["M"]), float(params["alpha"]), float(params["beta"]),
            float(params.get("theta1", 0.0)), float(params.get("theta2", 0.0)),
            float(params.get("delta", 0.1)))
        return {"count": counting.four_term_count(p)}
    if kind == "orbit":
        L = _parse_lattice(params["lattice"])
        v = params.get("v")
        if v is None and params.get("s") is not None:
            v = lattices.choose_v(float(params["s"]))
        return {"rows": _jsonable(lattices.orbit_scan(
            L, float(params["t_lo"]), float(params["t_hi"]),
            float(params.get("dt", 0.05)), None if v is None else np.asarray(v, float)))}
    if kind == "correspond":
        L = _parse_lattice(params["lattice"])
        rec = lattices.correspondence_scan(
            L, float(params["s"]), float(params["R"]), float(params["T"]),
            float(params.get("dt", 0.01)))
        return _jsonable(rec)
    raise ValidationError("job-kind", f"unknown job kind {kind!r}")


JOB_KINDS = ("count", "shrink", "minsearch", "fourterm", "orbit", "correspond")
STRATEGIES = ("dummy", "avoid_countable", "stage_window", "random", "shrinking")


def build_strategy(spec):
    kind = spec.get("kind", "dummy")
    if kind == "dummy":
        return dummy_alice
    if kind == "avoid_countable":
        return alice_avoid_countable(spec.get("targets", []))
    if kind == "stage_window":
        oracle_spec = spec.get("oracle", {"kind": "through_center"})
        okind = oracle_spec.get("kind", "through_center")
        if okind == "constant":
            oracle = synthetic_oracle((np.asarray(oracle_spec["normal"], float),
                                       float(oracle_spec["offset"])))
        elif okind == "spread":
            oracle = spread_family(float(oracle_spec.get("gap", 1000.0)))
        elif okind == "through_center":
            oracle = through_center_family()
        else:
            raise ValidationError("oracle-kind", f"unknown oracle {okind!r}")
        return StageWindowAlice(float(spec["tau"]), float(spec["beta"]), oracle)
    if kind == "random":
        return random_bob(int(spec.get("seed", 0)))
    if kind == "shrinking":
        return shrinking_bob()
    raise ValidationError("strategy", f"unknown strategy {kind!r}; options: {STRATEGIES}")


class Session:
    def __init__(self, sid, state, engine_side, strategy, store):
        self.id = sid
        self.state = state
        self.engine_side = engine_side
        self.strategy = strategy
        self.finished = False
        self.lock = threading.Lock()
        self._store = store
        self.rows = [{"header": True, "kind": state.kind.to_json(),
                      "initial": state.current_ball.to_json(),
                      "engine_side": engine_side}]
        store.persist_row(sid, self.rows[0])

    def record(self, entry):
        row = entry.to_json()
        self.rows.append(row)
        self._store.persist_row(self.id, row)

    def engine_turns(self):
        """Let the engine move while it is on turn; returns its moves."""
        moves = []
        while not self.finished and self.state.turn == self.engine_side:
            move = self.strategy(self.state)
            if move is None:
                self.finished = True
                break
            self.state = apply_move(self.state, move)
            self.record(self.state.history[-1])
            moves.append(move.to_json())
        return moves

    def view(self):
        st = self.state  # immutable snapshot; rows copied for safe serialization
        return {
            "id": self.id,
            "kind": st.kind.to_json(),
            "engine_side": self.engine_side,
            "turn": st.turn,
            "index": st.index,
            "finished": self.finished,
            "current_ball": st.current_ball.to_json(),
            "pending_ball": st.pending_ball.to_json() if st.pending_ball else None,
            "pending_slabs": [s.to_json() for s in st.pending_slabs],
            "stage_data": _jsonable(st.stage_data),
            "base_radius": st.base_radius,
            "transcript": list(self.rows),
        }


class Store:
    def __init__(self, data_dir=None, workers=2):
        self.sessions = {}
        self.jobs = {}
        self.idempotency = {}
        self.lock = threading.Lock()
        self.pool = ThreadPoolExecutor(max_workers=workers)
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            (self.data_dir / "sessions").mkdir(parents=True, exist_ok=True)
            (self.data_dir / "jobs").mkdir(parents=True, exist_ok=True)

    def persist_row(self, sid, row):
        if self.data_dir:
            with open(self.data_dir / "sessions" / f"{sid}.jsonl", "a") as fh:
                fh.write(json.dumps(row) + "\n")

    def persist_job(self, job):
        if self.data_dir:
            with open(self.data_dir / "jobs" / f"{job['id']}.jsonl", "a") as fh:
                fh.write(json.dumps(job) + "\n")


def create_app(data_dir=None, workers=2):
    app = FastAPI(title="quadlab service")
    store = Store(data_dir, workers)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body)

    def get_session(sid):
        sess = store.sessions.get(sid)
        if sess is None:
            raise ApiError(404, "unknown-session", f"no session {sid!r}")
        return sess

    @app.post("/sessions", status_code=201)
    async def create_session(payload: dict):
        key = payload.get("idempotency_key")
        with store.lock:  # creation is cheap; racing duplicates must not fork
            if key and key in store.idempotency:
                return store.sessions[store.idempotency[key]].view()
            try:
                kind = GameKind.from_json(payload["kind"])
                ball = Ball.from_json(payload["initial_ball"])
                engine_side = payload.get("engine_side", "alice")
                if engine_side not in ("alice", "bob"):
                    raise ValidationError("engine-side", "engine_side must be alice or bob")
                spec = dict(payload.get("engine_strategy", {"kind": "dummy"}))
                if spec.get("kind") == "stage_window":
                    spec.setdefault("beta", kind.beta)
                strategy = build_strategy(spec)
                state = new_game(kind, ball)
            except (ValidationError, KeyError, TypeError, ValueError) as err:
                rule = getattr(err, "rule", "request-format")
                raise ApiError(400, rule, str(err)) from err
            sid = uuid.uuid4().hex[:12]
            sess = Session(sid, state, engine_side, strategy, store)
            store.sessions[sid] = sess
            if key:
                store.idempotency[key] = sid
        with sess.lock:
            try:
                sess.engine_turns()
            except IllegalMove as err:
                raise ApiError(500, err.rule, "engine produced an illegal move",
                               err.message) from err
        return sess.view()

    @app.get("/sessions/{sid}")
    async def get_session_view(sid: str):
        return get_session(sid).view()

    @app.post("/sessions/{sid}/moves")
    async def post_move(sid: str, payload: dict):
        sess = get_session(sid)
        with sess.lock:
            if sess.finished:
                raise ApiError(409, "finished", "session is finished")
            human = "bob" if sess.engine_side == "alice" else "alice"
            if sess.state.turn != human:
                raise ApiError(409, "turn-order", f"it is {sess.state.turn}'s turn")
            try:
                move = move_from_json(payload["move"])
            except (ValidationError, KeyError, TypeError) as err:
                raise ApiError(400, getattr(err, "rule", "move-format"), str(err)) from err
            try:
                sess.state = apply_move(sess.state, move)
            except IllegalMove as err:
                raise ApiError(422, err.rule, err.message) from err
            sess.record(sess.state.history[-1])
            if payload.get("final"):
                sess.finished = True
                engine_moves = []
            else:
                try:
                    engine_moves = sess.engine_turns()
                except IllegalMove as err:
                    raise ApiError(500, err.rule, "engine produced an illegal move",
                                   err.message) from err
            view = sess.view()
        view["engine_moves"] = engine_moves
        return view

    def _execute(jid):
        job = store.jobs[jid]
        job["status"] = "running"
        try:
            result = run_job(job["kind"], job["params"])
        except BudgetExceededError as err:
            job.update(status="failed", error={"rule": "budget", "message": str(err)})
        except (ValidationError, ValueError, KeyError, TypeError) as err:
            rule = getattr(err, "rule", "validation")
            job.update(status="failed", error={"rule": rule, "message": str(err)})
        else:
            job.update(status="done", result=result)
        store.persist_job(job)

    @app.post("/jobs", status_code=201)
    async def submit_job(payload: dict):
        kind = payload.get("kind")
        if kind not in JOB_KINDS:
            raise ApiError(400, "job-kind",
                           f"kind must be one of {JOB_KINDS}", kind)
        params = payload.get("params", {})
        jid = uuid.uuid4().hex[:12]
        job = {"id": jid, "kind": kind, "params": params,
               "status": "queued", "result": None, "error": None}
        with store.lock:
            store.jobs[jid] = job
        store.persist_job(job)
        store.pool.submit(_execute, jid)
        return {"id": jid, "kind": kind, "status": job["status"]}

    @app.get("/jobs/{jid}")
    async def get_job(jid: str):
        job = store.jobs.get(jid)
        if job is None:
            raise ApiError(404, "unknown-job", f"no job {jid!r}")
        return job

    return app
