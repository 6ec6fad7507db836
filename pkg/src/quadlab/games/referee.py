"""Rule-enforcing referees for the three nested-ball games.

classical(alpha, beta): Alice's ball has radius exactly alpha*r_i inside
    B_i; Bob's has radius exactly beta*alpha*r_i inside A_i.
haw(beta), beta in (0, 1/3): Alice removes one slab of halfwidth <= beta*r_i;
    Bob plays B_{i+1} inside B_i, disjoint from the slab, r_{i+1} >= beta*r_i.
hpw(beta), beta in (0, beta0(n)): Alice removes finitely many slabs of
    halfwidth <= beta*r_i; Bob must shrink no faster than beta and stay
    disjoint from at least ceil(N_i/2) of them.

Every rejected move raises IllegalMove with the violated rule's name.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import ValidationError
from .geometry import Ball, HyperplaneNbhd, ball_in_ball, ball_slab_disjoint

RADIUS_RTOL = 1e-12


class IllegalMove(ValidationError):
    pass


def beta0_default(n):
    """Safe Bob-can-always-move bound: 1/5 in dimension 1, a conservative
    1/(2*3^n) placeholder above (an explicit override is accepted)."""
    return Fraction(1, 5) if n == 1 else Fraction(1, 2 * 3**n)


@dataclass(frozen=True)
class GameKind:
    variant: str
    dimension: int
    beta: float
    alpha: float | None = None
    beta0: float | None = None

    def __post_init__(self):
        n = self.dimension
        if self.variant not in ("classical", "haw", "hpw"):
            raise ValidationError("variant", f"unknown game variant {self.variant!r}")
        if n < 1:
            raise ValidationError("dimension", "dimension must be >= 1")
        if self.variant == "classical":
            if self.alpha is None or not 0 < self.alpha < 1:
                raise ValidationError(
                    "alpha-range", f"classical requires alpha in (0, 1); got {self.alpha}")
            if not 0 < self.beta < 1:
                raise ValidationError(
                    "beta-range", f"classical requires beta in (0, 1); got {self.beta}")
        elif self.variant == "haw":
            if not 0 < self.beta < 1 / 3:
                raise ValidationError(
                    "beta-range", f"haw requires beta in (0, 1/3); got {self.beta}")
        else:
            b0 = self.beta0 if self.beta0 is not None else beta0_default(n)
            if not 0 < self.beta < b0:
                raise ValidationError(
                    "beta-range",
                    f"hpw requires beta in (0, beta0({n})); beta0({n}) = {b0}; "
                    f"got {self.beta}")

    def beta0_value(self):
        if self.variant != "hpw":
            return None
        return float(self.beta0 if self.beta0 is not None else beta0_default(self.dimension))

    def to_json(self):
        return {"variant": self.variant, "dimension": self.dimension,
                "beta": self.beta, "alpha": self.alpha, "beta0": self.beta0}

    @staticmethod
    def from_json(obj):
        return GameKind(obj["variant"], obj["dimension"], obj["beta"],
                        obj.get("alpha"), obj.get("beta0"))


@dataclass(frozen=True)
class BallMove:
    ball: Ball

    def to_json(self):
        return {"type": "ball", **self.ball.to_json()}


@dataclass(frozen=True)
class SlabMove:
    slab: HyperplaneNbhd

    def to_json(self):
        return {"type": "slab", **self.slab.to_json()}


@dataclass(frozen=True)
class SlabsMove:
    slabs: tuple
    stage_info: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "slabs", tuple(self.slabs))

    def to_json(self):
        out = {"type": "slabs", "slabs": [s.to_json() for s in self.slabs]}
        if self.stage_info is not None:
            out["stage"] = self.stage_info
        return out


def move_from_json(obj):
    t = obj["type"]
    if t == "ball":
        return BallMove(Ball(obj["center"], obj["radius"]))
    if t == "slab":
        return SlabMove(HyperplaneNbhd(obj["normal"], obj["offset"], obj["halfwidth"]))
    if t == "slabs":
        return SlabsMove(tuple(HyperplaneNbhd.from_json(s) for s in obj["slabs"]),
                         obj.get("stage"))
    raise ValidationError("move-format", f"unknown move type {t!r}")


@dataclass(frozen=True)
class HistoryEntry:
    index: int
    player: str
    move: object
    radius_before: float
    radius_after: float
    surviving_slabs: int | None = None

    def to_json(self):
        out = {"turn": self.index, "player": self.player,
               "move": self.move.to_json(), "verdict": "accepted",
               "radii": {"before": self.radius_before, "after": self.radius_after}}
        if self.surviving_slabs is not None:
            out["surviving_slabs"] = self.surviving_slabs
        return out


@dataclass(frozen=True)
class GameState:
    kind: GameKind
    turn: str
    index: int                       # i: number of Bob balls played
    current_ball: Ball
    pending_ball: Ball | None = None       # classical Alice's A_i
    pending_slabs: tuple = ()              # haw/hpw Alice's latest slabs
    history: tuple = ()
    stage_data: dict | None = None
    base_radius: float = 0.0

    @property
    def mover(self):
        return self.turn

    def radii(self):
        out = [self.base_radius]
        out.extend(h.radius_after for h in self.history if h.player == "bob")
        return out


def new_game(kind, initial_ball):
    """Start a match: Bob's B_1 is recorded and Alice is to move."""
    if initial_ball.dim != kind.dimension:
        raise ValidationError(
            "dimension-mismatch",
            f"initial ball has dimension {initial_ball.dim}, game has {kind.dimension}")
    return GameState(kind=kind, turn="alice", index=1, current_ball=initial_ball,
                     base_radius=initial_ball.radius)


def _radius_equal(r, expect):
    return abs(r - expect) <= RADIUS_RTOL * expect


def _check_dim(obj, state):
    if obj.dim != state.kind.dimension:
        raise IllegalMove("dimension-mismatch",
                          f"move dimension {obj.dim} != game dimension {state.kind.dimension}")


def _alice_classical(state, move):
    if not isinstance(move, BallMove):
        raise IllegalMove("move-format", "classical Alice plays a ball")
    _check_dim(move.ball, state)
    kind, B = state.kind, state.current_ball
    expect = kind.alpha * B.radius
    if not _radius_equal(move.ball.radius, expect):
        raise IllegalMove("radius-ratio",
                          f"Alice's radius must equal alpha*r_i = {expect!r}")
    if not ball_in_ball(move.ball, B):
        raise IllegalMove("containment", "A_i must lie inside B_i")
    return GameState(kind=kind, turn="bob", index=state.index,
                     current_ball=B, pending_ball=move.ball,
                     pending_slabs=(), history=state.history + (
                         HistoryEntry(state.index, "alice", move, B.radius, B.radius),),
                     stage_data=state.stage_data, base_radius=state.base_radius)


def _bob_classical(state, move):
    if not isinstance(move, BallMove):
        raise IllegalMove("move-format", "classical Bob plays a ball")
    _check_dim(move.ball, state)
    kind, A = state.kind, state.pending_ball
    expect = kind.beta * A.radius
    if not _radius_equal(move.ball.radius, expect):
        raise IllegalMove("radius-ratio",
                          f"Bob's radius must equal beta*r_i' = {expect!r}")
    if not ball_in_ball(move.ball, A):
        raise IllegalMove("containment", "B_{i+1} must lie inside A_i")
    return _advance_bob(state, move, surviving=None)


def _alice_slabs(state, move, slabs):
    for s in slabs:
        _check_dim(s, state)
    limit = state.kind.beta * state.current_ball.radius
    for s in slabs:
        if s.halfwidth > limit * (1.0 + RADIUS_RTOL):
            raise IllegalMove(
                "halfwidth-bound",
                f"slab halfwidth {s.halfwidth!r} exceeds beta*r_i = {limit!r}")
    stage = move.stage_info if isinstance(move, SlabsMove) else state.stage_data
    return GameState(kind=state.kind, turn="bob", index=state.index,
                     current_ball=state.current_ball, pending_ball=None,
                     pending_slabs=tuple(slabs), history=state.history + (
                         HistoryEntry(state.index, "alice", move,
                                      state.current_ball.radius,
                                      state.current_ball.radius),),
                     stage_data=stage, base_radius=state.base_radius)


def _bob_slab_game(state, move):
    if not isinstance(move, BallMove):
        raise IllegalMove("move-format", "Bob plays a ball")
    _check_dim(move.ball, state)
    kind, B, ball = state.kind, state.current_ball, move.ball
    if ball.radius < kind.beta * B.radius * (1.0 - RADIUS_RTOL):
        raise IllegalMove("radius-ratio",
                          f"r_(i+1) = {ball.radius!r} below beta*r_i = {kind.beta * B.radius!r}")
    if not ball_in_ball(ball, B):
        raise IllegalMove("containment", "B_(i+1) must lie inside B_i")
    if kind.variant == "haw":
        for s in state.pending_slabs:
            if not ball_slab_disjoint(ball, s):
                raise IllegalMove("haw-disjointness",
                                  "B_(i+1) must avoid Alice's neighborhood")
        surviving = 0
    else:
        N = len(state.pending_slabs)
        avoided = sum(1 for s in state.pending_slabs if ball_slab_disjoint(ball, s))
        quota = -(-N // 2)  # ceil(N/2)
        if avoided < quota:
            raise IllegalMove(
                "avoidance-quota",
                f"Bob avoided {avoided} of {N} slabs; needs at least {quota}")
        surviving = N - avoided
    return _advance_bob(state, move, surviving)


def _advance_bob(state, move, surviving):
    entry = HistoryEntry(state.index, "bob", move, state.current_ball.radius,
                         move.ball.radius, surviving)
    return GameState(kind=state.kind, turn="alice", index=state.index + 1,
                     current_ball=move.ball, pending_ball=None,
                     pending_slabs=(), history=state.history + (entry,),
                     stage_data=state.stage_data, base_radius=state.base_radius)


def apply_move(state, move):
    """Validate and apply one move; returns the new state or raises
    IllegalMove naming the violated rule."""
    player = state.turn
    if player == "alice":
        if state.kind.variant == "classical":
            return _alice_classical(state, move)
        if state.kind.variant == "haw":
            if not isinstance(move, SlabMove):
                raise IllegalMove("move-format", "haw Alice plays a single slab")
            return _alice_slabs(state, move, (move.slab,))
        if not isinstance(move, SlabsMove) or not move.slabs:
            raise IllegalMove("move-format", "hpw Alice plays a nonempty slab list")
        return _alice_slabs(state, move, move.slabs)
    if state.kind.variant == "classical":
        return _bob_classical(state, move)
    return _bob_slab_game(state, move)


@dataclass
class MatchResult:
    state: GameState
    transcript: list
    termination: str
    limit_estimate: np.ndarray = field(default=None)
    error_bound: float = 0.0

    def __post_init__(self):
        self.limit_estimate = np.asarray(self.state.current_ball.center)
        self.error_bound = self.state.current_ball.radius


def play_match(state, alice, bob, max_turns):
    """Alternate the two strategies through the referee.

    A strategy is a callable state -> move (or None to resign).  The final
    ball's center is the limit estimate with its radius as error bound.
    Illegal strategy moves terminate the match with a diagnostic row.
    """
    transcript = [{"header": True, "kind": state.kind.to_json(),
                   "initial": state.current_ball.to_json()}]
    termination = "turn-limit"
    for _ in range(max_turns):
        strategy = alice if state.turn == "alice" else bob
        player = state.turn
        move = strategy(state)
        if move is None:
            termination = f"resigned:{player}"
            break
        try:
            state = apply_move(state, move)
        except IllegalMove as err:
            transcript.append({"turn": state.index, "player": player,
                               "move": move.to_json(),
                               "verdict": f"rejected:{err.rule}",
                               "detail": err.message})
            termination = f"illegal-move:{player}"
            break
        transcript.append(state.history[-1].to_json())
    return MatchResult(state, transcript, termination)


def write_transcript(rows, path):
    with open(path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def read_transcript(path):
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def replay_transcript(rows):
    """Re-drive a recorded match through the referee; verdicts must agree.

    Returns the reconstructed final state.
    """
    header = rows[0]
    if not header.get("header"):
        raise ValidationError("transcript-format", "first row must be the header")
    state = new_game(GameKind.from_json(header["kind"]),
                     Ball.from_json(header["initial"]))
    for row in rows[1:]:
        move = move_from_json(row["move"])
        verdict = row.get("verdict", "accepted")
        if verdict == "accepted":
            state = apply_move(state, move)
        else:
            rule = verdict.split(":", 1)[1]
            try:
                apply_move(state, move)
            except IllegalMove as err:
                if err.rule != rule:
                    raise ValidationError(
                        "replay-divergence",
                        f"recorded rejection {rule!r}, replay got {err.rule!r}")
            else:
                raise ValidationError(
                    "replay-divergence", f"recorded rejection {rule!r}, replay accepted")
    return state
