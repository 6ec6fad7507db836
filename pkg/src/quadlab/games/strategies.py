"""Engine strategies: dummy moves, the countable-set blocker for HAW, the
stage/window HPW strategy driven by a pluggable hyperplane oracle, and the
Bob opponents used in simulations."""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .geometry import Ball, HyperplaneNbhd, ball_in_ball, ball_meets_slab, ball_slab_disjoint
from .referee import BallMove, SlabMove, SlabsMove


def _axis_normal(dim, axis=0):
    n = np.zeros(dim)
    n[axis] = 1.0
    return n


def far_slab(state):
    """A legal slab that cannot constrain Bob: parallel to the first axis,
    at least ten radii away from the current ball."""
    B = state.current_ball
    normal = _axis_normal(B.dim)
    c0 = float(B.center[0])
    hw = 0.5 * state.kind.beta * B.radius
    delta = 10.0 * B.radius
    offset = c0 + delta
    while offset - c0 <= hw + 2.0 * B.radius:  # rounded back into the ball
        delta *= 2.0 ** 16
        offset = c0 + delta
    return HyperplaneNbhd(normal, offset, hw)


def dummy_alice(state):
    """No-op Alice: re-centered ball in the classical game, an irrelevant
    far slab in the slab games."""
    kind = state.kind
    if kind.variant == "classical":
        return BallMove(Ball(state.current_ball.center,
                             kind.alpha * state.current_ball.radius))
    if kind.variant == "haw":
        return SlabMove(far_slab(state))
    return SlabsMove((far_slab(state),))


def alice_avoid_countable(targets, dim=None):
    """HAW strategy blocking one target point per turn.

    On Alice's i-th turn the slab of halfwidth beta*r_i around the
    (degenerate) hyperplane through targets[i-1] is played - legal even when
    the target lies far outside B_i.  Nesting then keeps the limit point out
    of every processed target's slab.  After the list is exhausted the
    strategy plays dummy far slabs.
    """
    pts = [np.atleast_1d(np.asarray(t, dtype=float)) for t in targets]

    def strategy(state):
        if state.kind.variant != "haw":
            raise ValidationError("strategy-kind", "avoid_countable needs a haw game")
        i = sum(1 for h in state.history if h.player == "alice")
        if i >= len(pts):
            return SlabMove(far_slab(state))
        q = pts[i]
        eps = state.kind.beta * state.current_ball.radius
        return SlabMove(HyperplaneNbhd.through(q, _axis_normal(q.shape[0]), eps))

    strategy.targets = pts
    return strategy


def minimal_window_order(tau, beta):
    """Smallest n >= 1 with beta^(-n) < e^(2 tau (2^n - 1))."""
    for n in range(1, 65):
        if n * (-math.log(beta)) < 2.0 * tau * (2**n - 1):
            return n
    raise ValidationError("window-order", "no window order n <= 64 works")


def require_flow_step(tau, beta):
    if beta >= math.exp(-2.0 * tau):
        raise ValidationError(
            "flow-step-bound",
            f"stage/window strategy requires beta < exp(-2*tau) = "
            f"{math.exp(-2.0 * tau)!r}; got beta = {beta!r}")


def window_set(tau, beta, n, j):
    """{k >= 0 : beta^(-n(j-1)) <= e^(2 k tau) < beta^(-j n)}."""
    c = -math.log(beta) / (2.0 * tau)
    a = n * (j - 1) * c
    b = n * j * c
    k_min = max(0, math.ceil(a - 1e-12))
    k_max = math.ceil(b - 1e-12) - 1
    return list(range(k_min, k_max + 1))


def window_partition(tau, beta, n, k_max):
    """Map j -> window over all k <= k_max; empty windows are omitted.
    Every k falls in exactly one window and each window has fewer than 2^n
    members."""
    require_flow_step(tau, beta)
    if not n * (-math.log(beta)) < 2.0 * tau * (2**n - 1):
        raise ValidationError(
            "window-order",
            f"n = {n} violates beta^(-n) < e^(2 tau (2^n - 1))")
    c = -math.log(beta) / (2.0 * tau)
    out = {}
    for k in range(0, k_max + 1):
        j = math.floor(k / (n * c) + 1e-12) + 1
        out.setdefault(j, []).append(k)
    return out


def stage_of(r_i, r0, beta, n):
    """Stage index j with beta^(n(j+1)) r0 < r_i <= beta^(nj) r0."""
    x = math.log(r_i / r0) / math.log(beta)
    return max(0, math.floor(x / n + 1e-9))


def synthetic_oracle(family):
    """Adapt a test-double hyperplane family to the oracle contract
    (ball, k) -> (normal, offset).  Accepts a callable, a dict keyed by k,
    or one constant (normal, offset) pair; halfwidths are assigned by the
    strategy, never by the oracle."""
    if callable(family):
        base = family
    elif isinstance(family, dict):
        def base(ball, k):
            return family[k]
    else:
        def base(ball, k):
            return family

    def oracle(ball, k):
        cand = base(ball, k)
        if isinstance(cand, HyperplaneNbhd):
            return cand.normal, cand.offset
        normal, offset = cand
        return np.asarray(normal, dtype=float), float(offset)

    return oracle


def constant_family(normal, offset):
    return synthetic_oracle((normal, offset))


def through_center_family():
    """Adversarial family: the hyperplane through the queried ball's center,
    normal cycling through the axes with k."""
    def fam(ball, k):
        axis = k % ball.dim
        normal = _axis_normal(ball.dim, axis)
        return normal, float(ball.center[axis])
    return synthetic_oracle(fam)


def spread_family(gap=1000.0):
    """Slabs pairwise far apart (and far from play): offsets k*gap."""
    def fam(ball, k):
        return _axis_normal(ball.dim), float(ball.center[0]) + gap * (k + 1)
    return synthetic_oracle(fam)


@dataclass
class StageWindowAlice:
    """HPW Alice of the stage/window construction.

    Requires beta < e^(-2 tau); derives the window order n as the least n
    with beta^(-n) < e^(2 tau (2^n - 1)).  Stages partition the turns by
    radius scale: stage j holds the turns with beta^(n(j+1)) r0 < r_i <=
    beta^(nj) r0.  At the stage-opening turn the oracle is queried for every
    k in the j-th window and the slabs are emitted with halfwidth
    beta^(n+1) * r_{i_j}; later turns of the stage re-emit exactly the stage
    slabs meeting the current ball.  Legality follows from
    beta^(n+1) r_{i_j} <= beta * beta^(n j) r0 < beta r_i.
    """

    tau: float
    beta: float
    oracle: object

    def __post_init__(self):
        require_flow_step(self.tau, self.beta)
        self.n = minimal_window_order(self.tau, self.beta)
        self._stages = {}

    def stage_view(self):
        return dict(self._stages)

    def __call__(self, state):
        if state.kind.variant != "hpw":
            raise ValidationError("strategy-kind", "stage/window Alice needs an hpw game")
        if abs(state.kind.beta - self.beta) > 1e-12:
            raise ValidationError("strategy-kind", "state beta differs from strategy beta")
        B = state.current_ball
        r0 = state.base_radius
        j = stage_of(B.radius, r0, self.beta, self.n)
        if j not in self._stages:
            window = window_set(self.tau, self.beta, self.n, j)
            eps = self.beta ** (self.n + 1) * B.radius
            slabs = []
            for k in window:
                normal, offset = self.oracle(B, k)
                slabs.append(HyperplaneNbhd(normal, offset, eps))
            self._stages[j] = {"j": j, "i_j": state.index, "r_ij": B.radius,
                               "window": window, "slabs": tuple(slabs)}
        stage = self._stages[j]
        live = tuple(s for s in stage["slabs"] if ball_meets_slab(B, s))
        info = {"j": stage["j"], "i_j": stage["i_j"], "r_ij": stage["r_ij"],
                "window": list(stage["window"]), "emitted": len(live)}
        if not live:
            return SlabsMove((far_slab(state),), stage_info=info)
        assert all(s.halfwidth <= self.beta * B.radius * (1 + 1e-12) for s in live)
        return SlabsMove(live, stage_info=info)


def alice_stage_window(tau, beta, oracle):
    """Functional alias for StageWindowAlice."""
    return StageWindowAlice(tau, beta, oracle)


def _haw_fallback_center(B, slab, r):
    s = slab.signed_distance(B.center)
    side = 1.0 if s >= 0 else -1.0
    target = side * (slab.halfwidth + r)
    return B.center + slab.normal * (target - s)


def random_bob(seed, radius_factor=None, tries=100):
    """Legal random Bob.  Classical moves are uniform in the allowed disk;
    slab games sample centers in the shrunk ball and fall back to a
    deterministic construction guaranteed by beta < 1/3 (haw) or retry with
    more samples (hpw)."""
    rng = np.random.default_rng(seed)

    def sample_in_ball(center, radius, dim):
        while True:
            x = rng.uniform(-1.0, 1.0, size=dim)
            if x @ x <= 1.0:
                return center + radius * x

    def strategy(state):
        # near the float resolution wall (radius ~ ulp(center)) sampled
        # points can round outside the ball, so every candidate is checked
        # in full and the same-center ball is the fallback of last resort
        kind, B = state.kind, state.current_ball
        dim = kind.dimension
        if kind.variant == "classical":
            A = state.pending_ball
            r = kind.beta * A.radius
            c = sample_in_ball(A.center, (1.0 - kind.beta) * A.radius, dim)
            cand = Ball(c, r)
            if not ball_in_ball(cand, A):
                cand = Ball(A.center, r)
            return BallMove(cand)
        factor = radius_factor if radius_factor is not None else 1.0
        r = kind.beta * B.radius * factor
        reach = B.radius - r
        if reach < 0:
            r, reach = kind.beta * B.radius, (1.0 - kind.beta) * B.radius
        slabs = state.pending_slabs
        quota = len(slabs) if kind.variant == "haw" else -(-len(slabs) // 2)

        def legal(cand):
            if not ball_in_ball(cand, B):
                return False
            avoided = sum(1 for s in slabs if ball_slab_disjoint(cand, s))
            return avoided >= quota

        n_tries = tries if kind.variant == "haw" else 20 * tries
        for _ in range(n_tries):
            cand = Ball(sample_in_ball(B.center, reach, dim), r)
            if legal(cand):
                return BallMove(cand)
        recentred = Ball(B.center, r)
        if legal(recentred):
            return BallMove(recentred)
        if len(slabs) == 1:
            cand = Ball(_haw_fallback_center(B, slabs[0], r), r)
            if legal(cand):
                return BallMove(cand)
        return None  # resign: no legal ball found at this resolution

    return strategy


def shrinking_bob(direction=None):
    """Deterministic Bob shrinking as fast as the rules allow, drifting in a
    fixed direction when legal."""
    def strategy(state):
        kind, B = state.kind, state.current_ball
        dim = kind.dimension
        d = np.zeros(dim) if direction is None else np.asarray(direction, dtype=float)
        if kind.variant == "classical":
            A = state.pending_ball
            r = kind.beta * A.radius
            c = A.center + d * ((1.0 - kind.beta) * A.radius)
            cand = Ball(c, r)
            if not ball_in_ball(cand, A):
                cand = Ball(A.center, r)
            return BallMove(cand)
        r = kind.beta * B.radius
        cand = Ball(B.center + d * (B.radius - r), r)
        if not ball_in_ball(cand, B):
            cand = Ball(B.center, r)
        if kind.variant == "haw":
            slab = state.pending_slabs[0]
            if not ball_slab_disjoint(cand, slab):
                cand = Ball(_haw_fallback_center(B, slab, r), r)
            return BallMove(cand)
        slabs = state.pending_slabs
        quota = -(-len(slabs) // 2)
        if sum(1 for s in slabs if ball_slab_disjoint(cand, s)) >= quota:
            return BallMove(cand)
        if len(slabs) == 1:
            return BallMove(Ball(_haw_fallback_center(B, slabs[0], r), r))
        return None

    return strategy
