"""Planar affine unimodular lattices: canonical Gauss-reduced representatives,
the diagonal flow, point enumeration, distance to the containment manifold
M_v = {lattices containing v}, and tangent-space transversality checks.

The two orbit diagnostics used throughout are the systole of the linear part
(Mahler boundedness proxy) and dist_to_Mv; no global metric on the space of
affine lattices is implemented.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BudgetExceededError
from .forms import decompose_binary

DET_RESCALE_TOL = 1e-6
POINT_BUDGET = 10**8


@dataclass(frozen=True)
class AffineLattice:
    """basis @ Z^2 + shift with basis columns Gauss-reduced and the shift
    reduced into the fundamental cell.  Build via make_affine_lattice."""

    basis: np.ndarray  # columns b1, b2; det +1; ||b1|| <= ||b2||
    shift: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        w = np.array(self.shift, dtype=float).reshape(2)
        b.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "shift", w)

    @property
    def is_homogeneous(self):
        return bool(np.all(self.shift == 0.0))

    def shift_coordinates(self):
        return np.linalg.solve(self.basis, self.shift)

    def to_json(self):
        b = self.basis
        return {
            "basis": [[b[0, 0], b[1, 0]], [b[0, 1], b[1, 1]]],
            "shift": [self.shift[0], self.shift[1]],
        }


def lattice_from_json(obj):
    v1, v2 = obj["basis"]
    g = np.array([[v1[0], v2[0]], [v1[1], v2[1]]], dtype=float)
    return make_affine_lattice(g, np.asarray(obj.get("shift", [0.0, 0.0]), dtype=float))


def _gauss_reduce(g):
    b1 = g[:, 0].copy()
    b2 = g[:, 1].copy()
    if b1 @ b1 > b2 @ b2:
        b1, b2 = b2, b1
    for _ in range(10_000):
        mu = float(np.round((b1 @ b2) / (b1 @ b1)))
        b2 = b2 - mu * b1
        if b2 @ b2 >= b1 @ b1:
            break
        b1, b2 = b2, b1
    else:
        raise RuntimeError("Gauss reduction did not terminate")
    if b1[0] * b2[1] - b1[1] * b2[0] < 0:
        b2 = -b2
    lead = b1[0] if b1[0] != 0.0 else b1[1]
    if lead < 0:
        b1, b2 = -b1, -b2
    return np.column_stack([b1, b2])


def _is_reduced(g):
    b1, b2 = g[:, 0], g[:, 1]
    n1, n2 = b1 @ b1, b2 @ b2
    if n1 > n2 or abs(b1 @ b2) > 0.5 * n1:
        return False
    if b1[0] * b2[1] - b1[1] * b2[0] <= 0:
        return False
    lead = b1[0] if b1[0] != 0.0 else b1[1]
    return lead > 0


def make_affine_lattice(g, w=(0.0, 0.0)):
    """Canonical representative of g Z^2 + w.

    det(g) must be within 1e-6 of 1 (rescaled to exactly det 1); the basis is
    Gauss-reduced with a pinned sign convention and the shift is reduced so
    its basis coordinates lie in [0, 1).  Idempotent on its own output.
    """
    g = np.asarray(g, dtype=float).reshape(2, 2)
    w = np.asarray(w, dtype=float).reshape(2)
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if det <= 0:
        raise ValueError(f"basis must be positively oriented with det 1, got det {det}")
    if abs(det - 1.0) > DET_RESCALE_TOL:
        raise ValueError(f"det(g) = {det} too far from 1 (tolerance {DET_RESCALE_TOL})")
    if abs(det - 1.0) > 1e-12:  # float-noise dets stay untouched for bit-stability
        g = g / np.sqrt(det)

    reduced = g if _is_reduced(g) else _gauss_reduce(g)
    coords = np.linalg.solve(reduced, w)
    frac = coords - np.floor(coords)
    frac[frac > 1.0 - 1e-9] = 0.0
    if np.array_equal(reduced, g) and np.max(np.abs(frac - coords)) <= 1e-12:
        return AffineLattice(g, w)  # already canonical: keep bits unchanged
    frac[np.abs(frac) < 1e-15] = 0.0
    return AffineLattice(reduced, reduced @ frac)


def systole(L):
    """Length of the shortest nonzero vector of the homogeneous part (the
    shift is ignored); for a Gauss-reduced basis this is ||b1||."""
    return float(np.hypot(L.basis[0, 0], L.basis[1, 0]))


@dataclass(frozen=True)
class FlowElement:
    """Diagonal flow time t, acting by diag(e^t, e^-t)."""

    t: float

    @property
    def matrix(self):
        return np.diag([np.exp(self.t), np.exp(-self.t)])

    def compose(self, other):
        return FlowElement(self.t + other.t)


def flow_apply(L, t):
    bt = np.diag([np.exp(t), np.exp(-t)])
    return make_affine_lattice(bt @ L.basis, bt @ L.shift)


def _coefficient_box(L, center, R, pad=1e-9):
    ginv = np.linalg.inv(L.basis)
    mid = ginv @ (np.asarray(center, dtype=float) - L.shift)
    rad = R * np.linalg.norm(ginv, axis=1)
    lo = np.ceil(mid - rad - pad).astype(np.int64)
    hi = np.floor(mid + rad + pad).astype(np.int64)
    return lo, hi


def points_near(L, center, R):
    """All points of the affine lattice within Euclidean distance R of
    center (boundary included), as an (N, 2) array."""
    if R <= 0:
        raise ValueError("radius must be positive")
    if R > 1e6 * systole(L):
        raise ValueError("radius too large relative to the lattice scale")
    lo, hi = _coefficient_box(L, center, R)
    est = float(hi[0] - lo[0] + 1) * float(hi[1] - lo[1] + 1)
    if est > POINT_BUDGET:
        raise BudgetExceededError(
            f"enumeration box of {est:.3g} coefficient pairs exceeds {POINT_BUDGET:.0e}")
    center = np.asarray(center, dtype=float)
    return _kernels.points_in_disk(
        np.ascontiguousarray(L.basis), L.shift, center, float(R),
        int(lo[0]), int(hi[0]), int(lo[1]), int(hi[1]))


def choose_v(s):
    """A vector with Q0(v) = s and both coordinates nonzero:
    (sqrt s, sqrt s) for s > 0, (-sqrt(-s), sqrt(-s)) otherwise."""
    if s == 0:
        raise ValueError("s must be nonzero")
    r = np.sqrt(abs(s))
    return np.array([r, r]) if s > 0 else np.array([-r, r])


def dist_to_Mv(L, v):
    """min over lattice points p of ||p - v||: 0 iff v lies in the lattice.

    Closest-vector by exhaustive search over the +-2 coefficient
    neighborhood of the rounded solution (exact for reduced planar bases).
    """
    v = np.asarray(v, dtype=float)
    c = np.linalg.solve(L.basis, v - L.shift)
    m0 = np.round(c).astype(np.int64)
    best = np.inf
    for d1 in range(-2, 3):
        for d2 in range(-2, 3):
            p = L.basis @ (m0 + np.array([d1, d2])).astype(float) + L.shift
            best = min(best, float(np.hypot(p[0] - v[0], p[1] - v[1])))
    return best


@dataclass(frozen=True)
class MvManifold:
    """The affine lattices containing v; v needs both coordinates nonzero."""

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float).reshape(2)
        if v[0] == 0.0 or v[1] == 0.0:
            raise ValueError("M_v needs both coordinates of v nonzero")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    def contains(self, L, tol=1e-9):
        return dist_to_Mv(L, self.v) <= tol

    def lie_generators(self):
        v1, v2 = self.v
        return [
            TangentVector(np.array([[1.0, 0.0], [0.0, -1.0]]), np.array([-v1, v2])),
            TangentVector(np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([-v2, 0.0])),
            TangentVector(np.array([[0.0, 0.0], [1.0, 0.0]]), np.array([0.0, -v1])),
        ]


@dataclass(frozen=True)
class TangentVector:
    """Element (traceless 2x2 matrix, 2-vector) of the 5-dimensional tangent
    space; coordinates (a, b, c, u1, u2) for [[a, b], [c, -a]]."""

    matrix_part: np.ndarray
    vector_part: np.ndarray

    def __post_init__(self):
        M = np.array(self.matrix_part, dtype=float).reshape(2, 2)
        u = np.array(self.vector_part, dtype=float).reshape(2)
        if abs(M[0, 0] + M[1, 1]) > 1e-12:
            raise ValueError("matrix part must be traceless (1e-12)")
        M.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "matrix_part", M)
        object.__setattr__(self, "vector_part", u)

    def coords(self):
        M, u = self.matrix_part, self.vector_part
        return np.array([M[0, 0], M[0, 1], M[1, 0], u[0], u[1]])


FLOW_TANGENT = TangentVector(np.array([[1.0, 0.0], [0.0, -1.0]]), np.zeros(2))
HPLUS_TANGENT = TangentVector(np.array([[0.0, 1.0], [0.0, 0.0]]), np.zeros(2))
HMINUS_TANGENT = TangentVector(np.array([[0.0, 0.0], [1.0, 0.0]]), np.zeros(2))

RANK_TOL = 1e-9


@dataclass(frozen=True)
class TransversalityReport:
    F_condition: bool
    Hplus_condition: bool
    Hminus_condition: bool

    def all_pass(self):
        return self.F_condition and self.Hplus_condition and self.Hminus_condition


def _rank(rows):
    return np.linalg.matrix_rank(np.vstack(rows), tol=RANK_TOL)


def transversality_check_Mv(v):
    """Rank-jump transversality test for M_v inside the 5-dimensional space:
    the flow direction must leave span(Lie K_v), and each horospherical
    direction must leave span(Lie F + Lie K_v).  Degenerate v (a zero
    coordinate) is allowed in order to witness failure."""
    v = np.asarray(v, dtype=float).reshape(2)
    v1, v2 = v
    kv = [
        np.array([1.0, 0.0, 0.0, -v1, v2]),
        np.array([0.0, 1.0, 0.0, -v2, 0.0]),
        np.array([0.0, 0.0, 1.0, 0.0, -v1]),
    ]
    f = FLOW_TANGENT.coords()
    hp = HPLUS_TANGENT.coords()
    hm = HMINUS_TANGENT.coords()
    base = _rank(kv)
    f_cond = _rank(kv + [f]) > base
    fk = _rank(kv + [f])
    return TransversalityReport(
        F_condition=bool(f_cond),
        Hplus_condition=bool(_rank(kv + [f, hp]) > fk),
        Hminus_condition=bool(_rank(kv + [f, hm]) > fk),
    )


def theta_transversality(tangent_dir, manifold_tangent):
    """Norm of the component of the normalized direction orthogonal to the
    span of the manifold tangent vectors (Euclidean on the 5 coordinates)."""
    x = tangent_dir.coords()
    nx = np.linalg.norm(x)
    if nx == 0.0:
        raise ValueError("direction must be nonzero")
    x = x / nx
    B = np.vstack([t.coords() for t in manifold_tangent]).T
    if np.linalg.matrix_rank(B, tol=RANK_TOL) < B.shape[1]:
        raise ValueError("manifold tangent vectors must be linearly independent")
    coef, *_ = np.linalg.lstsq(B, x, rcond=None)
    return float(np.linalg.norm(x - B @ coef))


@dataclass(frozen=True)
class CorrespondenceRecord:
    value_gap: float
    orbit_gap: float
    witness_point: np.ndarray | None
    witness_time: float | None
    witness_pull_distance: float | None
    orbit_gap_time: float


def correspondence_scan(L, s, R, T, dt):
    """Two sides of the values <-> orbit correspondence for target s:

    value_gap  = min |Q0(p) - s| over lattice points with ||p|| <= R;
    orbit_gap  = min over the time grid of dist_to_Mv(b_t L, choose_v(s)).

    The best same-quadrant witness p is flowed onto the line through v at
    t* = 0.5*log((v1 p2)/(v2 p1)); its pulled distance to v shrinks with the
    value error.  Opposite-quadrant witnesses contribute to value_gap only.
    """
    if s == 0:
        raise ValueError("s must be nonzero")
    if dt > 0.1:
        raise ValueError("time step must be <= 0.1")
    v = choose_v(s)
    pts = points_near(L, np.zeros(2), R)
    vals = pts[:, 0] * pts[:, 1]
    err = np.abs(vals - s)
    value_gap = float(err.min()) if len(err) else np.inf

    witness_point = witness_time = witness_pull = None
    quad = (pts[:, 0] * v[0] > 0) & (pts[:, 1] * v[1] > 0)
    if np.any(quad):
        idx = int(np.argmin(np.where(quad, err, np.inf)))
        p = pts[idx]
        witness_point = p
        witness_time = 0.5 * np.log((v[0] * p[1]) / (v[1] * p[0]))
        pulled = np.array([np.exp(witness_time) * p[0], np.exp(-witness_time) * p[1]])
        witness_pull = float(np.linalg.norm(pulled - v))

    orbit_gap = np.inf
    gap_time = 0.0
    n_steps = int(round(T / dt))
    for k in range(-n_steps, n_steps + 1):
        t = k * dt  # integer-indexed grid so grids nest across T choices
        d = dist_to_Mv(flow_apply(L, t), v)
        if d < orbit_gap:
            orbit_gap = d
            gap_time = t
    return CorrespondenceRecord(value_gap, float(orbit_gap), witness_point,
                                witness_time, witness_pull, gap_time)


def orbit_scan(L, t_lo, t_hi, dt, v=None):
    """Sampled orbit diagnostics; one row per time step."""
    rows = []
    for k in range(int(round((t_hi - t_lo) / dt)) + 1):
        t = t_lo + k * dt
        Lt = flow_apply(L, float(t))
        row = {"t": float(t), "systole": systole(Lt)}
        if v is not None:
            row["dist_to_Mv"] = dist_to_Mv(Lt, v)
        rows.append(row)
    return rows


def orbit_bounded(L, t_lo, t_hi, dt, threshold=0.1):
    """Sampled sufficient statistic for flow boundedness: does the systole
    stay above the threshold on the window?  Returns (verdict, min systole)."""
    m = min(row["systole"] for row in orbit_scan(L, t_lo, t_hi, dt))
    return m >= threshold, m


def form_lattice(f):
    """The affine lattice g Z^2 + g.shift of the binary decomposition of f:
    the values of f on Z^2 equal lam times Q0 on this lattice."""
    dec = decompose_binary(f)
    return make_affine_lattice(dec.map.linear, dec.map.translation)
