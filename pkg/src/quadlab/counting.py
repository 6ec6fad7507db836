"""Exact brute-force counting and minimization engines: interval counts of
shifted form values, congruence-class counts, shrinking-target runs with
log-log growth fits, dyadic-shell minimum search, and the four-term
inequality count."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BudgetExceededError

COUNT_BUDGET = 10**9


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval needs lo <= hi")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x):
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    @staticmethod
    def open(lo, hi):
        return Interval(lo, hi, True, True)

    @staticmethod
    def closed(lo, hi):
        return Interval(lo, hi, False, False)


@dataclass(frozen=True)
class CountRecord:
    t: float
    count: int
    predicted: float | None = None
    residual: float | None = None


@dataclass(frozen=True)
class GrowthFit:
    exponent: float
    coefficient: float
    max_residual: float


@dataclass(frozen=True)
class FourTermParams:
    M: int
    alpha: float
    beta_coef: float
    theta1: float = 0.0
    theta2: float = 0.0
    delta: float = 0.1

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be a positive integer")
        if self.alpha in (0.0, 1.0):
            raise ValueError("alpha must avoid {0, 1}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")


@dataclass(frozen=True)
class DiagonalPowerForm:
    """x1^k - alpha2 x2^k - alpha3 x3^k; two variables when alpha3 == 0."""

    k: int
    alpha2: float
    alpha3: float = 0.0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("degree must be >= 2")

    @property
    def dim(self):
        return 2 if self.alpha3 == 0.0 else 3

    def value(self, x, theta):
        x = np.asarray(x, dtype=float) + np.asarray(theta[: self.dim], dtype=float)
        v = float(x[0] ** self.k) - self.alpha2 * float(x[1] ** self.k)
        if self.dim == 3:
            v -= self.alpha3 * float(x[2] ** self.k)
        return v


@dataclass(frozen=True)
class MinRecord:
    min_abs_value: float
    argmin: tuple


def _norm_box(n, stride, offset, t, strict):
    """Integer ranges for z with |stride*z + offset_i| <= t (or < t)."""
    zmin = np.empty(n, dtype=np.int64)
    zmax = np.empty(n, dtype=np.int64)
    for i in range(n):
        r = float(offset[i])
        lo = math.ceil((-t - r) / stride)
        hi = math.floor((t - r) / stride)
        if strict:
            if stride * hi + r >= t:
                hi -= 1
            if stride * lo + r <= -t:
                lo += 1
        zmin[i], zmax[i] = lo, hi
    return zmin, zmax


def _check_budget(zmin, zmax):
    est = 1.0
    for a, b in zip(zmin, zmax):
        est *= max(0.0, float(b - a + 1))
    if est > COUNT_BUDGET:
        raise BudgetExceededError(
            f"enumeration of {est:.3g} integer points exceeds {COUNT_BUDGET:.0e}")


def _count_threaded(A, eval_shift, stride, norm_shift, zmin, zmax, I,
                    norm_mode, bound, threads):
    args = (float(I.lo), float(I.hi), bool(I.lo_open), bool(I.hi_open),
            int(norm_mode), float(bound))
    if threads <= 1 or zmax[0] - zmin[0] < 2 * threads:
        return _kernels.count_quadratic(A, eval_shift, stride, norm_shift,
                                        zmin, zmax, *args)
    edges = np.linspace(zmin[0], zmax[0] + 1, threads + 1).astype(np.int64)
    jobs = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        lo_c, hi_c = zmin.copy(), zmax.copy()
        lo_c[0], hi_c[0] = a, b - 1
        jobs.append((lo_c, hi_c))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(
            lambda box: _kernels.count_quadratic(
                A, eval_shift, stride, norm_shift, box[0], box[1], *args),
            jobs)
    return sum(parts)


def count_in_interval(f, I, t, norm="euclidean", strict=False, threads=1):
    """#{y integer : f(y) in I, ||y|| <= t} (strict=True uses ||y|| < t).

    Exact enumeration over the integer box; deterministic and independent of
    the thread count.
    """
    if t <= 0:
        return 0
    n = f.dim
    A = np.ascontiguousarray(f.form.coeffs)
    zeros = np.zeros(n)
    zmin, zmax = _norm_box(n, 1.0, zeros, float(t), strict if norm == "sup" else False)
    _check_budget(zmin, zmax)
    if norm == "sup":
        mode = 0
    elif norm == "euclidean":
        mode = 2 if strict else 1
    else:
        raise ValueError("norm must be 'euclidean' or 'sup'")
    return _count_threaded(A, f.shift, 1.0, zeros, zmin, zmax, I, mode, float(t), threads)


def count_congruence(Q, I, t, p, q, norm="euclidean", strict=True, threads=1):
    """#{w integer : Q(w) in I, w = p mod q, ||w|| < t} by strided
    enumeration of the residue class (default strict norm bound)."""
    if q < 1:
        raise ValueError("modulus q must be a positive integer")
    n = Q.dim
    A = np.ascontiguousarray(Q.coeffs)
    r = np.asarray(p, dtype=np.int64).reshape(n) % q
    r = r.astype(float)
    zmin, zmax = _norm_box(n, float(q), r, float(t), strict if norm == "sup" else False)
    _check_budget(zmin, zmax)
    if norm == "sup":
        mode = 0
    elif norm == "euclidean":
        mode = 2 if strict else 1
    else:
        raise ValueError("norm must be 'euclidean' or 'sup'")
    return _count_threaded(A, r, float(q), r, zmin, zmax, I, mode, float(t), threads)


def shrinking_target_run(f, c, kappa, t_list, target=0.0, norm="euclidean",
                         strict=False, threads=1):
    """Counts against the shrinking windows (target +- c t^-kappa / 2); the
    records carry the log-log fit's prediction once >= 3 counts are positive."""
    if c <= 0:
        raise ValueError("window coefficient c must be positive")
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    if list(t_list) != sorted(t_list):
        raise ValueError("t_list must be increasing")
    raw = []
    for t in t_list:
        w = c * float(t) ** (-kappa)
        I = Interval.open(target - w / 2, target + w / 2)
        raw.append((float(t), count_in_interval(f, I, t, norm, strict, threads)))
    fit = None
    if sum(1 for _, cnt in raw if cnt > 0) >= 3:
        fit = fit_growth([CountRecord(t, cnt) for t, cnt in raw])
    records = []
    for t, cnt in raw:
        pred = res = None
        if fit is not None:
            pred = fit.coefficient * t ** fit.exponent
            res = cnt - pred
        records.append(CountRecord(t, cnt, pred, res))
    return records


def fit_growth(records):
    """Least squares of log(count) against log(t); needs >= 3 positive
    counts.  max_residual is the largest absolute log-space residual."""
    pts = [(r.t, r.count) for r in records if r.count > 0]
    if len(pts) < 3:
        raise ValueError("growth fit needs at least 3 records with positive counts")
    lt = np.log([t for t, _ in pts])
    ln = np.log([n for _, n in pts])
    exponent, log_c = np.polyfit(lt, ln, 1)
    resid = ln - (exponent * lt + log_c)
    return GrowthFit(float(exponent), float(np.exp(log_c)),
                     float(np.max(np.abs(resid))))


def min_abs_in_annulus(form, theta, lo, hi, exclude_axes=False):
    """Exact min of |form(x + theta)| over integers with lo <= ||x||_inf < hi.

    `form` is a QuadraticForm or a DiagonalPowerForm.  With exclude_axes
    every coordinate of x must be nonzero.  The argmin is the first
    minimizer in scan order, canonicalized when the symmetry allows it
    (global sign flip for quadratics at theta=0; componentwise absolute
    value for even-degree diagonal families at theta=0).
    """
    if not 1 <= lo < hi:
        raise ValueError("need 1 <= lo < hi")
    ndim = form.dim
    theta = np.asarray(theta, dtype=float).reshape(-1)[:ndim]
    if theta.shape[0] != ndim:
        raise ValueError("theta must cover the form's dimension")
    side = 2 * (hi - 1) + 1
    if float(side) ** ndim > COUNT_BUDGET:
        raise BudgetExceededError(
            f"shell box of {float(side) ** ndim:.3g} points exceeds {COUNT_BUDGET:.0e}")
    theta_zero = bool(np.all(theta == 0.0))
    if isinstance(form, DiagonalPowerForm):
        best, arg = _kernels.min_abs_power_family(
            int(form.k), float(form.alpha2), float(form.alpha3),
            np.ascontiguousarray(np.pad(theta, (0, 3 - ndim))),
            int(lo), int(hi), bool(exclude_axes))
        if theta_zero and form.k % 2 == 0:
            arg = np.abs(arg)
    else:
        best, arg = _kernels.min_abs_quadratic(
            np.ascontiguousarray(form.coeffs), theta, int(lo), int(hi),
            bool(exclude_axes))
        if theta_zero:
            lead = next((x for x in arg if x != 0), 0)
            if lead < 0:
                arg = -arg
    return MinRecord(float(best), tuple(int(x) for x in arg))


def min_search_delta(form, theta, N):
    """Minimum of |form(x + theta)| over the dyadic shell N <= ||x||_inf < 2N."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    return min_abs_in_annulus(form, theta, int(N), 2 * int(N))


def four_term_count(params):
    """Exact number of tuples (m1,m2,m3,m4) in [M,2M]^4 with
    |(m1+t1)^a - (m2+t1)^a + b(m3+t2)^a - b(m4+t2)^a| <= delta*M^a."""
    M = params.M
    if float(M + 1) ** 4 > COUNT_BUDGET:
        raise BudgetExceededError(f"(M+1)^4 with M={M} exceeds {COUNT_BUDGET:.0e}")
    ms = np.arange(M, 2 * M + 1, dtype=float)
    with np.errstate(invalid="raise"):
        try:
            a = (ms + params.theta1) ** params.alpha
            b = params.beta_coef * ((ms + params.theta2) ** params.alpha)
        except FloatingPointError:
            raise ValueError(
                "fractional power of a negative base; shift theta out of range") from None
    thr = params.delta * float(M) ** params.alpha
    return _kernels.four_term_pair_count(
        np.ascontiguousarray(a), np.ascontiguousarray(b), float(thr))
