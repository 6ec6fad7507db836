"""Pure numpy implementations of the enumeration kernels.

These are the reference semantics; the Cython module `_native` mirrors them
operation-for-operation.  Floating point evaluation order is pinned in both
backends (same products, same addition order, powers by binary
exponentiation), so the two backends return identical results, not merely
close ones.
"""

import itertools

import numpy as np

BACKEND = "python"


def _ipow(x, k):
    """x**k for integer k >= 0 by square-and-multiply (LSB first)."""
    result = np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
    base = x
    e = int(k)
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def _prefix_terms(A, u_pre, last):
    # B1 = sum_j A[last, j] u_j,  C = sum_{i,j<last} A[i,j] u_i u_j,
    # both in ascending index order (the Cython kernel uses the same order).
    B1 = 0.0
    C = 0.0
    for i in range(last):
        B1 = B1 + A[last, i] * u_pre[i]
        for j in range(last):
            C = C + A[i, j] * u_pre[i] * u_pre[j]
    return B1, C


def count_quadratic(A, eval_shift, stride, norm_shift, zmin, zmax,
                    lo, hi, lo_open, hi_open, norm_mode, norm_bound):
    """Count integer z in the box [zmin, zmax] with

        u = stride*z + eval_shift,   u^T A u in the interval, and
        w = stride*z + norm_shift,   ||w||_2 <= / < norm_bound  (modes 1/2).

    norm_mode 0 trusts the box (sup-norm bounds are encoded in zmin/zmax).
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    zmin = np.asarray(zmin, dtype=np.int64)
    zmax = np.asarray(zmax, dtype=np.int64)
    if np.any(zmax < zmin):
        return 0
    s = float(stride)
    last = n - 1
    z_last = np.arange(zmin[last], zmax[last] + 1, dtype=np.int64).astype(float)
    u_last = s * z_last + eval_shift[last]
    w_last = s * z_last + norm_shift[last]
    w_last_sq = w_last * w_last
    A_ll = A[last, last]
    bsq = float(norm_bound) * float(norm_bound)

    total = 0
    prefix_ranges = [range(int(zmin[i]), int(zmax[i]) + 1) for i in range(last)]
    for z_pre in itertools.product(*prefix_ranges):
        u_pre = [s * z_pre[i] + eval_shift[i] for i in range(last)]
        B1, C = _prefix_terms(A, u_pre, last)
        vals = A_ll * (u_last * u_last) + (2.0 * B1) * u_last + C
        ok = np.ones(len(z_last), dtype=bool)
        if lo_open:
            ok &= vals > lo
        else:
            ok &= vals >= lo
        if hi_open:
            ok &= vals < hi
        else:
            ok &= vals <= hi
        if norm_mode:
            wsq = 0.0
            for i in range(last):
                wp = s * z_pre[i] + norm_shift[i]
                wsq = wsq + wp * wp
            nsq = wsq + w_last_sq
            ok &= (nsq <= bsq) if norm_mode == 1 else (nsq < bsq)
        total += int(np.count_nonzero(ok))
    return total


def _annulus_mask(z_pre, z_last_abs, sup_lo, nonzero_coords):
    """Validity of inner-loop points given the prefix coordinates."""
    if nonzero_coords and any(z == 0 for z in z_pre):
        return None
    pre_max = max((abs(z) for z in z_pre), default=0)
    mask = None
    if pre_max < sup_lo:
        mask = z_last_abs >= sup_lo
    if nonzero_coords:
        nz = z_last_abs != 0
        mask = nz if mask is None else (mask & nz)
    return True if mask is None else mask


def min_abs_quadratic(A, theta, sup_lo, sup_hi, nonzero_coords=False):
    """Minimize |(z+theta)^T A (z+theta)| over sup_lo <= ||z||_inf < sup_hi.

    Returns (min value, argmin as int64 array); the argmin is the first
    minimizer in ascending lexicographic scan order.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    m = int(sup_hi) - 1
    last = n - 1
    z_last = np.arange(-m, m + 1, dtype=np.int64)
    z_last_abs = np.abs(z_last)
    u_last = z_last.astype(float) + theta[last]
    A_ll = A[last, last]

    best = np.inf
    best_arg = None
    for z_pre in itertools.product(*[range(-m, m + 1)] * last):
        mask = _annulus_mask(z_pre, z_last_abs, sup_lo, nonzero_coords)
        if mask is None:
            continue
        u_pre = [float(z_pre[i]) + theta[i] for i in range(last)]
        B1, C = _prefix_terms(A, u_pre, last)
        vals = np.abs(A_ll * (u_last * u_last) + (2.0 * B1) * u_last + C)
        if mask is not True:
            vals = np.where(mask, vals, np.inf)
        k = int(np.argmin(vals))
        if vals[k] < best:
            best = float(vals[k])
            best_arg = z_pre + (int(z_last[k]),)
    arg = np.array(best_arg if best_arg is not None else [0] * n, dtype=np.int64)
    return best, arg


def min_abs_power_family(k, alpha2, alpha3, theta, sup_lo, sup_hi,
                         nonzero_coords=False):
    """Minimize |(x1+t1)^k - a2 (x2+t2)^k - a3 (x3+t3)^k| over the sup-norm
    annulus [sup_lo, sup_hi); 2 variables when a3 == 0."""
    ndim = 2 if alpha3 == 0.0 else 3
    m = int(sup_hi) - 1
    zr = np.arange(-m, m + 1, dtype=np.int64)
    z_abs = np.abs(zr)
    p_last_idx = ndim - 1
    t_last = theta[p_last_idx]
    pow_last = _ipow(zr.astype(float) + t_last, k)
    coef_last = alpha2 if ndim == 2 else alpha3

    best = np.inf
    best_arg = None
    for z_pre in itertools.product(*[range(-m, m + 1)] * (ndim - 1)):
        mask = _annulus_mask(z_pre, z_abs, sup_lo, nonzero_coords)
        if mask is None:
            continue
        head = _ipow(float(z_pre[0]) + theta[0], k)
        if ndim == 3:
            head = head - alpha2 * _ipow(float(z_pre[1]) + theta[1], k)
        vals = np.abs(head - coef_last * pow_last)
        if mask is not True:
            vals = np.where(mask, vals, np.inf)
        j = int(np.argmin(vals))
        if vals[j] < best:
            best = float(vals[j])
            best_arg = z_pre + (int(zr[j]),)
    arg = np.array(best_arg if best_arg is not None else [0] * ndim, dtype=np.int64)
    return best, arg


def four_term_pair_count(a, b, thr):
    """#{(i,j,k,l) : |(a_i - a_j) + (b_k - b_l)| <= thr}."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d1 = (a[:, None] - a[None, :]).ravel()
    d2 = (b[:, None] - b[None, :]).ravel()
    total = 0
    chunk = max(1, int(4_000_000 // max(1, d2.size)))
    for start in range(0, d1.size, chunk):
        block = d1[start:start + chunk]
        total += int((np.abs(block[:, None] + d2[None, :]) <= thr).sum())
    return total


def points_in_disk(basis, shift, center, radius, m1lo, m1hi, m2lo, m2hi):
    """Affine lattice points basis@m + shift within `radius` of `center`,
    scanned over the coefficient box; returned m1-major ascending."""
    b00, b01 = float(basis[0, 0]), float(basis[0, 1])
    b10, b11 = float(basis[1, 0]), float(basis[1, 1])
    m1 = np.arange(m1lo, m1hi + 1, dtype=float)
    m2 = np.arange(m2lo, m2hi + 1, dtype=float)
    M1, M2 = np.meshgrid(m1, m2, indexing="ij")
    px = b00 * M1 + b01 * M2 + float(shift[0])
    py = b10 * M1 + b11 * M2 + float(shift[1])
    dx = px - float(center[0])
    dy = py - float(center[1])
    mask = dx * dx + dy * dy <= float(radius) * float(radius)
    return np.column_stack([px[mask], py[mask]])
