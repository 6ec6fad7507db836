# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Cython kernel core: same semantics and float operation order as `_py`."""

from libc.math cimport fabs, INFINITY

import numpy as np

BACKEND = "native"


cdef inline double _ipow(double x, long k) noexcept nogil:
    cdef double result = 1.0
    cdef double base = x
    cdef long e = k
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


cdef inline bint _odometer_step(long* z, const long* zmin, const long* zmax, int ndim) noexcept nogil:
    # advance the length-ndim counter; False once exhausted
    cdef int i = ndim - 1
    while i >= 0:
        if z[i] < zmax[i]:
            z[i] += 1
            return True
        z[i] = zmin[i]
        i -= 1
    return False


def count_quadratic(const double[:, ::1] A, const double[::1] eval_shift, double stride,
                    const double[::1] norm_shift, const long[::1] zmin, const long[::1] zmax,
                    double lo, double hi, bint lo_open, bint hi_open,
                    int norm_mode, double norm_bound):
    cdef int n = A.shape[0]
    cdef int last = n - 1
    cdef int i, j
    cdef long zi
    cdef long long total = 0
    cdef double A_ll = A[last, last]
    cdef double bsq = norm_bound * norm_bound
    cdef double B1, C, ul, wl, wp, val, nsq, wsq, up_i, up_j
    cdef bint ok, running = True

    for i in range(n):
        if zmax[i] < zmin[i]:
            return 0

    cdef long[::1] z = np.array(zmin[:last], dtype=np.int64) if last else np.empty(0, dtype=np.int64)
    cdef long z_last0 = zmin[last], z_last1 = zmax[last]
    cdef double es_last = eval_shift[last], ns_last = norm_shift[last]

    with nogil:
        while running:
            B1 = 0.0
            C = 0.0
            wsq = 0.0
            for i in range(last):
                up_i = stride * z[i] + eval_shift[i]
                B1 = B1 + A[last, i] * up_i
                for j in range(last):
                    up_j = stride * z[j] + eval_shift[j]
                    C = C + A[i, j] * up_i * up_j
            if norm_mode:
                for i in range(last):
                    wp = stride * z[i] + norm_shift[i]
                    wsq = wsq + wp * wp
            for zi in range(z_last0, z_last1 + 1):
                ul = stride * zi + es_last
                val = A_ll * (ul * ul) + (2.0 * B1) * ul + C
                ok = (val > lo) if lo_open else (val >= lo)
                if ok:
                    ok = (val < hi) if hi_open else (val <= hi)
                if ok and norm_mode:
                    wl = stride * zi + ns_last
                    nsq = wsq + wl * wl
                    ok = (nsq <= bsq) if norm_mode == 1 else (nsq < bsq)
                if ok:
                    total += 1
            if last == 0:
                break
            running = _odometer_step(&z[0], &zmin[0], &zmax[0], last)
    return int(total)


cdef inline bint _prefix_valid(long* z, int npre, bint nonzero_coords) noexcept nogil:
    cdef int i
    if nonzero_coords:
        for i in range(npre):
            if z[i] == 0:
                return False
    return True


cdef inline long _prefix_absmax(long* z, int npre) noexcept nogil:
    cdef long m = 0
    cdef int i
    for i in range(npre):
        if z[i] >= 0:
            if z[i] > m:
                m = z[i]
        elif -z[i] > m:
            m = -z[i]
    return m


def min_abs_quadratic(const double[:, ::1] A, const double[::1] theta, long sup_lo,
                      long sup_hi, bint nonzero_coords=False):
    cdef int n = A.shape[0]
    cdef int last = n - 1
    cdef long m = sup_hi - 1
    cdef int i, j
    cdef long zi
    cdef double A_ll = A[last, last]
    cdef double best = INFINITY
    cdef double B1, C, ul, val, up_i, up_j
    cdef bint need_shell, running = True

    zmin_arr = np.full(max(last, 1), -m, dtype=np.int64)
    zmax_arr = np.full(max(last, 1), m, dtype=np.int64)
    cdef long[::1] zmin = zmin_arr
    cdef long[::1] zmax = zmax_arr
    cdef long[::1] z = np.full(max(last, 1), -m, dtype=np.int64)
    best_arg_arr = np.zeros(n, dtype=np.int64)
    cdef long[::1] best_arg = best_arg_arr
    cdef double t_last = theta[last]

    with nogil:
        while running:
            if last and not _prefix_valid(&z[0], last, nonzero_coords):
                running = _odometer_step(&z[0], &zmin[0], &zmax[0], last)
                continue
            need_shell = (last == 0) or (_prefix_absmax(&z[0], last) < sup_lo)
            B1 = 0.0
            C = 0.0
            for i in range(last):
                up_i = z[i] + theta[i]
                B1 = B1 + A[last, i] * up_i
                for j in range(last):
                    up_j = z[j] + theta[j]
                    C = C + A[i, j] * up_i * up_j
            for zi in range(-m, m + 1):
                if need_shell and (zi if zi >= 0 else -zi) < sup_lo:
                    continue
                if nonzero_coords and zi == 0:
                    continue
                ul = zi + t_last
                val = fabs(A_ll * (ul * ul) + (2.0 * B1) * ul + C)
                if val < best:
                    best = val
                    for i in range(last):
                        best_arg[i] = z[i]
                    best_arg[last] = zi
            if last == 0:
                break
            running = _odometer_step(&z[0], &zmin[0], &zmax[0], last)
    return best, best_arg_arr


def min_abs_power_family(long k, double alpha2, double alpha3,
                         const double[::1] theta, long sup_lo, long sup_hi,
                         bint nonzero_coords=False):
    cdef int ndim = 2 if alpha3 == 0.0 else 3
    cdef int npre = ndim - 1
    cdef long m = sup_hi - 1
    cdef int i
    cdef long zi
    cdef double best = INFINITY
    cdef double head, val, ul
    cdef double coef_last = alpha2 if ndim == 2 else alpha3
    cdef double t_last = theta[ndim - 1]
    cdef bint need_shell, running = True

    zmin_arr = np.full(npre, -m, dtype=np.int64)
    zmax_arr = np.full(npre, m, dtype=np.int64)
    cdef long[::1] zmin = zmin_arr
    cdef long[::1] zmax = zmax_arr
    cdef long[::1] z = np.full(npre, -m, dtype=np.int64)
    best_arg_arr = np.zeros(ndim, dtype=np.int64)
    cdef long[::1] best_arg = best_arg_arr

    with nogil:
        while running:
            if not _prefix_valid(&z[0], npre, nonzero_coords):
                running = _odometer_step(&z[0], &zmin[0], &zmax[0], npre)
                continue
            need_shell = _prefix_absmax(&z[0], npre) < sup_lo
            head = _ipow(z[0] + theta[0], k)
            if ndim == 3:
                head = head - alpha2 * _ipow(z[1] + theta[1], k)
            for zi in range(-m, m + 1):
                if need_shell and (zi if zi >= 0 else -zi) < sup_lo:
                    continue
                if nonzero_coords and zi == 0:
                    continue
                ul = zi + t_last
                val = fabs(head - coef_last * _ipow(ul, k))
                if val < best:
                    best = val
                    for i in range(npre):
                        best_arg[i] = z[i]
                    best_arg[ndim - 1] = zi
            running = _odometer_step(&z[0], &zmin[0], &zmax[0], npre)
    return best, best_arg_arr


def four_term_pair_count(const double[::1] a, const double[::1] b, double thr):
    cdef Py_ssize_t L = a.shape[0]
    cdef Py_ssize_t i, j, p
    cdef long long total = 0
    cdef double t1

    d2_arr = (np.asarray(b)[:, None] - np.asarray(b)[None, :]).ravel()
    cdef double[::1] d2 = np.ascontiguousarray(d2_arr)
    cdef Py_ssize_t L2 = d2.shape[0]

    with nogil:
        for i in range(L):
            for j in range(L):
                t1 = a[i] - a[j]
                for p in range(L2):
                    if fabs(t1 + d2[p]) <= thr:
                        total += 1
    return int(total)


def points_in_disk(const double[:, ::1] basis, const double[::1] shift, const double[::1] center,
                   double radius, long m1lo, long m1hi, long m2lo, long m2hi):
    cdef double b00 = basis[0, 0], b01 = basis[0, 1]
    cdef double b10 = basis[1, 0], b11 = basis[1, 1]
    cdef double s0 = shift[0], s1 = shift[1]
    cdef double c0 = center[0], c1 = center[1]
    cdef double rsq = radius * radius
    cdef long m1, m2
    cdef double px, py, dx, dy
    cdef Py_ssize_t count = 0, idx = 0

    with nogil:
        for m1 in range(m1lo, m1hi + 1):
            for m2 in range(m2lo, m2hi + 1):
                px = b00 * m1 + b01 * m2 + s0
                py = b10 * m1 + b11 * m2 + s1
                dx = px - c0
                dy = py - c1
                if dx * dx + dy * dy <= rsq:
                    count += 1

    out_arr = np.empty((count, 2), dtype=float)
    cdef double[:, ::1] out = out_arr
    if count:
        with nogil:
            for m1 in range(m1lo, m1hi + 1):
                for m2 in range(m2lo, m2hi + 1):
                    px = b00 * m1 + b01 * m2 + s0
                    py = b10 * m1 + b11 * m2 + s1
                    dx = px - c0
                    dy = py - c1
                    if dx * dx + dy * dy <= rsq:
                        out[idx, 0] = px
                        out[idx, 1] = py
                        idx += 1
    return out_arr
