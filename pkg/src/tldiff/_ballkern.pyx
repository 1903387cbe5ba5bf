# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel: ball sums of first differences at nested dyadic radii.

For every unmasked grid point x and every level m this accumulates

    S[x, m] = sum over unmasked y with |y - x| <= t_m of w(x, y)
    C[x, m] = number of such y (the y = x term is included)

where w is |f(x)-f(y)| (umode 1), |f(x)-f(y)|^2 (umode 2),
|f(x)-f(y)|^upow (umode 3) or, for umode 0, S holds the running maximum
of |f(x)-f(y)| instead of a sum.
The level of an offset is read from a precomputed table, each pair is
visited once into its annulus, and annuli are folded into ball totals by
a suffix pass.  All scratch lives in the output row of the point being
processed, so rows are independent and the parallel loop is
deterministic for any thread count.
"""

import numpy as np

cimport cython
from cython.parallel cimport prange
from libc.math cimport sqrt, fabs, pow


def ball_sums_2d(const double[:, :, ::1] vals, const unsigned char[:, ::1] mask,
                 const int[:, ::1] lvl, int radius, int nlev, int umode,
                 double upow=1.0, int num_threads=1):
    cdef Py_ssize_t nx = vals.shape[0]
    cdef Py_ssize_t ny = vals.shape[1]
    cdef Py_ssize_t arity = vals.shape[2]
    S_arr = np.zeros((nx, ny, nlev), dtype=np.float64)
    C_arr = np.zeros((nx, ny, nlev), dtype=np.float64)
    cdef double[:, :, ::1] S = S_arr
    cdef double[:, :, ::1] C = C_arr
    cdef Py_ssize_t i, j, a
    cdef int di, dj, m, ii, jj
    cdef double w, dd
    cdef int R = radius
    cdef int nt = num_threads if num_threads > 0 else 1

    for i in prange(nx, nogil=True, schedule="static", num_threads=nt):
        for j in range(ny):
            if not mask[i, j]:
                continue
            for di in range(-R, R + 1):
                ii = <int>i + di
                if ii < 0 or ii >= <int>nx:
                    continue
                for dj in range(-R, R + 1):
                    jj = <int>j + dj
                    if jj < 0 or jj >= <int>ny:
                        continue
                    m = lvl[di + R, dj + R]
                    if m < 0:
                        continue
                    if not mask[ii, jj]:
                        continue
                    if arity == 1:
                        w = fabs(vals[i, j, 0] - vals[ii, jj, 0])
                    else:
                        dd = 0.0
                        for a in range(arity):
                            w = vals[i, j, a] - vals[ii, jj, a]
                            dd = dd + w * w
                        w = sqrt(dd)
                    if umode == 2:
                        S[i, j, m] += w * w
                    elif umode == 1:
                        S[i, j, m] += w
                    elif umode == 3:
                        S[i, j, m] += pow(w, upow)
                    else:
                        if w > S[i, j, m]:
                            S[i, j, m] = w
                    C[i, j, m] += 1.0
            # suffix pass: annulus totals -> ball totals
            for m in range(nlev - 2, -1, -1):
                if umode == 0:
                    if S[i, j, m + 1] > S[i, j, m]:
                        S[i, j, m] = S[i, j, m + 1]
                else:
                    S[i, j, m] = S[i, j, m] + S[i, j, m + 1]
                C[i, j, m] = C[i, j, m] + C[i, j, m + 1]
    return S_arr, C_arr


def ball_sums_1d(const double[:, ::1] vals, const unsigned char[::1] mask,
                 const int[::1] lvl, int radius, int nlev, int umode,
                 double upow=1.0, int num_threads=1):
    cdef Py_ssize_t nx = vals.shape[0]
    cdef Py_ssize_t arity = vals.shape[1]
    S_arr = np.zeros((nx, nlev), dtype=np.float64)
    C_arr = np.zeros((nx, nlev), dtype=np.float64)
    cdef double[:, ::1] S = S_arr
    cdef double[:, ::1] C = C_arr
    cdef Py_ssize_t i, a
    cdef int di, m, ii
    cdef double w, dd
    cdef int R = radius
    cdef int nt = num_threads if num_threads > 0 else 1

    for i in prange(nx, nogil=True, schedule="static", num_threads=nt):
        if not mask[i]:
            continue
        for di in range(-R, R + 1):
            ii = <int>i + di
            if ii < 0 or ii >= <int>nx:
                continue
            m = lvl[di + R]
            if m < 0:
                continue
            if not mask[ii]:
                continue
            if arity == 1:
                w = fabs(vals[i, 0] - vals[ii, 0])
            else:
                dd = 0.0
                for a in range(arity):
                    w = vals[i, a] - vals[ii, a]
                    dd = dd + w * w
                w = sqrt(dd)
            if umode == 2:
                S[i, m] += w * w
            elif umode == 1:
                S[i, m] += w
            elif umode == 3:
                S[i, m] += pow(w, upow)
            else:
                if w > S[i, m]:
                    S[i, m] = w
            C[i, m] += 1.0
        for m in range(nlev - 2, -1, -1):
            if umode == 0:
                if S[i, m + 1] > S[i, m]:
                    S[i, m] = S[i, m + 1]
            else:
                S[i, m] = S[i, m] + S[i, m + 1]
            C[i, m] = C[i, m] + C[i, m + 1]
    return S_arr, C_arr
