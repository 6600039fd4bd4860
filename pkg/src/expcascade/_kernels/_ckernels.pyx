# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel implementations.

Mirrors ``_pykernels`` operation for operation; see the notes there. The
extension is built with -ffp-contract=off so the C arithmetic stays
bit-identical to numpy's (no FMA contraction).
"""

import numpy as np

from libc.math cimport INFINITY


def draw_targets(double[:, ::1] weights, double[:, ::1] distances,
                 double[:, ::1] uniforms):
    cdef Py_ssize_t n = weights.shape[0]
    cdef Py_ssize_t k = uniforms.shape[1]
    links_arr = np.empty((n, k), dtype=np.int64)
    cdef long long[:, ::1] links = links_arr
    row_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] row = row_arr
    taken_arr = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] taken = taken_arr
    cdef Py_ssize_t i, d, j, pick, last_pos
    cdef double total, acc, t, best

    for i in range(n):
        for j in range(n):
            row[j] = weights[i, j]
            taken[j] = 0
        taken[i] = 1
        for d in range(k):
            total = 0.0
            last_pos = -1
            for j in range(n):
                total = total + row[j]
                if row[j] > 0.0:
                    last_pos = j
            if total > 0.0:
                t = uniforms[i, d] * total
                acc = 0.0
                pick = last_pos
                for j in range(n):
                    acc = acc + row[j]
                    if acc > t:
                        pick = j
                        break
            else:
                pick = -1
                best = INFINITY
                for j in range(n):
                    if taken[j] == 0 and distances[i, j] < best:
                        best = distances[i, j]
                        pick = j
            links[i, d] = pick
            row[pick] = 0.0
            taken[pick] = 1
    return links_arr


def jacobi_fixed_point(long long[:, ::1] links, double[::1] isolated,
                       double q, bint clamp, double tol, long max_iter):
    cdef Py_ssize_t n = links.shape[0]
    cdef Py_ssize_t k = links.shape[1]
    cons_arr = np.empty(n, dtype=np.float64)
    new_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] cons = cons_arr
    cdef double[::1] new = new_arr
    cdef Py_ssize_t i, j
    cdef long it
    cdef double m, s, v, dv, diff

    for i in range(n):
        cons[i] = isolated[i]
    diff = INFINITY
    for it in range(1, max_iter + 1):
        diff = 0.0
        for i in range(n):
            m = cons[links[i, 0]]
            for j in range(1, k):
                v = cons[links[i, j]]
                if v > m:
                    m = v
            s = m - isolated[i]
            if clamp and s < 0.0:
                s = 0.0
            s = s * q
            v = isolated[i] + s
            new[i] = v
            dv = v - cons[i]
            if dv < 0.0:
                dv = -dv
            if dv > diff:
                diff = dv
        cons[:] = new
        if diff < tol:
            return cons_arr.copy(), it, True, diff
    return cons_arr.copy(), max_iter, False, diff


def gauss_seidel_fixed_point(long long[:, ::1] links, double[::1] isolated,
                             double q, bint clamp, double tol, long max_iter):
    cdef Py_ssize_t n = links.shape[0]
    cdef Py_ssize_t k = links.shape[1]
    cons_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] cons = cons_arr
    cdef Py_ssize_t i, j
    cdef long it
    cdef double m, s, v, d, diff

    for i in range(n):
        cons[i] = isolated[i]
    diff = INFINITY
    for it in range(1, max_iter + 1):
        diff = 0.0
        for i in range(n):
            m = cons[links[i, 0]]
            for j in range(1, k):
                v = cons[links[i, j]]
                if v > m:
                    m = v
            s = m - isolated[i]
            if clamp and s < 0.0:
                s = 0.0
            s = s * q
            v = isolated[i] + s
            d = v - cons[i]
            if d < 0.0:
                d = -d
            if d > diff:
                diff = d
            cons[i] = v
        if diff < tol:
            return cons_arr.copy(), it, True, diff
    return cons_arr.copy(), max_iter, False, diff
