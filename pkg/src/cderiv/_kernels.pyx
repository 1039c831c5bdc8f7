# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot kernels; same contracts as _kernels_py."""

from math import gcd


def mul_terms(dict a, dict b):
    cdef dict out = {}
    cdef object ka, ca, kb, cb, c, k
    if len(a) > len(b):
        a, b = b, a
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            c = out.get(k)
            if c is None:
                out[k] = ca * cb
            else:
                out[k] = c + ca * cb
    return {k: c for k, c in out.items() if c}


def add_terms(dict a, dict b, scale=1):
    cdef dict out = dict(a)
    cdef object k, c, v
    for k, c in b.items():
        v = out.get(k, 0) + scale * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


cdef list _primitive(list row):
    cdef object g = 0
    cdef object v
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


cdef list _combine(object m1, list row, object m2, list brow, Py_ssize_t n):
    cdef list out = [None] * n
    cdef Py_ssize_t i
    cdef object u, v
    for i in range(n):
        u = row[i]
        v = brow[i]
        if v:
            out[i] = m1 * u - m2 * v
        elif u:
            out[i] = m1 * u
        else:
            out[i] = 0
    return out


def rref_int(rows, Py_ssize_t ncols):
    cdef list basis = []
    cdef list row, brow, nrow
    cdef Py_ssize_t p, pivot, idx, n
    cdef object c, bp, g
    for src in rows:
        row = list(src)
        for p, brow in basis:
            c = row[p]
            if c:
                bp = brow[p]
                g = gcd(bp, c)
                row = _combine(bp // g, row, c // g, brow, ncols)
        pivot = -1
        for idx in range(ncols):
            if row[idx]:
                pivot = idx
                break
        if pivot < 0:
            continue
        row = _primitive(row)
        if row[pivot] < 0:
            row = [-v for v in row]
        for n in range(len(basis)):
            p, brow = basis[n]
            c = brow[pivot]
            if c:
                g = gcd(row[pivot], c)
                nrow = _primitive(_combine(row[pivot] // g, brow, c // g, row, ncols))
                if nrow[p] < 0:
                    nrow = [-v for v in nrow]
                basis[n] = (p, nrow)
        basis.append((pivot, row))
    basis.sort(key=lambda t: t[0])
    return [r for _, r in basis], [p for p, _ in basis]
