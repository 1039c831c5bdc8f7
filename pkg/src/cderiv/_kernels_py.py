"""Pure-Python versions of the hot kernels.

Polynomial term maps use packed integer keys: the exponents of
(d, x, y, z) live in 16-bit fields, ``d`` in the most significant one, so
adding two keys multiplies the monomials and integer order on keys is the
lexicographic order on exponent tuples.
"""

from math import gcd


def mul_terms(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            c = get(k)
            if c is None:
                out[k] = ca * cb
            else:
                out[k] = c + ca * cb
    return {k: c for k, c in out.items() if c}


def add_terms(a, b, scale=1):
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + scale * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _primitive(row):
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def rref_int(rows, ncols):
    """Fraction-free reduced row echelon form of an integer matrix.

    Returns ``(reduced, pivots)``: each reduced row is primitive with a
    positive pivot entry, and every pivot column is zero outside its row.
    Rows are folded in one at a time so memory stays at most ``ncols``
    rows regardless of how many input rows there are.
    """
    basis = []  # list of (pivot, row)
    for src in rows:
        row = list(src)
        for p, brow in basis:
            c = row[p]
            if c:
                bp = brow[p]
                g = gcd(bp, c)
                m1 = bp // g
                m2 = c // g
                row = [m1 * u - m2 * v for u, v in zip(row, brow)]
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
        # clear the new pivot column from earlier rows
        for n, (p, brow) in enumerate(basis):
            c = brow[pivot]
            if c:
                g = gcd(row[pivot], c)
                m1 = row[pivot] // g
                m2 = c // g
                nrow = _primitive([m1 * u - m2 * v for u, v in zip(brow, row)])
                if nrow[p] < 0:
                    nrow = [-v for v in nrow]
                basis[n] = (p, nrow)
        basis.append((pivot, row))
    basis.sort(key=lambda t: t[0])
    return [r for _, r in basis], [p for p, _ in basis]
