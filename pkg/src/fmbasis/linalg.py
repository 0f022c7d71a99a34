"""Exact dense linear algebra over a Field, on numpy uint8 code matrices.

Row reduction uses deterministic pivoting (leftmost nonzero column, first
available row) and produces the unique reduced row-echelon form of the row
space, so structurally equal inputs yield bit-identical canonical matrices.
"""

from __future__ import annotations

import numpy as np


def rref(field, matrix):
    """Reduced row-echelon form.

    Returns ``(R, pivots)`` where R is a (rank x n) uint8 matrix with unit
    pivots and zeros above and below each pivot, rows ordered by pivot
    column, and ``pivots`` is the tuple of pivot columns.
    """
    m = np.array(matrix, dtype=np.uint8, copy=True)
    if m.ndim != 2:
        m = m.reshape(len(m), -1)
    rows, cols = m.shape
    mul = field.mul_table
    neg = field.neg_table
    add = field.add_table
    inv = field.inv_table
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        col = m[r:, c]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        lead = r + nz[0]
        if lead != r:
            m[[r, lead]] = m[[lead, r]]
        pv = m[r, c]
        if pv != 1:
            m[r] = mul[inv[pv]][m[r]]
        coef = m[:, c].copy()
        coef[r] = 0
        fix = np.nonzero(coef)[0]
        if len(fix):
            m[fix] = add[m[fix], mul[neg[coef[fix]][:, None], m[r][None, :]]]
        pivots.append(c)
        r += 1
    out = m[:r]
    out.flags.writeable = False
    return out, tuple(pivots)


def reduce_rows(field, R, pivots, vectors):
    """Eliminate the pivot coordinates of each row of ``vectors`` against
    the RREF matrix R.  Residues are zero exactly for rows in the row space.
    """
    v = np.array(vectors, dtype=np.uint8, copy=True)
    single = v.ndim == 1
    if single:
        v = v[None, :]
    mul = field.mul_table
    neg = field.neg_table
    add = field.add_table
    for i, c in enumerate(pivots):
        coef = v[:, c].copy()
        fix = np.nonzero(coef)[0]
        if len(fix):
            v[fix] = add[v[fix], mul[neg[coef[fix]][:, None], R[i][None, :]]]
    return v[0] if single else v


def in_rowspace(field, R, pivots, vectors):
    res = reduce_rows(field, R, pivots, vectors)
    if res.ndim == 1:
        return not res.any()
    return ~res.any(axis=1)


def coordinates(field, R, pivots, vector):
    """Coordinates of ``vector`` in the RREF row basis, or None if it is
    outside the row space.  For RREF rows the coordinate on row i is just
    the entry at pivot column i."""
    vector = np.asarray(vector, dtype=np.uint8)
    if not in_rowspace(field, R, pivots, vector):
        return None
    return vector[list(pivots)].copy()


def solve_linear(field, A, b):
    """One solution c of ``c @ A == b`` (row-combination coordinates), or
    None.  A is (m x n), b length n, c length m."""
    A = np.asarray(A, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    m, n = A.shape
    # Work on the transposed augmented system [A^T | b^T].
    aug = np.concatenate([A.T, b[:, None]], axis=1).astype(np.uint8)
    R, pivots = rref(field, aug)
    c = np.zeros(m, dtype=np.uint8)
    for i, pv in enumerate(pivots):
        if pv == m:  # pivot in the augmented column: inconsistent
            return None
        c[pv] = R[i, m]
    return c


def rank(field, matrix):
    return len(rref(field, matrix)[1])
