"""Exact Gaussian elimination helpers for small rational matrices."""

from __future__ import annotations

from .rationals import ONE, ZERO, Rational, as_rational


def _rows(matrix):
    return [[as_rational(x) for x in row] for row in matrix]


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = _rows(matrix)
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def det(matrix) -> Rational:
    rows = _rows(matrix)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("determinant needs a square matrix")
    sign = ONE
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return ZERO
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            sign = -sign
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[c][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    out = sign
    for i in range(n):
        out *= rows[i][i]
    return out


def inverse(matrix):
    rows = _rows(matrix)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("inverse needs a square matrix")
    aug = [row + [ONE if i == j else ZERO for j in range(n)]
           for i, row in enumerate(rows)]
    reduced, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in reduced]


def is_positive_definite(matrix) -> bool:
    """Symmetric with positive leading principal minors."""
    rows = _rows(matrix)
    n = len(rows)
    if any(len(row) != n for row in rows):
        return False
    for i in range(n):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                return False
    for k in range(1, n + 1):
        if det([row[:k] for row in rows[:k]]) <= 0:
            return False
    return True


def in_span(rows_matrix, vector) -> bool:
    base = [list(r) for r in rows_matrix]
    return rank(base) == rank(base + [list(vector)])


def independent_rows(rows_matrix):
    """Indices of a maximal independent subset, scanning in order."""
    kept: list[int] = []
    basis: list[list[Rational]] = []
    for idx, row in enumerate(rows_matrix):
        if basis:
            new = not in_span(basis, row)
        else:
            new = any(as_rational(x) != 0 for x in row)
        if new:
            kept.append(idx)
            basis.append(list(row))
    return kept
