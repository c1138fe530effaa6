"""Exact Gaussian elimination over E."""
from __future__ import annotations

from typing import Sequence

from .exactfield import FieldElement, FieldSpec


def rref(rows: Sequence[Sequence[FieldElement]], ncols: int):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    A = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if not A[i][c].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and not A[i][c].is_zero():
                t = A[i][c]
                A[i] = [x - t * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def nullspace(spec: FieldSpec, rows: Sequence[Sequence[FieldElement]], ncols: int):
    """Basis of {v : A v = 0}."""
    if not rows:
        return [[spec.one if i == j else spec.zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [spec.zero] * ncols
        v[fc] = spec.one
        for row, pc in zip(R, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def rank(rows, ncols: int) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])
