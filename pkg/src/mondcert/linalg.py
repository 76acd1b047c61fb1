"""Exact sparse linear algebra over Q (or Z/p) on dict rows."""
from __future__ import annotations

from typing import Iterable

from .coeffs import QQ
from .kernels import axpy, reduce_row


class Echelon:
    """Incremental row echelon form; columns are ints, smaller = earlier pivot."""

    def __init__(self) -> None:
        self.pivots: dict[int, list] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def insert(self, row: dict) -> bool:
        """Add a row; returns True when it increased the rank."""
        row = dict(row)
        lead = reduce_row(row, self.pivots)
        if lead < 0:
            return False
        inv = 1 / QQ(row[lead])
        self.pivots[lead] = [(k, v * inv) for k, v in row.items()]
        return True

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        out = {}
        while row:
            lead = reduce_row(row, self.pivots)
            if lead < 0:
                break
            out[lead] = row.pop(lead)
        return out

    def contains(self, row: dict) -> bool:
        row = dict(row)
        return reduce_row(row, self.pivots) < 0

    def pivot_columns(self) -> set[int]:
        return set(self.pivots)


def rank(rows: Iterable[dict]) -> int:
    e = Echelon()
    for r in rows:
        e.insert(r)
    return e.rank


def nullspace(matrix: list[list]) -> list[list]:
    """Basis of the right nullspace of a dense rational matrix."""
    if not matrix:
        return []
    m = len(matrix)
    n = len(matrix[0])
    a = [[QQ(x) for x in row] for row in matrix]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in piv_cols]
    basis = []
    for fc in free:
        v = [QQ(0)] * n
        v[fc] = QQ(1)
        for i, pc in enumerate(piv_cols):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


__all__ = ["Echelon", "rank", "nullspace", "axpy"]
