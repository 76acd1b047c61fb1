"""Minimal free resolutions over the local ring at the origin.

A module is given as the cokernel of a matrix whose columns are the
relations.  Each step computes syzygies of the current columns and then
uses unit entries of the syzygies to discard redundant columns, which keeps
every map minimal (all entries in the maximal ideal).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .coeffs import QQ
from .errors import ResourceLimitExceeded
from .groebner import default_local, order_weights, syzygies, vector_degree
from .orders import MonomialOrder
from .poly import Poly, PolyMatrix, Ring


def is_unit(p: Poly) -> bool:
    return bool(p.constant_term())


@dataclass
class Resolution:
    """``maps[0]`` presents the module; ``maps[i+1]`` generates the relations of ``maps[i]``."""

    ring: Ring
    rank: int
    maps: list[PolyMatrix]

    @property
    def length(self) -> int:
        return len(self.maps)

    def ranks(self) -> list[int]:
        out = [self.rank]
        for m in self.maps:
            out.append(m.cols)
        return out

    def is_minimal(self) -> bool:
        return all(not is_unit(e) for m in self.maps for row in m.entries for e in row)

    def is_complex(self) -> bool:
        for a, b in zip(self.maps, self.maps[1:]):
            if not (a @ b).is_zero():
                return False
        return True


def projective_dimension(res: Resolution) -> int:
    return res.length


def _columns_to_matrix(cols: list[tuple], nrows: int, ring: Ring) -> PolyMatrix:
    if not cols:
        return PolyMatrix([[] for _ in range(nrows)], ring=ring, cols=0) if nrows else PolyMatrix([], ring=ring, cols=0)
    return PolyMatrix([[c[i] for c in cols] for i in range(nrows)], ring=ring)


def _eliminate_unit(cols: list[list[Poly]], r: int, j: int) -> list[list[Poly]]:
    """Clear row r with the unit entry cols[j][r], then drop row r and column j."""
    u = cols[j][r]
    out = []
    for k, col in enumerate(cols):
        if k == j:
            continue
        a = col[r]
        if a.is_zero():
            new = list(col)
        else:
            new = _primitive_column([u * x - a * y for x, y in zip(col, cols[j])])
        del new[r]
        out.append(new)
    return out


def _primitive_column(col: list[Poly]) -> list[Poly]:
    """Divide a column by the content of all its entries together."""
    from math import gcd
    num, den = 0, 1
    for p in col:
        for c in p.terms.values():
            num = gcd(num, int(c.numerator))
            d = int(c.denominator)
            den = den * d // gcd(den, d)
    if num in (0, 1) and den == 1:
        return col
    scale = QQ(den, num)
    return [p * scale for p in col]


def _pivot_cost(e: Poly, col) -> tuple:
    # constant pivots cost nothing; otherwise keep the cross-multiplication small
    return (len(e.terms) > 1, len(e.terms), sum(len(x.terms) for x in col))


def _find_unit(cols) -> tuple[int, int] | None:
    """(row, column) of the cheapest unit entry, or None."""
    hit = None
    best = None
    for j, col in enumerate(cols):
        for r, e in enumerate(col):
            if is_unit(e):
                cost = _pivot_cost(e, col)
                if best is None or cost < best:
                    best, hit = cost, (r, j)
    return hit


def prune_presentation(cols: list[tuple], nrows: int) -> tuple[list[tuple], int, list[int]]:
    """Remove generators made redundant by relations with a unit entry.

    Returns the new columns, the new number of generators, and the indices
    of the surviving generators (rows).
    """
    work = [list(c) for c in cols]
    rows = list(range(nrows))
    while True:
        hit = _find_unit(work)
        if hit is None:
            break
        r, j = hit
        work = _eliminate_unit(work, r, j)
        del rows[r]
    work = [c for c in work if any(not e.is_zero() for e in c)]
    return [tuple(c) for c in work], len(rows), rows


def free_resolution(relations: Sequence[Sequence[Poly]], rank: int, ring: Ring,
                    order: MonomialOrder | None = None,
                    shifts: Sequence[int] | None = None, max_steps: int | None = None) -> Resolution:
    """Minimal free resolution of coker(relations) over the localization at 0.

    ``relations`` are vectors of length ``rank``; ``shifts`` are optional
    degrees of the generators, used only to keep homogeneous input
    homogeneous during the syzygy computations.
    """
    order = order or default_local(ring)
    w = order_weights(order, ring.nvars)
    cols = [tuple(c) for c in relations]
    cols, rank2, keep_rows = prune_presentation(cols, rank)
    sh = [shifts[i] for i in keep_rows] if shifts is not None else [0] * rank2
    maps: list[PolyMatrix] = []
    if rank2 == 0:
        return Resolution(ring, 0, [])
    limit = max_steps if max_steps is not None else ring.nvars + 2
    cur = cols
    cur_rows = rank2
    while cur:
        if len(maps) >= limit:
            raise ResourceLimitExceeded("resolution steps", limit)
        col_deg = [vector_degree(c, w, sh) for c in cur]
        S = [list(s) for s in syzygies(cur, order, ring=ring, shifts=sh)]
        # a syzygy with a unit entry makes that column redundant
        while True:
            hit = _find_unit(S)
            if hit is None:
                break
            j, c = hit
            S = _eliminate_unit(S, j, c)
            del cur[j]
            del col_deg[j]
        S = [s for s in S if any(not e.is_zero() for e in s)]
        maps.append(_columns_to_matrix(cur, cur_rows, ring))
        cur_rows = len(cur)
        cur = [tuple(s) for s in S]
        sh = col_deg
    return Resolution(ring, rank2, maps)
