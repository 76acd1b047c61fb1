"""A_e-codimension straight from its definition, by linear algebra on k-jets.

theta(f) is cut down to (n+1)-tuples of polynomials of degree <= k.  The
extended tangent space is spanned there by the truncations of
x^a df/dx_j and of f^b e_i.  Both the truncation and the degree bound on
the target fields distort the count at small k; only values that stay put
over several consecutive k are reported as stable, and even those are a
heuristic until an algebraic route agrees.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .coeffs import QQ
from .germ import MapGerm
from .linalg import Echelon
from .poly import partial

DEFAULT_JET_CAP = 12
STABLE_RUN = 3

__all__ = [
    "JetResult",
    "OracleResult",
    "ae_codim_jets",
    "stabilized_codim",
    "DEFAULT_JET_CAP",
    "STABLE_RUN",
]


@dataclass(frozen=True)
class JetResult:
    k: int
    dim: int
    # monomial fields x^e in component i, spanning a complement of the tangent space
    basis: tuple[tuple[int, tuple[int, ...]], ...]


@dataclass(frozen=True)
class OracleResult:
    """Outcome of the stabilization loop; ``value`` is None when the cap was hit."""

    value: int | None
    witness: tuple[int, ...]
    history: tuple[tuple[int, int], ...] = field(default=())
    basis: tuple[tuple[int, tuple[int, ...]], ...] = ()

    @property
    def stabilized(self) -> bool:
        return self.value is not None


def _monomials(n: int, k: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(k + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def _truncated_product(a: dict, b: dict, k: int) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > k:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _truncate(p: dict, k: int) -> dict:
    return {e: c for e, c in p.items() if sum(e) <= k}


def ae_codim_jets(f: MapGerm, k: int) -> JetResult:
    """dim of theta(f)'s k-jets modulo the truncated extended tangent space."""
    if k < 1:
        raise ValueError("jet degree must be at least 1")
    n, p = f.n, f.n + 1
    monos = _monomials(n, k)
    # high degrees get the small column indices, so they become pivots and
    # the leftover (normal-space) monomials are the low-degree ones
    cols = sorted(((i, e) for i in range(p) for e in monos),
                  key=lambda c: (-sum(c[1]), c[0], tuple(reversed(c[1]))))
    index = {c: j for j, c in enumerate(cols)}
    ech = Echelon()

    def insert(vec: list[dict]) -> None:
        row = {}
        for i, comp in enumerate(vec):
            for e, c in comp.items():
                row[index[(i, e)]] = QQ(c)
        if row:
            ech.insert(row)

    comps = [dict(c.items()) for c in f.components]
    # tf: x^a * df/dx_j
    for v in f.source.variables:
        col = [dict(partial(c, v).items()) for c in f.components]
        for a in monos:
            mono = {a: 1}
            insert([_truncated_product(mono, d, k) for d in col])
    # wf: f^b * e_i, with f^b built up one factor at a time
    one = {(0,) * n: 1}
    powers = {(0,) * p: one}
    frontier = [(0,) * p]
    for _ in range(k + 1):
        nxt = []
        for b in frontier:
            pb = powers[b]
            for i in range(p):
                insert([pb if j == i else {} for j in range(p)])
            if not pb:
                continue
            start = max((j for j in range(p) if b[j]), default=0)
            for j in range(start, p):
                b2 = tuple(x + (1 if t == j else 0) for t, x in enumerate(b))
                prod = _truncated_product(pb, comps[j], k)
                powers[b2] = prod
                nxt.append(b2)
        frontier = nxt
    pivots = ech.pivot_columns()
    free = [cols[j] for j in range(len(cols)) if j not in pivots]
    free.sort(key=lambda c: (sum(c[1]), c[0], tuple(reversed(c[1]))))
    return JetResult(k, len(free), tuple(free))


def stabilized_codim(f: MapGerm, cap: int = DEFAULT_JET_CAP, run: int = STABLE_RUN,
                     start: int = 1) -> OracleResult:
    """Raise k until ``run`` consecutive values agree, or give up at ``cap``."""
    history: list[tuple[int, int]] = []
    results: list[JetResult] = []
    for k in range(start, cap + 1):
        res = ae_codim_jets(f, k)
        results.append(res)
        history.append((k, res.dim))
        tail = [d for _, d in history[-run:]]
        if len(tail) == run and len(set(tail)) == 1:
            return OracleResult(tail[0], tuple(kk for kk, _ in history[-run:]), tuple(history),
                                results[-1].basis)
    return OracleResult(None, (), tuple(history))
