"""Linear-algebra oracles and random instances for the kernel suite.

Everything here works degree by degree on explicit monomial bases, so it
shares nothing with the Groebner engine apart from the exact Echelon class,
which has its own tests.
"""
from __future__ import annotations

import itertools
import random

from mondcert.coeffs import QQ
from mondcert.groebner import (INFINITE, eliminate, ideal_quotient, local_dim, standard_basis)
from mondcert.linalg import Echelon
from mondcert.orders import grevlex, local
from mondcert.poly import Poly, Ring
from mondcert.resolution import free_resolution, projective_dimension

VARS = ("x", "y", "z")


def monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    return [e for e in itertools.product(range(d + 1), repeat=n) if sum(e) == d]


def monomials_up_to(n: int, d: int) -> list[tuple[int, ...]]:
    return [e for e in itertools.product(range(d + 1), repeat=n) if sum(e) <= d]


def _shift(e, m):
    return tuple(a + b for a, b in zip(e, m))


def graded_piece(gens: list[Poly], n: int, d: int) -> Echelon:
    """Span of the degree-d part of a homogeneous ideal, in the basis of degree-d monomials."""
    idx = {e: i for i, e in enumerate(monomials_of_degree(n, d))}
    ech = Echelon()
    for g in gens:
        dg = g.degree()
        if dg > d or g.is_zero():
            continue
        for m in monomials_of_degree(n, d - dg):
            ech.insert({idx[_shift(e, m)]: QQ(c) for e, c in g.items()})
    return ech


def hilbert_quotient(gens: list[Poly], n: int, d: int) -> int:
    """dim (R/I)_d for homogeneous I."""
    return len(monomials_of_degree(n, d)) - graded_piece(gens, n, d).rank


def truncated_local_dim(gens: list[Poly], n: int, N: int) -> int:
    """dim R / (I + m^N); equals the local colength once N exceeds it."""
    ms = monomials_up_to(n, N - 1)
    idx = {e: i for i, e in enumerate(ms)}
    ech = Echelon()
    for g in gens:
        for m in ms:
            row = {}
            for e, c in g.items():
                t = _shift(e, m)
                if sum(t) < N:
                    row[idx[t]] = QQ(c)
            if row:
                ech.insert(row)
    return len(ms) - ech.rank


def random_poly(R: Ring, rng: random.Random, degs: tuple[int, int], nterms: int) -> Poly:
    terms: dict = {}
    for _ in range(nterms):
        d = rng.randint(*degs)
        e = [0] * R.nvars
        for _ in range(d):
            e[rng.randrange(R.nvars)] += 1
        terms[tuple(e)] = QQ(rng.choice([-3, -2, -1, 1, 2, 3]))
    return Poly(R, terms)


def random_form(R: Ring, rng: random.Random, d: int, nterms: int) -> Poly:
    ms = monomials_of_degree(R.nvars, d)
    pick = rng.sample(ms, min(nterms, len(ms)))
    return Poly(R, {e: QQ(rng.choice([-2, -1, 1, 2, 3])) for e in pick})


def _ring(rng: random.Random, lo: int = 1) -> Ring:
    return Ring(VARS[:rng.randint(lo, 3)])


# ----------------------------------------------------------------------
# the five kinds of case; each returns None on success or a message

def case_local_colength(rng: random.Random):
    R = _ring(rng)
    n = R.nvars
    gens = []
    for i in range(n):
        e = [0] * n
        e[i] = rng.randint(1, 3)
        gens.append(Poly(R, {tuple(e): QQ(1)}) + random_poly(R, rng, (1, 6), 3))
    gens += [random_poly(R, rng, (1, 6), 3) for _ in range(rng.randint(0, 2))]
    gens = [g for g in gens if not g.is_zero()]
    d = local_dim(gens, local(), ring=R)
    if d == INFINITE:
        # the origin is a non-isolated point of V(I): the truncations keep growing
        a, b = truncated_local_dim(gens, n, 4), truncated_local_dim(gens, n, 7)
        return None if b > a else f"claimed infinite, truncations {a}, {b}"
    a, b = truncated_local_dim(gens, n, max(d, 1)), truncated_local_dim(gens, n, d + 1)
    return None if a == b == d else f"local colength {d}, brute force {a}, {b}: {[str(g) for g in gens]}"


def case_graded_quotient(rng: random.Random):
    R = _ring(rng, 2)
    n = R.nvars
    gens = [random_form(R, rng, rng.randint(1, 4), rng.randint(1, 4)) for _ in range(rng.randint(1, 4))]
    gens = [g for g in gens if not g.is_zero()]
    sb = standard_basis(gens, grevlex(), ring=R)
    leads = [e for _, e in sb.leading()]
    for d in range(0, 7):
        count = sum(1 for m in monomials_of_degree(n, d)
                    if not any(all(a <= b for a, b in zip(l, m)) for l in leads))
        brute = hilbert_quotient(gens, n, d)
        if count != brute:
            return f"degree {d}: {count} standard monomials, brute force {brute}"
    combo = sum((random_poly(R, rng, (0, 2), 2) * g for g in gens), R.zero())
    if not sb.contains(combo):
        return "an explicit combination of the generators was not recognized"
    return None


def case_elimination(rng: random.Random):
    R = Ring(VARS)
    gens = [random_form(R, rng, rng.randint(1, 4), rng.randint(2, 4)) for _ in range(rng.randint(2, 3))]
    gens = [g for g in gens if not g.is_zero()]
    elim = eliminate(gens, ["x"])
    comps = [h for p in elim for h in _components(p)]
    lifted = [p.to_ring(R) for p in elim]
    for d in range(0, 7):
        full = graded_piece(gens, 3, d)
        idx = {e: i for i, e in enumerate(monomials_of_degree(3, d))}
        # I_d ∩ k[y,z]_d, as a subspace intersection
        brute = _intersection_dim(full, idx, [e for e in idx if e[0] == 0])
        mine = graded_piece(comps, 2, d)
        for h in (h for p in lifted for h in _components(p) if h.degree() == d):
            if not full.contains({idx[e]: QQ(c) for e, c in h.items()}):
                return f"degree {d}: an eliminant is not in the ideal"
        if mine.rank != brute:
            return f"degree {d}: eliminants span {mine.rank}, brute force {brute}"
    return None


def _components(p: Poly) -> list[Poly]:
    by: dict = {}
    for e, c in p.items():
        by.setdefault(sum(e), {})[e] = c
    return [Poly(p.ring, t) for t in by.values()]


def _rows(ech: Echelon) -> list[dict]:
    return [dict(r) for r in ech.pivots.values()]


def _intersection_dim(full: Echelon, idx: dict, sub_monos: list) -> int:
    """dim (span(full) ∩ span(sub_monos)) = rank(full) + |sub| - rank(full + sub)."""
    both = Echelon()
    for r in _rows(full):
        both.insert(r)
    for e in sub_monos:
        both.insert({idx[e]: QQ(1)})
    return full.rank + len(sub_monos) - both.rank


def case_colon(rng: random.Random):
    R = Ring(VARS[:rng.randint(2, 3)])
    n = R.nvars
    a = [random_form(R, rng, rng.randint(1, 4), rng.randint(1, 4)) for _ in range(rng.randint(1, 3))]
    a = [g for g in a if not g.is_zero()]
    f = random_form(R, rng, rng.randint(1, 3), rng.randint(1, 3))
    q = ideal_quotient(a, [f])
    e = f.degree()
    comps = [h for p in q for h in _components(p)]
    for d in range(0, 6 - e + 1):
        # (a : f)_d = {h in R_d : h f in a_{d+e}}, a kernel computed by linear algebra
        src = monomials_of_degree(n, d)
        tgt = graded_piece(a, n, d + e)
        idx = {m: i for i, m in enumerate(monomials_of_degree(n, d + e))}
        images = []
        for m in src:
            row = {idx[_shift(t, m)]: QQ(c) for t, c in f.items()}
            images.append(tgt.reduce(row))
        brute = len(src) - _rank_of_dicts(images)
        mine = graded_piece(comps, n, d)
        if mine.rank != brute:
            return f"degree {d}: quotient spans {mine.rank}, brute force {brute}"
    return None


def _rank_of_dicts(rows) -> int:
    ech = Echelon()
    for r in rows:
        if r:
            ech.insert(dict(r))
    return ech.rank


def case_resolution(rng: random.Random):
    R = Ring(VARS[:rng.randint(2, 3)])
    n = R.nvars
    gens = [random_form(R, rng, rng.randint(1, 4), rng.randint(1, 4)) for _ in range(rng.randint(1, 4))]
    gens = [g for g in gens if not g.is_zero()]
    res = free_resolution([(g,) for g in gens], 1, R, local(), shifts=[0])
    if not res.is_complex():
        return "consecutive maps do not compose to zero"
    if not res.is_minimal():
        return "resolution is not minimal"
    if projective_dimension(res) > n:
        return f"projective dimension {projective_dimension(res)} exceeds {n}"
    # generator degrees of each free module, read off the homogeneous maps
    degs = [[0] * res.rank]
    for M in res.maps:
        row_deg = degs[-1]
        col_deg = []
        for j in range(M.cols):
            col = M.column(j)
            i = next(i for i, p in enumerate(col) if not p.is_zero())
            col_deg.append(row_deg[i] + col[i].degree())
        degs.append(col_deg)
    for d in range(0, 7):
        alt = sum((-1) ** i * sum(len(monomials_of_degree(n, d - g)) for g in ds if g <= d)
                  for i, ds in enumerate(degs))
        brute = hilbert_quotient(gens, n, d)
        if alt != brute:
            return f"degree {d}: Betti alternating sum {alt}, brute force {brute}"
    return None


CASES = (case_local_colength, case_graded_quotient, case_elimination, case_colon, case_resolution)


def run_suite(count: int = 200, seed: int = 20240601) -> list[str]:
    """Run ``count`` cases cycling through the kinds; return the failure messages."""
    rng = random.Random(seed)
    failures = []
    for i in range(count):
        kind = CASES[i % len(CASES)]
        msg = kind(rng)
        if msg is not None:
            failures.append(f"case {i} ({kind.__name__}): {msg}")
    return failures
