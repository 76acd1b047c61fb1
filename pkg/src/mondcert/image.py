"""Geometry of the image of a germ: its equation, conductor and pushforward."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .coeffs import QQ_FIELD
from .errors import GermValidationError, NotGenericallyOneToOne
from .germ import MapGerm, find_weights
from .groebner import (enumerate_standard, local_dim, preimage, same_module,
                       standard_basis, syzygies)
from .orders import block, grevlex, local, weighted
from .poly import NotDivisible, Poly, PolyMatrix, Ring, det, exact_divide, jacobian, partial

__all__ = [
    "normalize",
    "image_equation",
    "piene_lambda",
    "conductor_source",
    "conductor_target",
    "ramification_ideal",
    "PushForward",
    "pushforward",
    "pushforward_preimage",
    "fitting_ideal",
    "fitting_crosscheck",
    "target_order",
    "source_order",
]


def normalize(p: Poly) -> Poly:
    """Primitive integer form, sign fixed by the lex-largest term (last variable first)."""
    if p.is_zero():
        return p
    q = p.primitive()
    top = max(q.terms, key=lambda e: tuple(reversed(e)))
    return -q if q.terms[top] < 0 else q


def source_order(f: MapGerm):
    wd = find_weights(f.components, f.source)
    return local(wd.weights) if wd else local()


def target_order(f: MapGerm):
    wd = find_weights(f.components, f.source)
    return local(wd.degrees) if wd else local()


def image_equation(f: MapGerm) -> Poly:
    """Reduced generator g of the kernel of f*: O_{n+1} -> O_n."""
    gens = [p for p in preimage(list(f.components), f.target, ()) if not p.is_zero()]
    if not gens:
        raise NotGenericallyOneToOne("the image is not a hypersurface (f* is injective)")
    if len(gens) > 1:
        sb = standard_basis(gens, grevlex(), ring=f.target)
        gens = [p for p in sb.polys if not p.is_zero()]
        if len(gens) > 1:
            raise GermValidationError("the image ideal is not principal")
    return normalize(gens[0])


def _minors(f: MapGerm) -> list[Poly]:
    """M_i = det of df with row i removed, i = 0..n."""
    jac = jacobian(list(f.components), f.source.variables)
    return [det(jac.delete_row(i)) for i in range(f.n + 1)]


def piene_lambda(f: MapGerm, g: Poly | None = None) -> Poly:
    """The unique lambda with (dg/dY_i) o f = (-1)^(i+1) lambda M_i for all i (1-based)."""
    g = image_equation(f) if g is None else g
    minors = _minors(f)
    pulled = [f.pullback(partial(g, y)) for y in f.target.variables]
    lam = None
    for i, (a, m) in enumerate(zip(pulled, minors)):
        if m.is_zero():
            continue
        signed = m if i % 2 else -m
        try:
            lam = exact_divide(a, signed)
        except NotDivisible:
            raise NotGenericallyOneToOne(
                f"(dg/d{f.target.variables[i]}) o f is not a multiple of the minor; "
                "the germ is not generically one-to-one") from None
        break
    if lam is None:
        raise NotGenericallyOneToOne("df has rank < n everywhere")
    for i, (a, m) in enumerate(zip(pulled, minors)):
        signed = m if i % 2 else -m
        if a != lam * signed:
            raise NotGenericallyOneToOne(f"the identity fails for component {i + 1}")
    if lam.is_zero():
        raise NotGenericallyOneToOne("the image equation is not reduced")
    return lam


def conductor_source(f: MapGerm, lam: Poly | None = None) -> list[Poly]:
    lam = piene_lambda(f) if lam is None else lam
    return [normalize(lam)]


def conductor_target(f: MapGerm, lam: Poly | None = None, g: Poly | None = None) -> list[Poly]:
    """C(f) = (f*)^{-1}(lambda O_n), checked to contain g."""
    g = image_equation(f) if g is None else g
    lam = piene_lambda(f, g) if lam is None else lam
    gens = [normalize(p) for p in preimage(list(f.components), f.target, [lam]) if not p.is_zero()]
    sb = standard_basis(gens, target_order(f), ring=f.target)
    if not sb.contains(g):
        raise GermValidationError("the image equation does not lie in the conductor")
    return sorted(gens, key=lambda p: (p.degree(), str(p)))


def ramification_ideal(f: MapGerm) -> list[Poly]:
    return [normalize(m) for m in _minors(f) if not m.is_zero()]


# ----------------------------------------------------------------------
# O_n as a module over O_{n+1}

@dataclass
class PushForward:
    """O_n = O_{n+1}^s / relations, generated by the source monomials ``basis``."""

    germ: MapGerm
    basis: list[tuple[int, ...]]
    relations: list[tuple[Poly, ...]]
    shifts: tuple[int, ...]
    graph_ring: Ring
    graph: object

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, h: Poly) -> tuple[Poly, ...]:
        """A vector over the target ring whose image in O_n is h."""
        big = self.graph_ring
        n = self.germ.n
        nf = self.graph.normal_form(h.to_ring(big))[0]
        tgt = self.germ.target
        index = {e: i for i, e in enumerate(self.basis)}
        out: list[dict] = [{} for _ in self.basis]
        for e, c in nf.items():
            xs, ys = e[:n], e[n:]
            if xs not in index:
                raise GermValidationError("normal form left the module basis")
            slot = out[index[xs]]
            slot[ys] = slot.get(ys, 0) + c
        return tuple(Poly(tgt, d) for d in out)


def pushforward_preimage(pf: PushForward, ideal: Sequence[Poly], field=QQ_FIELD,
                         budget: float | None = None) -> list[Poly]:
    """(f*)^{-1}(ideal * O_n) as the colon (A : e_1) inside the pushforward.

    A is spanned by the coordinates of h * x^a (h in ``ideal``, x^a in the
    module basis) together with the relations; this is a module computation
    over the target ring alone, far smaller than eliminating the source
    variables from the graph.  Over a prime field the result is the reduced
    monic basis, which is what modular lifting needs.
    """
    f = pf.germ
    src, tgt = f.source, f.target
    gens = []
    for h in ideal:
        if h.is_zero():
            continue
        for e in pf.basis:
            gens.append(pf.coordinates(h * Poly(src, {e: 1})))
    gens += list(pf.relations)
    e1 = tuple(tgt.one() if k == 0 else tgt.zero() for k in range(pf.rank))
    order = _global_target_order(f)
    out = []
    for syz in syzygies([e1] + gens, order, ring=tgt, shifts=pf.shifts, field=field,
                        budget=budget):
        if not syz[0].is_zero():
            out.append(syz[0])
    sb = standard_basis(out, order, ring=tgt, field=field)
    return [p for p in sb.polys if not p.is_zero()]


def _global_target_order(f: MapGerm):
    wd = find_weights(f.components, f.source)
    return weighted(wd.degrees) if wd else grevlex()


def pushforward(f: MapGerm) -> PushForward:
    """Finite presentation of f_* O_n, valid when f is a finite polynomial map with f^{-1}(0) = {0}."""
    n = f.n
    src, tgt = f.source, f.target
    big = Ring(tuple(src.variables) + tuple(tgt.variables))
    wd = find_weights(f.components, src)
    if wd:
        order = block((n, weighted(wd.weights)), (n + 1, weighted(wd.degrees)))
        sw = wd.weights
    else:
        order = block((n, grevlex()), (n + 1, grevlex()))
        sw = (1,) * n
    graph = [big.gen(y) - c.to_ring(big) for y, c in zip(tgt.variables, f.components)]
    sb = standard_basis(graph, order, ring=big)
    pure = [e[:n] for _, e in sb.leading() if not any(e[n:])]
    basis = enumerate_standard(pure, n)
    if basis is None:
        raise GermValidationError("f is not finite as a polynomial map; no global pushforward")
    basis = sorted(basis, key=lambda e: (sum(a * b for a, b in zip(e, sw)), tuple(reversed(e))))
    zero = [c for c in f.components]
    global_dim = standard_basis(zero, grevlex(), ring=src).quotient_dim()
    local_d = local_dim(zero, local(sw), ring=src)
    if global_dim != local_d:
        raise GermValidationError("f^{-1}(0) contains points other than the origin")
    s = len(basis)
    one, nil = big.one(), big.zero()
    vecs = []
    for i, e in enumerate(basis):
        mono = Poly(big, {tuple(e) + (0,) * (n + 1): 1})
        vecs.append((mono,) + tuple(one if k == i else nil for k in range(s)))
    for p in sb.polys:
        vecs.append((p,) + (nil,) * s)
    shifts = tuple(sum(a * b for a, b in zip(e, sw)) for e in basis)
    msb = standard_basis(vecs, order, ring=big, rank=1 + s, comp_blocks=(0,) + (1,) * s)
    rels = []
    for (c, e), vec in zip(msb.leading(), msb.vectors):
        if c == 0 or any(e[:n]):
            continue
        rels.append(tuple(_to_target(p, tgt, n) for p in vec[1:]))
    return PushForward(f, basis, rels, shifts, big, sb)


def _to_target(p: Poly, tgt: Ring, n: int) -> Poly:
    t = {}
    for e, c in p.items():
        if any(e[:n]):
            raise GermValidationError("relation involves source variables")
        t[e[n:]] = c
    return Poly(tgt, t)


def fitting_ideal(pf: PushForward, j: int = 1) -> list[Poly]:
    """F_j: the (s - j)-minors of the relation matrix."""
    s = pf.rank
    k = s - j
    tgt = pf.germ.target
    if k <= 0:
        return [tgt.one()]
    cols = [list(r) for r in pf.relations]
    if len(cols) < k:
        return []
    out = []
    seen = set()
    for rows in combinations(range(s), k):
        for cs in combinations(range(len(cols)), k):
            m = PolyMatrix([[cols[c][r] for c in cs] for r in rows], tgt, k)
            d = det(m)
            if not d.is_zero():
                d = normalize(d)
                if d not in seen:
                    seen.add(d)
                    out.append(d)
    return out


def fitting_crosscheck(f: MapGerm, conductor: Sequence[Poly] | None = None,
                       pf: PushForward | None = None) -> bool:
    """Whether the first Fitting ideal of f_* O_n equals the conductor (locally)."""
    cond = list(conductor) if conductor is not None else conductor_target(f)
    pf = pf or pushforward(f)
    fit = fitting_ideal(pf, 1)
    return same_module(fit, cond, target_order(f), ring=f.target)
