"""Unfoldings F(u, x) = (u, f_u(x)): the relative module M_y(F) and the Cohen-Macaulay test."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import GermValidationError
from .germ import (MapGerm, Unfolding, find_weights, fresh_params, nice_dimensions,
                   sum_unfoldings, trivial_unfolding, unfolding_from_terms)
from .groebner import INFINITE, is_subset, subquotient_dim, subquotient_presentation
from .image import image_equation, pushforward, source_order, target_order
from .jets import DEFAULT_JET_CAP, stabilized_codim
from .mond import GermInvariants, _mond_ideal, jacobian_ideal, k_dim
from .poly import Poly, Ring, partial
from .resolution import free_resolution, projective_dimension

__all__ = [
    "Verdict",
    "UnfoldingInvariants",
    "unfolding_germ",
    "image_equation_unfolding",
    "relative_jacobian",
    "my_module",
    "specialization_dim",
    "stable_unfolding",
    "redundant_unfolding",
    "random_unfolding",
    "is_cohen_macaulay",
    "jacobian_equality",
    "stable_formula_holds",
    "ae_codim_via_unfolding",
    "unfolding_invariants",
    "mond_verdict",
]


class Verdict(str, enum.Enum):
    CERTIFIED_EQUALITY = "CertifiedEquality"
    CERTIFIED_INEQUALITY = "CertifiedInequality"
    INCONCLUSIVE = "Inconclusive"
    NOT_APPLICABLE = "NotApplicable"


def _target_names(F: Unfolding) -> tuple[str, ...]:
    taken = set(F.ring.variables) | set(F.base.target.variables)
    out = []
    for p in F.params:
        name = p.upper()
        if name in taken:
            name = fresh_params(1, list(taken), base=p + "_")[0]
        taken.add(name)
        out.append(name)
    return tuple(out)


def unfolding_germ(F: Unfolding) -> MapGerm:
    """F as a germ (C^{r+n}, 0) -> (C^{r+n+1}, 0); target copies of u are upper-cased."""
    f = F.base
    tgt = Ring(_target_names(F) + tuple(f.target.variables))
    return MapGerm(F.ring, tgt, tuple(F.full_components()), f.name)


def _base_part(p: Poly, Fg: MapGerm, f: MapGerm) -> Poly:
    """p at U = 0, moved to the target ring of f."""
    r = Fg.target.nvars - f.target.nvars
    zero = {v: 0 for v in Fg.target.variables[:r]}
    return p.evaluate(zero).to_ring(f.target)


def image_equation_unfolding(F: Unfolding, g: Poly | None = None) -> Poly:
    """G with G(0, y) = g exactly."""
    f = F.base
    g = image_equation(f) if g is None else g
    Fg = unfolding_germ(F)
    G = image_equation(Fg)
    G0 = _base_part(G, Fg, f)
    if G0.is_zero():
        raise GermValidationError("the image equation of the unfolding vanishes at u = 0")
    lead = max(g.terms)
    c = G0.terms.get(lead)
    if c:
        c = c / g.terms[lead]
    if not c or G0 != g * c:
        raise GermValidationError("the image equation of the unfolding does not specialize to g")
    return G * (1 / c)


def relative_jacobian(G: Poly, base_target: Ring) -> list[Poly]:
    """dG/dY_i for the original target coordinates only."""
    return [d for d in (partial(G, v) for v in base_target.variables) if not d.is_zero()]


def _u_multiples(P: Sequence[Poly], Fg: MapGerm, r: int) -> list[Poly]:
    us = [Fg.target.gen(v) for v in Fg.target.variables[:r]]
    return [u * p for u in us for p in P]


def my_module(F: Unfolding, G: Poly | None = None):
    """(P, J_y(G), lifted) with M_y(F) = P / J_y(G)."""
    Fg = unfolding_germ(F)
    G = image_equation_unfolding(F) if G is None else G
    pf = _pushforward_or_none(Fg)
    P, lifted = _mond_ideal(Fg, G, pf)
    Jy = relative_jacobian(G, F.base.target)
    if lifted:
        P = P + jacobian_ideal(G)
    return P, Jy, lifted


def _pushforward_or_none(f: MapGerm):
    try:
        return pushforward(f)
    except GermValidationError:
        return None


def specialization_dim(F: Unfolding, P: Sequence[Poly], Jy: Sequence[Poly]):
    """dim M_y(F) tensor O_r / m_r = dim P / (J_y(G) + u P)."""
    Fg = unfolding_germ(F)
    den = list(Jy) + _u_multiples(P, Fg, F.r)
    # J_y(G) lies in P, hence so does the whole denominator
    return subquotient_dim(P, den, target_order(Fg), ring=Fg.target, check=False)


def stable_formula_holds(F: Unfolding, G: Poly, P: Sequence[Poly]) -> bool:
    """Whether P = J(G) + <G> in the local ring.

    J(G) + <G> lies in P by construction.  P / (J(G) + <G>) is a quotient
    of M_y(F), hence finite over O_r, so by Nakayama it vanishes exactly
    when its fibre P / (J(G) + <G> + uP) does.
    """
    Fg = unfolding_germ(F)
    den = jacobian_ideal(G) + [G] + _u_multiples(P, Fg, F.r)
    return subquotient_dim(P, den, target_order(Fg), ring=Fg.target, check=False) == 0


def jacobian_equality(F: Unfolding, G: Poly) -> bool:
    """J_y(G) O = J(G) O over the source of F, by mutual membership."""
    Fg = unfolding_germ(F)
    full = [Fg.pullback(d) for d in jacobian_ideal(G)]
    rel = [Fg.pullback(d) for d in relative_jacobian(G, F.base.target)]
    full = [p for p in full if not p.is_zero()]
    rel = [p for p in rel if not p.is_zero()]
    order = source_order(Fg)
    return is_subset(full, rel, order, ring=Fg.source) and is_subset(rel, full, order, ring=Fg.source)


def is_cohen_macaulay(F: Unfolding, P: Sequence[Poly], Jy: Sequence[Poly],
                      max_steps: int | None = None) -> tuple[int, bool]:
    """(projective dimension, CM) for M_y(F) over the local ring of the target.

    The zero module counts as Cohen-Macaulay with projective dimension 0.
    """
    Fg = unfolding_germ(F)
    order = target_order(Fg)
    rel, shifts = subquotient_presentation(P, Jy, order, ring=Fg.target, check=False)
    m = len(shifts)
    if m == 0:
        return 0, True
    res = free_resolution(rel, m, Fg.target, order, shifts=shifts, max_steps=max_steps)
    pd = projective_dimension(res)
    if res.rank == 0:
        return 0, True
    return pd, pd == F.base.n + 1


def ae_codim_via_unfolding(F: Unfolding, G: Poly, Jy: Sequence[Poly], kdim) -> float | int:
    """dim((J(G) + <G>) / J_y(G) tensor O_r / m_r) - dim K(g), for a stable F."""
    Fg = unfolding_germ(F)
    P = jacobian_ideal(G) + [G]
    den = list(Jy) + _u_multiples(P, Fg, F.r)
    d = subquotient_dim(P, den, target_order(Fg), ring=Fg.target, check=False)
    if INFINITE in (d, kdim):
        return INFINITE
    return d - kdim


# ----------------------------------------------------------------------
# constructing unfoldings

def stable_unfolding(f: MapGerm, jet_cap: int = DEFAULT_JET_CAP) -> Unfolding:
    """f + sum u_j h_j e_i over a monomial basis of the normal space."""
    oracle = stabilized_codim(f, cap=jet_cap)
    if oracle.value is None:
        raise GermValidationError("the jet oracle did not stabilize; f is not known to be A-finite")
    if oracle.value == 0:
        return trivial_unfolding(f)
    src = f.source
    terms = [(i, Poly(src, {e: 1})) for i, e in oracle.basis]
    return unfolding_from_terms(f, terms)


def redundant_unfolding(f: MapGerm, F: Unfolding) -> Unfolding:
    """F with one more parameter, u x_k in the component of largest degree."""
    wd = find_weights(f.components, f.source)
    if wd is not None:
        i = max(range(f.n + 1), key=lambda j: (wd.degrees[j], j))
        k = min(range(f.n), key=lambda j: (wd.weights[j], j))
    else:
        i, k = f.n, 0
    extra = unfolding_from_terms(f, [(i, f.source.gen(f.source.variables[k]))],
                                 params=fresh_params(1, F.ring.variables + f.target.variables, base="v"))
    return sum_unfoldings(F, extra)


def random_unfolding(f: MapGerm, rng: random.Random, params: int = 1, max_terms: int = 3,
                     coeff_range: int = 5) -> Unfolding:
    """Random polynomial unfolding.

    For weighted homogeneous f each perturbation h is itself weighted
    homogeneous of degree below that of its component, so F is weighted
    homogeneous too (the parameter taking up the difference).  Constant
    perturbations are left out: they only translate the target.  Without
    weights the ordinary degree plays the same role: h only uses monomials
    of degree below the order of its component, so the top-degree part of
    the map, and with it global finiteness, is left alone.
    """
    wd = find_weights(f.components, f.source)
    src = f.source
    n = f.n
    pools: dict[int, dict[int, list]] = {}
    for i in range(n + 1):
        by_deg: dict[int, list] = {}
        if wd is not None:
            d = wd.degrees[i]
            for e in _exponents(n, d):
                wdeg = sum(a * w for a, w in zip(e, wd.weights))
                if any(e) and wdeg < d:
                    by_deg.setdefault(wdeg, []).append(e)
        else:
            order = min(sum(e) for e in f.components[i].terms)
            pool = [e for e in _exponents(n, order - 1) if any(e)]
            if pool:
                by_deg[0] = pool
        if by_deg:
            pools[i] = by_deg
    if not pools:
        raise GermValidationError("no non-constant perturbation keeps the unfolding weighted homogeneous")
    terms = []
    for _ in range(params):
        i = rng.choice(sorted(pools))
        by_deg = pools[i]
        pool = by_deg[rng.choice(sorted(by_deg))]
        chosen = rng.sample(pool, min(len(pool), rng.randint(1, max_terms)))
        h = Poly(src, {e: rng.choice([c for c in range(-coeff_range, coeff_range + 1) if c]) for e in chosen})
        terms.append((i, h))
    return unfolding_from_terms(f, terms)


def _exponents(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree at most d."""
    out = []

    def rec(prefix, left):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for a in range(left + 1):
            rec(prefix + [a], left - a)

    rec([], d)
    return out


# ----------------------------------------------------------------------
# the report

@dataclass
class UnfoldingInvariants:
    unfolding: Unfolding
    G: Poly
    dim_My_fiber: float | int
    pd: int | None
    is_CM: bool | None
    mu_I: int | None
    verdict: Verdict
    stable_formula: bool | None = None
    jacobian_equality: bool | None = None
    ae_codim_via_unfolding: float | int | None = None
    notes: list[str] = field(default_factory=list)


def mond_verdict(inv: GermInvariants, is_cm: bool | None, nice: bool) -> tuple[Verdict, int | None, list[str]]:
    """Verdict and mu_I from the CM test and the invariants of f."""
    f = inv.germ
    notes: list[str] = []
    if f.n == 1:
        return Verdict.NOT_APPLICABLE, None, ["the CM criterion is stated for n >= 2"]
    if not nice:
        return Verdict.NOT_APPLICABLE, None, [f"({f.n}, {f.n + 1}) is outside the nice dimensions"]
    if inv.ae_codim == INFINITE or inv.m_dim == INFINITE:
        return Verdict.NOT_APPLICABLE, None, ["f is not A-finite"]
    if not inv.certified:
        return Verdict.INCONCLUSIVE, None, ["dim M(f) is only a lower bound"]
    if is_cm is None:
        return Verdict.NOT_APPLICABLE, None, ["no CM test available"]
    if not is_cm:
        notes.append(f"mu_I <= dim M(f) = {inv.m_dim}, with equality iff M_y(F) is Cohen-Macaulay")
        return Verdict.INCONCLUSIVE, None, notes
    mu = inv.m_dim
    if inv.weighted_homogeneous:
        if inv.ae_codim != mu:
            notes.append(f"weighted homogeneous but codim {inv.ae_codim} != mu_I {mu}")
            return Verdict.INCONCLUSIVE, mu, notes
        return Verdict.CERTIFIED_EQUALITY, mu, notes
    return Verdict.CERTIFIED_INEQUALITY, mu, notes


def unfolding_invariants(inv: GermInvariants, F: Unfolding | None = None, *,
                         jet_cap: int = DEFAULT_JET_CAP,
                         nice_table: dict[int, bool] | None = None,
                         resolution_steps: int | None = None) -> UnfoldingInvariants:
    """Everything relative to a stable unfolding (built from the jet oracle unless given)."""
    f = inv.germ
    nice = nice_dimensions(f.n, nice_table)
    notes: list[str] = []
    if inv.ae_codim == INFINITE:
        raise GermValidationError("f is not A-finite; it has no stable unfolding of finite size")
    F = stable_unfolding(f, jet_cap) if F is None else F
    G = image_equation_unfolding(F, inv.g)
    P, Jy, lifted = my_module(F, G)
    fiber = specialization_dim(F, P, Jy)
    stable = stable_formula_holds(F, G, P)
    if not stable:
        notes.append("P != J(G) + <G>: the unfolding is not stable")
    jeq = jacobian_equality(F, G)
    if fiber != inv.m_dim:
        notes.append(f"fibre of M_y(F) has dimension {fiber}, M(f) has {inv.m_dim}")
    pd = is_cm = None
    via = None
    if fiber != INFINITE and stable and not lifted:
        pd, is_cm = is_cohen_macaulay(F, P, Jy, resolution_steps)
    elif lifted:
        notes.append("preimage lifted from prime fields; CM test skipped")
    if f.n >= 2 and stable:
        via = ae_codim_via_unfolding(F, G, Jy, inv.k_dim)
        if via != inv.ae_codim:
            notes.append(f"codimension through the unfolding is {via}, not {inv.ae_codim}")
    verdict, mu, vnotes = mond_verdict(inv, is_cm if stable else None, nice)
    return UnfoldingInvariants(F, G, fiber, pd, is_cm, mu, verdict, stable, jeq, via, notes + vnotes)
