"""The module M(f) = (f*)^{-1}(J(g) O_n) / J(g) and the codimensions built on it."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from .errors import GermValidationError, ResourceLimitExceeded
from .germ import MapGerm, find_weights
from . import groebner as _gb
from .groebner import INFINITE, limits, local_dim, preimage, standard_basis, subquotient_dim
from .image import (PushForward, image_equation, normalize, piene_lambda,
                    pushforward, pushforward_preimage, ramification_ideal, source_order,
                    target_order)
from .modular import modular_lift
from .poly import NotDivisible, Poly, exact_divide, partial

__all__ = [
    "jacobian_ideal",
    "k_dim",
    "mond_ideal",
    "m_dim",
    "ae_codim",
    "mond_formula_codim",
    "tangent_codim",
    "GermInvariants",
    "germ_invariants",
]


def jacobian_ideal(g: Poly) -> list[Poly]:
    return [d for d in (partial(g, v) for v in g.ring.variables) if not d.is_zero()]


def k_dim(g: Poly, order=None) -> float | int:
    """dim O_{n+1} / J(g) restricted to <g>: the length of (<g> + J(g)) / J(g)."""
    J = jacobian_ideal(g)
    return subquotient_dim([g] + J, J, order, ring=g.ring, check=False)


# seconds granted to the direct computation over Q before lifting from primes
DIRECT_BUDGET = 3.0


def mond_ideal(f: MapGerm, g: Poly | None = None, pf: PushForward | None = None) -> list[Poly]:
    """Generators of (f*)^{-1}(J(g) O_n) in the target ring."""
    return _mond_ideal(f, g, pf)[0]


def _mond_ideal(f: MapGerm, g: Poly | None, pf: PushForward | None) -> tuple[list[Poly], bool]:
    """(generators, lifted); ``lifted`` means the generators came from primes.

    Lifted generators are each checked to lie in the preimage, exactly: the
    pulled-back partials are lambda times the minors, so h belongs iff
    lambda divides f*(h) and the quotient lies in the ideal of minors.  That
    certifies one inclusion; equality is settled by a dimension count.
    """
    g = image_equation(f) if g is None else g
    pulled = [f.pullback(d) for d in jacobian_ideal(g)]
    pulled = [p for p in pulled if not p.is_zero()]
    if not pulled:
        return [g], False
    if pf is None:
        gens = preimage(list(f.components), f.target, pulled)
        return [normalize(p) for p in gens if not p.is_zero()], False
    try:
        gens = pushforward_preimage(pf, pulled, budget=DIRECT_BUDGET)
        return [normalize(p) for p in gens if not p.is_zero()], False
    except ResourceLimitExceeded as exc:
        if exc.what != "speculative time":
            raise
    cand = [normalize(p) for p in modular_lift(lambda F: pushforward_preimage(pf, pulled, F))]
    if all(_in_mond_ideal(f, g, h) for h in cand):
        return cand, True
    gens = pushforward_preimage(pf, pulled)
    return [normalize(p) for p in gens if not p.is_zero()], False


def _in_mond_ideal(f: MapGerm, g: Poly, h: Poly) -> bool:
    lam = piene_lambda(f, g)
    try:
        q = exact_divide(f.pullback(h), lam)
    except NotDivisible:
        return False
    R = ramification_ideal(f)
    return standard_basis(R, source_order(f), ring=f.source).contains(q)


def m_dim(f: MapGerm, g: Poly | None = None, P: Sequence[Poly] | None = None) -> float | int:
    g = image_equation(f) if g is None else g
    P = mond_ideal(f, g) if P is None else list(P)
    # J(g) lies in P by construction, so the inclusion test is skipped
    return subquotient_dim(P, jacobian_ideal(g), target_order(f), ring=f.target, check=False)


def _derivative_quotient(f: MapGerm) -> float | int:
    """dim O_n / (n x n minors of df); for curves the ideal of the derivatives."""
    R = ramification_ideal(f)
    if not R:
        return INFINITE
    return local_dim(R, source_order(f), ring=f.source)


def mond_formula_codim(f: MapGerm, g: Poly | None = None, pf: PushForward | None = None,
                       allow_curves: bool = False) -> float | int:
    """dim J(g) O_n / J(g) O_X computed inside the pushforward presentation of O_n."""
    if f.n == 1 and not allow_curves:
        raise GermValidationError("the Mond formula is stated for n >= 2")
    g = image_equation(f) if g is None else g
    pf = pf or pushforward(f)
    phis = [f.pullback(d) for d in jacobian_ideal(g)]
    phis = [p for p in phis if not p.is_zero()]
    s = pf.rank
    W = [pf.coordinates(p) for p in phis]
    A = list(W)
    src = f.source
    for p in phis:
        for e in pf.basis:
            if any(e):
                A.append(pf.coordinates(p * Poly(src, {e: 1})))
    A += list(pf.relations)
    W += list(pf.relations)
    # W is a subset of the generators of A
    return subquotient_dim(A, W, target_order(f), ring=f.target, shifts=pf.shifts, check=False)


def tangent_codim(f: MapGerm, pf: PushForward | None = None) -> float | int:
    """dim theta(f) / (tf(theta_n) + wf(theta_{n+1})), exactly, as O_{n+1}-modules.

    theta(f) = O_n^{n+1} is finite over O_{n+1} through the pushforward, and
    the extended tangent space is the submodule generated by x^a df/dx_j
    (a running over the module basis) together with the constant fields e_i.
    """
    pf = pf or pushforward(f)
    s = pf.rank
    p = f.n + 1
    tgt = f.target
    zero = tgt.zero()
    wd = find_weights(f.components, f.source)
    degs = wd.degrees if wd else (0,) * p
    top = max(degs)

    def place(i: int, vec) -> tuple:
        out = [zero] * (s * p)
        out[i * s:(i + 1) * s] = vec
        return tuple(out)

    gens = []
    for i in range(p):
        for r in pf.relations:
            gens.append(place(i, r))
    src = f.source
    for j, v in enumerate(src.variables):
        col = [partial(c, v) for c in f.components]
        for e in pf.basis:
            mono = Poly(src, {e: 1})
            vec = [zero] * (s * p)
            for i, d in enumerate(col):
                if not d.is_zero():
                    vec[i * s:(i + 1) * s] = pf.coordinates(mono * d)
            if any(not q.is_zero() for q in vec):
                gens.append(tuple(vec))
    for i in range(p):
        gens.append(place(i, [tgt.one() if k == 0 else zero for k in range(s)]))
    shifts = [pf.shifts[a] - degs[i] + top for i in range(p) for a in range(s)]
    return local_dim(gens, target_order(f), ring=tgt, rank=s * p, shifts=shifts)


def _pushforward_or_none(f: MapGerm) -> PushForward | None:
    try:
        return pushforward(f)
    except GermValidationError:
        return None


def ae_codim(f: MapGerm, g: Poly | None = None, mdim=None, kdim=None,
             pf: PushForward | None = None) -> float | int:
    """A_e-codimension.

    For n >= 2 this is dim M(f) - dim K(g), which presumes A-finiteness; the
    exact tangent-space computation decides that first whenever a global
    pushforward exists.  Curves use the Mond formula plus dim O_1/<f'>.
    """
    g = image_equation(f) if g is None else g
    pf = pf or _pushforward_or_none(f)
    if f.n == 1:
        a = mond_formula_codim(f, g, pf, allow_curves=True)
        b = _derivative_quotient(f)
        return INFINITE if INFINITE in (a, b) else a + b
    if pf is not None and tangent_codim(f, pf) == INFINITE:
        return INFINITE
    m = m_dim(f, g) if mdim is None else mdim
    if m == INFINITE:
        return INFINITE
    k = k_dim(g, target_order(f)) if kdim is None else kdim
    return m - k


# wall-clock seconds for the optional Mond-formula cross-check
CROSSCHECK_SECONDS = 20.0


@dataclass
class GermInvariants:
    germ: MapGerm
    g: Poly
    lam: Poly
    weights: tuple[int, ...] | None
    degrees: tuple[int, ...] | None
    mond_generators: list[Poly]
    m_dim: float | int
    k_dim: float | int
    ae_codim: float | int
    ae_codim_mond: float | int | None
    ae_codim_tangent: float | int | None
    notes: list[str] = field(default_factory=list)
    certified: bool = True

    @property
    def weighted_homogeneous(self) -> bool:
        return self.weights is not None

    @property
    def a_finite(self) -> bool | None:
        """True/False when certified by the tangent-space computation, else None."""
        if self.ae_codim_tangent is None:
            return None
        return self.ae_codim_tangent != INFINITE


def _bounded(thunk, seconds: float):
    """thunk() under an extra deadline; None when only that deadline fired."""
    outer = _gb.LIMITS.deadline
    try:
        with limits(seconds=seconds):
            return thunk()
    except ResourceLimitExceeded as exc:
        if exc.what != "time" or (outer is not None and time.monotonic() > outer):
            raise
        return None


def germ_invariants(f: MapGerm) -> GermInvariants:
    g = image_equation(f)
    lam = piene_lambda(f, g)
    wd = find_weights(f.components, f.source)
    notes: list[str] = []
    pf = _pushforward_or_none(f)
    if pf is None:
        notes.append("no global pushforward: A-finiteness is not certified and the Mond-formula route is skipped")
    tangent = tangent_codim(f, pf) if pf is not None else None
    P, lifted = _mond_ideal(f, g, pf)
    J = jacobian_ideal(g)
    md = m_dim(f, g, P + J if lifted else P)
    kd = k_dim(g, target_order(f))
    certified = True
    if f.n == 1:
        codim = ae_codim(f, g, md, kd, pf)
        mond = None
    else:
        mond = _bounded(lambda: mond_formula_codim(f, g, pf), CROSSCHECK_SECONDS) if pf is not None else None
        if pf is not None and mond is None:
            notes.append(f"Mond-formula cross-check skipped after {CROSSCHECK_SECONDS:g} s")
        if tangent == INFINITE:
            codim = INFINITE
            notes.append("not A-finite: dim M(f) - dim K(g) does not compute the codimension here")
        else:
            codim = INFINITE if md == INFINITE else md - kd
    if lifted:
        if mond is not None and INFINITE not in (md, kd, mond) and md == kd + mond:
            notes.append("preimage generators lifted from prime fields; inclusion checked over Q, "
                         "equality by dim M(f) = dim K(g) + dim J(g)O_n / J(g)O_X")
        else:
            certified = False
            notes.append("preimage generators lifted from prime fields; only the inclusion is certified, "
                         "so dim M(f) is a lower bound")
    if tangent is not None and codim != INFINITE and tangent != codim:
        notes.append(f"tangent-space codimension {tangent} disagrees with {codim}")
    if mond is not None and tangent != INFINITE and mond != codim:
        notes.append(f"Mond-formula codimension {mond} disagrees with {codim}")
    return GermInvariants(f, g, lam, wd.weights if wd else None, wd.degrees if wd else None,
                          P, md, kd, codim, mond, tangent, notes, certified)
