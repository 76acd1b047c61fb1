"""End-to-end acceptance checks on the n = 2 corpus (criteria 1 to 10)."""
import io
import random
import time

import pytest

import bruteforce
from conftest import CORPUS, CORPUS_GERMS
from mondcert.cli import main
from mondcert.germfile import read_germ
from mondcert.groebner import INFINITE, is_subset, local_dim, subquotient_dim
from mondcert.image import _minors, image_equation, piene_lambda, ramification_ideal, source_order, target_order
from mondcert.jets import stabilized_codim
from mondcert.mond import germ_invariants, jacobian_ideal, mond_formula_codim, tangent_codim
from mondcert.poly import partial
from mondcert.unfolding import (Verdict, image_equation_unfolding, is_cohen_macaulay, jacobian_equality,
                                my_module, random_unfolding, redundant_unfolding, relative_jacobian,
                                specialization_dim, stable_unfolding, unfolding_germ, unfolding_invariants)

FILES = {"cross-cap": "crosscap", "S1": "s1", "S2": "s2", "S3": "s3",
         "B1": "b1", "B2": "b2", "B3": "b3", "H2": "h2"}
TRIANGULATION = ("cross-cap", "S1", "S2", "S3", "B1", "B2", "B3", "H2")
A_FINITE = TRIANGULATION + ("S1-perturbed",)
ALL_FILES = sorted(CORPUS.glob("*.germ"))


def load(name):
    stem = FILES.get(name, "nonwh" if name == "S1-perturbed" else name)
    return read_germ(CORPUS / f"{stem}.germ").germ


_INV = {}


def invariants(name):
    if name not in _INV:
        _INV[name] = germ_invariants(load(name))
    return _INV[name]


_STABLE = {}


def stable(name):
    """(F, G, P, Jy) for the oracle-built stable unfolding."""
    if name not in _STABLE:
        F = stable_unfolding(load(name))
        G = image_equation_unfolding(F, invariants(name).g)
        P, Jy, lifted = my_module(F, G)
        assert not lifted
        _STABLE[name] = (F, G, P, Jy)
    return _STABLE[name]


def test_c1_three_routes_agree_with_pinned_values():
    t0 = time.monotonic()
    pinned = {name: stabilized_codim(load(name)).value for name in TRIANGULATION}
    assert tuple(pinned[n] for n in TRIANGULATION) == (0, 1, 2, 3, 1, 2, 3, 2)
    for name in TRIANGULATION:
        f = load(name)
        inv = invariants(name)
        via_m = inv.m_dim - inv.k_dim
        assert (via_m, mond_formula_codim(f), inv.ae_codim) == (pinned[name],) * 3, name
        assert CORPUS_GERMS[name][1] == pinned[name]
    assert time.monotonic() - t0 < 600


@pytest.mark.parametrize("path", ALL_FILES, ids=lambda p: p.stem)
def test_c2_piene_identity(path):
    f = read_germ(path).germ
    g = image_equation(f)
    lam = piene_lambda(f, g)
    for i, (y, m) in enumerate(zip(f.target.variables, _minors(f)), start=1):
        assert (f.pullback(partial(g, y)) + (-1) ** (i + 1) * lam * m).is_zero()


@pytest.mark.parametrize("path", ALL_FILES, ids=lambda p: p.stem)
def test_c3_conductor_isomorphism(path):
    f = read_germ(path).germ
    g = image_equation(f)
    lam = piene_lambda(f, g)
    JO = [f.pullback(d) for d in jacobian_ideal(g)]
    JO = [p for p in JO if not p.is_zero()]
    lhs = subquotient_dim([lam], JO, source_order(f), ring=f.source)
    rhs = local_dim(ramification_ideal(f), source_order(f), ring=f.source)
    assert lhs == rhs
    if path.stem != "negative":
        assert lhs != INFINITE


@pytest.mark.parametrize("name", A_FINITE)
def test_c4_specialization(name):
    f = load(name)
    inv = invariants(name)
    F, G, P, Jy = stable(name)
    assert specialization_dim(F, P, Jy) == inv.m_dim
    rng = random.Random(sum(map(ord, name)))
    # two-parameter unfoldings of the non-WH germ are beyond the local engine's budget
    most = 2 if inv.weighted_homogeneous else 1
    for _ in range(3):
        R = random_unfolding(f, rng, params=rng.randint(1, most))
        GR = image_equation_unfolding(R, inv.g)
        PR, JyR, _ = my_module(R, GR)
        assert specialization_dim(R, PR, JyR) == inv.m_dim, [str(c) for c in R.components]


@pytest.mark.parametrize("name", A_FINITE)
def test_c5_source_jacobian_equality(name):
    F, G, _, _ = stable(name)
    assert jacobian_equality(F, G)
    # the same by hand: mutual membership of the pulled-back generators in the source
    Fg = unfolding_germ(F)
    Gt = G.to_ring(Fg.target)
    pulled_all = [Fg.pullback(partial(Gt, v)) for v in Fg.target.variables]
    pulled_y = [Fg.pullback(p.to_ring(Fg.target)) for p in relative_jacobian(G, F.base.target)]
    pulled_all = [p for p in pulled_all if not p.is_zero()]
    pulled_y = [p for p in pulled_y if not p.is_zero()]
    order = source_order(Fg)
    assert is_subset(pulled_all, pulled_y, order, ring=Fg.source)
    assert is_subset(pulled_y, pulled_all, order, ring=Fg.source)


@pytest.mark.parametrize("name", TRIANGULATION)
def test_c6_weighted_homogeneous_germs_are_certified(name):
    inv = invariants(name)
    assert inv.weighted_homogeneous
    u = unfolding_invariants(inv)
    assert u.is_CM is True
    assert u.verdict is Verdict.CERTIFIED_EQUALITY
    assert u.mu_I == inv.ae_codim == CORPUS_GERMS[name][1]


@pytest.mark.parametrize("name", A_FINITE)
def test_c7_cm_does_not_depend_on_the_unfolding(name):
    f = load(name)
    F, G, P, Jy = stable(name)
    F2 = redundant_unfolding(f, F)
    assert F2.params != F.params
    G2 = image_equation_unfolding(F2, invariants(name).g)
    P2, Jy2, _ = my_module(F2, G2)
    assert is_cohen_macaulay(F, P, Jy)[1] == is_cohen_macaulay(F2, P2, Jy2)[1]


@pytest.mark.parametrize("name", A_FINITE)
def test_c8_stable_formula(name):
    F, G, P, _ = stable(name)
    Fg = unfolding_germ(F)
    Gt = G.to_ring(Fg.target)
    rhs = jacobian_ideal(Gt) + [Gt]
    order = target_order(Fg)
    assert is_subset(P, rhs, order, ring=Fg.target)
    assert is_subset(rhs, P, order, ring=Fg.target)


def test_c9_negative_control_reported_as_not_applicable():
    f = load("negative")
    oracle = stabilized_codim(f)
    assert not oracle.stabilized
    dims = [d for _, d in oracle.history]
    assert dims == sorted(dims) and dims[-1] > dims[0]
    assert tangent_codim(f) == INFINITE
    out, err = io.StringIO(), io.StringIO()
    assert main(["verify", str(CORPUS / "negative.germ")], out, err) == 0
    assert out.getvalue().startswith("NotApplicable codim=inf")


@pytest.mark.xfail(strict=True, reason="M(f) is finite (zero) for (x, y^2, y^3): (f*)^-1(J(g)O_2) = J(g); "
                                       "non-A-finiteness is detected by the tangent-space route instead")
def test_c9_negative_control_has_infinite_m():
    assert invariants("negative").m_dim == INFINITE


def test_c10_kernel_suite_against_brute_force():
    t0 = time.monotonic()
    failures = bruteforce.run_suite(200)
    assert failures == []
    assert time.monotonic() - t0 < 120
