"""The single-germ pipeline and its report (a JSON tree plus a text rendering)."""
from __future__ import annotations

import json
import math
import time
from typing import Any

from .config import Config
from .errors import GermValidationError
from .germ import corank, corank_multiplicity, find_weights, multiplicity, nice_dimensions, validate
from .germfile import GermFile
from .groebner import INFINITE, global_twin, limits, local_dim, subquotient_dim
from .image import fitting_crosscheck, ramification_ideal, source_order, target_order
from .jets import stabilized_codim
from .mond import CROSSCHECK_SECONDS, _bounded, germ_invariants, jacobian_ideal
from .poly import partial
from .unfolding import Verdict, unfolding_invariants

SCHEMA = "mondcert-report/1"

__all__ = ["SCHEMA", "analyze", "dumps", "loads", "render_text", "verify_line", "encode_dim", "decode_dim"]


def encode_dim(v) -> int | str | None:
    """JSON has no infinity; it is written as the string "inf"."""
    if v is None:
        return None
    if v == INFINITE:
        return "inf"
    return int(v)


def decode_dim(v):
    return INFINITE if v == "inf" else v


def _num(v, route: str) -> dict:
    return {"value": encode_dim(v), "route": route}


def _sorted_basis(basis) -> list:
    return [[i, list(e)] for i, e in basis]


class _Clock:
    def __init__(self, enabled: bool) -> None:
        self.enabled = enabled
        self.stages: dict[str, float] = {}
        self._t = time.perf_counter()

    def lap(self, stage: str) -> None:
        now = time.perf_counter()
        self.stages[stage] = round(now - self._t, 3)
        self._t = now


def analyze(gf: GermFile, config: Config | None = None) -> dict:
    """Run the whole pipeline on one germ; raises on invalid input or exhausted limits."""
    config = config or Config()
    with limits(pair_degree_cap=config.pair_cap, seconds=config.seconds):
        return _analyze(gf, config)


def _analyze(gf: GermFile, config: Config) -> dict:
    f = gf.germ
    clock = _Clock(config.timing)
    notes: list[str] = []
    diag = validate(f)
    wd = find_weights(f.components, f.source)
    nice = nice_dimensions(f.n, config.nice_table)
    rep: dict[str, Any] = {"schema": SCHEMA}
    rep["input"] = {
        "name": f.name,
        "n": f.n,
        "source": list(f.source.variables),
        "target": list(f.target.variables),
        "components": [str(c) for c in f.components],
        "unfolding": None if gf.unfolding is None else {
            "params": list(gf.unfolding.params),
            "components": [str(c) for c in gf.unfolding.components],
        },
    }
    rep["config"] = config.describe()
    try:
        crk = corank(f)
    except GermValidationError:
        crk = None
    try:
        crk_mult = corank_multiplicity(f)
    except GermValidationError:
        crk_mult = None
    rep["germ"] = {
        "corank": crk,
        "multiplicity": multiplicity(f),
        "corank_multiplicity": crk_mult,
        "weighted_homogeneous": wd is not None,
        "weights": list(wd.weights) if wd else None,
        "degrees": list(wd.degrees) if wd else None,
        "local_algebra_dim": _num(diag.local_algebra_dim, "local standard basis of <f>"),
        "nice_dimensions": nice,
    }
    clock.lap("validate")

    inv = germ_invariants(f)
    clock.lap("invariants")
    rep["image"] = _image_section(f, inv)
    clock.lap("image")

    oracle = stabilized_codim(f, cap=config.jet_cap)
    rep["oracle"] = {
        "value": encode_dim(oracle.value) if oracle.stabilized else "unstable-at-cap",
        "witness": list(oracle.witness),
        "history": [[k, d] for k, d in oracle.history],
        "normal_basis": _sorted_basis(oracle.basis),
        "heuristic": True,
    }
    clock.lap("oracle")

    rep["invariants"] = {
        "m_dim": _num(inv.m_dim, "(f*)^-1(J(g) O_n) / J(g), local count"),
        "k_dim": _num(inv.k_dim, "(<g> + J(g)) / J(g), local count"),
        "ae_codim": _num(inv.ae_codim, _codim_route(inv)),
        "ae_codim_mond": _num(inv.ae_codim_mond, "J(g) O_n / J(g) O_X inside the pushforward"),
        "ae_codim_tangent": _num(inv.ae_codim_tangent, "theta(f) / T A_e f as modules over the target"),
        "a_finite": inv.a_finite,
        "certified": inv.certified,
        "mond_generators": [str(p) for p in inv.mond_generators],
    }
    notes += inv.notes

    unf = None
    if inv.ae_codim != INFINITE and (oracle.stabilized or gf.unfolding is not None):
        uinv = unfolding_invariants(inv, gf.unfolding, jet_cap=config.jet_cap,
                                    nice_table=config.nice_table,
                                    resolution_steps=config.resolution_steps)
        unf = uinv
        rep["unfolding"] = {
            "params": list(uinv.unfolding.params),
            "components": [str(c) for c in uinv.unfolding.components],
            "source": "file" if gf.unfolding is not None else "jet oracle normal space",
            "G": str(uinv.G),
            "dim_My_fiber": _num(uinv.dim_My_fiber, "P / (J_y(G) + u P), local count"),
            "pd": uinv.pd,
            "is_CM": uinv.is_CM,
            "mu_I": encode_dim(uinv.mu_I),
            "stable_formula": uinv.stable_formula,
            "jacobian_equality": uinv.jacobian_equality,
            "ae_codim_via_unfolding": _num(uinv.ae_codim_via_unfolding,
                                           "(J(G) + <G>) / (J_y(G) + u(J(G) + <G>)) minus dim K(g)"),
        }
        verdict = uinv.verdict
        notes += uinv.notes
    else:
        rep["unfolding"] = None
        verdict = Verdict.NOT_APPLICABLE
        if inv.ae_codim == INFINITE:
            notes.append("f is not A-finite")
        elif not oracle.stabilized:
            notes.append("the jet oracle did not stabilize below the jet cap; no stable unfolding built")
    clock.lap("unfolding")
    rep["verdict"] = verdict.value
    rep["mu_I"] = encode_dim(unf.mu_I) if unf is not None else None

    if config.order == "global-check":
        rep["global_check"] = _global_check(f, inv)
        clock.lap("global_check")
    else:
        rep["global_check"] = None

    rep["consistency"] = _consistency(inv, oracle, unf, rep["image"])
    for k, ok in sorted(rep["consistency"].items()):
        if ok is False:
            notes.append(f"consistency check failed: {k}")
    rep["notes"] = notes
    if config.timing:
        rep["timing"] = clock.stages
    return rep


def _codim_route(inv) -> str:
    if inv.ae_codim_tangent == INFINITE:
        return "tangent-space module is infinite"
    if inv.germ.n == 1:
        return "Mond formula plus dim O_1 / <f'>"
    return "dim M(f) - dim K(g)"


def _image_section(f, inv) -> dict:
    g, lam = inv.g, inv.lam
    pulled = [f.pullback(partial(g, y)) for y in f.target.variables]
    from .image import _minors
    minors = _minors(f)
    piene = all((a + (lam * m if i % 2 == 0 else -(lam * m))).is_zero()
                for i, (a, m) in enumerate(zip(pulled, minors)))
    order = source_order(f)
    R = ramification_ideal(f)
    JO = [p for p in pulled if not p.is_zero()]
    dim_c = subquotient_dim([lam], JO, order, ring=f.source, check=False)
    dim_r = local_dim(R, order, ring=f.source) if R else INFINITE
    fit = _bounded(lambda: fitting_crosscheck(f), CROSSCHECK_SECONDS) if inv.ae_codim_tangent is not None else None
    return {
        "g": str(g),
        "lambda": str(lam),
        "piene_identity": piene,
        "conductor": {
            "dim_C_over_JO": _num(dim_c, "lambda O_n / J(g) O_n, local count"),
            "dim_O_over_R": _num(dim_r, "O_n / minors of df, local count"),
        },
        "fitting_equals_conductor": fit,
    }


def _global_check(f, inv) -> dict:
    """Same counts under the global twin of each order: differences mean other singular points."""
    tgt_order = global_twin(target_order(f))
    m_glob = subquotient_dim(inv.mond_generators, jacobian_ideal(inv.g), tgt_order, ring=f.target, check=False)
    k_glob = subquotient_dim([inv.g] + jacobian_ideal(inv.g), jacobian_ideal(inv.g), tgt_order,
                             ring=f.target, check=False)
    return {
        "m_dim": _num(m_glob, "global count"),
        "k_dim": _num(k_glob, "global count"),
        "agrees_with_local": m_glob == inv.m_dim and k_glob == inv.k_dim,
    }


def _consistency(inv, oracle, unf, image) -> dict:
    out: dict[str, bool | None] = {}
    finite = inv.ae_codim != INFINITE
    out["piene_identity"] = image["piene_identity"]
    c = image["conductor"]
    out["conductor_isomorphism"] = c["dim_C_over_JO"]["value"] == c["dim_O_over_R"]["value"]
    if inv.ae_codim_mond is not None and INFINITE not in (inv.m_dim, inv.k_dim):
        out["snake_additivity"] = inv.m_dim == inv.k_dim + inv.ae_codim_mond
    else:
        out["snake_additivity"] = None
    out["tangent_agrees"] = None if inv.ae_codim_tangent is None else inv.ae_codim_tangent == inv.ae_codim
    if oracle.stabilized:
        out["oracle_agrees"] = oracle.value == inv.ae_codim
    else:
        out["oracle_agrees"] = None if finite else True
    if inv.weighted_homogeneous:
        out["weighted_homogeneous_k_zero"] = inv.k_dim == 0
    if unf is not None:
        out["specialization"] = unf.dim_My_fiber == inv.m_dim
        out["stable_formula"] = unf.stable_formula
        out["jacobian_equality"] = unf.jacobian_equality
        if unf.ae_codim_via_unfolding is not None:
            out["codim_via_unfolding"] = unf.ae_codim_via_unfolding == inv.ae_codim
    return out


# ----------------------------------------------------------------------
# serialization

def dumps(rep: dict) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(rep, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


def _fmt(v) -> str:
    if isinstance(v, dict) and "value" in v:
        v = v["value"]
    if v is None:
        return "-"
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return str(v)


def verify_line(rep: dict) -> str:
    verdict = rep["verdict"]
    codim = _fmt(rep["invariants"]["ae_codim"])
    if verdict == Verdict.CERTIFIED_EQUALITY.value:
        return f"{verdict} codim={codim} mu_I={_fmt(rep['mu_I'])}"
    return f"{verdict} codim={codim} dimM={_fmt(rep['invariants']['m_dim'])}"


def render_text(rep: dict) -> str:
    inp, germ, inv = rep["input"], rep["germ"], rep["invariants"]
    lines = [f"germ {inp['name'] or '(unnamed)'}: ({', '.join(inp['components'])})"]
    w = f" weights {tuple(germ['weights'])} degrees {tuple(germ['degrees'])}" if germ["weighted_homogeneous"] else ""
    lines.append(f"  n = {inp['n']}, corank {_fmt(germ['corank'])}, multiplicity {germ['multiplicity']},"
                 f" weighted homogeneous: {'yes' + w if germ['weighted_homogeneous'] else 'no'}")
    img = rep["image"]
    lines.append(f"  g = {img['g']}")
    lines.append(f"  lambda = {img['lambda']}   (Piene identity {'holds' if img['piene_identity'] else 'FAILS'})")
    c = img["conductor"]
    lines.append(f"  dim C(f)/J(g)O_n = {_fmt(c['dim_C_over_JO'])}, dim O_n/R(f) = {_fmt(c['dim_O_over_R'])}")
    lines.append(f"  dim M(f) = {_fmt(inv['m_dim'])}, dim K(g) = {_fmt(inv['k_dim'])}")
    lines.append(f"  A_e-codim = {_fmt(inv['ae_codim'])}  [{inv['ae_codim']['route']}]")
    lines.append(f"    Mond formula {_fmt(inv['ae_codim_mond'])}, tangent module {_fmt(inv['ae_codim_tangent'])}")
    orc = rep["oracle"]
    hist = " ".join(f"{k}:{d}" for k, d in orc["history"])
    lines.append(f"  jet oracle (heuristic): {orc['value']}"
                 + (f" at k = {', '.join(map(str, orc['witness']))}" if orc["witness"] else "")
                 + f"   [{hist}]")
    u = rep["unfolding"]
    if u is not None:
        lines.append(f"  stable unfolding ({u['source']}): ({', '.join(u['components'])})")
        lines.append(f"    G = {u['G']}")
        lines.append(f"    dim M_y(F) fibre = {_fmt(u['dim_My_fiber'])}, pd = {_fmt(u['pd'])},"
                     f" CM = {_fmt(u['is_CM'])}, stable formula {_fmt(u['stable_formula'])},"
                     f" J_y(G)O = J(G)O {_fmt(u['jacobian_equality'])}")
    lines.append(f"  verdict: {verify_line(rep)}")
    gc = rep.get("global_check")
    if gc:
        lines.append(f"  global check: dim M {_fmt(gc['m_dim'])}, dim K {_fmt(gc['k_dim'])},"
                     f" agrees with local: {gc['agrees_with_local']}")
    bad = [k for k, v in sorted(rep["consistency"].items()) if v is False]
    lines.append("  consistency: " + ("all checks pass" if not bad else "FAILED " + ", ".join(bad)))
    for n in rep["notes"]:
        lines.append(f"  note: {n}")
    if "timing" in rep:
        lines.append("  timing: " + ", ".join(f"{k} {v:.2f}s" for k, v in rep["timing"].items()))
    return "\n".join(lines) + "\n"
