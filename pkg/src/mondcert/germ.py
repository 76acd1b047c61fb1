"""Map germs (C^n,0) -> (C^{n+1},0), their unfoldings, and discrete metadata."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .coeffs import QQ
from .errors import GermValidationError
from .groebner import INFINITE, local_dim
from .linalg import nullspace, rank
from .orders import local
from .poly import Poly, Ring, substitute

DEFAULT_NICE_MAX = 14


@dataclass(frozen=True)
class MapGerm:
    source: Ring
    target: Ring
    components: tuple[Poly, ...]
    name: str | None = None

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        n = self.source.nvars
        if self.target.nvars != n + 1:
            raise GermValidationError(f"target must have {n + 1} variables, got {self.target.nvars}")
        if len(comps) != n + 1:
            raise GermValidationError(f"expected {n + 1} components, got {len(comps)}")
        if set(self.source.variables) & set(self.target.variables):
            raise GermValidationError("source and target variable names must differ")
        for i, c in enumerate(comps):
            if c.ring != self.source:
                raise GermValidationError(f"component {i + 1} is not in the source ring")
            if c.constant_term():
                raise GermValidationError(f"component {i + 1} does not vanish at the origin")

    @property
    def n(self) -> int:
        return self.source.nvars

    def label(self) -> str:
        return self.name or "(" + ", ".join(str(c) for c in self.components) + ")"

    def pullback(self, p: Poly) -> Poly:
        """f*(p) = p o f."""
        return substitute(p, list(self.components))


@dataclass(frozen=True)
class Unfolding:
    """F(u, x) = (u, f_u(x)) with f_0 = f; ``components`` are the f_u."""

    base: MapGerm
    params: tuple[str, ...]
    components: tuple[Poly, ...]
    ring: Ring = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        params = tuple(self.params)
        object.__setattr__(self, "params", params)
        src = self.base.source
        if set(params) & (set(src.variables) | set(self.base.target.variables)):
            raise GermValidationError("parameter names clash with germ variables")
        ring = self.ring or Ring(params + tuple(src.variables))
        object.__setattr__(self, "ring", ring)
        comps = tuple(c.to_ring(ring) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.base.n + 1:
            raise GermValidationError("unfolding has the wrong number of components")
        spec = self.specialize_to_base()
        for i, (a, b) in enumerate(zip(spec, self.base.components)):
            if a != b:
                raise GermValidationError(f"unfolding component {i + 1} does not restrict to the germ at u = 0")
        for i, c in enumerate(comps):
            if c.constant_term():
                raise GermValidationError(f"unfolding component {i + 1} does not vanish at the origin")

    @property
    def r(self) -> int:
        return len(self.params)

    @property
    def target(self) -> Ring:
        """Coordinates (u, Y) of the target of F."""
        return Ring(self.params + tuple(self.base.target.variables))

    def full_components(self) -> list[Poly]:
        """(u_1, ..., u_r, f_u) as polynomials in the unfolding ring."""
        return [self.ring.gen(u) for u in self.params] + list(self.components)

    def specialize_to_base(self) -> list[Poly]:
        zero = {u: 0 for u in self.params}
        src = self.base.source
        return [_drop_params(c.evaluate(zero), src) for c in self.components]

    def pullback(self, p: Poly) -> Poly:
        """F*(p) for p in the (u, Y) ring."""
        return substitute(p, self.full_components())


def _drop_params(p: Poly, src: Ring) -> Poly:
    return p.to_ring(src)


def trivial_unfolding(f: MapGerm) -> Unfolding:
    return Unfolding(f, (), f.components)


def fresh_params(count: int, avoid: Sequence[str], base: str = "u") -> tuple[str, ...]:
    out = []
    k = 1
    taken = set(avoid)
    while len(out) < count:
        name = f"{base}{k}"
        if name not in taken:
            out.append(name)
            taken.add(name)
        k += 1
    return tuple(out)


def unfolding_from_terms(f: MapGerm, terms: Sequence[tuple[int, Poly]],
                         params: Sequence[str] | None = None) -> Unfolding:
    """F = f + sum_j u_j * h_j e_{i_j}; ``terms`` lists (component index, h_j)."""
    if params is None:
        params = fresh_params(len(terms), f.source.variables + f.target.variables)
    params = tuple(params)
    ring = Ring(params + tuple(f.source.variables))
    comps = [c.to_ring(ring) for c in f.components]
    for (i, h), u in zip(terms, params):
        comps[i] = comps[i] + ring.gen(u) * h.to_ring(ring)
    return Unfolding(f, params, tuple(comps), ring)


def sum_unfoldings(F: Unfolding, G: Unfolding) -> Unfolding:
    """Unfolding with the parameters of both; restricts to F (resp. G) when the others vanish."""
    if F.base != G.base:
        raise GermValidationError("unfoldings of different germs")
    f = F.base
    params_g = list(G.params)
    rename = {}
    taken = set(F.params) | set(f.source.variables) | set(f.target.variables)
    for p in G.params:
        if p in taken:
            new = fresh_params(1, list(taken) + params_g, base="v")[0]
            rename[p] = new
            taken.add(new)
        else:
            taken.add(p)
    new_g = tuple(rename.get(p, p) for p in G.params)
    ring = Ring(F.params + new_g + tuple(f.source.variables))
    g_ring = Ring(new_g + tuple(f.source.variables))
    comps = []
    for a, b, c in zip(F.components, G.components, f.components):
        b2 = b.map_exponents(g_ring, list(range(g_ring.nvars)))
        comps.append(a.to_ring(ring) + b2.to_ring(ring) - c.to_ring(ring))
    return Unfolding(f, F.params + new_g, tuple(comps), ring)


# ----------------------------------------------------------------------
# validation and metadata

@dataclass(frozen=True)
class Diagnostics:
    finite: bool
    local_algebra_dim: float | int
    messages: tuple[str, ...] = ()


def validate(f: MapGerm) -> Diagnostics:
    """Check finiteness: dim O_n / <f_1, ..., f_{n+1}> must be finite."""
    gens = [c for c in f.components if not c.is_zero()]
    if not gens:
        raise GermValidationError("all components vanish identically; the germ is not finite")
    d = local_dim(gens, local(), ring=f.source)
    if d == INFINITE:
        raise GermValidationError("the germ is not finite (infinite-dimensional local algebra)")
    return Diagnostics(True, d)


@dataclass(frozen=True)
class WeightData:
    weights: tuple[int, ...]
    degrees: tuple[int, ...]

    def check(self, comps: Sequence[Poly]) -> bool:
        for c, d in zip(comps, self.degrees):
            for e in c.terms:
                if sum(a * w for a, w in zip(e, self.weights)) != d:
                    return False
        return True


def _scale_to_integers(v: Sequence) -> tuple[int, ...]:
    fr = [Fraction(int(QQ(x).numerator), int(QQ(x).denominator)) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def find_weights(components: Sequence[Poly], ring: Ring | None = None) -> WeightData | None:
    """Positive integer weights making every component weighted homogeneous, or None."""
    comps = list(components)
    ring = ring or comps[0].ring
    n = ring.nvars
    rows = []
    for c in comps:
        exps = list(c.terms)
        for e in exps[1:]:
            rows.append([a - b for a, b in zip(e, exps[0])])
    if not rows:
        w = (1,) * n
    else:
        basis = nullspace(rows)
        if not basis:
            return None
        if len(basis) == 1:
            v = basis[0]
            if all(x > 0 for x in v):
                w = _scale_to_integers(v)
            elif all(x < 0 for x in v):
                w = _scale_to_integers([-x for x in v])
            else:
                return None
        else:
            w = _lp_weights(rows, n)
            if w is None:
                return None
    degrees = []
    for c in comps:
        if c.is_zero():
            degrees.append(1)
        else:
            e = next(iter(c.terms))
            degrees.append(sum(a * b for a, b in zip(e, w)))
    wd = WeightData(tuple(w), tuple(degrees))
    return wd if wd.check(comps) else None


def _lp_weights(rows: list[list[int]], n: int) -> tuple[int, ...] | None:
    """Vertex of {A w = 0, w >= 1} minimizing sum(w), recovered exactly."""
    from scipy.optimize import linprog

    res = linprog(c=[1] * n, A_eq=rows, b_eq=[0] * len(rows), bounds=[(1, None)] * n, method="highs")
    if not res.success:
        return None
    active = [i for i in range(n) if abs(res.x[i] - 1) < 1e-7]
    # exact solve: A w = 0 together with w_i = 1 on the active bounds
    mat = [list(r) + [0] for r in rows]
    for i in active:
        mat.append([1 if k == i else 0 for k in range(n)] + [-1])
    null = nullspace(mat)
    for v in null:
        if v[-1]:
            sol = [x / v[-1] for x in v[:-1]]
            if all(x >= 1 for x in sol):
                return _scale_to_integers(sol)
    return None


def jacobian_at_origin(f: MapGerm) -> list[list]:
    out = []
    for c in f.components:
        row = []
        for i in range(f.n):
            e = tuple(1 if k == i else 0 for k in range(f.n))
            row.append(c.terms.get(e, QQ(0)))
        out.append(row)
    return out


def corank(f: MapGerm) -> int:
    rows = []
    for r in jacobian_at_origin(f):
        d = {j: v for j, v in enumerate(r) if v}
        if d:
            rows.append(d)
    return f.n - rank(rows)


def multiplicity(f: MapGerm) -> int:
    orders = [c.order() for c in f.components if not c.is_zero()]
    return min(orders)


def corank_multiplicity(f: MapGerm) -> int:
    """Minimum multiplicity of f_{n-r+1}, ..., f_{n+1} for f in the form (x_1, .., x_{n-r}, ...)."""
    r = corank(f)
    n = f.n
    for i in range(n - r):
        if f.components[i] != f.source.gen(f.source.variables[i]):
            raise GermValidationError(
                f"corank-{r} multiplicity needs the form (x_1, ..., x_{n - r}, f_{n - r + 1}, ...)")
    rest = [c.order() for c in f.components[n - r:] if not c.is_zero()]
    if not rest:
        raise GermValidationError("no nonzero components after the immersive part")
    return min(rest)


def nice_dimensions(n: int, table: dict[int, bool] | None = None) -> bool:
    """Whether (n, n+1) is in the nice range; ``table`` overrides the default n <= 14."""
    if n < 1:
        raise ValueError("n must be positive")
    if table is not None and n in table:
        return bool(table[n])
    return n <= DEFAULT_NICE_MAX
