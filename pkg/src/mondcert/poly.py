"""Exact multivariate polynomials over the rationals.

Polynomials are immutable maps from exponent tuples to nonzero ``mpq``
coefficients.  Everything heavier (standard bases, elimination) lives in
:mod:`mondcert.groebner`, which converts to a packed-integer representation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .coeffs import QQ, as_rational, is_integral

__all__ = [
    "Ring",
    "Poly",
    "PolyMatrix",
    "ParseError",
    "NotDivisible",
    "parse_poly",
    "substitute",
    "partial",
    "jacobian",
    "det",
    "exact_divide",
]

MAX_EXPONENT = (1 << 29) - 1


class ParseError(ValueError):
    """Syntax error in a polynomial expression."""

    def __init__(self, message: str, text: str, pos: int) -> None:
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class NotDivisible(ArithmeticError):
    pass


@dataclass(frozen=True)
class Ring:
    """A polynomial ring Q[v_1, ..., v_k] with optional positive weights."""

    variables: tuple[str, ...]
    weights: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.variables and self.variables != ():
            raise ValueError("bad variable list")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        for v in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"invalid variable name {v!r}")
        if self.weights is not None:
            w = tuple(int(x) for x in self.weights)
            if len(w) != len(self.variables):
                raise ValueError("one weight per variable required")
            if any(x <= 0 for x in w):
                raise ValueError("weights must be strictly positive")
            object.__setattr__(self, "weights", w)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r} in ring {self.variables}") from None

    def gen(self, var: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index(var)] = 1
        return Poly(self, {tuple(e): QQ(1)})

    def gens(self) -> list["Poly"]:
        return [self.gen(v) for v in self.variables]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = as_rational(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def __call__(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def with_weights(self, weights: Sequence[int] | None) -> "Ring":
        return Ring(self.variables, None if weights is None else tuple(weights))

    def __str__(self) -> str:
        return "Q[" + ",".join(self.variables) + "]"


def _grevlex_key(e: tuple[int, ...]):
    return (sum(e), tuple(-x for x in reversed(e)))


class Poly:
    """Immutable exact polynomial; ``terms`` maps exponent tuples to mpq."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], object] | None = None,
                 _trusted: bool = False) -> None:
        self.ring = ring
        if _trusted:
            self._terms = terms
        else:
            clean = {}
            n = ring.nvars
            for e, c in (terms or {}).items():
                e = tuple(int(x) for x in e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for {ring}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent {e}")
                if any(x > MAX_EXPONENT for x in e):
                    raise OverflowError(f"exponent {e} exceeds supported range")
                c = as_rational(c)
                if c:
                    clean[e] = clean.get(e, QQ(0)) + c
                    if not clean[e]:
                        del clean[e]
            self._terms = clean
        self._hash = None

    # -- basic access -------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.ring.nvars, QQ(0))

    def is_constant(self) -> bool:
        z = (0,) * self.ring.nvars
        return all(e == z for e in self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term (the multiplicity); -1 for zero."""
        return min((sum(e) for e in self._terms), default=-1)

    def wdeg(self, weights: Sequence[int] | None = None) -> int:
        w = weights if weights is not None else self.ring.weights
        if w is None:
            raise ValueError("no weights given")
        return max((sum(a * b for a, b in zip(e, w)) for e in self._terms), default=-1)

    def is_weighted_homogeneous(self, weights: Sequence[int]) -> bool:
        return len({sum(a * b for a, b in zip(e, weights)) for e in self._terms}) <= 1

    def variables_used(self) -> set[str]:
        used = set()
        for e in self._terms:
            for i, x in enumerate(e):
                if x:
                    used.add(self.ring.variables[i])
        return used

    def degree_in(self, var: str) -> int:
        i = self.ring.index(var)
        return max((e[i] for e in self._terms), default=-1)

    def sorted_terms(self):
        """Terms in descending graded-reverse-lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: _grevlex_key(t[0]), reverse=True)

    def leading_coefficient(self):
        if not self._terms:
            return QQ(0)
        return self.sorted_terms()[0][1]

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        t = dict(self._terms)
        for e, c in other._terms.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = v + c
                if v:
                    t[e] = v
                else:
                    del t[e]
        return Poly(self.ring, t, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {e: -c for e, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = as_rational(other)
            if not c:
                return self.ring.zero()
            return Poly(self.ring, {e: v * c for e, v in self._terms.items()}, _trusted=True)
        other = self._coerce(other)
        t: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e)
                t[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.ring, {e: c for e, c in t.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        return self * c

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self._terms == self.ring.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- misc ---------------------------------------------------------
    def content(self):
        """Positive rational c with self / c having coprime integer coefficients."""
        from math import gcd
        if not self._terms:
            return QQ(1)
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, int(c.numerator))
            d = int(c.denominator)
            den = den * d // gcd(den, d)
        return QQ(num, den)

    def primitive(self) -> "Poly":
        if not self._terms:
            return self
        return self * (1 / self.content())

    def map_exponents(self, ring: Ring, index_map: Sequence[int]) -> "Poly":
        """Re-embed into ``ring``; variable i goes to position index_map[i]."""
        n = ring.nvars
        t = {}
        for e, c in self._terms.items():
            ne = [0] * n
            for i, x in enumerate(e):
                if x:
                    ne[index_map[i]] += x
            t[tuple(ne)] = c
        return Poly(ring, t, _trusted=True)

    def to_ring(self, ring: Ring) -> "Poly":
        """Move to a ring containing all variables this polynomial uses."""
        if ring == self.ring:
            return self
        idx = []
        for i, v in enumerate(self.ring.variables):
            if v in ring.variables:
                idx.append(ring.index(v))
            else:
                idx.append(None)
        for e in self._terms:
            for i, x in enumerate(e):
                if x and idx[i] is None:
                    raise ValueError(f"variable {self.ring.variables[i]} not in {ring}")
        safe = [j if j is not None else 0 for j in idx]
        return self.map_exponents(ring, safe)

    def evaluate(self, values: Mapping[str, object]) -> "Poly":
        """Set the named variables to constants; the ring is unchanged."""
        pos = {self.ring.index(v): as_rational(c) for v, c in values.items()}
        t: dict = {}
        for e, c in self._terms.items():
            ne = list(e)
            for i, val in pos.items():
                if ne[i]:
                    c = c * val ** ne[i]
                    ne[i] = 0
            if c:
                key = tuple(ne)
                t[key] = t.get(key, QQ(0)) + c
        return Poly(self.ring, {e: c for e, c in t.items() if c}, _trusted=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if x == 1 else f"{v}^{x}"
                for v, x in zip(self.ring.variables, e) if x
            )
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{_fmt_rational(a)}*{mono}"
            else:
                body = _fmt_rational(a)
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, {self.ring.variables})"


def _fmt_rational(c) -> str:
    if is_integral(c):
        return str(int(c.numerator))
    return f"{int(c.numerator)}/{int(c.denominator)}"


# ----------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("var", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(("op", op, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ring: Ring) -> None:
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        while self.peek()[:2] in (("op", "-"), ("op", "+")):
            if self.take()[1] == "-":
                sign = -sign
        acc = self.product()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            sign = 1 if op == "+" else -1
            while self.peek()[:2] in (("op", "-"), ("op", "+")):
                if self.take()[1] == "-":
                    sign = -sign
            rhs = self.product()
            acc = acc + rhs if sign > 0 else acc - rhs
        return acc

    def product(self) -> Poly:
        acc = self.power()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            if self.peek()[:2] == ("op", "-"):
                self.take()
                acc = acc * -self.power()
            else:
                acc = acc * self.power()
        return acc

    def power(self) -> Poly:
        base = self.atom()
        while self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1]:
                self.fail("exponent must be a natural number", tok)
            base = base ** int(tok[1])
        return base

    def atom(self) -> Poly:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.ring.const(QQ(val))
        if kind == "var":
            if val not in self.ring.variables:
                self.fail(f"unknown variable {val!r}", tok)
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return inner
        if kind == "op" and val == "-":
            return -self.power()
        self.fail("expected a number, variable or '('", tok)


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse ``text`` (grammar: + - * ^, rationals, ring variables, parentheses)."""
    return _Parser(text, ring).parse()


# ----------------------------------------------------------------------
# substitution, derivatives, matrices

def substitute(p: Poly, images: Sequence[Poly]) -> Poly:
    """Replace variable i of ``p``'s ring by ``images[i]`` (a ring homomorphism)."""
    if len(images) != p.ring.nvars:
        raise ValueError(f"need {p.ring.nvars} images, got {len(images)}")
    if not images:
        return p
    target = images[0].ring
    for q in images:
        if q.ring != target:
            raise ValueError("images live in different rings")
    powers: list[dict[int, Poly]] = [{0: target.one(), 1: q} for q in images]

    def power(i: int, k: int) -> Poly:
        cache = powers[i]
        if k not in cache:
            cache[k] = power(i, k // 2) * power(i, k - k // 2)
        return cache[k]

    acc: dict = {}
    for e, c in p.items():
        term = target.const(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        for te, tc in term.items():
            v = acc.get(te)
            acc[te] = tc if v is None else v + tc
    return Poly(target, {e: c for e, c in acc.items() if c}, _trusted=True)


def partial(p: Poly, var: str) -> Poly:
    i = p.ring.index(var)
    t = {}
    for e, c in p.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            t[tuple(ne)] = c * e[i]
    return Poly(p.ring, t, _trusted=True)


class PolyMatrix:
    """Rectangular matrix of polynomials over a single ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Poly]], ring: Ring | None = None,
                 cols: int | None = None) -> None:
        entries = [list(r) for r in entries]
        if ring is None:
            for r in entries:
                for x in r:
                    ring = x.ring
                    break
                if ring is not None:
                    break
        if ring is None:
            raise ValueError("cannot infer ring of an empty matrix")
        widths = {len(r) for r in entries}
        if len(widths) > 1:
            raise ValueError("matrix is not rectangular")
        self.ring = ring
        self.rows = len(entries)
        self.cols = widths.pop() if widths else (cols or 0)
        for r in entries:
            for x in r:
                if x.ring != ring:
                    raise ValueError("matrix entries from different rings")
        self.entries = tuple(tuple(r) for r in entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Poly, ...]:
        return self.entries[i]

    def column(self, j: int) -> list[Poly]:
        return [r[j] for r in self.entries]

    def columns(self) -> list[list[Poly]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([self.column(j) for j in range(self.cols)], self.ring, self.rows)

    def delete_row(self, i: int) -> "PolyMatrix":
        return PolyMatrix([r for k, r in enumerate(self.entries) if k != i], self.ring, self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows], self.ring, len(cols))

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = self.ring.zero()
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.ring, other.cols)

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __repr__(self) -> str:
        return "PolyMatrix(" + str([[str(x) for x in r] for r in self.entries]) + ")"


def jacobian(fs: Sequence[Poly], variables: Sequence[str] | None = None) -> PolyMatrix:
    """Matrix with one row per component and one column per variable."""
    if not fs:
        raise ValueError("empty component list")
    ring = fs[0].ring
    variables = list(variables) if variables is not None else list(ring.variables)
    return PolyMatrix([[partial(f, v) for v in variables] for f in fs], ring, len(variables))


def det(m: PolyMatrix) -> Poly:
    """Exact determinant by fraction-free Bareiss elimination."""
    if m.rows != m.cols:
        raise ValueError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    ring = m.ring
    if n == 0:
        return ring.one()
    if n <= 3:
        return _det_leibniz(m)
    a = [list(r) for r in m.entries]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ring.zero()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = exact_divide(num, prev)
            a[i][k] = ring.zero()
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def _det_leibniz(m: PolyMatrix) -> Poly:
    n = m.rows
    acc = m.ring.zero()
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = m.ring.const(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            x = m.entries[i][j]
            if not x:
                term = None
                break
            term = term * x
        if term is not None:
            acc = acc + term
    return acc


def exact_divide(num: Poly, den: Poly) -> Poly:
    """Return q with num == q * den; raise NotDivisible otherwise."""
    if num.ring != den.ring:
        raise ValueError("ring mismatch in division")
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return num
    ring = num.ring
    # lexicographic leading terms make univariate-style long division exact
    lead_d = max(den._terms)
    cd = den._terms[lead_d]
    rem = dict(num._terms)
    quot: dict = {}
    den_items = list(den._terms.items())
    while rem:
        lead_r = max(rem)
        q_e = tuple(a - b for a, b in zip(lead_r, lead_d))
        if any(x < 0 for x in q_e):
            raise NotDivisible(f"{num} is not divisible by {den}")
        q_c = rem[lead_r] / cd
        quot[q_e] = q_c
        for e, c in den_items:
            k = tuple(a + b for a, b in zip(e, q_e))
            v = rem.get(k, QQ(0)) - q_c * c
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return Poly(ring, quot, _trusted=True)


def ring_union(*rings: Ring) -> Ring:
    names: list[str] = []
    for r in rings:
        for v in r.variables:
            if v not in names:
                names.append(v)
    return Ring(tuple(names))


def polys_in(ring: Ring, polys: Iterable[Poly]) -> list[Poly]:
    return [p.to_ring(ring) for p in polys]
