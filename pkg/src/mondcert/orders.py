"""Monomial orders and the packed-integer monomial encoding.

A monomial ``x^a e_c`` (exponent vector ``a`` in component ``c``) is packed
into one Python int made of fixed-width fields.  The high fields encode the
order, so comparing two keys with ``<`` compares the monomials; every field
is affine in the exponents, so multiplying by a monomial ``m`` is
``key + pack(m) - pack(1)``.  The low fields repeat the plain exponents
(each with a guard bit), which turns divisibility into one subtraction.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

FIELD_BITS = 32
FIELD_MASK = (1 << FIELD_BITS) - 1
HALF = 1 << (FIELD_BITS - 2)
GUARD = 1 << (FIELD_BITS - 1)
MAX_DEGREE = HALF - 1


class ExponentOverflow(OverflowError):
    pass


@dataclass(frozen=True)
class MonomialOrder:
    """Term order descriptor.

    ``kind`` is one of ``lex``, ``grevlex``, ``wglobal``, ``wlocal`` or
    ``block``.  ``wlocal`` is a negative-weighted (local) order: 1 is the
    largest monomial.  ``block`` holds ``(size, order)`` parts covering the
    variables left to right.  ``module`` selects term-over-position
    (``top``) or position-over-term (``pot``) for free modules.
    """

    kind: str
    weights: tuple[int, ...] | None = None
    blocks: tuple[tuple[int, "MonomialOrder"], ...] | None = None
    module: str = "top"

    def __post_init__(self) -> None:
        if self.kind not in ("lex", "grevlex", "wglobal", "wlocal", "block"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.weights is not None:
            w = tuple(int(x) for x in self.weights)
            if any(x <= 0 for x in w):
                raise ValueError("order weights must be strictly positive")
            object.__setattr__(self, "weights", w)
        if self.kind in ("wglobal",) and self.weights is None:
            raise ValueError("weighted order needs weights")
        if self.kind == "block":
            if not self.blocks:
                raise ValueError("block order needs blocks")
            locs = {b[1].is_local for b in self.blocks}
            if len(locs) > 1:
                raise ValueError("mixed local/global block orders are not supported")
        if self.module not in ("top", "pot"):
            raise ValueError("module extension must be 'top' or 'pot'")

    @property
    def is_local(self) -> bool:
        if self.kind == "block":
            return self.blocks[0][1].is_local
        return self.kind == "wlocal"

    @property
    def is_global(self) -> bool:
        return not self.is_local

    def nvars_hint(self) -> int | None:
        if self.kind == "block":
            return sum(b[0] for b in self.blocks)
        return None if self.weights is None else len(self.weights)

    def with_module(self, module: str) -> "MonomialOrder":
        return MonomialOrder(self.kind, self.weights, self.blocks, module)

    def _term_fields(self, start: int, n: int) -> list[tuple[dict[int, int], int, bool]]:
        """Fields ``(coefficients by variable, base, is_degree)`` for vars start..start+n-1."""
        idx = list(range(start, start + n))
        if n == 0:
            return []
        if self.kind == "lex":
            return [({i: 1}, 0, False) for i in idx]
        if self.kind == "block":
            out = []
            pos = start
            for size, sub in self.blocks:
                out.extend(sub._term_fields(pos, size))
                pos += size
            if pos != start + n:
                raise ValueError(f"block sizes cover {pos - start} of {n} variables")
            return out
        w = self.weights or (1,) * n
        if len(w) != n:
            raise ValueError(f"order has {len(w)} weights for {n} variables")
        tie = [({i: -1}, HALF, False) for i in reversed(idx[1:])]
        if self.kind in ("grevlex", "wglobal"):
            return [({i: wi for i, wi in zip(idx, w)}, 0, True)] + tie
        return [({i: -wi for i, wi in zip(idx, w)}, HALF, True)] + tie


def lex() -> MonomialOrder:
    return MonomialOrder("lex")


def grevlex() -> MonomialOrder:
    return MonomialOrder("grevlex")


def weighted(weights: Sequence[int]) -> MonomialOrder:
    return MonomialOrder("wglobal", tuple(weights))


def local(weights: Sequence[int] | None = None) -> MonomialOrder:
    """Negative (weighted) degree reverse lexicographic local order."""
    return MonomialOrder("wlocal", None if weights is None else tuple(weights))


def block(*parts: tuple[int, MonomialOrder]) -> MonomialOrder:
    return MonomialOrder("block", blocks=tuple(parts))


def elimination(n_kill: int, n_keep: int, keep_order: MonomialOrder | None = None) -> MonomialOrder:
    """Block order with the first ``n_kill`` variables much larger than the rest."""
    parts = []
    if n_kill:
        parts.append((n_kill, grevlex()))
    if n_keep:
        parts.append((n_keep, keep_order or grevlex()))
    return block(*parts)


class Packer:
    """Packs (exponents, component) into order-compatible ints for one setting."""

    def __init__(self, order: MonomialOrder, nvars: int, ncomps: int = 1,
                 comp_blocks: Sequence[int] | None = None,
                 shifts: Sequence[int] | None = None) -> None:
        self.order = order
        self.nvars = nvars
        self.ncomps = ncomps
        self.local = order.is_local
        self.comp_blocks = tuple(comp_blocks) if comp_blocks is not None else (0,) * ncomps
        if len(self.comp_blocks) != ncomps:
            raise ValueError("comp_blocks must have one entry per component")
        self.shifts = tuple(int(s) for s in shifts) if shifts is not None else (0,) * ncomps
        if len(self.shifts) != ncomps:
            raise ValueError("shifts must have one entry per component")
        nblocks = max(self.comp_blocks) + 1 if ncomps else 1
        self.nblocks = nblocks

        term = order._term_fields(0, nvars)
        # field spec: (kind, payload); kinds: blk, term, comp, plain, pcomp, pcompneg
        fields: list[tuple[str, object]] = []
        if nblocks > 1:
            fields.append(("blk", None))
        term_specs = [("term", t) for t in term]
        comp_spec = [("comp", None)] if ncomps > 1 else []
        if order.module == "pot":
            fields += comp_spec + term_specs
        else:
            fields += term_specs + comp_spec
        plain = [("plain", i) for i in range(nvars)]
        if ncomps > 1:
            plain += [("pcomp", None), ("pcompneg", None)]
        fields += plain
        nf = len(fields)
        self.fields = fields
        self.nfields = nf
        self.pos = [(nf - 1 - k) * FIELD_BITS for k in range(nf)]
        self.nplain = len(plain)
        self.plain_mask = (1 << (self.nplain * FIELD_BITS)) - 1
        self.guards = sum(GUARD << (k * FIELD_BITS) for k in range(self.nplain))
        # position of e_i's plain field
        self.plain_pos = {}
        for k, (kind, payload) in enumerate(fields):
            if kind == "plain":
                self.plain_pos[payload] = self.pos[k]
        self.deg_index = None
        for k, (kind, payload) in enumerate(fields):
            if kind == "term" and payload[2]:
                self.deg_index = k
                break
        self.deg_pos = None if self.deg_index is None else self.pos[self.deg_index]
        self.deg_sign = None
        self.deg_weights = None
        if self.deg_index is not None:
            coefs, base, _ = fields[self.deg_index][1]
            self.deg_sign = -1 if base == HALF else 1
            self.deg_weights = tuple(abs(coefs.get(i, 0)) for i in range(nvars))
        # the degree field is the most significant varying field for TOP single-block layouts
        self.deg_top = (self.deg_index is not None and self.deg_index == 0)
        self.one = self.pack_mult((0,) * nvars)
        self.comp_keys = [self.pack((0,) * nvars, c) for c in range(ncomps)]
        self._unpack_cache: dict[int, tuple[int, tuple[int, ...]]] = {}

    # -- packing ------------------------------------------------------
    def _field_value(self, kind, payload, exps, comp):
        if kind == "blk":
            return 0 if comp is None else self.nblocks - 1 - self.comp_blocks[comp]
        if kind == "term":
            coefs, base, is_deg = payload
            v = base
            for i, c in coefs.items():
                v += c * exps[i]
            if is_deg and comp is not None and self.deg_index is not None and \
                    payload is self.fields[self.deg_index][1]:
                v += (1 if base == 0 else -1) * self.shifts[comp]
            return v
        if kind == "comp":
            return 0 if comp is None else self.ncomps - 1 - comp
        if kind == "plain":
            return exps[payload]
        if kind == "pcomp":
            return 0 if comp is None else comp
        if kind == "pcompneg":
            return 0 if comp is None else self.ncomps - 1 - comp
        raise AssertionError(kind)

    def _pack(self, exps, comp) -> int:
        key = 0
        for (kind, payload), p in zip(self.fields, self.pos):
            v = self._field_value(kind, payload, exps, comp)
            if v < 0 or v >= GUARD:
                raise ExponentOverflow(f"monomial {tuple(exps)} exceeds the packed exponent range")
            key |= v << p
        return key

    def pack(self, exps: Sequence[int], comp: int = 0) -> int:
        """Key of the module term ``x^exps * e_comp``."""
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        if any(e > MAX_DEGREE for e in exps):
            raise ExponentOverflow(f"exponent {tuple(exps)} too large")
        return self._pack(exps, comp)

    def pack_mult(self, exps: Sequence[int]) -> int:
        """Key of a ring monomial used as a multiplier (no component)."""
        return self._pack(exps, None)

    def unpack(self, key: int) -> tuple[int, tuple[int, ...]]:
        r = self._unpack_cache.get(key)
        if r is not None:
            return r
        exps = tuple((key >> self.plain_pos[i]) & FIELD_MASK for i in range(self.nvars))
        if self.ncomps > 1:
            comp = (key >> self.pos[self.nfields - 2]) & FIELD_MASK
        else:
            comp = 0
        r = (comp, exps)
        if len(self._unpack_cache) < 500000:
            self._unpack_cache[key] = r
        return r

    def exps(self, key: int) -> tuple[int, ...]:
        return self.unpack(key)[1]

    def comp(self, key: int) -> int:
        if self.ncomps == 1:
            return 0
        return (key >> self.pos[self.nfields - 2]) & FIELD_MASK

    # -- arithmetic on keys --------------------------------------------
    def divides(self, a: int, b: int) -> bool:
        pm = self.plain_mask
        return (((b & pm) | self.guards) - (a & pm)) & self.guards == self.guards

    def lcm(self, a: int, b: int) -> int | None:
        ca, ea = self.unpack(a)
        cb, eb = self.unpack(b)
        if ca != cb:
            return None
        return self._pack(tuple(max(x, y) for x, y in zip(ea, eb)), ca)

    def coprime(self, a: int, b: int) -> bool:
        ea = self.unpack(a)[1]
        eb = self.unpack(b)[1]
        return all(not (x and y) for x, y in zip(ea, eb))

    def degree(self, key: int) -> int:
        """Weighted degree (including the component shift) if the order has one."""
        if self.deg_pos is None:
            return self.tdeg(key)
        v = (key >> self.deg_pos) & FIELD_MASK
        return HALF - v if self.deg_sign < 0 else v

    def tdeg(self, key: int) -> int:
        return sum(self.unpack(key)[1])

    def is_constant(self, key: int) -> bool:
        return not any(self.unpack(key)[1])


@lru_cache(maxsize=256)
def get_packer(order: MonomialOrder, nvars: int, ncomps: int = 1,
               comp_blocks: tuple[int, ...] | None = None,
               shifts: tuple[int, ...] | None = None) -> Packer:
    return Packer(order, nvars, ncomps, comp_blocks, shifts)
