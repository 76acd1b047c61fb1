"""Standard bases of ideals and submodules of free modules.

Global orders use Buchberger's algorithm with the Gebauer-Moeller
criteria and the sugar strategy; local orders use Mora's tangent-cone
normal form, so the same code computes in the polynomial ring and in its
localization at the origin.  Vectors are dicts ``{packed key: coeff}``
during the computation; see :mod:`mondcert.orders` for the encoding.

Over Q the engine is fraction-free: basis elements are primitive integer
vectors, a reduction step cross-multiplies, and contents are divided out
every few steps.  Monic rational elements make denominators explode in
Mora's normal form, which appends intermediate results as new reducers.
"""
from __future__ import annotations

import heapq
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Sequence

from .coeffs import QQ, QQ_FIELD, PrimeField
from .errors import ResourceLimitExceeded
from .kernels import axpy, axpy_mod, find_divisor, find_divisors

try:
    from gmpy2 import gcd as _gcd, mpz as _ZZ
except ImportError:  # pragma: no cover
    from math import gcd as _gcd
    _ZZ = int

CONTENT_EVERY = 8
from .orders import MonomialOrder, Packer, get_packer, grevlex, local, weighted
from .poly import Poly, Ring

INFINITE = math.inf

Vector = tuple  # tuple[Poly, ...]


@dataclass(frozen=True)
class Limits:
    pair_degree_cap: int = 40
    max_pairs: int = 2_000_000
    max_basis: int = 20_000
    deadline: float | None = None  # time.monotonic() value


LIMITS = Limits()


@contextmanager
def limits(**kw):
    """Temporarily override engine limits; ``seconds=`` sets a deadline."""
    global LIMITS
    old = LIMITS
    secs = kw.pop("seconds", None)
    new = replace(old, **kw)
    if secs is not None:
        dl = time.monotonic() + secs
        if new.deadline is not None:
            dl = min(dl, new.deadline)
        new = replace(new, deadline=dl)
    LIMITS = new
    clear_cache()
    try:
        yield new
    finally:
        LIMITS = old
        clear_cache()


# ----------------------------------------------------------------------
# engine

class _Elt:
    __slots__ = ("lm", "lc", "items", "ecart", "sugar")

    def __init__(self, lm, items, ecart, sugar, lc=1):
        self.lm = lm
        self.lc = lc
        self.items = items
        self.ecart = ecart
        self.sugar = sugar


def _primitive_inplace(h: dict):
    """Scale h to coprime integers in place; returns the factor applied."""
    den = 1
    num = 0
    for v in h.values():
        d = v.denominator
        if d != 1:
            den = den * d // _gcd(den, d)
    for v in h.values():
        num = _gcd(num, v.numerator * (den // v.denominator))
    if not num:
        return QQ(1)
    for k, v in h.items():
        h[k] = _ZZ(v.numerator * (den // v.denominator) // num)
    return QQ(den, num)


class _Engine:
    def __init__(self, packer: Packer, field, cut: int | None = None,
                 budget: float | None = None) -> None:
        self.P = packer
        # optional time allowance in seconds (speculative runs)
        self.budget = budget
        self.work = 0
        # fraction-free mode over Q; ``scale`` records the factor picked up by
        # the last normal form (result = scale * true remainder)
        self.ff = field.modulus is None
        self.scale = QQ(1)
        self.nsteps = 0
        self._stop = None if budget is None else time.monotonic() + budget
        dl = LIMITS.deadline
        self._deadline_only = budget is None or (dl is not None and dl < self._stop)
        if dl is not None:
            self._stop = dl if self._stop is None else min(dl, self._stop)
        self.field = field
        self.mod = field.modulus
        self.local = packer.local
        self.pm = packer.plain_mask
        self.guards = packer.guards
        # highest-corner truncation (local orders): every term below self.hc
        # lies in the module, so it may be discarded
        self.hc = None
        last = max(packer.comp_blocks) if packer.ncomps else 0
        self.last_comps = [c for c in range(packer.ncomps) if packer.comp_blocks[c] == last]
        self._last_lead: dict[int, list[tuple[int, ...]]] = {c: [] for c in self.last_comps}
        self._pure: dict[int, set[int]] = {c: set() for c in self.last_comps}
        # optional degree cut: last-block terms of degree >= cut are treated as zero,
        # i.e. the computation is modulo m^cut (weighted) in those components
        if cut is not None and (packer.deg_weights is None or not self.local):
            raise ValueError("degree cut needs a local degree order")
        self.cut = cut
        self._blk_shift = packer.pos[0] if packer.nblocks > 1 else None

    def step(self, h, e: _Elt, m, rem=None):
        """Cancel the term m of h with the element e (shifted)."""
        if self._stop is not None:
            self.work += 1
            if not self.work & 127 and time.monotonic() > self._stop:
                if self._deadline_only:
                    raise ResourceLimitExceeded("time", "deadline")
                raise ResourceLimitExceeded("speculative time", self.budget)
        shift = m - e.lm
        if not self.ff:
            axpy_mod(h, e.items, shift, h[m], self.mod)
            return
        b = h[m]
        a = e.lc
        if a != 1:
            g = _gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                for k in h:
                    h[k] *= a
                if rem:
                    for k in rem:
                        rem[k] *= a
                self.scale *= a
        axpy(h, e.items, shift, b)
        self.nsteps += 1
        if not self.nsteps % CONTENT_EVERY:
            self._drop_content(h, rem)

    def _drop_content(self, h, rem=None):
        g = 0
        for v in h.values():
            g = _gcd(g, v)
            if g == 1:
                return
        if rem:
            for v in rem.values():
                g = _gcd(g, v)
                if g == 1:
                    return
        if g > 1:
            for k in h:
                h[k] //= g
            if rem:
                for k in rem:
                    rem[k] //= g
            self.scale /= g

    def start(self, h):
        """Prepare h for a normal form computation (integer coefficients)."""
        self.nsteps = 0
        self.scale = _primitive_inplace(h) if (self.ff and h) else QQ(1)

    def maxdeg(self, h) -> int:
        P = self.P
        if P.deg_top:
            return P.degree(min(h) if self.local else max(h))
        return max(P.degree(k) for k in h)

    def sugar_of(self, h) -> int:
        P = self.P
        return max(P.tdeg(k) for k in h)

    def is_cut(self, k) -> bool:
        if self.cut is None:
            return False
        if self._blk_shift is not None and k >> self._blk_shift:
            return False
        return self.P.degree(k) >= self.cut

    def bound_for(self, comp: int):
        return None if self.cut is None else self.cut - self.P.shifts[comp]

    def truncate(self, h):
        hc = self.hc
        if hc is not None:
            h = {k: v for k, v in h.items() if k >= hc}
        if self.cut is not None:
            h = {k: v for k, v in h.items() if not self.is_cut(k)}
        return h

    def make(self, h, sugar=None) -> _Elt:
        h = self.truncate(h)
        lm = max(h)
        lc = h[lm]
        if self.ff:
            h = dict(h)
            _primitive_inplace(h)
            if h[lm] < 0:
                h = {k: -v for k, v in h.items()}
            lc = h[lm]
        elif lc != 1:
            p = self.mod
            inv = self.field.inv(lc)
            h = {k: v * inv % p for k, v in h.items()}
            lc = 1
        ecart = self.maxdeg(h) - self.P.degree(lm) if self.local else 0
        if sugar is None:
            sugar = self.sugar_of(h)
        return _Elt(lm, list(h.items()), ecart, sugar, lc)

    def note_lead(self, lm) -> bool:
        """Record a new lead monomial; returns True when the corner moved."""
        if not self.local:
            return False
        P = self.P
        c, e = P.unpack(lm)
        if c not in self._last_lead:
            return False
        self._last_lead[c].append(e)
        nz = [i for i, x in enumerate(e) if x]
        if len(nz) == 1:
            self._pure[c].add(nz[0])
        elif not nz:
            self._pure[c].update(range(P.nvars))
        n = P.nvars
        if self.cut is None and any(len(self._pure[c2]) < n for c2 in self.last_comps):
            return False
        best = None
        for c2 in self.last_comps:
            ms = enumerate_standard(self._last_lead[c2], n, P.deg_weights, self.bound_for(c2))
            for m in ms:
                k = P.pack(m, c2)
                if best is None or k < best:
                    best = k
        if best is None:
            # no standard monomials at all in the last block: everything there is in the module
            best = P.pack((0,) * n, self.last_comps[0])
            for c2 in self.last_comps:
                best = max(best, P.pack((0,) * n, c2))
            best += 1
        if self.hc is None or best > self.hc:
            self.hc = best
            return True
        return False

    # -- normal forms -------------------------------------------------
    def top_reduce(self, h, elts, lms):
        """Global: reduce until the lead term is irreducible."""
        pm, guards = self.pm, self.guards
        self.start(h)
        while h:
            m = max(h)
            if self.cut is not None and self.is_cut(m):
                del h[m]
                continue
            i = find_divisor(lms, m, pm, guards)
            if i < 0:
                return h
            self.step(h, elts[i], m)
        return h

    def full_reduce(self, h, elts, lms):
        """Full reduction of all terms (global orders, or local below a corner)."""
        pm, guards = self.pm, self.guards
        hc = self.hc
        rem = {}
        self.start(h)
        while h:
            m = max(h)
            if hc is not None and m < hc:
                break
            if self.cut is not None and self.is_cut(m):
                del h[m]
                continue
            i = find_divisor(lms, m, pm, guards)
            if i < 0:
                rem[m] = h.pop(m)
                continue
            self.step(h, elts[i], m, rem)
        return rem

    def mora_reduce(self, h, elts, lms):
        """Local: Mora's normal form (lead term reduction with ecart control)."""
        pm, guards = self.pm, self.guards
        T = list(elts)
        Tl = list(lms)
        P = self.P
        hc = self.hc
        self.start(h)
        while h:
            m = max(h)
            if hc is not None and m < hc:
                return {}
            if self.cut is not None and self.is_cut(m):
                del h[m]
                continue
            idx = find_divisors(Tl, m, pm, guards)
            if not idx:
                return h
            best = idx[0]
            be = T[best].ecart
            if be:
                for i in idx:
                    if T[i].ecart < be:
                        best, be = i, T[i].ecart
                        if not be:
                            break
            t = T[best]
            if be and be > self.maxdeg(h) - P.degree(m):
                T.append(self.make(dict(h), 0))
                Tl.append(m)
            self.step(h, t, m)
        return h

    # -- main loop ----------------------------------------------------
    def spoly(self, a: _Elt, b: _Elt, L: int):
        sa = L - a.lm
        if self.ff and (a.lc != 1 or b.lc != 1):
            g = _gcd(a.lc, b.lc)
            ca, cb = b.lc // g, a.lc // g
            h = {k + sa: v * ca for k, v in a.items}
            axpy(h, b.items, L - b.lm, cb)
            return h
        h = {k + sa: v for k, v in a.items}
        if self.ff:
            axpy(h, b.items, L - b.lm, 1)
        else:
            axpy_mod(h, b.items, L - b.lm, 1, self.mod)
        return h

    def run(self, gens: list[dict]) -> list[_Elt]:
        P = self.P
        lim = LIMITS
        loc = self.local
        use_prod = P.ncomps == 1
        basis: list[_Elt] = []
        lms: list[int] = []
        active: list[bool] = []
        red_elts: list[_Elt] = []   # reducers
        red_lms: list[int] = []
        pairs: list = []
        counter = 0
        processed = 0

        def prio(i, j, L):
            if loc:
                return P.degree(L) + max(basis[i].ecart, basis[j].ecart), P.degree(L)
            a, b = basis[i], basis[j]
            tl = P.tdeg(L)
            return max(a.sugar + tl - P.tdeg(a.lm), b.sugar + tl - P.tdeg(b.lm)), L

        def refresh_reducers():
            nonlocal red_elts, red_lms
            red_elts = [basis[k] for k in range(len(basis)) if active[k]]
            red_lms = [x.lm for x in red_elts]

        def apply_corner():
            # drop terms below the corner everywhere; elements living there die
            nonlocal pairs
            hc = self.hc
            for k, e in enumerate(basis):
                if not active[k]:
                    continue
                if e.lm < hc:
                    active[k] = False
                    continue
                if e.items and min(kv[0] for kv in e.items) < hc:
                    e.items = [kv for kv in e.items if kv[0] >= hc]
                    e.ecart = self.maxdeg(dict(e.items)) - P.degree(e.lm)
            pairs = [p for p in pairs if active[p[-3]] and active[p[-2]] and p[-1] >= hc]
            heapq.heapify(pairs)

        def add(e: _Elt):
            nonlocal pairs, counter
            t = len(basis)
            h = e.lm
            basis.append(e)
            lms.append(h)
            active.append(True)
            cand = []
            for j in range(t):
                if not active[j]:
                    continue
                L = P.lcm(lms[j], h)
                if L is not None:
                    cand.append((j, L))
            keep = []
            n = len(cand)
            for a in range(n):
                j, L = cand[a]
                dominated = False
                for b in range(n):
                    if b == a:
                        continue
                    L2 = cand[b][1]
                    if L2 == L:
                        if b < a:
                            dominated = True
                            break
                    elif P.divides(L2, L):
                        dominated = True
                        break
                if not dominated:
                    if use_prod:
                        # a coprime pair with the same lcm makes the group redundant
                        grp = [cand[b][0] for b in range(n) if cand[b][1] == L]
                        if any(P.coprime(lms[g], h) for g in grp):
                            continue
                    keep.append((j, L))
            # chain criterion on the old pairs
            if pairs:
                newp = []
                for item in pairs:
                    i, j, L = item[-3], item[-2], item[-1]
                    if P.divides(h, L):
                        Li = P.lcm(lms[i], h)
                        Lj = P.lcm(lms[j], h)
                        if Li != L and Lj != L:
                            continue
                    newp.append(item)
                if len(newp) != len(pairs):
                    heapq.heapify(newp)
                    pairs = newp
            for j, L in keep:
                if self.hc is not None and L < self.hc:
                    continue
                if P.tdeg(L) > lim.pair_degree_cap:
                    raise ResourceLimitExceeded("pair degree", lim.pair_degree_cap)
                counter += 1
                heapq.heappush(pairs, (prio(j, t, L), counter, j, t, L))
            if not loc:
                for j in range(t):
                    if active[j] and P.divides(h, lms[j]):
                        active[j] = False
            if self.note_lead(h):
                apply_corner()
            refresh_reducers()
            if len(basis) > lim.max_basis:
                raise ResourceLimitExceeded("standard basis size", lim.max_basis)

        def reduce(h):
            if loc:
                return self.mora_reduce(h, red_elts, red_lms)
            return self.top_reduce(h, red_elts, red_lms)

        order = sorted((g for g in gens if g), key=lambda g: (self.sugar_of(g), max(g)))
        for g in order:
            s = self.sugar_of(g)
            r = self.truncate(reduce(dict(g)))
            if r:
                add(self.make(r, s))
        while pairs:
            processed += 1
            if processed > lim.max_pairs:
                raise ResourceLimitExceeded("critical pairs", lim.max_pairs)
            if lim.deadline is not None and (processed & 63) == 0 and time.monotonic() > lim.deadline:
                raise ResourceLimitExceeded("time", "deadline")
            (sug, _), _, i, j, L = heapq.heappop(pairs)
            h = self.spoly(basis[i], basis[j], L)
            if not h:
                continue
            r = self.truncate(reduce(h))
            if r:
                add(self.make(r, sug if not loc else None))
        keep = [basis[k] for k in range(len(basis)) if active[k]]
        if loc:
            return _minimalize(keep, P)
        return self.interreduce(keep)

    def interreduce(self, elts: list[_Elt]) -> list[_Elt]:
        out = []
        for k, e in enumerate(elts):
            others = elts[:k] + elts[k + 1:]
            ol = [o.lm for o in others]
            tail = dict(e.items)
            lc = tail.pop(e.lm)
            rem = self.full_reduce(tail, others, ol)
            rem[e.lm] = lc * self.scale if self.ff else lc
            out.append(self.make(rem, e.sugar))
        out.sort(key=lambda e: e.lm)
        return out


def _minimalize(elts: list[_Elt], P: Packer) -> list[_Elt]:
    """Drop elements whose lead monomial is divisible by another one's."""
    elts = sorted(elts, key=lambda e: (e.ecart, len(e.items)))
    out: list[_Elt] = []
    for e in elts:
        if any(P.divides(o.lm, e.lm) for o in out):
            continue
        out = [o for o in out if not P.divides(e.lm, o.lm)]
        out.append(e)
    out.sort(key=lambda e: e.lm)
    return out


# ----------------------------------------------------------------------
# conversion between Poly vectors and packed dicts

def _as_vector(g) -> tuple:
    if isinstance(g, Poly):
        return (g,)
    return tuple(g)


def to_dict(vec: Sequence[Poly], P: Packer, field=QQ_FIELD) -> dict:
    out = {}
    conv = field.convert if field.modulus is not None else None
    for c, p in enumerate(vec):
        for e, v in p.items():
            if conv is not None:
                v = conv(v)
                if not v:
                    continue
            out[P.pack(e, c)] = v
    return out


def from_dict(d: dict, P: Packer, ring: Ring) -> tuple:
    parts: list[dict] = [dict() for _ in range(P.ncomps)]
    for k, v in d.items():
        c, e = P.unpack(k)
        parts[c][e] = QQ(v)
    return tuple(Poly(ring, t, _trusted=True) for t in parts)


# ----------------------------------------------------------------------
# public objects

class StandardBasis:
    """A standard basis of a submodule of ``ring^rank`` for one order."""

    def __init__(self, ring: Ring, rank: int, order: MonomialOrder, packer: Packer,
                 field, elts: list[_Elt], engine: _Engine | None = None) -> None:
        self.ring = ring
        self.rank = rank
        self.order = order
        self.packer = packer
        self.field = field
        self._elts = elts
        self._lms = [e.lm for e in elts]
        self._engine = engine if engine is not None else _Engine(packer, field)

    def __len__(self) -> int:
        return len(self._elts)

    @property
    def is_local(self) -> bool:
        return self.packer.local

    @property
    def vectors(self) -> list[tuple]:
        return [from_dict(dict(e.items), self.packer, self.ring) for e in self._elts]

    @property
    def polys(self) -> list[Poly]:
        return [v[0] for v in self.vectors]

    def leading(self) -> list[tuple[int, tuple[int, ...]]]:
        """Lead monomials of the stored elements as (component, exponents), aligned with ``vectors``."""
        return [self.packer.unpack(e.lm) for e in self._elts]

    def is_unit_ideal(self) -> bool:
        return self.rank == 1 and any(self.packer.is_constant(l) for l in self._lms)

    def reduce_dict(self, h: dict) -> dict:
        eng = self._engine
        if self.is_local:
            return eng.truncate(eng.mora_reduce(h, self._elts, self._lms))
        return eng.full_reduce(h, self._elts, self._lms)

    def normal_form(self, g) -> tuple:
        h = self.reduce_dict(to_dict(_as_vector(g), self.packer, self.field))
        eng = self._engine
        if eng.ff and h and eng.scale != 1:
            inv = 1 / eng.scale
            h = {k: v * inv for k, v in h.items()}
        return from_dict(h, self.packer, self.ring)

    def contains(self, g) -> bool:
        v = _as_vector(g)
        if len(v) != self.rank:
            raise ValueError("vector has wrong rank")
        h = to_dict(v, self.packer, self.field)
        if not h:
            return True
        return not self.reduce_dict(h)

    def contains_all(self, gens: Iterable) -> bool:
        return all(self.contains(g) for g in gens)

    def _lead_sets(self):
        lead = _lead_by_comp(self.leading(), self.rank)
        # lead monomials of elements discarded below the corner still count
        for c, extra in self._engine._last_lead.items():
            lead[c] = lead[c] + extra
        return lead

    def lead_monomials(self) -> list[tuple[int, tuple[int, ...]]]:
        """Every lead monomial, including those of elements dropped below the highest corner."""
        return [(c, e) for c, es in enumerate(self._lead_sets()) for e in es]

    def quotient_dim(self, comps: Sequence[int] | None = None):
        """dim_k of the quotient (free module / submodule), or ``INFINITE``.

        ``comps`` restricts the count to some components; with a block order
        whose last block holds them this is the dimension of the quotient of
        that block by the projected submodule.
        """
        lead = self._lead_sets()
        total = 0
        eng = self._engine
        for c in (range(self.rank) if comps is None else comps):
            d = count_standard(lead[c], self.ring.nvars, self.packer.deg_weights,
                               eng.bound_for(c) if c in eng._last_lead else None)
            if d == INFINITE:
                return INFINITE
            total += d
        return total

    def standard_monomials(self) -> list[tuple[int, tuple[int, ...]]]:
        lead = self._lead_sets()
        out = []
        for c in range(self.rank):
            eng = self._engine
            ms = enumerate_standard(lead[c], self.ring.nvars, self.packer.deg_weights,
                                    eng.bound_for(c) if c in eng._last_lead else None)
            if ms is None:
                raise ValueError("quotient is infinite dimensional")
            out.extend((c, m) for m in ms)
        return out


def _lead_by_comp(lead, rank):
    out: list[list[tuple[int, ...]]] = [[] for _ in range(rank)]
    for c, e in lead:
        out[c].append(e)
    return out


def _minimal_monos(monos: Iterable[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    ms = sorted(set(monos), key=sum)
    out: list[tuple[int, ...]] = []
    for m in ms:
        if not any(all(a <= b for a, b in zip(o, m)) for o in out):
            out.append(m)
    return tuple(sorted(out))


def count_standard(monos: Sequence[tuple[int, ...]], n: int,
                   weights: Sequence[int] | None = None, bound: int | None = None):
    """Number of monomials outside the monomial ideal, or INFINITE.

    With ``bound``, only monomials of weighted degree below it are counted.
    """
    w = tuple(weights) if weights is not None else (1,) * n
    return _count(_minimal_monos(monos), n, w, bound)


@lru_cache(maxsize=200_000)
def _count(monos, n, w, bound):
    if bound is not None and bound <= 0:
        return 0
    if n == 0:
        return 0 if monos else 1
    if any(not any(m) for m in monos):
        return 0
    top = None
    for m in monos:
        if all(x == 0 for x in m[:-1]):
            top = m[-1] if top is None else min(top, m[-1])
    if bound is not None:
        b = -(-bound // w[-1])
        top = b if top is None else min(top, b)
    if top is None:
        return INFINITE
    total = 0
    for k in range(top):
        sub = _minimal_monos(m[:-1] for m in monos if m[-1] <= k)
        c = _count(sub, n - 1, w[:-1], None if bound is None else bound - k * w[-1])
        if c == INFINITE:
            return INFINITE
        total += c
    return total


def enumerate_standard(monos: Sequence[tuple[int, ...]], n: int,
                       weights: Sequence[int] | None = None, bound: int | None = None):
    """The standard monomials as exponent tuples, or None when infinitely many."""
    monos = _minimal_monos(monos)
    w = tuple(weights) if weights is not None else (1,) * n
    if count_standard(monos, n, w, bound) == INFINITE:
        return None
    out: list[tuple[int, ...]] = []

    def divisible(e):
        return any(all(a <= b for a, b in zip(m, e)) for m in monos)

    def rec(prefix: list[int], i: int, left):
        if i == n:
            e = tuple(prefix)
            if not divisible(e):
                out.append(e)
            return
        k = 0
        while left is None or k * w[i] < left:
            if divisible(tuple(prefix + [k] + [0] * (n - i - 1))):
                break
            rec(prefix + [k], i + 1, None if left is None else left - k * w[i])
            k += 1

    rec([], 0, bound)
    return out


_SB_CACHE: dict = {}
_SB_CACHE_MAX = 512


def clear_cache() -> None:
    _SB_CACHE.clear()


def standard_basis(gens: Sequence, order: MonomialOrder | None = None, *,
                   ring: Ring | None = None, rank: int | None = None,
                   shifts: Sequence[int] | None = None,
                   comp_blocks: Sequence[int] | None = None,
                   field=QQ_FIELD, cut: int | None = None,
                   budget: float | None = None) -> StandardBasis:
    """Standard basis of the submodule generated by ``gens``.

    ``gens`` are polynomials (an ideal) or equal-length tuples of
    polynomials (a submodule of a free module).  The default order is the
    local degree order, so results describe the localization at 0.
    """
    vecs = [_as_vector(g) for g in gens]
    if ring is None:
        for v in vecs:
            if v:
                ring = v[0].ring
                break
    if ring is None:
        raise ValueError("cannot infer the ring from no generators")
    if rank is None:
        rank = len(vecs[0]) if vecs else 1
    for v in vecs:
        if len(v) != rank:
            raise ValueError("generators have different ranks")
        for p in v:
            if p.ring != ring:
                raise ValueError("generators live in different rings")
    if order is None:
        order = local()
    sh = tuple(shifts) if shifts is not None else None
    cb = tuple(comp_blocks) if comp_blocks is not None else None
    key = (tuple(vecs), order, ring, rank, sh, cb, repr(field), cut)
    hit = _SB_CACHE.get(key)
    if hit is not None:
        return hit
    P = get_packer(order, ring.nvars, rank, cb, sh)
    eng = _Engine(P, field, cut, budget)
    dicts = [to_dict(v, P, field) for v in vecs]
    elts = eng.run(dicts)
    eng.budget = None
    eng._stop = None
    sb = StandardBasis(ring, rank, order, P, field, elts, eng)
    if len(_SB_CACHE) >= _SB_CACHE_MAX:
        _SB_CACHE.clear()
    _SB_CACHE[key] = sb
    return sb


def default_local(ring: Ring) -> MonomialOrder:
    """Local order matching the ring's weights (plain ds when unweighted)."""
    return local(ring.weights) if ring.weights is not None else local()


# ----------------------------------------------------------------------
# derived operations (ideals)

def quotient_dim(gens: Sequence, ring: Ring | None = None, order: MonomialOrder | None = None,
                 rank: int | None = None, shifts=None, field=QQ_FIELD):
    """dim_k of O^rank / <gens> in the localization (or for a global order)."""
    if not gens:
        return INFINITE
    sb = standard_basis(gens, order, ring=ring, rank=rank, shifts=shifts, field=field)
    return sb.quotient_dim()


def contains(gens: Sequence, g, order: MonomialOrder | None = None, ring: Ring | None = None):
    """Membership in the module generated by ``gens`` (local by default)."""
    if not gens:
        return all(p.is_zero() for p in _as_vector(g))
    return local_contains(gens, g, order or local(), ring=ring)


def is_subset(a: Sequence, b: Sequence, order: MonomialOrder | None = None,
              ring: Ring | None = None) -> bool:
    """Whether the submodule generated by ``a`` lies in the one generated by ``b``."""
    if not b:
        return all(all(p.is_zero() for p in _as_vector(g)) for g in a)
    return all(local_contains(b, g, order or local(), ring=ring) for g in a)


def same_module(a: Sequence, b: Sequence, order: MonomialOrder | None = None,
                ring: Ring | None = None) -> bool:
    return is_subset(a, b, order, ring) and is_subset(b, a, order, ring)


def order_weights(order: MonomialOrder, nvars: int) -> tuple[int, ...]:
    return tuple(order.weights) if order.weights is not None else (1,) * nvars


def vector_degree(vec: Sequence[Poly], weights: Sequence[int], shifts: Sequence[int] | None = None) -> int:
    """Lowest weighted degree (plus component shift) among the terms of a vector."""
    best = None
    for c, p in enumerate(vec):
        sh = shifts[c] if shifts is not None else 0
        for e in p.terms:
            d = sum(a * b for a, b in zip(e, weights)) + sh
            if best is None or d < best:
                best = d
    return 0 if best is None else best


def _augment(vecs: list[tuple], extra: list[tuple], ring: Ring, order: MonomialOrder,
             shifts: Sequence[int] | None):
    """Vectors (v_i, e_i) and (w_l, 0) with shifts making homogeneous input homogeneous."""
    s = len(vecs[0]) if vecs else len(extra[0])
    m = len(vecs)
    w = order_weights(order, ring.nvars)
    base = tuple(shifts) if shifts is not None else (0,) * s
    new_shifts = tuple(vector_degree(v, w, base) for v in vecs)
    lo = min(new_shifts + base) if (new_shifts + base) else 0
    all_shifts = tuple(x - lo for x in base + new_shifts)
    zero, one = ring.zero(), ring.one()
    aug = [tuple(v) + tuple(one if k == i else zero for k in range(m)) for i, v in enumerate(vecs)]
    aug += [tuple(v) + (zero,) * m for v in extra]
    return aug, s, m, all_shifts


def global_twin(order: MonomialOrder) -> MonomialOrder:
    """A global order with the same degree weights as ``order``."""
    if order.is_global:
        return order
    return weighted(order.weights) if order.weights is not None else grevlex()


def _relation_basis(aug: list[tuple], s: int, m: int, ring: Ring, order: MonomialOrder,
                    shifts, field, budget: float | None = None) -> list[tuple]:
    """Block-1 parts of a Groebner basis of the augmented vectors.

    The basis is computed for the global twin of the order: relation modules
    localize (localization is flat), global computations avoid the
    power-series coefficient growth of Mora's normal form, and no corner
    truncation can cut generators short.
    """
    cb = (0,) * s + (1,) * m
    sb = standard_basis(aug, global_twin(order), ring=ring, rank=s + m, shifts=shifts,
                        comp_blocks=cb, field=field, budget=budget)
    return [tuple(vec[s:]) for (c, _), vec in zip(sb.leading(), sb.vectors) if c >= s]


def syzygies(vecs: Sequence, order: MonomialOrder | None = None, *,
             ring: Ring | None = None, shifts: Sequence[int] | None = None,
             field=QQ_FIELD, budget: float | None = None) -> list[tuple]:
    """Generators of the module of relations among ``vecs`` (tuples of length s).

    Computed by a standard basis of the augmented vectors (v_i, e_i) under
    an order ranking the original components above the new ones.  The
    generators are polynomial; over the local ring they generate the local
    syzygy module.
    """
    vs = [_as_vector(v) for v in vecs]
    if not vs:
        return []
    if ring is None:
        ring = vs[0][0].ring
    order = order or default_local(ring)
    aug, s, m, sh = _augment(vs, [], ring, order, shifts)
    return _relation_basis(aug, s, m, ring, order, sh, field, budget)


def local_contains(gens: Sequence, v, order: MonomialOrder | None = None, *,
                   ring: Ring | None = None, field=QQ_FIELD) -> bool:
    """Whether v lies in the submodule generated by ``gens`` over the local ring.

    v is in it exactly when some u with u(0) != 0 has u*v in the polynomial
    module, i.e. when the colon ideal (gens : v), read off the first
    coordinates of the syzygies of (v, gens), has a generator that does not
    vanish at the origin.
    """
    vv = _as_vector(v)
    if all(p.is_zero() for p in vv):
        return True
    gv = [_as_vector(g) for g in gens]
    gv = [g for g in gv if any(not p.is_zero() for p in g)]
    if not gv:
        return False
    if ring is None:
        ring = vv[0].ring
    order = order or default_local(ring)
    rank = len(vv)
    if order.is_global or is_homogeneous_input(gv + [vv], order, ring, rank):
        return standard_basis(gv, order, ring=ring, rank=rank, field=field).contains(vv)
    for syz in syzygies([vv] + gv, order, ring=ring, field=field):
        if syz[0].constant_term():
            return True
    return False


def _check_inclusion(small: list[tuple], big: list[tuple], ring: Ring, order: MonomialOrder) -> None:
    if not small:
        return
    if not big:
        if all(all(p.is_zero() for p in v) for v in small):
            return
        raise ValueError("J is not contained in P")
    for v in small:
        if not local_contains(big, v, order, ring=ring):
            raise ValueError("J is not contained in P")


def _clean(P: Sequence, J: Sequence):
    Pv = [_as_vector(p) for p in P]
    Jv = [_as_vector(j) for j in J]
    Pv = [p for p in Pv if any(not q.is_zero() for q in p)]
    Jv = [j for j in Jv if any(not q.is_zero() for q in j)]
    return Pv, Jv


def subquotient_presentation(P: Sequence, J: Sequence, order: MonomialOrder | None = None, *,
                             ring: Ring | None = None, shifts: Sequence[int] | None = None,
                             check: bool = True, field=QQ_FIELD):
    """Relations K with P/J = R^m / K, m = number of generators of P.

    Returns ``(K generators as m-vectors, degree shifts of the m generators)``.
    """
    Pv, Jv = _clean(P, J)
    if ring is None:
        src = Pv or Jv
        if not src:
            return [], ()
        ring = src[0][0].ring
    order = order or default_local(ring)
    if check:
        _check_inclusion(Jv, Pv, ring, order)
    if not Pv:
        return [], ()
    aug, s, m, sh = _augment(Pv, Jv, ring, order, shifts)
    return _relation_basis(aug, s, m, ring, order, sh, field), sh[s:]


def subquotient_dim(P: Sequence, J: Sequence, order: MonomialOrder | None = None, *,
                    ring: Ring | None = None, shifts: Sequence[int] | None = None,
                    check: bool = True, field=QQ_FIELD):
    """Local dim_k of P/J (J inside P), or INFINITE."""
    Pv, Jv = _clean(P, J)
    if not Pv:
        return 0
    if ring is None:
        ring = Pv[0][0].ring
    order = order or default_local(ring)
    if check:
        _check_inclusion(Jv, Pv, ring, order)
    aug, s, m, sh = _augment(Pv, Jv, ring, order, shifts)
    cb = (0,) * s + (1,) * m
    if is_homogeneous_input(aug, order, ring, s + m, sh, cb):
        return local_dim(aug, order, ring=ring, rank=s + m, shifts=sh, comp_blocks=cb,
                         comps=range(s, s + m), field=field)
    rel = _relation_basis(aug, s, m, ring, order, sh, field)
    sh = sh[s:]
    if not rel:
        return INFINITE
    return local_dim(rel, order, ring=ring, rank=m, shifts=sh, field=field)


def annihilator(vecs: Sequence, rank: int, ring: Ring, field=QQ_FIELD) -> list[Poly]:
    """Global generators of Ann(R^rank / <vecs>)."""
    vs = [_as_vector(v) for v in vecs]
    if rank == 1:
        return [v[0] for v in vs if not v[0].is_zero()]
    zero, one = ring.zero(), ring.one()
    out: list[Poly] | None = None
    for i in range(rank):
        e = tuple(one if k == i else zero for k in range(rank))
        col = [s[0] for s in syzygies([e] + vs, grevlex(), ring=ring, field=field)]
        col = [c for c in col if not c.is_zero()]
        out = col if out is None else intersect(out, col, field=field)
        if not out:
            return []
    return out or []


def origin_isolated(ideal: Sequence[Poly], field=QQ_FIELD) -> bool:
    """Whether the origin is at most an isolated point of V(ideal).

    Equivalent to (ideal : m^infinity) containing an element with nonzero
    constant term; the saturation is computed globally.
    """
    gens = [p for p in ideal if not p.is_zero()]
    if not gens:
        return False
    if any(p.constant_term() for p in gens):
        return True
    ring = gens[0].ring
    sat = saturation(gens, ring.gens(), field=field)
    return any(p.constant_term() for p in sat)


# ----------------------------------------------------------------------
# elimination and related global operations

def _substitute_linear(gens: list[Poly], kill: set[int]) -> tuple[list[Poly], set[int]]:
    """Remove kill variables appearing as ``c*v + h`` with ``h`` free of ``v``."""
    from .poly import substitute
    gens = [g for g in gens if not g.is_zero()]
    changed = True
    while changed:
        changed = False
        for gi, g in enumerate(gens):
            for v in sorted(kill):
                lin = None
                ok = True
                for e, c in g.items():
                    if e[v] == 0:
                        continue
                    if e[v] == 1 and sum(e) == 1 and lin is None:
                        lin = (e, c)
                    else:
                        ok = False
                        break
                if not ok or lin is None:
                    continue
                ring = g.ring
                rest = g - Poly(ring, {lin[0]: lin[1]})
                image = rest * (-1 / lin[1])
                images = list(ring.gens())
                images[v] = image
                gens = [substitute(h, images) for k, h in enumerate(gens) if k != gi]
                gens = [h for h in gens if not h.is_zero()]
                kill = kill - {v}
                changed = True
                break
            if changed:
                break
    return gens, kill


def eliminate(gens: Sequence[Poly], kill_vars: Sequence[str], keep_ring: Ring | None = None,
              field=QQ_FIELD) -> list[Poly]:
    """Generators of  <gens>  ∩  k[remaining variables]  (global computation)."""
    if not gens:
        return []
    ring = gens[0].ring
    kill = {ring.index(v) for v in kill_vars}
    keep_names = [v for v in ring.variables if ring.index(v) not in kill]
    if keep_ring is None:
        keep_ring = Ring(tuple(keep_names))
    gs, kill_left = _substitute_linear(list(gens), kill)
    if not gs:
        return []
    killed = [v for v in ring.variables if ring.index(v) in kill_left]
    kept = [v for v in ring.variables if ring.index(v) not in kill_left]
    if killed:
        perm_ring = Ring(tuple(killed + kept))
        moved = [g.map_exponents(perm_ring, [perm_ring.index(v) for v in ring.variables]) for g in gs]
        from .orders import elimination
        order = elimination(len(killed), len(kept))
        sb = standard_basis(moved, order, ring=perm_ring, field=field)
        nk = len(killed)
        result = []
        for p in sb.polys:
            if all(not any(e[:nk]) for e in p.terms):
                result.append(p)
        src = perm_ring
    else:
        result = gs
        src = ring
    out = []
    for p in result:
        if any(any(e[src.index(v)] for v in killed) for e in p.terms if killed):
            continue
        out.append(_restrict(p, keep_ring))
    return out


def _restrict(p: Poly, ring: Ring) -> Poly:
    idx = [ring.index(v) if v in ring.variables else None for v in p.ring.variables]
    t = {}
    for e, c in p.items():
        ne = [0] * ring.nvars
        for i, x in enumerate(e):
            if x:
                if idx[i] is None:
                    raise ValueError(f"{p} involves {p.ring.variables[i]}")
                ne[idx[i]] = x
        t[tuple(ne)] = c
    return Poly(ring, t, _trusted=True)


def combined_ring(*rings: Ring) -> Ring:
    names: list[str] = []
    for r in rings:
        for v in r.variables:
            if v not in names:
                names.append(v)
    return Ring(tuple(names))


def preimage(images: Sequence[Poly], target: Ring, ideal: Sequence[Poly] = (),
             field=QQ_FIELD) -> list[Poly]:
    """Generators of phi^{-1}(ideal) for phi: k[target] -> k[source], Y_i -> images[i].

    A variable present in both rings must be sent to itself (unfolding
    parameters); only the source-only variables are eliminated.  The
    computation is global; it agrees with the local preimage whenever the
    map is finite and the fibre over 0 is the origin alone.
    """
    src = images[0].ring
    shared = set(src.variables) & set(target.variables)
    extra = tuple(v for v in target.variables if v not in shared)
    big = Ring(tuple(src.variables) + extra)
    gens = []
    for i, y in enumerate(target.variables):
        img = images[i].to_ring(big)
        if y in shared:
            if img != big.gen(y):
                raise ValueError(f"shared variable {y} must map to itself")
            continue
        gens.append(big.gen(y) - img)
    gens += [p.to_ring(big) for p in ideal if not p.is_zero()]
    kill = [v for v in src.variables if v not in shared]
    return eliminate(gens, kill, keep_ring=target, field=field)


def intersect(a: Sequence[Poly], b: Sequence[Poly], field=QQ_FIELD) -> list[Poly]:
    """Global intersection of two ideals via t*a + (1-t)*b."""
    if not a or not b:
        return []
    ring = a[0].ring
    t = _fresh(ring, "t")
    big = Ring(tuple(ring.variables) + (t,))
    tp = big.gen(t)
    gens = [tp * p.to_ring(big) for p in a] + [(1 - tp) * p.to_ring(big) for p in b]
    return eliminate(gens, [t], keep_ring=ring, field=field)


def ideal_quotient(a: Sequence[Poly], b: Sequence[Poly], field=QQ_FIELD) -> list[Poly]:
    """(a : b) computed globally as the intersection of (a : b_j)."""
    ring = a[0].ring if a else b[0].ring
    result: list[Poly] | None = None
    for g in b:
        if g.is_zero():
            continue
        inter = intersect(list(a), [g], field=field)
        q = [_div_exact(p, g) for p in inter]
        result = q if result is None else intersect(result, q, field=field)
    return result if result is not None else [ring.one()]


def saturation(a: Sequence[Poly], b: Sequence[Poly], field=QQ_FIELD, max_steps: int = 50) -> list[Poly]:
    cur = list(a)
    for _ in range(max_steps):
        nxt = ideal_quotient(cur, b, field=field)
        sb = standard_basis(cur, grevlex(), field=field)
        if sb.contains_all(nxt):
            return cur
        cur = nxt
    raise ResourceLimitExceeded("saturation steps", max_steps)


def _div_exact(p: Poly, g: Poly) -> Poly:
    from .poly import exact_divide
    return exact_divide(p, g)


def _fresh(ring: Ring, base: str) -> str:
    name = base
    k = 0
    while name in ring.variables:
        k += 1
        name = f"{base}{k}"
    return name


def modular_field(p: int | None = None) -> PrimeField:
    return PrimeField() if p is None else PrimeField(p)


# ----------------------------------------------------------------------
# certified local dimensions

def is_homogeneous_input(gens: Sequence, order: MonomialOrder, ring: Ring, rank: int,
                         shifts=None, comp_blocks=None) -> bool:
    """Whether every generator has ecart 0, so Mora's algorithm never chains."""
    P = get_packer(order, ring.nvars, rank, None if comp_blocks is None else tuple(comp_blocks),
                   None if shifts is None else tuple(shifts))
    for g in gens:
        d = to_dict(_as_vector(g), P)
        if d and len({P.degree(k) for k in d}) > 1:
            return False
    return True


SPECULATIVE_BUDGET = 0.5


def local_dim(gens: Sequence, order: MonomialOrder | None = None, *, ring: Ring | None = None,
              rank: int | None = None, shifts=None, comp_blocks=None,
              comps: Sequence[int] | None = None, field=QQ_FIELD, start: int | None = None,
              max_cut: int = 200):
    """Local dim_k of (free module / submodule), restricted to ``comps`` (last block).

    Homogeneous input goes straight through Mora's algorithm, and so does any
    input for which a budgeted attempt finishes.  Otherwise the computation
    is done modulo W_N (monomials of weighted degree >= N in the counted
    components) for growing N; equal answers at N and N + max weight
    certify, by Nakayama's lemma, that W_N already lies in the submodule.
    """
    vecs = [_as_vector(g) for g in gens]
    if ring is None:
        ring = vecs[0][0].ring
    if rank is None:
        rank = len(vecs[0])
    order = order or default_local(ring)
    if comps is None:
        comps = list(range(rank))
    if not vecs:
        return INFINITE
    kw = dict(ring=ring, rank=rank, shifts=shifts, comp_blocks=comp_blocks, field=field)
    if order.is_global or is_homogeneous_input(vecs, order, ring, rank, shifts, comp_blocks):
        return standard_basis(vecs, order, **kw).quotient_dim(comps)
    try:
        return standard_basis(vecs, order, budget=SPECULATIVE_BUDGET, **kw).quotient_dim(comps)
    except ResourceLimitExceeded as exc:
        if exc.what != "speculative time":
            raise
    P = get_packer(order, ring.nvars, rank, None if comp_blocks is None else tuple(comp_blocks),
                   None if shifts is None else tuple(shifts))
    w = max(P.deg_weights) if P.deg_weights else 1
    if start is None:
        start = 2 * max(max(P.degree(k) for k in to_dict(v, P)) for v in vecs if any(not p.is_zero() for p in v)) + 2
    N = start
    prev = None
    if comp_blocks is None and field.modulus is None:
        # an infinite answer is cheap to certify globally; do that before cutting deep
        max_cut = min(max_cut, 4 * start)
    while N <= max_cut:
        d1 = prev if prev is not None and prev[0] == N else (N, standard_basis(vecs, order, cut=N, **kw).quotient_dim(comps))
        d2 = (N + w, standard_basis(vecs, order, cut=N + w, **kw).quotient_dim(comps))
        if d1[1] == d2[1]:
            return d1[1]
        prev = d2
        N = N + w if d2[1] - d1[1] <= 0 else max(N + w, 2 * N)
        if N != prev[0]:
            prev = None
    # no agreement yet: either the quotient is infinite or the cut is still too low
    if comp_blocks is None and field.modulus is None:
        if not origin_isolated(annihilator(vecs, rank, ring, field), field):
            return INFINITE
        while True:
            d1 = standard_basis(vecs, order, cut=N, **kw).quotient_dim(comps)
            d2 = standard_basis(vecs, order, cut=N + w, **kw).quotient_dim(comps)
            if d1 == d2:
                return d1
            N = max(N + w, 2 * N)
    return standard_basis(vecs, order, **kw).quotient_dim(comps)
