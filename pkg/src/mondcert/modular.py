"""Lifting reduced Groebner bases from prime fields back to Q.

Every image is a reduced, monic basis for a global order, which is unique,
so images at different primes can be glued coefficientwise by the Chinese
remainder theorem and read back as rationals.  The output is only a
candidate; callers certify it over Q before trusting it.
"""
from __future__ import annotations

from typing import Callable, Sequence

from gmpy2 import invert, isqrt, mpq, mpz, next_prime

from .coeffs import PrimeField
from .errors import ResourceLimitExceeded
from .poly import Poly

FIRST_PRIME = 2_000_000_011
MAX_PRIMES = 60

__all__ = ["rational_reconstruction", "modular_lift", "FIRST_PRIME", "MAX_PRIMES"]


def rational_reconstruction(a, m):
    """The fraction r/s with r = a*s mod m and |r|, s <= sqrt(m/2), or None."""
    a = mpz(a) % m
    bound = isqrt(m // 2)
    r0, r1 = mpz(m), a
    s0, s1 = mpz(0), mpz(1)
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return mpq(r1, s1)


def _shape(polys: Sequence[Poly]) -> tuple:
    return tuple(tuple(sorted(p.terms)) for p in polys)


def _sort(polys: Sequence[Poly]) -> list[Poly]:
    return sorted(polys, key=lambda p: (p.degree(), tuple(sorted(p.terms))))


def modular_lift(compute: Callable[[PrimeField], Sequence[Poly]], *,
                 max_primes: int = MAX_PRIMES, skip: Sequence[int] = ()) -> list[Poly]:
    """Rational candidate for the basis that ``compute`` returns at each prime.

    ``compute(field)`` must return the reduced monic basis over ``field``.
    Primes whose support pattern disagrees with the majority so far are
    dropped as unlucky.  Stops once two consecutive reconstructions agree.
    """
    p = mpz(FIRST_PRIME)
    images: dict[tuple, list] = {}
    last = None
    used = 0
    while used < max_primes:
        p = next_prime(p)
        if int(p) in skip:
            continue
        used += 1
        try:
            polys = _sort(compute(PrimeField(int(p))))
        except ZeroDivisionError:
            continue
        key = _shape(polys)
        images.setdefault(key, []).append((p, polys))
        best = max(images.values(), key=len)
        if images[key] is not best:
            continue
        cand = _glue(best)
        if cand is not None and last is not None and _shape(cand) == _shape(last) \
                and all(a == b for a, b in zip(cand, last)):
            return cand
        last = cand
    raise ResourceLimitExceeded("modular primes", max_primes)


def _glue(images: list) -> list[Poly] | None:
    """CRT the coefficient lists of same-shape images and reconstruct."""
    mod = mpz(1)
    acc: list[dict] | None = None
    for p, polys in images:
        if acc is None:
            acc = [{e: mpz(int(c)) for e, c in q.items()} for q in polys]
            mod = mpz(p)
            continue
        inv = invert(mod, p)
        for d, q in zip(acc, polys):
            for e, c in q.items():
                x = d[e]
                t = ((mpz(int(c)) - x) * inv) % p
                d[e] = x + mod * t
        mod *= p
    out = []
    for d, q in zip(acc, images[0][1]):
        terms = {}
        for e, x in d.items():
            r = rational_reconstruction(x, mod)
            if r is None:
                return None
            terms[e] = r
        out.append(Poly(q.ring, terms))
    return out
