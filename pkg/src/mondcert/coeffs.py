"""Coefficient field: exact rationals (gmpy2 when present) and a prime-field mode."""
from __future__ import annotations

from fractions import Fraction

try:  # gmpy2 is an order of magnitude faster than Fraction
    from gmpy2 import mpq as QQ
    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    QQ = Fraction
    HAVE_GMPY2 = False

# largest prime below 2**31; modular pre-checks only, never certified output
DEFAULT_PRIME = 2147483647


def as_rational(c):
    if isinstance(c, str):
        return QQ(Fraction(c))
    if isinstance(c, Fraction):
        return QQ(c.numerator, c.denominator)
    return QQ(c)


def is_integral(c) -> bool:
    return c.denominator == 1


class RationalField:
    """Operations the standard-basis engine needs from its coefficients."""

    modulus = None

    def convert(self, c):
        return as_rational(c)

    def inv(self, c):
        return 1 / c

    def reduce(self, c):
        return c

    def __repr__(self) -> str:
        return "QQ"


class PrimeField:
    """Z/p with plain Python ints; results are not certified over Q."""

    def __init__(self, p: int = DEFAULT_PRIME) -> None:
        self.modulus = p

    def convert(self, c):
        c = as_rational(c)
        p = self.modulus
        den = int(c.denominator) % p
        if den == 0:
            raise ZeroDivisionError(f"denominator of {c} vanishes mod {p}")
        return int(c.numerator) * pow(den, -1, p) % p

    def inv(self, c):
        return pow(int(c), -1, self.modulus)

    def reduce(self, c):
        return c % self.modulus

    def __repr__(self) -> str:
        return f"GF({self.modulus})"


QQ_FIELD = RationalField()
