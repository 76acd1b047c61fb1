from fractions import Fraction

import pytest
from gmpy2 import mpq

from mondcert.coeffs import PrimeField
from mondcert.errors import ResourceLimitExceeded
from mondcert.modular import modular_lift, rational_reconstruction
from mondcert.poly import Poly, Ring

R = Ring(("x", "y"))


@pytest.mark.parametrize("q", [Fraction(3, 7), Fraction(-22, 5), Fraction(0), Fraction(123456, 1)])
def test_rational_reconstruction(q):
    m = 2_000_000_011 * 2_000_000_033
    a = q.numerator * pow(q.denominator, -1, m) % m
    assert rational_reconstruction(a, m) == mpq(q.numerator, q.denominator)


def test_reconstruction_fails_beyond_bound():
    m = 101
    # 50/51 needs numerator and denominator near sqrt(m)
    a = 50 * pow(51, -1, m) % m
    r = rational_reconstruction(a, m)
    assert r is None or r != mpq(50, 51)


def _images(target):
    def compute(F: PrimeField):
        return [Poly(R, {e: F.convert(c) for e, c in p.items()}) for p in target]
    return compute


def test_lift_recovers_rational_basis():
    target = [Poly(R, {(1, 0): mpq(1), (0, 1): mpq(35, 33)}), Poly(R, {(0, 2): mpq(1), (0, 0): mpq(-7, 1000003)})]
    out = modular_lift(_images(target))
    assert sorted(map(str, out)) == sorted(map(str, target))


def test_lift_gives_up_when_images_never_agree():
    state = {"k": 0}

    def noisy(F: PrimeField):
        state["k"] += 1
        return [Poly(R, {(1, 0): 1, (0, 1): state["k"]})]

    with pytest.raises(ResourceLimitExceeded):
        modular_lift(noisy, max_primes=6)
