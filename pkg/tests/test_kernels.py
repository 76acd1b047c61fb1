import os
import random
import subprocess
import sys

import pytest
from gmpy2 import mpq

from mondcert import kernels
from mondcert.kernels import backends

IMPLS = backends()


def _items(rng, n=30):
    return [(k, mpq(rng.randint(-9, 9) or 1, rng.randint(1, 4))) for k in sorted(rng.sample(range(200), n))]


@pytest.mark.parametrize("name", sorted(IMPLS))
def test_axpy_matches_reference(name):
    mod = IMPLS[name]
    rng = random.Random(5)
    for _ in range(50):
        h = dict(_items(rng))
        items = _items(rng)
        shift, c = rng.randint(0, 5), mpq(rng.choice([-3, -1, 1, 2]), 2)
        ref = dict(h)
        for k, v in items:
            ref[k + shift] = ref.get(k + shift, 0) - c * v
        ref = {k: v for k, v in ref.items() if v}
        mod.axpy(h, items, shift, c)
        assert h == ref


@pytest.mark.parametrize("name", sorted(IMPLS))
def test_axpy_mod(name):
    mod, p = IMPLS[name], 101
    h = {1: 5, 2: 100}
    mod.axpy_mod(h, [(1, 5), (3, 1)], 0, 1, p)
    assert h == {2: 100, 3: 100}


@pytest.mark.parametrize("name", sorted(IMPLS))
def test_divisor_search(name):
    mod = IMPLS[name]
    mask = 0x7F | (0x7F << 8)
    guards = 0x80 | (0x80 << 8)
    pack = lambda a, b: a | (b << 8)  # noqa: E731
    lms = [pack(3, 0), pack(1, 2), pack(0, 1)]
    assert mod.find_divisor(lms, pack(2, 2), mask, guards) == 1
    assert mod.find_divisors(lms, pack(3, 1), mask, guards) == [0, 2]
    assert mod.find_divisor(lms, pack(0, 0), mask, guards) == -1


@pytest.mark.parametrize("name", sorted(IMPLS))
def test_reduce_row(name):
    mod = IMPLS[name]
    pivots = {0: [(0, mpq(1)), (2, mpq(1))], 1: [(1, mpq(1)), (2, mpq(-1))]}
    row = {0: mpq(2), 1: mpq(1), 2: mpq(5)}
    assert mod.reduce_row(row, pivots) == 2
    assert row == {2: mpq(4)}
    row = {0: mpq(1), 2: mpq(1)}
    assert mod.reduce_row(row, pivots) == -1


def test_backend_is_reported():
    assert kernels.BACKEND in IMPLS


def test_environment_forces_fallback():
    env = dict(os.environ, MONDCERT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import mondcert.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
