import sys
from pathlib import Path

import pytest

from mondcert.germ import MapGerm
from mondcert.poly import Ring, parse_poly

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
sys.path.insert(0, str(Path(__file__).resolve().parent))

XY = Ring(("x", "y"))
Y123 = Ring(("Y1", "Y2", "Y3"))

# the n = 2 corpus with its A_e-codimensions
CORPUS_GERMS = {
    "cross-cap": (("x", "y^2", "x*y"), 0),
    "S1": (("x", "y^2", "y^3 + x^2*y"), 1),
    "S2": (("x", "y^2", "y^3 + x^3*y"), 2),
    "S3": (("x", "y^2", "y^3 + x^4*y"), 3),
    "B1": (("x", "y^2", "x^2*y + y^3"), 1),
    "B2": (("x", "y^2", "x^2*y + y^5"), 2),
    "B3": (("x", "y^2", "x^2*y + y^7"), 3),
    "H2": (("x", "y^3", "x*y + y^5"), 2),
}


def germ(*comps: str, name=None) -> MapGerm:
    if len(comps) == 2:
        S, T = Ring(("t",)), Ring(("Y1", "Y2"))
    else:
        S, T = XY, Y123
    return MapGerm(S, T, tuple(parse_poly(c, S) for c in comps), name)


def corpus_germ(name: str) -> MapGerm:
    return germ(*CORPUS_GERMS[name][0], name=name)


@pytest.fixture
def P():
    return lambda text, ring=XY: parse_poly(text, ring)
