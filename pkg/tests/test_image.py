import pytest

from conftest import CORPUS_GERMS, corpus_germ, germ
from mondcert.errors import NotGenericallyOneToOne
from mondcert.groebner import same_module
from mondcert.image import (conductor_source, conductor_target, fitting_crosscheck, fitting_ideal,
                            image_equation, piene_lambda, pushforward, ramification_ideal, target_order)
from mondcert.poly import partial, parse_poly


def test_cross_cap_image():
    f = germ("x", "y^2", "x*y")
    g = image_equation(f)
    assert g == parse_poly("Y3^2 - Y1^2*Y2", f.target)
    assert f.pullback(g).is_zero()
    assert piene_lambda(f, g) == parse_poly("-x", f.source)
    assert [str(p) for p in conductor_source(f)] == ["x"]


def test_s1_image_and_lambda():
    f = germ("x", "y^2", "y^3 + x^2*y")
    g = image_equation(f)
    assert g == parse_poly("Y3^2 - Y2*(Y2 + Y1^2)^2", f.target)
    assert piene_lambda(f, g) == parse_poly("-x^2 - y^2", f.source)


def test_embedding_has_unit_conductor():
    f = germ("x", "y", "0")
    assert image_equation(f) == parse_poly("Y3", f.target)
    lam = piene_lambda(f)
    assert lam.is_constant() and lam.constant_term() == -1
    assert same_module(conductor_target(f), [f.target.one()], target_order(f), ring=f.target)
    assert same_module(ramification_ideal(f), [f.source.one()], ring=f.source)


def test_conductor_and_ramification_of_cross_cap():
    f = germ("x", "y^2", "x*y")
    Y1, Y3 = f.target.gen("Y1"), f.target.gen("Y3")
    assert same_module(conductor_target(f), [Y1, Y3], target_order(f), ring=f.target)
    assert same_module(ramification_ideal(f), [f.source.gen("x"), f.source.gen("y")], ring=f.source)


def test_ramification_of_s1():
    f = germ("x", "y^2", "y^3 + x^2*y")
    expected = [parse_poly(s, f.source) for s in ("2*y", "3*y^2 + x^2", "2*x*y")]
    assert same_module(ramification_ideal(f), expected, ring=f.source)


def test_fitting_ideal_of_cross_cap():
    f = germ("x", "y^2", "x*y")
    fit = fitting_ideal(pushforward(f), 1)
    assert same_module(fit, [f.target.gen("Y1"), f.target.gen("Y3")], target_order(f), ring=f.target)


@pytest.mark.parametrize("name", sorted(CORPUS_GERMS))
def test_fitting_equals_conductor_on_corpus(name):
    assert fitting_crosscheck(corpus_germ(name))


def test_two_to_one_map_is_rejected():
    with pytest.raises(NotGenericallyOneToOne):
        piene_lambda(germ("x", "y^2", "x*y^2"))


@pytest.mark.parametrize("name", sorted(CORPUS_GERMS))
def test_piene_identity_signs(name):
    f = corpus_germ(name)
    g = image_equation(f)
    lam = piene_lambda(f, g)
    from mondcert.image import _minors
    for i, (y, m) in enumerate(zip(f.target.variables, _minors(f))):
        lhs = f.pullback(partial(g, y)) + (-1) ** (i + 2) * lam * m
        assert lhs.is_zero()
