import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kronewton.exact_arith import (
    GaussianRational,
    PadicApprox,
    Place,
    abs_value,
    arb_lower,
    arb_upper,
    format_gaussian,
    height,
    parse_exact,
    places_for,
    product_formula,
    to_acb,
    vector_norm,
    working_precision,
)
from kronewton.polysys import MultiPoly

INF = Place.archimedean()

nonzero_fracs = st.fractions(max_denominator=10**12).filter(lambda x: x != 0)
small_fracs = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)


def test_abs_value_examples():
    assert abs_value(Fraction(-3, 4), INF) == Fraction(3, 4)
    assert abs_value(12, Place.padic(2)) == Fraction(1, 4)
    places = [INF, Place.padic(2), Place.padic(3)]
    assert product_formula(6, places) == 1


def test_height_examples():
    assert height(1).value == 0
    assert height(Fraction(7, 3)).value == pytest.approx(math.log(7))
    poly = MultiPoly.univariate([1, -5, 3])
    assert height(poly).value == pytest.approx(math.log(5))


def test_vector_norm_examples():
    assert vector_norm([3, 4], INF) == 5
    assert vector_norm([4, 6], Place.padic(2)) == Fraction(1, 2)
    assert vector_norm([0, 0, 0], INF) == 0
    assert vector_norm([0, 0], Place.padic(5)) == 0


def test_gaussian_round_trip():
    z = GaussianRational(Fraction(1, 2), Fraction(-3, 7))
    assert parse_exact(format_gaussian(z)) == z
    assert parse_exact("5") == 5


def test_place_parse():
    assert Place.parse("inf").is_archimedean
    assert Place.parse("p:7").p == 7
    with pytest.raises(ValueError):
        Place.parse("p:9")


def test_padic_inverse_of_three():
    x = PadicApprox.from_rational(Fraction(1, 3), 7, 3)
    assert x.residue() % 343 == 229


@settings(max_examples=1000)
@given(nonzero_fracs)
def test_product_formula_rational(x):
    assert product_formula(x, places_for(x)) == 1


@settings(max_examples=1000)
@given(st.integers(-500, 500), st.integers(-500, 500), st.integers(1, 500))
def test_product_formula_gaussian(a, b, c):
    if a == 0 and b == 0:
        return
    z = GaussianRational(Fraction(a, c), Fraction(b, c))
    assert product_formula(z, places_for(z)) == 1


@settings(max_examples=300)
@given(nonzero_fracs, nonzero_fracs, st.sampled_from([2, 3, 5, 7]))
def test_ultrametric(x, y, p):
    place = Place.padic(p)
    ax, ay, axy = abs_value(x, place), abs_value(y, place), abs_value(x + y, place)
    assert axy <= max(ax, ay)
    if ax != ay:
        assert axy == max(ax, ay)


@settings(max_examples=300)
@given(small_fracs, small_fracs, small_fracs)
def test_ball_contains_exact(x, y, w):
    exact = x * y - w * w + x
    with working_precision(64):
        bx, by, bw = to_acb(x), to_acb(y), to_acb(w)
        ball = bx * by - bw * bw + bx
    assert arb_lower(ball.real) <= exact <= arb_upper(ball.real)
    assert ball.imag.contains(0)


@settings(max_examples=200)
@given(nonzero_fracs)
def test_height_negation(x):
    assert height(x) == height(-x)


@settings(max_examples=100)
@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-50, 50), min_size=1, max_size=6))
def test_height_permutation(terms):
    f = MultiPoly(2, terms)
    assert height(f) == height(f.permute([1, 0]))
