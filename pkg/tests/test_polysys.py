import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kronewton.exact_arith import height
from kronewton.newton import mignotte_system
from kronewton.polysys import MultiPoly, PolySystem, Slp, SlpBuilder, compile_to_slp, jet, random_prime, variables


def square_plus_one_slp() -> Slp:
    b = SlpBuilder(1)
    x1 = b.add(b.input(0), b.const(1))
    return b.build(b.mul(x1, x1))


def test_evaluate_examples():
    x, y = variables(2)
    assert (x * x - 2).evaluate([Fraction(3, 2), 0]) == Fraction(1, 4)
    assert (x * y - 1).evaluate([1, 1]) == 0
    assert square_plus_one_slp().evaluate([2]) == 9


def test_jet_univariate():
    F = PolySystem([MultiPoly.univariate([-2, 0, 1])])
    j = jet(F, [Fraction(3, 2)])
    assert j.value == [Fraction(1, 4)]
    assert j.jacobian == [[3]]
    assert j.second[0][0][0] == 2


def test_jet_linear_has_no_curvature():
    x, y = variables(2)
    F = PolySystem([x + 2 * y - 1, x - y])
    j = jet(F, [Fraction(1, 3), 5])
    assert all(c == 0 for plane in j.second for row in plane for c in row)


def test_mignotte_jacobian_at_origin_is_linear_part():
    F = mignotte_system(3)
    z = [0] * F.n
    J = F.jacobian(z)
    for i, f in enumerate(F.polys):
        for j in range(F.n):
            e = tuple(1 if k == j else 0 for k in range(F.n))
            assert J[i][j] == f.terms.get(e, 0)


def test_slp_cost_model():
    five = compile_to_slp(MultiPoly.constant(1, 5))
    assert (five.size, five.depth) == (0, 0)
    sq = compile_to_slp(variables(1)[0] ** 2)
    assert (sq.size, sq.depth) == (1, 1)
    b = SlpBuilder(1)
    b.pow(b.add(b.input(0), b.const(1)), 4)
    fourth = b.build()
    assert (fourth.size, fourth.depth) == (2, 2)
    assert fourth.evaluate([2]) == 81


def test_slp_rejects_forward_reference():
    with pytest.raises(ValueError):
        Slp(1, (("input", 0), ("add", 0, 1)))


def test_system_jsonl_round_trip():
    F = mignotte_system(4)
    G = PolySystem.from_jsonl(F.to_jsonl())
    assert G.to_jsonl() == F.to_jsonl()


def test_slp_json_round_trip(rng):
    from kronewton.polysys import random_slp

    slp = random_slp(rng, 3)
    assert Slp.from_json(slp.to_json()) == slp


def polys(n_vars=2, max_deg=2):
    mono = st.tuples(*[st.integers(0, max_deg)] * n_vars).filter(lambda e: sum(e) <= max_deg)
    return st.dictionaries(mono, st.integers(-20, 20), min_size=1, max_size=6).map(lambda t: MultiPoly(n_vars, t))


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=50)


@settings(max_examples=100)
@given(polys(), st.lists(st.tuples(rationals, rationals), min_size=5, max_size=5))
def test_slp_matches_polynomial(f, points):
    slp = compile_to_slp(f)
    for z in points:
        assert slp.evaluate(list(z)) == f.evaluate(list(z))
    q = random_prime(40, random.Random(1))
    for a in range(5):
        pt = [a, 3 * a + 1]
        assert slp.evaluate(pt, modulus=q) == f.evaluate(pt, modulus=q)


@settings(max_examples=100)
@given(st.lists(polys(), min_size=2, max_size=2), st.tuples(rationals, rationals), st.tuples(rationals, rationals))
def test_taylor_identity(fs, z, w):
    F = PolySystem(fs)
    j = jet(F, list(z))
    shifted = F.evaluate([z[0] + w[0], z[1] + w[1]])
    for i in range(2):
        lin = sum(j.jacobian[i][a] * w[a] for a in range(2))
        quad = sum(j.second[i][a][b] * w[a] * w[b] for a in range(2) for b in range(2)) / 2
        assert shifted[i] == j.value[i] + lin + quad


@settings(max_examples=100)
@given(polys(max_deg=3), polys(max_deg=3))
def test_height_of_product(f, g):
    h = f * g
    if h.is_zero():
        return
    import math

    bound = height(f).value + height(g).value + math.log(min(f.n_terms, g.n_terms)) + 1e-9
    assert height(h).value <= bound
