import math

import flint
import pytest

from kronewton.exact_arith import working_precision
from kronewton.galois import (
    ReducibleInput,
    full_resolvent,
    galois_order,
    lagrange_resolvent,
    orbit_product,
    root_balls,
    u_values,
    universal_system,
)
from kronewton.kronecker import verify_geometric
from kronewton.polysys import variables


def test_universal_system_examples():
    x1, x2 = variables(2)
    U = universal_system([1, 0, 1])
    assert [f.terms for f in U.polys] == [(x1 + x2).terms, (x1 * x2 - 1).terms]
    V = universal_system([2, -3, 1])
    assert [f.terms for f in V.polys] == [(x1 + x2 - 3).terms, (x1 * x2 - 2).terms]
    assert universal_system([-2, 0, 0, 1]).n == 3


def test_sign_convention():
    # prod (X - r_i) evaluated symbolically must reproduce f
    f = [5, -4, 0, 3, 1]
    U = universal_system(f)
    roots = root_balls(f, 256)
    with working_precision(256):
        for g in U.polys:
            assert g.evaluate(roots).contains(0)


def test_sqrt2_with_given_weights():
    res = lagrange_resolvent([-2, 0, 1], lam=(1, 2), splitting_field=False)
    assert res.galois_order == 2
    assert res.resolvent == [-2, 0, 1]


@pytest.mark.parametrize(
    "f, order",
    [([-2, 0, 1], 2), ([1, 0, 1], 2), ([-2, 0, 0, 1], 6), ([1, 0, 0, 0, 1], 4), ([1, 1, 0, 1], 6), ([-1, -2, 1, 1], 3)],
)
def test_galois_orders(f, order):
    assert galois_order(f) == order


def test_resolvent_properties_cubic():
    f = [-2, 0, 0, 1]
    res = lagrange_resolvent(f)
    d = 3
    R = flint.fmpz_poly(res.resolvent)
    assert len(R.factor()[1]) == 1
    assert math.factorial(d) % res.galois_order == 0 and res.galois_order % d == 0
    assert res.resolvent == orbit_product(f, res.lam, res.resolvent)
    assert verify_geometric(universal_system(f), res.splitting_field.solution)
    with working_precision(256):
        vals = u_values(root_balls(f, 256), res.lam)
        vanishing = [v for v in vals.values() if R(v).contains(0)]
    assert len(vanishing) == res.galois_order


def test_full_resolvent_factors_through_resolvent():
    f = [1, 0, 0, 0, 1]
    res = lagrange_resolvent(f, splitting_field=False)
    full = flint.fmpz_poly(full_resolvent(f, res.lam))
    assert full % flint.fmpz_poly(res.resolvent) == 0


def test_reducible_rejected():
    with pytest.raises(ReducibleInput):
        lagrange_resolvent([-1, 0, 1])
