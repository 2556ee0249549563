import itertools
import math
from fractions import Fraction

import flint
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kronewton.exact_arith import PadicApprox, working_precision
from kronewton.lattice import (
    IntLattice,
    NotFound,
    lll_reduce,
    min_poly_from_approx,
    rational_from_ball,
    rational_reconstruct,
)


def sq(v):
    return sum(x * x for x in v)


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


bases = st.integers(2, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-60, 60), min_size=n, max_size=n), min_size=n, max_size=n)
).filter(lambda B: flint.fmpz_mat(B).det() != 0)


@settings(max_examples=1000)
@given(bases)
def test_lll_soundness(B):
    red = lll_reduce(B)
    assert red.is_reduced()
    assert red.gram_determinant() == IntLattice(B).gram_determinant()
    assert matmul(red.transform, B) == red.basis
    assert abs(int(flint.fmpz_mat(red.transform).det())) == 1
    # ||b_1||^2 <= (delta - 1/4)^-(n-1) lambda_1^2, with lambda_1 bounded by the library's reduction
    other = flint.fmpz_mat(B).lll()
    ref = min(sq([int(other[i, j]) for j in range(other.ncols())]) for i in range(other.nrows()))
    n = len(B)
    assert sq(red.basis[0]) <= (1 / (Fraction(99, 100) - Fraction(1, 4))) ** (n - 1) * ref


@settings(max_examples=150)
@given(st.lists(st.lists(st.integers(-8, 8), min_size=3, max_size=3), min_size=3, max_size=3).filter(
    lambda B: flint.fmpz_mat(B).det() != 0
))
def test_lll_against_enumeration(B):
    red = lll_reduce(B)
    shortest = min(
        sq([sum(c * row[j] for c, row in zip(coeffs, B)) for j in range(3)])
        for coeffs in itertools.product(range(-8, 9), repeat=3)
        if any(coeffs)
    )
    assert sq(red.basis[0]) <= 4 * shortest


def test_lll_examples():
    red = lll_reduce([[1, 10**6], [0, 1]])
    assert sorted(map(sq, red.basis)) == [1, 1]
    assert red.gram_determinant() == 1
    ortho = lll_reduce([[3, 0, 0], [0, 5, 0], [0, 0, 7]])
    assert sorted(tuple(abs(x) for x in r) for r in ortho.basis) == [(0, 0, 7), (0, 5, 0), (3, 0, 0)]


def test_lll_deterministic():
    B = [[17, 3, -5], [4, 40, 2], [9, -11, 23]]
    assert lll_reduce(B).basis == lll_reduce(B).basis


def ball(value: float, radius: float):
    return flint.acb(flint.arb(value, radius))


def test_min_poly_examples():
    assert min_poly_from_approx(ball(1.41421356237, 5e-12), 2, 8).polynomial == [-2, 0, 1]
    assert min_poly_from_approx(Fraction(1, 2), 2, 8).polynomial == [-1, 2]
    assert min_poly_from_approx(ball(1.61803398875, 5e-12), 2, 8).polynomial == [-1, -1, 1]


def test_min_poly_padic():
    x = PadicApprox.from_rational(Fraction(3, 5), 7, 12)
    assert min_poly_from_approx(x, 2, 6).polynomial == [-3, 5]


def test_min_poly_not_found():
    with pytest.raises(NotFound):
        min_poly_from_approx(ball(3.14159, 5e-6), 2, 8)


def test_rational_reconstruct_examples():
    assert rational_reconstruct((4, 343), 10) == 4
    assert rational_reconstruct((229, 343), 10) == Fraction(1, 3)
    assert rational_reconstruct(PadicApprox.from_rational(Fraction(-5, 21), 7, 10), 30) == Fraction(-5, 21)
    with pytest.raises(NotFound):
        rational_reconstruct((229, 343), 2)


@settings(max_examples=200)
@given(st.fractions(max_denominator=300).filter(lambda q: abs(q.numerator) <= 300), st.sampled_from([3, 5, 7, 11]))
def test_rational_reconstruct_round_trip(q, p):
    if q.denominator % p == 0:
        return
    k = 1
    while p**k <= 2 * 300**2:
        k += 1
    m = p**k
    u = q.numerator * pow(q.denominator, -1, m) % m
    assert rational_reconstruct((u, m), 300) == q


@settings(max_examples=150)
@given(st.integers(2, 30).filter(lambda a: math.isqrt(a) ** 2 != a), st.integers(-5, 5), st.integers(1, 4))
def test_min_poly_soundness_and_monotonicity(a, b, c):
    # x = b/c + sqrt(a), exact minimal polynomial c^2 X^2 - 2bc X + b^2 - a c^2
    def source(prec):
        with working_precision(prec):
            return flint.acb(flint.arb(b) / c + flint.arb(a).sqrt())

    res = min_poly_from_approx(source, 2, 12)
    P = flint.fmpz_poly(res.polynomial)
    truth = flint.fmpz_poly([b * b - a * c * c, -2 * b * c, c * c])
    assert P * truth.content() == truth or P == truth // truth.content()
    finer = min_poly_from_approx(source(600), 2, 12)
    assert finer.polynomial == res.polynomial


def test_rational_from_ball():
    with working_precision(200):
        x = flint.acb(flint.arb(1) / 3)
    assert rational_from_ball(x, 10) == Fraction(1, 3)
    with pytest.raises(NotFound):
        rational_from_ball(flint.acb(flint.arb(2).sqrt()), 10)
