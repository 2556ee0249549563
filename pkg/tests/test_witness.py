import pytest

from kronewton.exact_arith import HeightValue
from kronewton.polysys import SlpBuilder
from kronewton.witness import is_zero_slp, minimal_log2_step, witness_point

from slp_corpus import nonzero_corpus, zero_corpus


def test_witness_point_examples():
    wp = witness_point(4, 1, HeightValue(2), 2)
    assert minimal_log2_step(4, 1) == 8
    assert wp.step == 256
    assert wp.exponents == [256, 256 * 256]
    assert witness_point(1, 0, HeightValue(2), 1).step == 8


def test_omega_one_rejected():
    with pytest.raises(ValueError):
        witness_point(1, 0, HeightValue(1), 1, omega0=1)


def test_inadmissible_step_rejected():
    with pytest.raises(ValueError):
        witness_point(4, 1, HeightValue(2), 2, step=128)


def _identity_square():
    b = SlpBuilder(1)
    x = b.input(0)
    sq = b.mul(b.add(x, b.const(1)), b.add(x, b.const(1)))
    rhs = b.add(b.add(b.mul(x, x), b.smul(2, x)), b.const(1))
    return b.build(b.sub(sq, rhs))


def _commutator():
    b = SlpBuilder(2)
    x, y = b.input(0), b.input(1)
    return b.build(b.sub(b.mul(x, y), b.mul(y, x)))


def test_identities_are_zero():
    for slp in (_identity_square(), _commutator()):
        assert is_zero_slp(slp).verdict == "zero"
        assert is_zero_slp(slp, mode="sz").verdict == "zero"


def test_x_squared_minus_x_nonzero():
    b = SlpBuilder(1)
    x = b.input(0)
    slp = b.build(b.sub(b.mul(x, x), x))
    res = is_zero_slp(slp)
    assert res.verdict == "nonzero"
    wp = witness_point(slp.size, slp.depth, slp.scalar_height(), 1)
    omega = wp.exact_points()[0]
    assert slp.evaluate([omega]) == omega * (omega - 1) != 0


def test_modular_projection_agrees():
    for slp in nonzero_corpus(20, seed=3):
        assert is_zero_slp(slp, exact=False, seed=1).verdict == "nonzero"
    for slp in zero_corpus(10, seed=4):
        assert is_zero_slp(slp, exact=False, seed=1).verdict == "zero"


def test_larger_step_still_witnesses():
    for slp in nonzero_corpus(30, seed=5):
        k = minimal_log2_step(max(slp.size, 1), slp.depth)
        res = is_zero_slp(slp, step=2 ** (k + 1), exact=False)
        assert res.verdict == "nonzero"
