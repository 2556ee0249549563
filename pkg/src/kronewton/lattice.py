"""Integer LLL and the reconstructions built on it.

The reduction is the integral variant: Gram-Schmidt data is carried as the
integers d_i (leading Gram minors) and lambda_ij = d_j * mu_ij, so no
rational or floating arithmetic is involved and the output is bit-for-bit
deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import flint
from gmpy2 import mpz

from .exact_arith import (
    GaussianRational,
    HeightValue,
    PadicApprox,
    Place,
    arb_lower,
    arb_mid,
    arb_upper,
    simplify_exact,
    to_acb,
    working_precision,
)

DEFAULT_DELTA = Fraction(99, 100)
PRECISION_POLICY_C = 4


class DependentBasis(ValueError):
    pass


class NotFound(ArithmeticError):
    """No relation within the bounds; ``reason`` says which bound looks responsible."""

    def __init__(self, message: str, reason: str = "bounds too small", attempts: list | None = None):
        super().__init__(message)
        self.reason = reason
        self.attempts = attempts or []


# ---------------------------------------------------------------------------
# LLL
# ---------------------------------------------------------------------------


def _round_half_toward_zero(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0), ties toward zero."""
    q, r = divmod(num, den)  # num = q*den + r, 0 <= r < den
    if 2 * r > den or (2 * r == den and q < 0):
        q += 1
    return q


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass
class IntLattice:
    """Row basis of an integer lattice."""

    basis: list[list[int]]
    delta: Fraction = DEFAULT_DELTA
    transform: list[list[int]] | None = None  # reduced = transform * original

    def __post_init__(self):
        self.basis = [[int(x) for x in row] for row in self.basis]
        if not Fraction(1, 4) < Fraction(self.delta) < 1:
            raise ValueError("delta must lie in (1/4, 1)")
        if self.basis and len({len(r) for r in self.basis}) != 1:
            raise ValueError("ragged basis")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def gram_determinant(self) -> int:
        G = flint.fmpz_mat([[_dot(u, v) for v in self.basis] for u in self.basis])
        return int(G.det())

    def gram_schmidt_data(self) -> tuple[list[int], list[list[int]]]:
        """(d, lam): d[i] = det Gram(b_0..b_{i-1}) (d[0] = 1), lam[i][j] = d[j+1] mu_ij."""
        n = self.rank
        d = [1] + [0] * n
        lam = [[0] * n for _ in range(n)]
        for k in range(n):
            for j in range(k + 1):
                u = _dot(self.basis[k], self.basis[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
        return d, lam

    def is_reduced(self) -> bool:
        """Size-reduced (|mu| <= 1/2) and Lovasz condition for ``delta``."""
        d, lam = self.gram_schmidt_data()
        a, b = Fraction(self.delta).numerator, Fraction(self.delta).denominator
        for k in range(self.rank):
            for j in range(k):
                if 2 * abs(lam[k][j]) > d[j + 1]:
                    return False
            if k >= 1:
                # ||b*_k||^2 >= (delta - mu^2) ||b*_{k-1}||^2
                if b * (d[k + 1] * d[k - 1] + lam[k][k - 1] ** 2) < a * d[k] ** 2:
                    return False
        return True


def lll_reduce(lattice: IntLattice | Sequence[Sequence[int]], delta: Fraction | None = None) -> IntLattice:
    """delta-LLL reduction with exact integer Gram-Schmidt data.

    Raises DependentBasis when the rows are linearly dependent.
    """
    if not isinstance(lattice, IntLattice):
        lattice = IntLattice([list(r) for r in lattice], delta or DEFAULT_DELTA)
    elif delta is not None:
        lattice = IntLattice(lattice.basis, delta)
    B = [[mpz(x) for x in r] for r in lattice.basis]
    n = len(B)
    U = [[mpz(int(i == j)) for j in range(n)] for i in range(n)]
    if n == 0:
        return IntLattice([], lattice.delta, [])
    a, b = Fraction(lattice.delta).numerator, Fraction(lattice.delta).denominator

    d = [mpz(1)] + [mpz(0)] * n  # d[i+1] belongs to row i
    lam = [[mpz(0)] * n for _ in range(n)]

    def red(k: int, l: int):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = _round_half_toward_zero(lam[k][l], d[l + 1])
            B[k] = [x - q * y for x, y in zip(B[k], B[l])]
            U[k] = [x - q * y for x, y in zip(U[k], U[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k: int, kmax: int):
        B[k], B[k - 1] = B[k - 1], B[k]
        U[k], U[k - 1] = U[k - 1], U[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        mu = lam[k][k - 1]
        new = (d[k - 1] * d[k + 1] + mu * mu) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - mu * t) // d[k]
            lam[i][k - 1] = (new * t + mu * lam[i][k]) // d[k + 1]
        d[k] = new

    d[1] = _dot(B[0], B[0])
    if d[1] == 0:
        raise DependentBasis("zero vector in basis")
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = _dot(B[k], B[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
            if d[k + 1] == 0:
                raise DependentBasis("basis vectors are linearly dependent")
        red(k, k - 1)
        if b * (d[k + 1] * d[k - 1] + lam[k][k - 1] ** 2) < a * d[k] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return IntLattice([[int(x) for x in r] for r in B], lattice.delta, [[int(x) for x in r] for r in U])


# ---------------------------------------------------------------------------
# Integer relations
# ---------------------------------------------------------------------------


def _accuracy_bits(x: flint.acb) -> int:
    bits = min(x.real.rel_accuracy_bits(), x.imag.rel_accuracy_bits() if x.imag != 0 else 10**9)
    return int(min(bits, flint.ctx.prec))


def _round_scaled(a: flint.arb, m: int) -> int:
    return math.floor(arb_mid(a) * 2**m + Fraction(1, 2))


def integer_relation(values: Sequence[flint.acb], scale_bits: int) -> list[int]:
    """Short integer vector c with sum c_i values_i ~ 0 (knapsack lattice).

    Rows are e_i followed by round(2^m Re v_i) and, if any value is
    non-real, round(2^m Im v_i).
    """
    complex_input = any(not v.imag.contains(0) or v.imag.mid() != 0 for v in values)
    rows = []
    for i, v in enumerate(values):
        row = [int(i == j) for j in range(len(values))]
        row.append(_round_scaled(v.real, scale_bits))
        if complex_input:
            row.append(_round_scaled(v.imag, scale_bits))
        rows.append(row)
    return _fast_reduce(rows)[0][: len(values)]


def _fast_reduce(rows: list[list[int]]) -> list[list[int]]:
    """FLINT's LLL with exact Gram arithmetic, same delta as :func:`lll_reduce`.

    Used where lattices carry thousands of bits; callers verify whatever
    relation comes out, so soundness never rests on the reduction itself.
    """
    M = flint.fmpz_mat(rows).lll(delta=float(DEFAULT_DELTA), gram="exact")
    return [[int(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]


# ---------------------------------------------------------------------------
# Minimal polynomials
# ---------------------------------------------------------------------------


@dataclass
class MinPolyResult:
    polynomial: list[int]  # little-endian, content-free, positive leading coefficient
    degree: int
    height: HeightValue
    residual: object  # ball enclosing P(x), or the p-adic valuation of P(x)
    irreducible: bool = False
    precision_bits: int = 0
    attempts: list = field(default_factory=list)

    def fmpz_poly(self) -> flint.fmpz_poly:
        return flint.fmpz_poly(self.polynomial)


def required_precision(degree: int, height_bits: int, c: int = PRECISION_POLICY_C) -> int:
    """Working-precision policy c * d * (H + d) for degree d, height H bits."""
    return c * degree * (height_bits + degree)


def normalize_poly(coeffs: Sequence[int]) -> list[int]:
    """Content-free with positive leading coefficient, trailing zeros dropped."""
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if not c:
        return []
    g = 0
    for x in c:
        g = math.gcd(g, x)
    c = [x // g for x in c]
    if c[-1] < 0:
        c = [-x for x in c]
    return c


def _poly_height_bits(c: Sequence[int]) -> int:
    return max(abs(x) for x in c).bit_length() if c else 0


def _eval_ball(coeffs: Sequence[int], x: flint.acb) -> flint.acb:
    acc = flint.acb(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _vanishing_factor(P: Sequence[int], x: flint.acb) -> tuple[list[int], bool]:
    """Irreducible factor of P whose ball value at x contains 0 (ties: lowest degree)."""
    fac = flint.fmpz_poly(list(P)).factor()[1]
    if len(fac) == 1 and fac[0][1] == 1:
        return normalize_poly(P), True
    best = None
    for f, _ in fac:
        cf = [int(c) for c in f.coeffs()]
        if _eval_ball(cf, x).contains(0):
            if best is None or len(cf) < len(best):
                best = cf
    if best is None:
        return normalize_poly(P), False
    return normalize_poly(best), True


def _as_ball_source(x) -> Callable[[int], flint.acb] | None:
    if callable(x):
        return x
    return None


def min_poly_from_approx(
    x,
    deg_bound: int,
    height_bits: int,
    place: Place | None = None,
    min_degree: int = 1,
    degrees: Sequence[int] | None = None,
) -> MinPolyResult:
    """Lowest-degree integer polynomial of height <= 2^height_bits vanishing at x.

    ``x`` may be an exact rational, an acb ball, a callable ``prec -> acb``
    (then the precision follows :func:`required_precision` and the answer is
    rechecked at twice that precision) or a :class:`PadicApprox`.
    """
    x = simplify_exact(x) if isinstance(x, (int, Fraction, GaussianRational)) else x
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        P = normalize_poly([-x.numerator, x.denominator])
        if _poly_height_bits(P) > height_bits:
            raise NotFound("rational value exceeds the height bound")
        return MinPolyResult(P, 1, HeightValue(max(abs(c) for c in P)), 0, True)
    if isinstance(x, PadicApprox):
        return _padic_min_poly(x, deg_bound, height_bits, min_degree, degrees)
    degs = list(degrees) if degrees is not None else list(range(min_degree, deg_bound + 1))
    attempts = []
    source = _as_ball_source(x)
    for k in degs:
        if source is not None:
            prec = max(64, required_precision(k, height_bits))
            res = _ball_attempt(source, k, height_bits, prec)
            attempts.append((k, prec, res and res.polynomial))
            if res is None:
                continue
            # recheck at doubled precision
            res2 = _ball_attempt(source, k, height_bits, 2 * prec)
            if res2 is None or res2.polynomial != res.polynomial:
                continue
            res.attempts = attempts
            return res
        else:
            prec = max(flint.ctx.prec, _accuracy_bits(to_acb(x)) + 16)
            with working_precision(prec):
                res = _ball_attempt(lambda _p: to_acb(x), k, height_bits, prec)
            attempts.append((k, prec, res and res.polynomial))
            if res is not None:
                res.attempts = attempts
                return res
    reason = "bounds too small"
    if source is not None and degs:
        # does the best degree-max candidate's residual shrink when precision doubles?
        k = degs[-1]
        p1 = max(64, required_precision(k, height_bits))
        r1 = _best_residual(source, k, p1)
        r2 = _best_residual(source, k, 2 * p1)
        if r1 is not None and r2 is not None and r2 < r1:
            reason = "precision insufficient"
    elif source is None:
        reason = "bounds too small or precision insufficient"
    raise NotFound(
        f"no polynomial of degree <= {deg_bound} and height <= 2^{height_bits} found", reason, attempts
    )


def _ball_attempt(source, k: int, height_bits: int, prec: int) -> MinPolyResult | None:
    with working_precision(prec + 32):
        xv = source(prec + 32)
        acc = _accuracy_bits(xv)
        m = max(8, min(prec, acc) - 8)
        powers = [flint.acb(1)]
        for _ in range(k):
            powers.append(powers[-1] * xv)
        rel = integer_relation(powers, m)
        P = normalize_poly(rel)
        if len(P) < 2 or _poly_height_bits(P) > height_bits:
            return None
        val = _eval_ball(P, xv)
        if not val.contains(0):
            return None
        Q, irreducible = _vanishing_factor(P, xv)
        return MinPolyResult(
            Q, len(Q) - 1, HeightValue(max(abs(c) for c in Q)), _eval_ball(Q, xv), irreducible, prec
        )


def _best_residual(source, k: int, prec: int) -> Fraction | None:
    with working_precision(prec + 32):
        xv = source(prec + 32)
        m = max(8, min(prec, _accuracy_bits(xv)) - 8)
        powers = [flint.acb(1)]
        for _ in range(k):
            powers.append(powers[-1] * xv)
        P = normalize_poly(integer_relation(powers, m))
        if len(P) < 2:
            return None
        return arb_upper(abs(_eval_ball(P, xv)))


def _padic_min_poly(x: PadicApprox, deg_bound, height_bits, min_degree, degrees) -> MinPolyResult:
    p = x.p
    if x.is_zero:
        return MinPolyResult([0, 1], 1, HeightValue(1), x.valuation, True)
    if x.valuation < 0:
        inv = _padic_min_poly(x.inverse(), deg_bound, height_bits, min_degree, degrees)
        P = normalize_poly(list(reversed(inv.polynomial)))
        return MinPolyResult(P, len(P) - 1, HeightValue(max(abs(c) for c in P)), inv.residual, inv.irreducible)
    N = x.absolute_precision
    mod = p**N
    r = int(x.residue()) % mod
    degs = list(degrees) if degrees is not None else list(range(min_degree, deg_bound + 1))
    attempts = []
    for k in degs:
        rows = [[mod] + [0] * k]
        for i in range(1, k + 1):
            row = [(-pow(r, i, mod)) % mod] + [0] * k
            row[i] = 1
            rows.append(row)
        P = normalize_poly(_fast_reduce(rows)[0])
        attempts.append((k, N, P))
        if len(P) < 2 or _poly_height_bits(P) > height_bits:
            continue
        if sum(c * pow(r, i, mod) for i, c in enumerate(P)) % mod:
            continue
        fac = flint.fmpz_poly(P).factor()[1]
        irreducible = len(fac) == 1 and fac[0][1] == 1
        if not irreducible:
            for f, _ in fac:
                cf = [int(c) for c in f.coeffs()]
                if sum(c * pow(r, i, mod) for i, c in enumerate(cf)) % mod == 0:
                    P, irreducible = normalize_poly(cf), True
                    break
        return MinPolyResult(P, len(P) - 1, HeightValue(max(abs(c) for c in P)), N, irreducible, N, attempts)
    raise NotFound(f"no p-adic relation of degree <= {deg_bound} and height <= 2^{height_bits}", attempts=attempts)


# ---------------------------------------------------------------------------
# Rational reconstruction
# ---------------------------------------------------------------------------


def _wang(u: int, m: int, B: int) -> Fraction | None:
    r0, r1 = m, u % m
    s0, s1 = 0, 1
    while r1 > B:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > B or math.gcd(r1, abs(s1)) != 1:
        return None
    res = Fraction(r1, s1)
    if (res.numerator - u * res.denominator) % m:
        return None
    return res


def rational_reconstruct(x, B: int):
    """The unique a/b congruent to x with |a|, |b| <= B, or NotFound.

    ``x`` is a PadicApprox, a pair (residue, modulus) or a pair of
    PadicApprox for the real and imaginary parts of a Gaussian rational.
    The modulus must exceed 2 B^2.
    """
    if isinstance(x, tuple) and len(x) == 2 and all(isinstance(t, PadicApprox) for t in x):
        re = rational_reconstruct(x[0], B)
        im = rational_reconstruct(x[1], B)
        return simplify_exact(GaussianRational(re, im))
    if isinstance(x, PadicApprox):
        if x.is_zero:
            if x.p**x.valuation <= 2 * B * B:
                raise ValueError(f"p^k = {x.p}^{x.valuation} must exceed 2B^2")
            return Fraction(0)
        p, v = x.p, x.valuation
        m = x.modulus
        if m <= 2 * B * B:
            raise ValueError(f"p^k = {p}^{x.digits} must exceed 2B^2 = {2 * B * B}")
        res = _wang(x.unit, m, B)
        if res is None:
            raise NotFound(f"no fraction with |a|, |b| <= {B}")
        res = res * Fraction(p) ** v
        if max(abs(res.numerator), res.denominator) > B:
            raise NotFound(f"reconstruction leaves the bound {B} after restoring p^{v}")
        return res
    u, m = x
    if m <= 2 * B * B:
        raise ValueError(f"modulus {m} must exceed 2B^2 = {2 * B * B}")
    res = _wang(int(u), int(m), B)
    if res is None:
        raise NotFound(f"no fraction with |a|, |b| <= {B}")
    return res


def rational_from_ball(x, B: int):
    """Fraction (or Gaussian rational) of height <= B inside the ball, else NotFound.

    Uses the best continued-fraction approximant of the centre; if any
    fraction with denominator <= B lies in a ball of radius < 1/(2B^2), it
    is that one.
    """
    z = to_acb(x)

    def one(a: flint.arb) -> Fraction:
        c = arb_mid(a).limit_denominator(B)
        if max(abs(c.numerator), c.denominator) > B or not arb_lower(a) <= c <= arb_upper(a):
            raise NotFound(f"no fraction of height <= {B} in the ball")
        return c

    re = one(z.real)
    im = Fraction(0) if z.imag.contains(0) and arb_mid(z.imag) == 0 else one(z.imag)
    return simplify_exact(GaussianRational(re, im))

