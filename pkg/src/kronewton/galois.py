"""Splitting fields and Lagrange resolvents through the universal decomposition algebra."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import flint

from .exact_arith import acb_mid, arb_mid, arb_upper, round_to_dyadic, simplify_exact, working_precision
from .kronecker import ComponentSolution, approx_to_kronecker
from .lattice import NotFound, min_poly_from_approx, normalize_poly
from .newton import ApproxZero, certify
from .polysys import MultiPoly, PolySystem, variables

MAX_DEGREE = 7
LATTICE_DIMENSION_CAP = 30


class ReducibleInput(ValueError):
    pass


class WeightsExhausted(ArithmeticError):
    pass


def _coeffs(f) -> list[int]:
    if isinstance(f, flint.fmpz_poly):
        return [int(c) for c in f.coeffs()]
    if isinstance(f, MultiPoly):
        return [int(c) for c in f.coefficients_univariate()]
    return [int(c) for c in f]


def elementary_symmetric(X: Sequence[MultiPoly], k: int) -> MultiPoly:
    n_vars = X[0].n_vars
    # e_k via the recurrence over prefixes
    e = [MultiPoly.constant(n_vars, 1)] + [MultiPoly.constant(n_vars, 0)] * k
    for x in X:
        for j in range(k, 0, -1):
            e[j] = e[j] + e[j - 1] * x
    return e[k]


def universal_system(f) -> PolySystem:
    """sigma_k(X_1..X_d) - (-1)^k a_{d-k} for k = 1..d, f = sum a_i X^i monic.

    The sign convention is prod (X - X_i) = sum_k (-1)^k sigma_k X^(d-k).
    """
    a = _coeffs(f)
    while a and a[-1] == 0:
        a.pop()
    d = len(a) - 1
    if d < 1:
        raise ValueError("need degree >= 1")
    if a[-1] != 1:
        raise ValueError("f must be monic")
    X = variables(d)
    polys = [elementary_symmetric(X, k) - (-1) ** k * a[d - k] for k in range(1, d + 1)]
    return PolySystem(polys)


@dataclass
class ResolventResult:
    f: list[int]
    resolvent: list[int]
    galois_order: int
    lam: tuple[int, ...]
    roots: list  # certified approximate zeros of f, in the chosen ordering
    splitting_field: ComponentSolution | None = None
    method: str = "lattice"
    telemetry: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "f": [str(c) for c in self.f],
            "resolvent": [str(c) for c in self.resolvent],
            "galois_order": self.galois_order,
            "lambda": list(self.lam),
            "method": self.method,
            "roots": [z.to_json()["point"][0] for z in self.roots],
        }
        if self.splitting_field is not None:
            out["splitting_field"] = self.splitting_field.solution.to_json()
        return out


def _check_input(a: list[int]) -> int:
    d = len(a) - 1
    if d < 1 or a[-1] != 1:
        raise ValueError("f must be monic of degree >= 1")
    if d > MAX_DEGREE:
        raise ValueError(f"degree {d} exceeds the supported bound {MAX_DEGREE}")
    fac = flint.fmpz_poly(a).factor()[1]
    if len(fac) != 1 or fac[0][1] != 1:
        raise ReducibleInput("f is reducible over Q")
    return d


def root_balls(a: Sequence[int], prec: int) -> list[flint.acb]:
    with working_precision(prec):
        return [r for r, _ in flint.fmpz_poly(list(a)).complex_roots()]


def certified_roots(a: Sequence[int], bits: int = 64, prec: int = 256) -> list[ApproxZero]:
    """Dyadic approximate zeros of every root of f, each certified."""
    F = PolySystem([MultiPoly.univariate(list(a))])
    out = []
    with working_precision(prec):
        for r in root_balls(a, prec):
            z = [simplify_exact(round_to_dyadic(r, bits))]
            out.append(certify(F, z, [r], prec=prec))
    return out


def weight_sequence(d: int, seed: int = 0, count: int = 12):
    """(1, d+1, (d+1)^2, ...) first, then seeded random weights."""
    yield tuple((d + 1) ** j for j in range(d))
    rng = random.Random(seed)
    for _ in range(count):
        yield tuple(rng.randint(-4 * d * d, 4 * d * d) for _ in range(d))


def u_values(roots: Sequence[flint.acb], lam: Sequence[int]) -> dict[tuple, flint.acb]:
    d = len(roots)
    return {pi: sum((lam[j] * roots[pi[j]] for j in range(d)), flint.acb(0)) for pi in permutations(range(d))}


def _all_distinct(vals: Sequence[flint.acb]) -> bool:
    vals = sorted(vals, key=lambda z: float(z.real.mid()))
    for i, x in enumerate(vals):
        for y in vals[i + 1 :]:
            if float(y.real.mid()) - float(x.real.mid()) > 1e-6 and not x.real.overlaps(y.real):
                break
            if x.overlaps(y):
                return False
    return True


def _candidate_degrees(d: int) -> list[int]:
    full = math.factorial(d)
    return [k for k in range(d, full + 1, d) if full % k == 0]


def full_resolvent(a: Sequence[int], lam: Sequence[int], prec: int = 256) -> list[int]:
    """prod over all d! orderings of (T - u_pi), rounded to Z[T].

    The coefficients are integers (symmetric in algebraic integers), so
    rounding is exact once every ball has radius < 1/2; precision doubles
    until then.
    """
    while True:
        with working_precision(prec):
            vals = list(u_values(root_balls(a, prec), lam).values())
            poly = flint.acb_poly([1])
            for v in vals:
                poly = poly * flint.acb_poly([-v, 1])
            coeffs = []
            ok = True
            for c in poly.coeffs():
                if arb_upper(c.real.rad()) >= Fraction(1, 4) or not c.imag.contains(0):
                    ok = False
                    break
                coeffs.append(_nearest(c.real))
            if ok and all(poly.coeffs()[i].real.contains(coeffs[i]) for i in range(len(coeffs))):
                return coeffs
        prec *= 2


def _nearest(x: flint.arb) -> int:
    return math.floor(arb_mid(x) + Fraction(1, 2))


def orbit_product(a: Sequence[int], lam: Sequence[int], resolvent: Sequence[int], prec: int = 512) -> list[int]:
    """prod of (T - u_pi) over the orderings whose u-value is a root of ``resolvent``."""
    R = flint.fmpz_poly(list(resolvent))
    while True:
        with working_precision(prec):
            vals = [v for v in u_values(root_balls(a, prec), lam).values() if R(v).contains(0)]
            poly = flint.acb_poly([1])
            for v in vals:
                poly = poly * flint.acb_poly([-v, 1])
            cs = poly.coeffs()
            if all(arb_upper(c.real.rad()) < Fraction(1, 4) for c in cs):
                return [_nearest(c.real) for c in cs]
        prec *= 2


def lagrange_resolvent(
    f,
    lam: Sequence[int] | None = None,
    seed: int = 0,
    splitting_field: bool = True,
    height_bits: int | None = None,
) -> ResolventResult:
    """Lagrange resolvent of a monic irreducible f and the order of its Galois group.

    The resolvent is the minimal polynomial of u_0 = sum lambda_j alpha_j at
    one fixed ordering of the roots; its degree is #Gal(f).
    """
    a = _coeffs(f)
    while a and a[-1] == 0:
        a.pop()
    d = _check_input(a)
    roots0 = certified_roots(a)
    weights = [tuple(int(x) for x in lam)] if lam is not None else list(weight_sequence(d, seed))
    for w in weights:
        if len(w) != d:
            raise ValueError(f"need {d} weights")
        vals = u_values(root_balls(a, 128), w)
        if not _all_distinct(list(vals.values())):
            continue
        degrees = _candidate_degrees(d)
        method = "lattice"

        def u0(prec, w=w):
            rts = root_balls(a, prec)
            return sum((w[j] * rts[j] for j in range(d)), flint.acb(0))

        mag_bits = _max_modulus_bits(vals.values())
        R = None
        for k in degrees:
            if k + 1 > LATTICE_DIMENSION_CAP:
                break
            hb = height_bits or _orbit_height_bits(k, mag_bits)
            try:
                R = min_poly_from_approx(u0, k, hb, degrees=[k]).polynomial
                break
            except NotFound:
                continue
        if R is None:
            method = "full-resolvent factorization"
            R = _factor_full(a, w)
        hb = max(abs(c) for c in R).bit_length()
        order = len(R) - 1
        comp = None
        if splitting_field:
            z = [simplify_exact(acb_mid(x)) for x in root_balls(a, 256)]
            comp = approx_to_kronecker(universal_system(a), z, lam=w, degree_bound=order, height_bits=max(hb, 32))
        return ResolventResult(a, R, order, w, roots0, comp, method, {"height_bits": hb})
    raise WeightsExhausted("no weight vector separated all orderings")


def _max_modulus_bits(vals) -> int:
    """ceil(log2 max(1, |u_pi|)) over all orderings, from the ball upper bounds."""
    top = max((arb_upper(abs(v)) for v in vals), default=Fraction(1))
    top = max(top, Fraction(1))
    return (math.ceil(top)).bit_length()


def _orbit_height_bits(k: int, mag_bits: int) -> int:
    # a monic degree-k factor with roots of modulus <= 2^mag_bits has
    # coefficients <= binom(k, i) 2^(i mag_bits) <= 2^(k (mag_bits + 1))
    return k * (mag_bits + 1)


def _factor_full(a: Sequence[int], lam: Sequence[int]) -> list[int]:
    full = full_resolvent(a, lam)
    d = len(a) - 1
    with working_precision(512):
        rts = root_balls(a, 512)
        u = sum((lam[j] * rts[j] for j in range(d)), flint.acb(0))
        for fac, _ in flint.fmpz_poly(full).factor()[1]:
            if fac(u).contains(0):
                return normalize_poly([int(c) for c in fac.coeffs()])
    raise ArithmeticError("no factor of the full resolvent vanishes at u_0")


def galois_order(f, seed: int = 0) -> int:
    return lagrange_resolvent(f, seed=seed, splitting_field=False).galois_order
