"""Newton iteration, the gamma quantity and approximate-zero certificates.

Archimedean quantities are rigorous balls (flint ``acb``/``arb``); p-adic
ones are exact, with gamma_p represented as p^e for a rational exponent e.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import flint
import numpy as np

from . import linalg
from .exact_arith import (
    DEFAULT_PRECISION,
    GaussianRational,
    HeightValue,
    PadicApprox,
    Place,
    acb_mid,
    arb_lower,
    arb_mid,
    arb_upper,
    as_arb,
    format_gaussian,
    gaussian_places_above,
    height,
    is_exact,
    padic_valuation,
    round_to_dyadic,
    simplify_exact,
    to_acb,
    vector_norm,
    working_precision,
)
from .polysys import MultiPoly, PolySystem, SingularJacobian, variables


class CertificationRejected(Exception):
    """The gamma-Theorem inequality fails."""

    def __init__(self, message, product=None):
        super().__init__(message)
        self.product = product


class Inconclusive(Exception):
    """Enclosures too loose to decide; refine precision and retry."""


class EnclosureFailed(ArithmeticError):
    pass


class InsufficientPrecision(ArithmeticError):
    pass


class NonIntegralPoint(ValueError):
    pass


def gamma_constant() -> flint.arb:
    """(3 - sqrt 7)/2 as a ball at the current precision."""
    return (3 - flint.arb(7).sqrt()) / 2


def _multiplicity(idx: tuple) -> int:
    counts: dict[int, int] = {}
    for j in idx:
        counts[j] = counts.get(j, 0) + 1
    m = math.factorial(len(idx))
    for c in counts.values():
        m //= math.factorial(c)
    return m


# ---------------------------------------------------------------------------
# Newton operator
# ---------------------------------------------------------------------------


def newton_step(F: PolySystem, z: Sequence) -> list:
    """N_F(z) = z - DF(z)^-1 F(z), exactly for exact points, in balls otherwise."""
    if any(isinstance(x, (flint.acb, flint.arb)) for x in z):
        zz = [to_acb(x) for x in z]
        J = flint.acb_mat([[to_acb(v) for v in row] for row in F.jacobian(zz)])
        rhs = flint.acb_mat([[to_acb(v)] for v in F.evaluate(zz)])
        try:
            d = J.solve(rhs)
        except (ZeroDivisionError, ValueError) as exc:
            raise SingularJacobian("DF(z) not invertible in ball arithmetic") from exc
        return [zz[i] - d[i, 0] for i in range(F.n)]
    if any(isinstance(x, PadicApprox) for x in z):
        raise TypeError("use hensel lifting for p-adic approximations")
    J = F.jacobian(z)
    v = F.evaluate(z)
    try:
        d = linalg.solve(J, v)
    except SingularJacobian as exc:
        raise SingularJacobian(f"DF(z) is singular at z = {list(map(format_gaussian, z))}") from exc
    return [simplify_exact(zi - di) for zi, di in zip(z, d)]


@dataclass
class NewtonTrajectory:
    points: list
    errors: list  # upper bounds on ||z_i - zeta|| (None without a reference)
    errors_lower: list
    place: Place

    @property
    def ratios(self) -> list:
        """Measured ||z_k - zeta|| / ||z_0 - zeta|| (upper over lower), as floats."""
        if not self.errors or self.errors[0] is None:
            return []
        base = self.errors_lower[0]
        out = []
        for e in self.errors[1:]:
            if base == 0:
                out.append(0.0)
            else:
                out.append(float(Fraction(e) / Fraction(base)) if _is_frac(e, base) else float(arb_upper(as_arb(e) / as_arb(base))))
        return out

    def quadratic_violations(self) -> list[int]:
        """Steps k >= 1 where ||z_k - zeta|| <= 2^-(2^(k-1)) ||z_0 - zeta|| cannot be confirmed."""
        bad = []
        if not self.errors or self.errors[0] is None:
            raise ValueError("trajectory has no reference zero")
        base = self.errors_lower[0]
        for k, e in enumerate(self.errors[1:], start=1):
            rhs = Fraction(1, 2 ** (2 ** (k - 1))) * Fraction(base)
            if Fraction(e) > rhs:
                bad.append(k)
        return bad


def _is_frac(*xs) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in xs)


def _distance_bounds(z: Sequence, zeta: Sequence, place: Place) -> tuple[Fraction, Fraction]:
    """(lower, upper) bounds on ||z - zeta||_nu as exact rationals."""
    if place.is_archimedean:
        if all(is_exact(x) for x in zeta) and all(is_exact(x) for x in z):
            d = vector_norm([simplify_exact(a - b) for a, b in zip(z, zeta)], place)
            if isinstance(d, Fraction):
                return d, d
            return arb_lower(d), arb_upper(d)
        diffs = [to_acb(a) - to_acb(b) for a, b in zip(z, zeta)]
        d = vector_norm(diffs, place)
        return max(arb_lower(d), Fraction(0)), arb_upper(d)
    best_lo, best_hi = Fraction(0), Fraction(0)
    for a, b in zip(z, zeta):
        if isinstance(b, PadicApprox):
            diff = b._coerce(Fraction(a) if not isinstance(a, PadicApprox) else a) - b
            if diff.is_zero:
                hi = Fraction(1, place.p**diff.valuation) if diff.valuation >= 0 else Fraction(place.p ** (-diff.valuation))
                best_hi = max(best_hi, hi)
            else:
                a_ = diff.abs()
                best_lo, best_hi = max(best_lo, a_), max(best_hi, a_)
        else:
            v = padic_valuation(simplify_exact(a - b), place)
            if v == math.inf:
                continue
            val = Fraction(place.p) ** int(-v) if Fraction(v).denominator == 1 else None
            if val is None:
                raise ValueError("non-integral valuation distance")
            best_lo, best_hi = max(best_lo, val), max(best_hi, val)
    return best_lo, best_hi


def run_newton(
    F: PolySystem,
    z0: Sequence,
    k: int,
    place: Place | None = None,
    zeta_ref: Sequence | None = None,
    precision: int | None = None,
) -> NewtonTrajectory:
    """k Newton steps from z0, with error bounds against a reference zero.

    Steps are exact by default.  With ``precision`` they run in ball
    arithmetic at that many bits, so each point is an enclosure of the
    exact iterate; exact heights grow geometrically and this keeps larger
    systems affordable without giving up rigour.
    """
    place = place or Place.archimedean()
    points = [list(z0)]
    if precision is None:
        for _ in range(k):
            points.append(newton_step(F, points[-1]))
    else:
        with working_precision(precision):
            cur = [to_acb(x) for x in z0]
            for _ in range(k):
                cur = newton_step(F, cur)
                points.append(cur)
    errors, lowers = [], []
    if zeta_ref is not None:
        prec = max(_ref_precision(zeta_ref), precision or 0)
        with working_precision(prec):
            for z in points:
                lo, hi = _distance_bounds(z, zeta_ref, place)
                errors.append(hi)
                lowers.append(lo)
    return NewtonTrajectory(points, errors, lowers, place)


def _ref_precision(zeta) -> int:
    bits = [x.value.real.rel_accuracy_bits() for x in zeta if hasattr(x, "value")]
    prec = DEFAULT_PRECISION
    for x in zeta:
        if isinstance(x, flint.acb):
            prec = max(prec, flint.ctx.prec)
    return max(prec, *(bits or [0]))


# ---------------------------------------------------------------------------
# Rigorous enclosure of a zero (Krawczyk)
# ---------------------------------------------------------------------------


def refine_center(F: PolySystem, z: Sequence, prec: int, iterations: int = 200) -> list:
    """Floating Newton at ``prec`` bits on ball midpoints (no rigour claimed)."""
    with working_precision(prec + 32):
        c = [to_acb(x).mid() for x in z]
        tol = flint.arb(2) ** (-prec)
        for _ in range(iterations):
            try:
                nxt = [x.mid() for x in newton_step(F, c)]
            except SingularJacobian:
                raise
            delta = max((abs(a - b) for a, b in zip(nxt, c)), key=lambda a: arb_upper(a))
            scale = max(flint.arb(1), max((abs(x) for x in nxt), key=lambda a: arb_upper(a)))
            c = nxt
            if arb_upper(delta) <= arb_upper(tol * scale):
                break
        return c


def enclose_zero(F: PolySystem, z: Sequence, prec: int = DEFAULT_PRECISION, refine: bool = True) -> list:
    """Balls that provably contain a zero of F near z (Krawczyk test).

    Raises EnclosureFailed when no contracting box is found.
    """
    c = refine_center(F, z, prec) if refine else [to_acb(x).mid() for x in z]
    n = F.n
    with working_precision(prec + 32):
        Jc = flint.acb_mat([[to_acb(v) for v in row] for row in F.jacobian(c)])
        try:
            Y = Jc.mid().inv().mid()
        except (ZeroDivisionError, ValueError) as exc:
            raise SingularJacobian("Jacobian singular at the approximate zero") from exc
        Fc = flint.acb_mat([[to_acb(v)] for v in F.evaluate(c)])
        YF = Y * Fc
        r = max(arb_upper(abs(YF[i, 0])) for i in range(n)) * 4
        r = max(r, Fraction(1, 2 ** (prec - 4)))
        ident = flint.acb_mat([[int(i == j) for j in range(n)] for i in range(n)])
        for _ in range(40):
            rr = flint.arb(0, flint.fmpq(r.numerator, r.denominator))
            e = flint.acb(rr, rr)
            X = [c[i] + e for i in range(n)]
            JX = flint.acb_mat([[to_acb(v) for v in row] for row in F.jacobian(X)])
            E = flint.acb_mat([[e] for _ in range(n)])
            K = [c[i] - YF[i, 0] for i in range(n)]
            corr = (ident - Y * JX) * E
            K = [K[i] + corr[i, 0] for i in range(n)]
            if all(X[i].contains_interior(K[i]) for i in range(n)):
                return K
            r *= 4
        raise EnclosureFailed("Krawczyk operator did not contract")


def ball_point_precision(zeta: Sequence) -> int:
    return max(
        [DEFAULT_PRECISION]
        + [int(x.real.rel_accuracy_bits()) + 32 for x in zeta if isinstance(x, flint.acb) and x.real.rel_accuracy_bits() < 10**6]
    )


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaBound:
    """Enclosure lower <= gamma_nu(F, zeta) <= upper.

    Archimedean bounds are arb balls (use their endpoints); p-adic gamma is
    exact and equals p**exponent (exponent None when gamma = 0).
    """

    place: Place
    lower: object
    upper: object
    exponent: Fraction | None = None

    @property
    def is_zero(self) -> bool:
        if self.place.is_archimedean:
            return arb_upper(as_arb(self.upper)) == 0
        return self.exponent is None

    def upper_fraction(self) -> Fraction:
        return self.upper if isinstance(self.upper, Fraction) else arb_upper(self.upper)

    def lower_fraction(self) -> Fraction:
        return self.lower if isinstance(self.lower, Fraction) else max(arb_lower(self.lower), Fraction(0))

    def log_upper(self) -> float:
        """Natural log of the upper bound (-inf for gamma = 0)."""
        if not self.place.is_archimedean:
            return -math.inf if self.exponent is None else float(self.exponent) * math.log(self.place.p)
        u = self.upper_fraction()
        return -math.inf if u == 0 else _log_fraction(u)

    def log_lower(self) -> float:
        if not self.place.is_archimedean:
            return self.log_upper()
        lo = self.lower_fraction()
        return -math.inf if lo == 0 else _log_fraction(lo)


def _log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def _exact_tensors(F: PolySystem, zeta: Sequence) -> list[tuple[int, dict]]:
    """[(k, {index: DF^-1 D^k F / k! column})] for k = 2..deg, exact."""
    A = F.jacobian(zeta)
    try:
        Ainv = linalg.inverse(A)
    except SingularJacobian as exc:
        raise SingularJacobian("DF(zeta) is singular") from exc
    out = []
    for k in range(2, F.degree_bound + 1):
        T = F.derivative_tensor(zeta, k)
        fk = math.factorial(k)
        entries = {}
        for idx, vals in T.items():
            w = [simplify_exact(sum((a * b for a, b in zip(row, vals)), Fraction(0)) / fk) for row in Ainv]
            if any(w):
                entries[idx] = w
        out.append((k, entries))
    return out


def _padic_gamma_from_tensors(tensors, place: Place) -> GammaBound:
    exponent = None
    for k, entries in tensors:
        vk = math.inf
        for w in entries.values():
            for x in w:
                if x:
                    vk = min(vk, padic_valuation(x, place))
        if vk == math.inf:
            continue
        e = Fraction(-vk) / (k - 1)
        exponent = e if exponent is None else max(exponent, e)
    if exponent is None:
        return GammaBound(place, Fraction(0), Fraction(0), None)
    if exponent.denominator == 1:
        val = Fraction(place.p) ** int(exponent)
        return GammaBound(place, val, val, exponent)
    val = flint.arb(place.p) ** flint.arb(flint.fmpq(exponent.numerator, exponent.denominator))
    return GammaBound(place, val, val, exponent)


def _padic_gamma(F: PolySystem, zeta: Sequence, place: Place) -> GammaBound:
    if any(isinstance(x, GaussianRational) and x.im for x in zeta) and place.p % 4 == 1 and place.branch is None:
        raise ValueError(f"Gaussian zero at split prime {place.p}: choose a place via gaussian_places_above")
    if any(isinstance(x, PadicApprox) for x in zeta):
        return _padic_gamma_approx(F, zeta, place)
    return _padic_gamma_from_tensors(_exact_tensors(F, zeta), place)


def _padic_gamma_approx(F: PolySystem, zeta: Sequence, place: Place) -> GammaBound:
    """gamma_p at a zero known modulo p^N, with a perturbation check.

    Valid for integral zeros of degree-2 systems: with A = DF(zeta) and T the
    constant Hessian term, gamma_p is unchanged by perturbations of size p^-N
    once ||A^-1||^2 p^-N ||T|| < ||A^-1 T||.
    """
    p = place.p
    if F.degree_bound > 2:
        raise InsufficientPrecision("p-adic approximations are supported for degree <= 2 only")
    N = min(x.absolute_precision for x in zeta if isinstance(x, PadicApprox))
    rep = [x.residue() if isinstance(x, PadicApprox) else Fraction(x) for x in zeta]
    if any(padic_valuation(r, place) < 0 for r in rep):
        raise NonIntegralPoint("zeta must be integral at p")
    res = _padic_gamma_from_tensors(_exact_tensors(F, rep), place)
    if res.exponent is None:
        return res
    Ainv = linalg.inverse(F.jacobian(rep))
    inv_val = min(padic_valuation(x, place) for row in Ainv for x in row if x)
    T = F.derivative_tensor(rep, 2)
    t_val = min((padic_valuation(Fraction(v, 2), place) for vals in T.values() for v in vals if v), default=math.inf)
    # ||A^-1||^2 p^-N ||T|| < gamma  <=>  2*inv_val + N + t_val > -exponent
    if 2 * inv_val + N + t_val <= -res.exponent:
        raise InsufficientPrecision(f"need more than {N} p-adic digits to pin gamma_{p}")
    return res


def _acb_tensors(F: PolySystem, zeta: Sequence) -> list[tuple[int, dict]]:
    zz = [to_acb(x) for x in zeta]
    A = flint.acb_mat([[to_acb(v) for v in row] for row in F.jacobian(zz)])
    try:
        Ainv = A.inv()
    except (ZeroDivisionError, ValueError) as exc:
        raise SingularJacobian("DF(zeta) not invertible on the enclosure") from exc
    out = []
    n = F.n
    for k in range(2, F.degree_bound + 1):
        T = F.derivative_tensor(zz, k)
        fk = math.factorial(k)
        entries = {}
        for idx, vals in T.items():
            col = flint.acb_mat([[to_acb(v)] for v in vals])
            w = Ainv * col
            entries[idx] = [w[i, 0] / fk for i in range(n)]
        out.append((k, entries))
    return out


def _scaled_dense(entries: dict, n: int, k: int) -> np.ndarray:
    """Dense complex tensor M[i, j1..jk] from sorted-index entries, scaled to max 1."""
    mids = {idx: [acb_mid(x) for x in w] for idx, w in entries.items()}
    mags = [max(abs(c.re), abs(c.im)) for w in mids.values() for c in w]
    top = max(mags, default=Fraction(0))
    out = np.zeros((n,) + (n,) * k, dtype=complex)
    if top == 0:
        return out
    shift = top.numerator.bit_length() - top.denominator.bit_length()
    scale = Fraction(2) ** (-shift)
    for idx, w in mids.items():
        for perm in set(permutations(idx)):
            for i, c in enumerate(w):
                out[(i,) + perm] = complex(float(c.re * scale), float(c.im * scale))
    return out


def _bilinear_search(M: np.ndarray, rng: random.Random, starts: int = 4, iters: int = 30):
    """Alternating maximisation of ||M(u, v)|| over unit u, v (float search)."""
    n = M.shape[1]
    best = (0.0, None, None)
    for s in range(starts):
        if s < n:
            u = np.zeros(n, dtype=complex)
            u[s] = 1
        else:
            u = np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)])
            u /= np.linalg.norm(u)
        v = u
        for _ in range(iters):
            B = np.einsum("ijk,j->ik", M, u)
            _, _, vh = np.linalg.svd(B)
            v = vh[0].conj()
            C = np.einsum("ijk,k->ij", M, v)
            _, _, uh = np.linalg.svd(C)
            u = uh[0].conj()
        val = np.linalg.norm(np.einsum("ijk,j,k->i", M, u, v))
        if val > best[0]:
            best = (val, u, v)
    return best[1], best[2]


def _rigorous_value(entries: dict, n: int, vecs: list) -> flint.arb:
    """||M(u_1, ..., u_k)|| / prod ||u_i|| in balls (a lower bound on ||M||)."""
    k = len(vecs)
    res = [flint.acb(0)] * n
    for idx, w in entries.items():
        for perm in set(permutations(idx)):
            coef = flint.acb(1)
            for slot, j in enumerate(perm):
                coef *= vecs[slot][j]
            res = [res[i] + w[i] * coef for i in range(n)]
    num = sum((_abs_sq(x) for x in res), flint.arb(0)).nonnegative_part().sqrt()
    den = flint.arb(1)
    for v in vecs:
        den *= sum((_abs_sq(x) for x in v), flint.arb(0)).nonnegative_part().sqrt()
    return num / den


def _abs_sq(x: flint.acb) -> flint.arb:
    return x.real * x.real + x.imag * x.imag


def _arch_gamma(F: PolySystem, zeta: Sequence, place: Place, prec: int, search_lower: bool = True) -> GammaBound:
    with working_precision(prec):
        tensors = _acb_tensors(F, zeta)
        n = F.n
        upper = flint.arb(0)
        lower = flint.arb(0)
        rng = random.Random(0)
        for k, entries in tensors:
            frob2 = flint.arb(0)
            for idx, w in entries.items():
                frob2 += _multiplicity(idx) * sum((_abs_sq(x) for x in w), flint.arb(0))
            cap = frob2.nonnegative_part().sqrt()
            if arb_upper(cap) == 0:
                continue
            uk = cap if k == 2 else as_arb(arb_upper(cap)) ** flint.arb(flint.fmpq(1, k - 1))
            upper = upper.max(uk)
            if not search_lower:
                continue
            if n == 1:
                lk = uk
            else:
                dense = _scaled_dense(entries, n, k)
                if k == 2:
                    u, v = _bilinear_search(dense, rng)
                    vecs = [u, v]
                else:
                    # symmetric: evaluate on the diagonal at the best basis/random vector
                    cands = [np.eye(n, dtype=complex)[j] for j in range(n)]
                    cands += [np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]) for _ in range(4)]
                    vals = [np.linalg.norm(_sym_apply(dense, c / np.linalg.norm(c), k)) for c in cands]
                    best = cands[int(np.argmax(vals))]
                    vecs = [best] * k
                if vecs[0] is None:
                    continue
                exact_vecs = [[_complex_to_acb(x) for x in vec] for vec in vecs]
                val = _rigorous_value(entries, n, exact_vecs)
                lo = max(arb_lower(val), Fraction(0))
                lk = as_arb(lo) if k == 2 else (as_arb(lo) ** flint.arb(flint.fmpq(1, k - 1)) if lo > 0 else flint.arb(0))
            lower = lower.max(lk) if arb_lower(lk) > arb_lower(lower) else lower
        return GammaBound(place, lower, upper, None)


def _sym_apply(M: np.ndarray, u: np.ndarray, k: int) -> np.ndarray:
    out = M
    for _ in range(k):
        out = np.tensordot(out, u, axes=([out.ndim - 1], [0]))
    return out


def _complex_to_acb(x: complex) -> flint.acb:
    re = Fraction(float(np.real(x))).limit_denominator(2**40)
    im = Fraction(float(np.imag(x))).limit_denominator(2**40)
    return to_acb(GaussianRational(re, im))


def gamma(F: PolySystem, zeta: Sequence, place: Place | None = None, prec: int = DEFAULT_PRECISION) -> GammaBound:
    """gamma_nu(F, zeta) = sup_k ||DF(zeta)^-1 D^k F(zeta) / k!||^(1/(k-1)).

    ``zeta`` may be exact, a list of balls enclosing the zero (archimedean)
    or p-adic approximations.  Archimedean upper bounds use the Frobenius
    norm of the multilinear map, which dominates its operator norm.
    """
    place = place or Place.archimedean()
    if len(zeta) != F.n:
        raise ValueError("point dimension mismatch")
    if place.is_archimedean:
        prec = max(prec, ball_point_precision(zeta))
        return _arch_gamma(F, zeta, place, prec)
    return _padic_gamma(F, zeta, place)


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------


@dataclass
class Certificate:
    gamma_upper: Fraction
    distance_upper: Fraction
    product_upper: Fraction
    margin: flint.arb  # (3 - sqrt 7)/2 - product_upper
    gamma_lower: Fraction | None = None
    iterations_log: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "gamma_upper": _fmt_float(self.gamma_upper),
            "distance_upper": _fmt_float(self.distance_upper),
            "product_upper": _fmt_float(self.product_upper),
            "margin": _fmt_float(arb_lower(self.margin)),
        }


def _fmt_float(x: Fraction) -> str:
    x = Fraction(x)
    if x == 0:
        return "0"
    return f"{float(x):.12g}"


@dataclass
class ApproxZero:
    point: tuple
    place: Place
    certificate: Certificate
    associate: tuple | None = None
    rational: bool = False

    def to_json(self) -> dict:
        return {
            "point": [format_gaussian(x) for x in self.point],
            "place": str(self.place),
            "verdict": "accepted",
            "margin": _fmt_float(arb_lower(self.certificate.margin)),
            "certificate": self.certificate.to_json(),
            "rational": self.rational,
        }


def certify(
    F: PolySystem,
    z: Sequence,
    zeta_enclosure: Sequence,
    place: Place | None = None,
    prec: int = DEFAULT_PRECISION,
) -> ApproxZero:
    """Accept z when ||z - zeta||_nu * gamma_nu(F, zeta) <= (3 - sqrt 7)/2.

    Both factors are bounded above rigorously over the whole enclosure.
    Raises CertificationRejected when the inequality fails even for the
    lower bounds, Inconclusive when the enclosure is too loose to decide.
    """
    place = place or Place.archimedean()
    z = tuple(simplify_exact(x) for x in z)
    if place.is_archimedean:
        prec = max(prec, ball_point_precision(zeta_enclosure))
    with working_precision(prec):
        c = gamma_constant()
        d_lo, d_hi = _distance_bounds(z, zeta_enclosure, place)
        g = gamma(F, zeta_enclosure, place, prec)
        g_hi, g_lo = g.upper_fraction(), g.lower_fraction()
        prod_hi = d_hi * g_hi
        prod_lo = d_lo * g_lo
        if as_arb(prod_hi) <= c and arb_upper(as_arb(prod_hi)) <= arb_lower(c):
            cert = Certificate(g_hi, d_hi, prod_hi, c - as_arb(prod_hi), g_lo)
            return ApproxZero(z, place, cert, tuple(zeta_enclosure))
        if arb_lower(as_arb(prod_lo)) > arb_upper(c):
            raise CertificationRejected(
                f"||z - zeta|| * gamma >= {float(prod_lo):.6g} > (3 - sqrt 7)/2", product=prod_lo
            )
        raise Inconclusive(f"product in [{float(prod_lo):.6g}, {float(prod_hi):.6g}] straddles the threshold")


# ---------------------------------------------------------------------------
# Eckardt-Young
# ---------------------------------------------------------------------------


@dataclass
class EckardtYoungReport:
    place: Place
    distance: object  # 1/||A^-1|| in the operator-norm reading (archimedean) or max-norm (p-adic)
    inverse_norm: object
    distance_frobenius_reading: object = None
    inverse_norm_frobenius: object = None
    sigma_min: object = None


def eckardt_young(A: Sequence[Sequence], place: Place | None = None, prec: int = DEFAULT_PRECISION) -> EckardtYoungReport:
    """Distance from A to the singular matrices, 1/||A^-1||_nu.

    Archimedean: both the operator-norm reading (sigma_min(A), the classical
    Frobenius distance) and the Frobenius-norm reading 1/||A^-1||_F.
    """
    place = place or Place.archimedean()
    A = [[simplify_exact(x) for x in row] for row in A]
    try:
        Ainv = linalg.inverse(A)
    except SingularJacobian as exc:
        raise SingularJacobian("matrix is singular") from exc
    if not place.is_archimedean:
        v = min(padic_valuation(x, place) for row in Ainv for x in row if x)
        if Fraction(v).denominator != 1:
            inv_norm = flint.arb(place.p) ** flint.arb(flint.fmpq(-Fraction(v).numerator, Fraction(v).denominator))
            return EckardtYoungReport(place, 1 / inv_norm, inv_norm, 1 / inv_norm, inv_norm)
        inv_norm = Fraction(place.p) ** int(-v)
        return EckardtYoungReport(place, 1 / inv_norm, inv_norm, 1 / inv_norm, inv_norm)
    with working_precision(prec):
        frob = vector_norm([x for row in Ainv for x in row], place)
        M = flint.acb_mat([[to_acb(x) for x in row] for row in A])
        H = M.conjugate().transpose() * M
        eigs = H.eig(multiple=True)
        lam = None
        for e in eigs:
            r = e.real
            lam = r if lam is None else lam.min(r)
        lam = lam.nonnegative_part() if hasattr(lam, "nonnegative_part") else lam
        sigma = lam.sqrt()
        frob_ball = as_arb(frob) if isinstance(frob, Fraction) else frob
        return EckardtYoungReport(
            place,
            distance=sigma,
            inverse_norm=1 / sigma,
            distance_frobenius_reading=1 / frob_ball,
            inverse_norm_frobenius=frob,
            sigma_min=sigma,
        )


# ---------------------------------------------------------------------------
# Universal gamma
# ---------------------------------------------------------------------------


@dataclass
class GammaReport:
    per_place: list  # [(Place, GammaBound)]
    universal: flint.arb  # upper bound on gamma~
    universal_log: flint.arb
    support: list  # places with gamma_nu > 1
    degree_K: int
    support_divisor: int
    primes_scanned: list

    def gamma_at(self, place: Place) -> GammaBound:
        for pl, g in self.per_place:
            if pl == place:
                return g
        if not place.is_archimedean and place.p not in self.primes_scanned:
            raise KeyError(f"place {place} outside the scanned set")
        # scanned prime that was not recorded: gamma_p <= 1 by the support argument
        raise KeyError(f"no gamma recorded for {place}")


def universal_gamma(
    F: PolySystem, zeta: Sequence, prime_bound: int = 50, prec: int = DEFAULT_PRECISION
) -> GammaReport:
    """gamma~(F, zeta) = (prod_nu max(1, gamma_nu)^{n_nu})^{1/[K:Q]} for an exact zero.

    Every finite place with gamma_nu > 1 lies above a prime dividing the
    common denominator of the entries of DF(zeta)^-1 D^k F(zeta)/k!; that
    divisor is factored, so the product is complete, not truncated at
    ``prime_bound`` (primes up to the bound are recorded regardless).
    """
    zeta = [simplify_exact(x) for x in zeta]
    if not all(is_exact(x) for x in zeta):
        raise ValueError("universal gamma needs an exact rational or Gaussian-rational zero")
    if any(F.evaluate(zeta)):
        raise ValueError("zeta is not an exact zero of F")
    gaussian = any(isinstance(x, GaussianRational) for x in zeta)
    degree_K = 2 if gaussian else 1
    tensors = _exact_tensors(F, zeta)
    divisor = 1
    for _, entries in tensors:
        for w in entries.values():
            for x in w:
                if not x:
                    continue
                den = x.normalized()[2] if isinstance(x, GaussianRational) else Fraction(x).denominator
                divisor = divisor * den // math.gcd(divisor, den)
    support_primes = [int(q) for q, _ in flint.fmpz(divisor).factor()] if divisor > 1 else []
    scan = sorted(set(support_primes) | {q for q in range(2, prime_bound + 1) if flint.fmpz(q).is_prime()})
    per_place = []
    with working_precision(prec):
        arch = Place.archimedean(2 if gaussian else 1)
        g_inf = _arch_gamma(F, zeta, arch, prec, search_lower=False)
        if not gaussian:
            # exact zero: the Frobenius cap is exact for n = 1; keep the bound otherwise
            pass
        per_place.append((arch, g_inf))
        log_total = arch.local_degree * max(flint.arb(0), _arb_log_upper(g_inf.upper))
        support = []
        if _arb_gt_one(g_inf.upper):
            support.append(arch)
        for q in scan:
            places = gaussian_places_above(q) if gaussian else [Place.padic(q)]
            for pl in places:
                g = _padic_gamma_from_tensors(tensors, pl)
                per_place.append((pl, g))
                if g.exponent is not None and g.exponent > 0:
                    support.append(pl)
                    log_total += pl.local_degree * as_arb(g.exponent) * flint.arb(q).log()
        log_univ = log_total / degree_K
        return GammaReport(per_place, log_univ.exp(), log_univ, support, degree_K, divisor, scan)


def _arb_log_upper(x) -> flint.arb:
    u = arb_upper(as_arb(x))
    if u <= 1:
        return flint.arb(0)
    return as_arb(u).log()


def _arb_gt_one(x) -> bool:
    return arb_upper(as_arb(x)) > 1


# ---------------------------------------------------------------------------
# Bit-length bounds
# ---------------------------------------------------------------------------


class MissingInput(ValueError):
    pass


@dataclass
class BoundsReport:
    n: int
    h: float
    ht_zeta: float
    degree_K: int
    degree_L: int
    disc_L: int
    log_gamma: float | None
    log_distance: float | None
    lower_gamma_general: float | None = None
    lower_distance_general: float | None = None
    lower_gamma_gaussian: float | None = None
    lower_distance_gaussian: float | None = None
    upper_log_gamma: float = 0.0
    upper_height: float = 0.0
    o1_margin: float = -3.0

    @classmethod
    def compute(cls, n, h, ht_zeta, degree_K, degree_L, disc_L, log_gamma=None, log_distance=None) -> "BoundsReport":
        ln = math.log(n)
        r = cls(n, h, ht_zeta, degree_K, degree_L, disc_L, log_gamma, log_distance)
        if log_gamma is not None:
            r.lower_gamma_general = (log_gamma - degree_L * (5 * ln + 2 * h) - 3) / (3 * degree_L)
            r.lower_gamma_gaussian = (log_gamma - (10 * ln + 4 * h + 3)) / 6
        if log_distance is not None:
            r.lower_distance_general = (log_distance - degree_L * (7 * ln + 3 * h) - 5) / (3 * degree_L)
            r.lower_distance_gaussian = (log_distance - (14 * ln + 6 * h + 5)) / 6
        r.upper_log_gamma = 3 * degree_K * n * (n * n + 4 * ln + h + ht_zeta + 3)
        r.upper_height = math.log(abs(disc_L)) / degree_L + degree_K * n * (n * n + h + n * ht_zeta)
        return r

    def recomputed(self) -> "BoundsReport":
        return BoundsReport.compute(
            self.n, self.h, self.ht_zeta, self.degree_K, self.degree_L, self.disc_L, self.log_gamma, self.log_distance
        )

    @property
    def vacuous(self) -> dict:
        """Which lower bounds are <= 0 (and so say nothing about ht(z))."""
        out = {}
        for name in ("lower_gamma_general", "lower_distance_general", "lower_gamma_gaussian", "lower_distance_gaussian"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v <= 0
        return out

    def to_json(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["vacuous"] = self.vacuous
        return {k: (None if isinstance(v, float) and math.isinf(v) else v) for k, v in d.items()}


def bounds_report(
    F: PolySystem,
    ht_zeta: float | HeightValue | None = None,
    degree_K: int = 1,
    degree_L: int | None = None,
    disc_L: int | None = None,
    gamma_value: GammaBound | float | None = None,
    log_distance: float | None = None,
    zeta: Sequence | None = None,
    place: Place | None = None,
    prec: int = DEFAULT_PRECISION,
) -> BoundsReport:
    """Evaluate the lower bounds, the log-gamma envelope and the height bound.

    With an exact ``zeta`` the missing inputs (ht(zeta), gamma, and the
    distance 1/||DF(zeta)|| of DF(zeta)^-1 to the singular matrices) are
    computed here.  ``log gamma`` uses the gamma upper bound.
    """
    place = place or Place.archimedean()
    if zeta is not None:
        zeta = [simplify_exact(x) for x in zeta]
        if ht_zeta is None:
            ht_zeta = height(zeta)
        if gamma_value is None:
            gamma_value = gamma(F, zeta, place, prec)
        if log_distance is None and all(is_exact(x) for x in zeta):
            J = [[simplify_exact(x) for x in row] for row in F.jacobian(zeta)]
            # DF(zeta)^-1 has inverse DF(zeta): distance = 1/||DF(zeta)||
            rep = eckardt_young(linalg.inverse(J), place, prec)
            dist = rep.distance
            log_distance = float(_log_fraction(arb_lower(as_arb(dist)))) if arb_lower(as_arb(dist)) > 0 else None
    if ht_zeta is None:
        raise MissingInput("ht(zeta) is required (or pass an exact zeta)")
    if degree_L is None:
        degree_L = 2 if place.is_archimedean else 1
    if disc_L is None:
        if degree_L == 1:
            disc_L = 1
        elif degree_L == 2:
            disc_L = -4
        else:
            raise MissingInput("discriminant of L is required when [L:Q] > 2")
    log_gamma = None
    if gamma_value is not None:
        log_gamma = gamma_value.log_upper() if isinstance(gamma_value, GammaBound) else math.log(gamma_value)
        if math.isinf(log_gamma):
            log_gamma = None
    ht = float(ht_zeta.value if isinstance(ht_zeta, HeightValue) else ht_zeta)
    return BoundsReport.compute(
        F.n, F.height_bound.value, ht, degree_K, degree_L, disc_L, log_gamma, log_distance
    )


# ---------------------------------------------------------------------------
# Hensel basin
# ---------------------------------------------------------------------------


@dataclass
class HenselVerdict:
    accepted: bool
    p: int
    point: tuple
    reason: str
    det_valuation: float
    residual_valuation: float
    prelift_steps: int = 0
    precision: int = 0
    zeta_mod: tuple | None = None  # integer residues of the lifted zero mod p^precision

    def zeta_padic(self) -> list[PadicApprox]:
        if self.zeta_mod is None:
            raise ValueError("rejected verdict has no lifted zero")
        return [PadicApprox.from_rational(r, self.p, self.precision) for r in self.zeta_mod]


def _to_int_mod(x, mod: int) -> int:
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, mod) % mod


def hensel_lift(F: PolySystem, z: Sequence, p: int, k: int) -> list[int]:
    """Lift a simple zero mod p to a zero mod p^k by quadratic Newton steps."""
    cur = [_to_int_mod(x, p**k) for x in z]
    m = 1
    while m < k:
        m = min(2 * m, k)
        mod = p**m
        J = [[_to_int_mod(v, mod) for v in row] for row in F.jacobian(cur)]
        val = F.evaluate(cur, modulus=mod)
        d = linalg.solve_mod(J, val, p, m)
        cur = [(c - e) % mod for c, e in zip(cur, d)]
    return [c % p**k for c in cur]


def hensel_certify(F: PolySystem, z: Sequence, p: int, precision: int = 8) -> HenselVerdict:
    """Non-archimedean basin test.

    Accepts when |det DF(z)|_p = 1 and ||F(z)||_p < 1; Hensel's lemma then
    gives a unique zero zeta with ||z - zeta||_p <= 1/p.  One Newton
    pre-lift brings the residual to <= 1/p^2.  The zero is returned modulo
    p^precision.
    """
    place = Place.padic(p)
    z = tuple(simplify_exact(Fraction(x) if isinstance(x, int) else x) for x in z)
    for x in z:
        if isinstance(x, GaussianRational):
            raise NonIntegralPoint("Hensel certification works over Q")
        if padic_valuation(x, place) < 0:
            raise NonIntegralPoint(f"coordinate {x} is not integral at {p}")
    J = F.jacobian(z)
    dv = padic_valuation(linalg.det(J), place)
    vals = F.evaluate(z)
    rv = min(padic_valuation(v, place) for v in vals)
    if dv != 0:
        return HenselVerdict(False, p, z, "det DF(z) is not a p-adic unit", dv, rv)
    if rv < 1:
        return HenselVerdict(False, p, z, "||F(z)||_p = 1: no zero in the residue disc", dv, rv)
    prelift = 0 if rv >= 2 else 1
    zeta = hensel_lift(F, z, p, precision)
    return HenselVerdict(True, p, z, "unit Jacobian and F(z) = 0 mod p", dv, rv, prelift, precision, tuple(zeta))


# ---------------------------------------------------------------------------
# Example generators
# ---------------------------------------------------------------------------


def mignotte_system(n: int) -> PolySystem:
    """The (n+1)-variable system with two extremely close real zeros."""
    if n < 2:
        raise ValueError("need n >= 2")
    X = variables(n + 1)
    polys = [X[0] - 2]
    for i in range(2, n):
        polys.append(X[i - 1] - X[i - 2] ** 2)
    polys.append(X[n] - X[n - 1] ** 2)
    polys.append(X[n] * X[n - 1] - 2 * (X[n - 2] * X[n - 1] - 1) ** 2)
    return PolySystem(polys)


def mignotte_zeros(n: int, prec: int = 512) -> list[list]:
    """Ball enclosures of the three zeros, the two close real ones first.

    Back-substitution leaves the cubic t^3 - 2(a t - 1)^2 in t = X_n with
    a = X_{n-1} = 2^(2^(n-2)); each root is refined by the Krawczyk test.
    """
    a = 2 ** (2 ** (n - 2)) if n >= 2 else 2
    cubic = flint.fmpz_poly([-2, 4 * a, -2 * a * a, 1])
    prefix = [2 ** (2 ** (i)) for i in range(n - 1)]
    F = mignotte_system(n)
    with working_precision(prec):
        roots = cubic.complex_roots()
        out = []
        for r, _ in roots:
            t = r
            guess = [to_acb(x) for x in prefix] + [t, t * t]
            out.append(enclose_zero(F, guess, prec))
    out.sort(key=lambda pt: (abs(arb_mid(pt[n - 1].imag)) > 0, arb_mid(pt[n - 1].real)))
    return out


def deform_system(F: PolySystem) -> PolySystem:
    """Append X_{n+1} and g_{n+1} = (X_{n+1} - X_n)(X_{n+1} - X_n - 1)."""
    n = F.n
    polys = [f.embed(n + 1) for f in F.polys]
    X = variables(n + 1)
    polys.append((X[n] - X[n - 1]) * (X[n] - X[n - 1] - 1))
    return PolySystem(polys, asserted=F.asserted)
