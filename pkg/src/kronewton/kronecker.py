"""Kronecker (geometric) solutions of zero-dimensional systems.

A solution is a primitive linear form u = sum lambda_j X_j, its squarefree
minimal equation chi(T) in Z[T], an integer rho != 0 and integer polynomials
v_j with deg v_j < deg chi such that the zeros of F are exactly the points
(v_1(t)/rho, ..., v_n(t)/rho) for chi(t) = 0.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import flint

from .exact_arith import (
    DEFAULT_PRECISION,
    GaussianRational,
    PadicApprox,
    Place,
    arb_upper,
    round_to_dyadic,
    simplify_exact,
    to_acb,
    working_precision,
)
from .lattice import NotFound, integer_relation, min_poly_from_approx, normalize_poly, rational_from_ball
from .newton import (
    ApproxZero,
    CertificationRejected,
    EnclosureFailed,
    HenselVerdict,
    Inconclusive,
    certify,
    enclose_zero,
    hensel_certify,
    hensel_lift,
)
from .polysys import MultiPoly, PolySystem, SingularJacobian

DEFAULT_DEGREE_BOUND = 64


class NotZeroDimensional(ArithmeticError):
    pass


class DegreeBoundExceeded(ArithmeticError):
    pass


class PrimitiveElementExhausted(ArithmeticError):
    pass


class ReconstructionFailed(ArithmeticError):
    def __init__(self, message, schedule=None):
        super().__init__(message)
        self.schedule = schedule or []


class BadPrime(ValueError):
    pass


# ---------------------------------------------------------------------------
# Data structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeometricSolution:
    lam: tuple[int, ...]
    chi: tuple[int, ...]  # little-endian
    rho: int
    v: tuple[tuple[int, ...], ...]  # little-endian, one per variable

    @property
    def n_vars(self) -> int:
        return len(self.lam)

    @property
    def degree(self) -> int:
        return len(self.chi) - 1

    @property
    def dimension(self) -> int:
        return 0

    def chi_poly(self) -> flint.fmpz_poly:
        return flint.fmpz_poly(list(self.chi))

    def v_poly(self, j: int) -> flint.fmpz_poly:
        return flint.fmpz_poly(list(self.v[j]))

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam),
            "chi": [str(c) for c in self.chi],
            "rho": str(self.rho),
            "v": [[str(c) for c in vj] for vj in self.v],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data) -> "GeometricSolution":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            tuple(int(x) for x in data["lambda"]),
            tuple(int(x) for x in data["chi"]),
            int(data["rho"]),
            tuple(tuple(int(x) for x in vj) for vj in data["v"]),
        )

    def point_balls(self, t: flint.acb) -> list[flint.acb]:
        """(v_j(t)/rho)_j at a root enclosure t."""
        out = []
        for vj in self.v:
            acc = flint.acb(0)
            for c in reversed(vj):
                acc = acc * t + c
            out.append(acc / self.rho)
        return out


@dataclass(frozen=True)
class ComponentSolution:
    solution: GeometricSolution
    irreducible: bool = True

    @property
    def degree(self) -> int:
        return self.solution.degree


def _from_rational_params(lam, chi: flint.fmpq_poly, params: Sequence[flint.fmpq_poly]) -> GeometricSolution:
    """Normalize chi and clear denominators of x_j = params[j](T)."""
    chi_int = normalize_poly(_fmpq_poly_to_int_multiple(chi))
    rho = 1
    for q in params:
        for c in q.coeffs():
            rho = rho * int(c.q) // math.gcd(rho, int(c.q))
    v = []
    for q in params:
        coeffs = [int(c.p) * (rho // int(c.q)) for c in q.coeffs()]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        v.append(tuple(coeffs))
    return GeometricSolution(tuple(int(x) for x in lam), tuple(chi_int), rho, tuple(v))


def _fmpq_poly_to_int_multiple(p: flint.fmpq_poly) -> list[int]:
    coeffs = p.coeffs()
    den = 1
    for c in coeffs:
        den = den * int(c.q) // math.gcd(den, int(c.q))
    return [int(c.p) * (den // int(c.q)) for c in coeffs]


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass
class Verdict:
    passed: bool
    failures: list = field(default_factory=list)  # [(check, index, witness)]

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "failures": [{"check": c, "index": i, "witness": w} for c, i, w in self.failures],
        }


def _substitute(f: MultiPoly, S: GeometricSolution, chi: flint.fmpq_poly) -> flint.fmpq_poly:
    """rho^deg(f) * f(v/rho) mod chi, as an exact polynomial identity."""
    deg = f.degree
    vpolys = [flint.fmpq_poly(list(vj)) if vj else flint.fmpq_poly([]) for vj in S.v]
    cache: dict[tuple[int, int], flint.fmpq_poly] = {}

    def vpow(j, e):
        key = (j, e)
        if key not in cache:
            cache[key] = (vpolys[j] ** e) % chi if e else flint.fmpq_poly([1])
        return cache[key]

    total = flint.fmpq_poly([])
    for exps, c in f.terms.items():
        c = simplify_exact(c)
        if isinstance(c, GaussianRational):
            raise ValueError("Kronecker data is over Q; Gaussian coefficients are not supported")
        c = Fraction(c)
        term = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) * S.rho ** (deg - sum(exps))])
        for j, e in enumerate(exps):
            if e:
                term = (term * vpow(j, e)) % chi
        total += term
    return total % chi


def verify_geometric(F: PolySystem, S: GeometricSolution) -> Verdict:
    """Exact checks: (a) rho^deg f_i(v/rho) = 0 mod chi, (b) sum lambda_j v_j = rho T mod chi,
    (c) chi squarefree.  Shape and normalization problems are reported too."""
    failures = []
    if F.n != S.n_vars or len(S.v) != S.n_vars:
        failures.append(("shape", None, f"{S.n_vars} weights / {len(S.v)} parametrizations for {F.n} variables"))
        return Verdict(False, failures)
    if S.degree < 1:
        failures.append(("shape", None, "chi has degree < 1"))
        return Verdict(False, failures)
    if S.rho == 0:
        failures.append(("shape", None, "rho = 0"))
        return Verdict(False, failures)
    if normalize_poly(S.chi) != list(S.chi):
        failures.append(("normalization", None, "chi is not content-free with positive leading coefficient"))
    for j, vj in enumerate(S.v):
        if len(vj) > S.degree:
            failures.append(("shape", j + 1, f"deg v_{j + 1} >= deg chi"))
    chi = flint.fmpq_poly(list(S.chi))
    for i, f in enumerate(F.polys):
        r = _substitute(f, S, chi)
        if r != 0:
            failures.append(("a", i + 1, f"rho^{f.degree} f_{i + 1}(v/rho) mod chi = {r}"))
    lin = flint.fmpq_poly([])
    for lj, vj in zip(S.lam, S.v):
        if vj:
            lin += lj * flint.fmpq_poly(list(vj))
    r = (lin - flint.fmpq_poly([0, S.rho])) % chi
    if r != 0:
        failures.append(("b", None, f"sum lambda_j v_j - rho T mod chi = {r}"))
    g = chi.gcd(chi.derivative())
    if g.degree() > 0:
        failures.append(("c", None, f"gcd(chi, chi') = {g}"))
    return Verdict(not failures, failures)


# ---------------------------------------------------------------------------
# Exact solver: quotient algebra by Macaulay elimination
# ---------------------------------------------------------------------------


def _monomials_upto(n: int, D: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(D + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for j in combo:
                e[j] += 1
            out.append(tuple(e))
    return out


def _degrevlex_key(e: tuple[int, ...]):
    return (sum(e), tuple(-x for x in reversed(e)))


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass
class QuotientAlgebra:
    """Normal-form data for Q[X]/(F): standard monomials and multiplication matrices."""

    basis: list[tuple[int, ...]]
    mult: list[flint.fmpq_mat]  # mult[j] represents multiplication by X_j (columns = images)
    macaulay_degree: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def unit_vector(self) -> flint.fmpq_mat:
        D = self.dimension
        e = flint.fmpq_mat(D, 1)
        e[self.basis.index((0,) * len(self.mult)), 0] = 1
        return e

    def operator(self, lam: Sequence[int]) -> flint.fmpq_mat:
        D = self.dimension
        M = flint.fmpq_mat(D, D)
        for l, Mj in zip(lam, self.mult):
            if l:
                M = M + Mj * l
        return M

    def normal_form(self, f: MultiPoly) -> flint.fmpq_mat:
        """Coordinates of f mod (F) in the standard basis."""
        D = self.dimension
        acc = flint.fmpq_mat(D, 1)
        e1 = self.unit_vector()
        for exps, c in f.terms.items():
            vec = e1
            for j, k in enumerate(exps):
                for _ in range(k):
                    vec = self.mult[j] * vec
            c = Fraction(simplify_exact(c))
            acc = acc + vec * flint.fmpq(c.numerator, c.denominator)
        return acc


def _integer_rows(F: PolySystem) -> list[dict]:
    rows = []
    for f in F.polys:
        den = 1
        for c in f.terms.values():
            c = simplify_exact(c)
            if isinstance(c, GaussianRational):
                raise ValueError("the exact solver works over Q; Gaussian coefficients are not supported")
            den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
        rows.append({e: int(Fraction(c) * den) for e, c in f.terms.items()})
    return rows


def _try_quotient(F: PolySystem, D: int, rows_int: list[dict], dim_bound: int):
    n = F.n
    monos = sorted(_monomials_upto(n, D), key=_degrevlex_key, reverse=True)
    col = {m: i for i, m in enumerate(monos)}
    mat_rows = []
    for f, fd in zip(F.polys, rows_int):
        for m in _monomials_upto(n, D - f.degree):
            r = [0] * len(monos)
            for e, c in fd.items():
                r[col[tuple(a + b for a, b in zip(e, m))]] = c
            mat_rows.append(r)
    if not mat_rows:
        return None
    M = flint.fmpz_mat(mat_rows)
    R, den, rank = M.rref()
    pivots = {}
    for i in range(rank):
        for j in range(len(monos)):
            if R[i, j] != 0:
                pivots[monos[j]] = i
                break
    leading = list(pivots)
    pure = {j for m in leading for j in range(n) if m[j] == sum(m) and m[j] > 0}
    if len(pure) < n:
        return ("positive", None)
    standard = [m for m in monos if not any(_divides(l, m) for l in leading)]
    if len(standard) > dim_bound:
        return ("too-big", len(standard))
    if not standard or max(sum(m) for m in standard) + 1 > D:
        return None
    std_index = {m: i for i, m in enumerate(standard)}
    Dq = len(standard)
    mult = []
    for j in range(n):
        Mj = flint.fmpq_mat(Dq, Dq)
        for s_i, s in enumerate(standard):
            t = list(s)
            t[j] += 1
            t = tuple(t)
            if t in std_index:
                Mj[std_index[t], s_i] = 1
                continue
            if t not in pivots:
                return None
            r = pivots[t]
            pc = col[t]
            piv = R[r, pc]
            for c_j in range(len(monos)):
                if c_j == pc:
                    continue
                val = R[r, c_j]
                if val == 0:
                    continue
                m = monos[c_j]
                if m not in std_index:
                    return None  # row not fully reduced onto standard monomials
                Mj[std_index[m], s_i] = -flint.fmpq(int(val), int(piv))
        mult.append(Mj)
    return ("ok", QuotientAlgebra(standard, mult, D))


def quotient_algebra(F: PolySystem, degree_bound: int = DEFAULT_DEGREE_BOUND, max_macaulay_degree: int | None = None) -> QuotientAlgebra:
    """Standard basis and multiplication matrices of Q[X]/(F).

    Macaulay matrices of increasing degree are row-reduced in degrevlex
    order until the standard monomial set is finite and the same at two
    consecutive degrees.  The result is then certified: the multiplication
    matrices commute and every f_i has normal form zero, which makes the
    border relations a basis of the ideal.
    """
    rows_int = _integer_rows(F)
    n = F.n
    bezout = 1
    for f in F.polys:
        bezout *= max(f.degree, 1)
    top = max_macaulay_degree or (sum(max(f.degree, 1) - 1 for f in F.polys) + 2 + max(3, n))
    prev = None
    D = max(f.degree for f in F.polys) + 1
    last_reason = "unstable"
    while D <= top + 2:
        res = _try_quotient(F, D, rows_int, max(degree_bound, 1) * 4)
        if res is not None and res[0] == "positive":
            last_reason = "positive"
        elif res is not None and res[0] == "too-big":
            last_reason = "too-big"
        elif res is not None:
            qa = res[1]
            if prev is not None and prev.basis == qa.basis:
                if qa.dimension > degree_bound:
                    raise DegreeBoundExceeded(f"quotient has dimension {qa.dimension} > {degree_bound}")
                _certify_quotient(F, qa)
                return qa
            prev = qa
        D += 1
    if last_reason == "positive":
        raise NotZeroDimensional("leading monomials never contain a pure power of every variable")
    if last_reason == "too-big":
        raise DegreeBoundExceeded(f"standard monomial set exceeds the bound {degree_bound}")
    raise NotZeroDimensional(f"normal-form closure did not stabilize up to degree {top + 2}")


def _certify_quotient(F: PolySystem, qa: QuotientAlgebra):
    for a in range(len(qa.mult)):
        for b in range(a + 1, len(qa.mult)):
            if qa.mult[a] * qa.mult[b] != qa.mult[b] * qa.mult[a]:
                raise NotZeroDimensional("multiplication matrices do not commute")
    for i, f in enumerate(F.polys):
        if any(x != 0 for x in qa.normal_form(f).entries()):
            raise NotZeroDimensional(f"f_{i + 1} does not reduce to zero in the quotient")


def _charpoly(M: flint.fmpq_mat) -> flint.fmpq_poly:
    return M.charpoly()


def _squarefree(p: flint.fmpq_poly) -> bool:
    return p.gcd(p.derivative()).degree() == 0


def _draw_lambda(rng: random.Random, n: int, D: int) -> tuple[int, ...]:
    bound = max(2 * D * D, 1)
    return tuple(rng.randint(-bound, bound) for _ in range(n))


def _parametrize(qa: QuotientAlgebra, lam: Sequence[int]) -> tuple[flint.fmpq_poly, list[flint.fmpq_poly]] | None:
    Mu = qa.operator(lam)
    chi = _charpoly(Mu)
    if not _squarefree(chi):
        return None
    D = qa.dimension
    # Krylov basis 1, u, ..., u^(D-1) of the algebra
    e = qa.unit_vector()
    cols = [e]
    for _ in range(D - 1):
        cols.append(Mu * cols[-1])
    K = flint.fmpq_mat(D, D)
    for j, c in enumerate(cols):
        for i in range(D):
            K[i, j] = c[i, 0]
    params = []
    for Mj in qa.mult:
        rhs = Mj * e
        c = K.solve(rhs)
        params.append(flint.fmpq_poly([c[i, 0] for i in range(D)]))
    return chi, params


def solve_geometric(
    F: PolySystem,
    lam: Sequence[int] | None = None,
    seed: int = 0,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
) -> GeometricSolution:
    """Kronecker solution of V(F) by exact linear algebra on Q[X]/(F).

    Without ``lam`` the weights are drawn (seeded) with |lambda_j| <= 2 D^2
    until chi_u is squarefree, at most 10 D^2 times.
    """
    qa = quotient_algebra(F, degree_bound)
    D = qa.dimension
    rng = random.Random(seed)
    if lam is not None:
        lam = tuple(int(x) for x in lam)
        if len(lam) != F.n:
            raise ValueError("lambda has the wrong length")
        res = _parametrize(qa, lam)
        if res is None:
            raise PrimitiveElementExhausted(f"u = {lam} is not a primitive element (chi_u not squarefree)")
        candidates = [(lam, res)]
    else:
        candidates = []
        for _ in range(10 * D * D):
            cand = _draw_lambda(rng, F.n, D)
            res = _parametrize(qa, cand)
            if res is not None:
                candidates = [(cand, res)]
                break
        if not candidates:
            raise PrimitiveElementExhausted(
                f"no primitive element in {10 * D * D} draws; the ideal may not be radical"
            )
    lam, (chi, params) = candidates[0]
    S = _from_rational_params(lam, chi, params)
    verdict = verify_geometric(F, S)
    if not verdict:
        raise ArithmeticError(f"internal error: solver output fails verification {verdict.failures}")
    return S


def quotient_dimension(F: PolySystem, degree_bound: int = DEFAULT_DEGREE_BOUND) -> int:
    return quotient_algebra(F, degree_bound).dimension


def irreducible_factors(S: GeometricSolution) -> list[list[int]]:
    """Normalized irreducible factors of chi (little-endian)."""
    out = []
    for f, _ in S.chi_poly().factor()[1]:
        out.append(normalize_poly([int(c) for c in f.coeffs()]))
    return sorted(out, key=lambda c: (len(c), c))


def restrict_to_factor(S: GeometricSolution, factor: Sequence[int]) -> GeometricSolution:
    """The component of S over the roots of ``factor`` (a divisor of chi)."""
    g = flint.fmpq_poly(list(factor))
    params = [flint.fmpq_poly([flint.fmpq(int(c), S.rho) for c in vj]) % g if vj else flint.fmpq_poly([]) for vj in S.v]
    return _from_rational_params(S.lam, g, params)


# ---------------------------------------------------------------------------
# Bridge: approximate zero -> geometric solution
# ---------------------------------------------------------------------------


def _point_of(z) -> list:
    if isinstance(z, ApproxZero):
        return list(z.point)
    return list(z)


def _height_schedule(cap_bits: int) -> list[int]:
    out, h = [], 16
    while h < cap_bits:
        out.append(h)
        h *= 2
    out.append(cap_bits)
    return out


def approx_to_kronecker(
    F: PolySystem,
    z,
    lam: Sequence[int] | None = None,
    seed: int = 0,
    degree_bound: int = 16,
    height_bits: int | None = None,
    max_precision: int = 1 << 15,
    max_draws: int = 4,
) -> ComponentSolution:
    """Kronecker solution of the Q-irreducible component through the zero of z.

    The associated zero is enclosed at increasing precision, t = u(zeta) is
    recognized by LLL, each coordinate is recovered as w_j(t)/chi'(t) with
    integer w_j found by an integer relation, and the result is checked
    exactly.  A failed weight vector is replaced by a fresh draw.
    """
    z0 = _point_of(z)
    if isinstance(z, ApproxZero) and not z.place.is_archimedean:
        raise ValueError("approximate zero must be archimedean")
    if height_bits is None:
        height_bits = _default_height_bits(F, degree_bound)
    rng = random.Random(seed)
    schedule_log = []
    draws = [tuple(lam)] if lam is not None else []
    while len(draws) < max_draws:
        draws.append(_draw_lambda(rng, F.n, degree_bound))
    cache: dict[int, list] = {}

    def zeta_at(prec: int) -> list:
        if prec not in cache:
            with working_precision(prec):
                cache[prec] = enclose_zero(F, z0, prec)
        return cache[prec]

    for weights in draws:

        def t_at(prec: int, weights=weights) -> flint.acb:
            zeta = zeta_at(prec)
            with working_precision(prec):
                return sum((w * x for w, x in zip(weights, zeta)), flint.acb(0))

        chi = None
        for hb in _height_schedule(height_bits):
            try:
                res = min_poly_from_approx(t_at, degree_bound, hb)
            except NotFound as exc:
                schedule_log.append({"lambda": weights, "height_bits": hb, "reason": exc.reason})
                continue
            chi = res.polynomial
            schedule_log.append({"lambda": weights, "height_bits": hb, "degree": res.degree})
            break
        if chi is None:
            continue
        S = _recover_parametrization(F, weights, chi, zeta_at, t_at, max_precision, schedule_log)
        if S is not None:
            return ComponentSolution(S, True)
    raise ReconstructionFailed(
        f"no component recovered within degree {degree_bound} and height 2^{height_bits}", schedule_log
    )


def _default_height_bits(F: PolySystem, degree_bound: int) -> int:
    # generous degree-driven envelope; chi of a degree-D component of a
    # height-h system has height ~ D (h + log D) up to the weight factor
    h = F.height_bound.bits + 1
    return min(4096, max(32, degree_bound * (h + 2 * degree_bound.bit_length() + 8)))


def _recover_parametrization(F, weights, chi, zeta_at, t_at, max_precision, log) -> GeometricSolution | None:
    D = len(chi) - 1
    chi_q = flint.fmpq_poly(chi)
    dchi = chi_q.derivative()
    prec = max(256, 8 * D * (D + 16))
    while prec <= max_precision:
        zeta = zeta_at(prec)
        with working_precision(prec + 32):
            t = t_at(prec)
            powers = [flint.acb(1)]
            for _ in range(D - 1):
                powers.append(powers[-1] * t)
            dval = flint.acb(0)
            for c in reversed(dchi.coeffs()):
                dval = dval * t + to_acb(Fraction(int(c.p), int(c.q)))
            params = []
            ok = True
            for zj in zeta:
                rel = integer_relation([dval * zj] + powers, prec - 16)
                c0 = rel[0]
                if c0 == 0:
                    ok = False
                    break
                w = flint.fmpq_poly([flint.fmpq(-int(c), int(c0)) for c in rel[1:]])
                # x_j = w / chi'  mod chi
                g, s, _ = dchi.xgcd(chi_q)
                if g.degree() != 0:
                    return None
                params.append((w * s / g) % chi_q)
        if ok:
            S = _from_rational_params(weights, chi_q, params)
            if verify_geometric(F, S):
                log.append({"lambda": weights, "parametrization_precision": prec})
                return S
        log.append({"lambda": weights, "parametrization_precision": prec, "verified": False})
        prec *= 2
    return None


# ---------------------------------------------------------------------------
# Bridge: geometric solution -> certified approximate zeros
# ---------------------------------------------------------------------------


def kronecker_to_approx(
    S: GeometricSolution,
    F: PolySystem,
    H: float | None = None,
    target_bits: int | None = None,
    prec: int = DEFAULT_PRECISION,
    max_precision: int = 1 << 14,
) -> list[ApproxZero]:
    """Certified approximate zeros for every root of chi_u.

    Each root is isolated in a ball, mapped through v/rho, rounded to a
    dyadic Gaussian rational and certified.  Coordinates of height <= H
    (natural log) that make F vanish exactly are returned exactly and the
    zero is flagged rational.
    """
    B = int(math.floor(math.exp(H))) if H is not None else 0
    chi = S.chi_poly()
    out = []
    work = max(prec, 2 * (target_bits or 0) + 64)
    while True:
        with working_precision(work):
            roots = [r for r, _ in chi.complex_roots()]
        if len(roots) == S.degree:
            break
        work *= 2
    for root_index in range(S.degree):
        out.append(_certify_root(S, F, root_index, B, target_bits, work, max_precision))
    return out


def _certify_root(S, F, root_index, B, target_bits, prec, max_precision) -> ApproxZero:
    bits = target_bits or max(32, prec // 2)
    while prec <= max_precision:
        with working_precision(prec):
            t = [r for r, _ in S.chi_poly().complex_roots()][root_index]
            zeta = S.point_balls(t)
            if B:
                exact = _rational_point(F, zeta, B)
                if exact is not None:
                    az = certify(F, exact, exact, Place.archimedean(), prec)
                    az.rational = True
                    return az
            z = [simplify_exact(round_to_dyadic(x, bits)) for x in zeta]
            try:
                return certify(F, z, zeta, Place.archimedean(), prec)
            except (Inconclusive, CertificationRejected):
                pass
        prec *= 2
        bits *= 2
    raise InsufficientPrecisionBudget(f"root {root_index} not certified within {max_precision} bits")


class InsufficientPrecisionBudget(ArithmeticError):
    pass


def _rational_point(F: PolySystem, zeta: list, B: int):
    pt = []
    for x in zeta:
        try:
            pt.append(rational_from_ball(x, B))
        except NotFound:
            return None
    if any(F.evaluate(pt)):
        return None
    return pt


# ---------------------------------------------------------------------------
# p-adic specialization
# ---------------------------------------------------------------------------


@dataclass
class PadicZero:
    point: tuple[int, ...]  # residues modulo p^precision
    p: int
    precision: int
    t: int
    verdict: HenselVerdict | None = None

    def padic(self) -> list[PadicApprox]:
        return [PadicApprox.from_rational(x, self.p, self.precision) for x in self.point]


def hensel_specialize(
    S: GeometricSolution, p: int, k: int = 8, F: PolySystem | None = None
) -> list[PadicZero]:
    """Zeros of S over Z_p: roots of chi mod p lifted to p^k and mapped through v/rho.

    With ``F`` each point also carries its hensel_certify verdict.
    """
    chi = S.chi_poly()
    bad = S.rho * int(chi.discriminant()) * S.chi[-1]
    if bad % p == 0:
        raise BadPrime(f"{p} divides rho * disc(chi) * lead(chi)")
    roots = sorted(int(r) for r, _ in flint.nmod_poly(list(S.chi), p).roots())
    mod = p**k
    dchi = chi.derivative()
    out = []
    rho_inv = pow(S.rho, -1, mod)
    for r in roots:
        t = r
        m = 1
        while m < k:
            m = min(2 * m, k)
            mm = p**m
            t = (t - int(chi(t)) * pow(int(dchi(t)), -1, mm)) % mm
        pt = tuple(int(S.v_poly(j)(t)) * rho_inv % mod if S.v[j] else 0 for j in range(S.n_vars))
        verdict = hensel_certify(F, pt, p, k) if F is not None else None
        out.append(PadicZero(pt, p, k, t, verdict))
    return out
