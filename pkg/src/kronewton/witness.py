"""Zero testing for polynomials given by straight-line programs.

Two tests are offered.  The deterministic one evaluates the program at a
Kronecker-scheme point (w0^N, w0^(N^2), ..., w0^(N^n)) whose step N is large
enough for the program's size and depth.  The baseline is Schwartz-Zippel
evaluation at random points over 62-bit prime fields.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from .exact_arith import GaussianRational, HeightValue, height, simplify_exact, working_precision
from .polysys import Slp, _sqrt_minus_one_mod_prime, random_prime

DEFAULT_BIT_BUDGET = 1 << 22


class WitnessOverflow(OverflowError):
    """The exact Kronecker tower would exceed the configured bit budget."""


class BudgetExhausted(RuntimeError):
    pass


def step_threshold_exceeded(L: int, depth: int, log2_N: int) -> bool:
    """Decide log2 N > log2(depth+1) + (depth+2) log2 log2(4L) without rounding errors.

    Equivalent to 2^log2_N > (depth+1) * log2(4L)^(depth+2).  When 4L is a
    power of two everything is an integer; otherwise log2(4L) is irrational
    and a ball comparison at increasing precision terminates.
    """
    four_l = 4 * L
    if four_l & (four_l - 1) == 0:
        m = four_l.bit_length() - 1
        return 2**log2_N > (depth + 1) * m ** (depth + 2)
    prec = 64
    while True:
        with working_precision(prec):
            rhs = flint.arb(depth + 1) * flint.arb(four_l).log_base(2) ** (depth + 2)
            lhs = flint.arb(2) ** log2_N
            if lhs > rhs:
                return True
            if lhs <= rhs:
                return False
        prec *= 2


def minimal_log2_step(L: int, depth: int) -> int:
    """Smallest k with N = 2^k admissible for (L, depth)."""
    if L < 1 or depth < 0:
        raise ValueError("need L >= 1 and depth >= 0")
    guess = math.log2(depth + 1) + (depth + 2) * math.log2(math.log2(4 * L))
    k = max(int(math.floor(guess)) - 1, 0)
    while not step_threshold_exceeded(L, depth, k):
        k += 1
    return k


@dataclass(frozen=True)
class WitnessPoint:
    """Kronecker scheme: omega_i = omega_0^(N^i) for i = 1..n."""

    base: object
    step: int
    n: int
    bit_budget: int = DEFAULT_BIT_BUDGET

    @property
    def exponents(self) -> list[int]:
        return [self.step**i for i in range(1, self.n + 1)]

    @property
    def tower_bits(self) -> int:
        """Bits needed to write the last coordinate omega_0^(N^n) exactly."""
        b = simplify_exact(self.base)
        if isinstance(b, GaussianRational):
            mag = max(abs(x) for x in b.normalized())
        else:
            b = Fraction(b)
            mag = max(abs(b.numerator), b.denominator)
        return self.step**self.n * max(mag.bit_length(), 1)

    @property
    def exceeds_budget(self) -> bool:
        return self.tower_bits > self.bit_budget

    def exact_points(self) -> list:
        if self.exceeds_budget:
            raise WitnessOverflow(
                f"omega_0^(N^n) needs ~{self.tower_bits} bits, budget is {self.bit_budget}"
            )
        return [self.base**e for e in self.exponents]

    def points_mod(self, q: int, i_mod: int | None = None) -> list[int]:
        """Coordinates reduced mod q, exponents reduced mod q-1 (Fermat)."""
        b = simplify_exact(self.base)
        if isinstance(b, GaussianRational):
            if i_mod is None:
                raise ValueError("Gaussian base needs sqrt(-1) mod q")
            bq = (b.re.numerator * pow(b.re.denominator, -1, q) + b.im.numerator * pow(b.im.denominator, -1, q) * i_mod) % q
        else:
            b = Fraction(b)
            bq = b.numerator * pow(b.denominator, -1, q) % q
        if bq == 0:
            raise ZeroDivisionError("base vanishes modulo q")
        return [pow(bq, pow(self.step, i, q - 1), q) for i in range(1, self.n + 1)]


def witness_point(
    L: int,
    depth: int,
    scalar_height: HeightValue,
    n: int,
    omega0=None,
    step: int | None = None,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> WitnessPoint:
    """Witness point for programs of size L and non-scalar depth ``depth``.

    N defaults to the smallest admissible power of two.  A caller-supplied
    ``step`` must itself be admissible.
    """
    L = max(L, 1)
    if omega0 is None:
        omega0 = max(2, scalar_height.magnitude)
    need = max(HeightValue(2), scalar_height)
    if height(omega0) < need:
        raise ValueError(
            f"ht(omega_0) = {height(omega0).value:.4g} is below max(log 2, ht(F)) = {need.value:.4g}"
        )
    if step is None:
        step = 2 ** minimal_log2_step(L, depth)
    else:
        if step < 1:
            raise ValueError("step must be positive")
        # log2 N > t  <=>  N > 2^t; test via the largest power of two below N
        k = step.bit_length() - 1
        exact_pow = step == 1 << k
        ok = step_threshold_exceeded(L, depth, k) if exact_pow else _real_log_ok(L, depth, step)
        if not ok:
            raise ValueError(f"N = {step} is not admissible for L = {L}, depth = {depth}")
    return WitnessPoint(omega0, step, n, bit_budget)


def _real_log_ok(L: int, depth: int, step: int) -> bool:
    prec = 64
    while True:
        with working_precision(prec):
            lhs = flint.arb(step).log_base(2)
            rhs = flint.arb(depth + 1).log_base(2) + (depth + 2) * flint.arb(flint.arb(4 * L).log_base(2)).log_base(2)
            if lhs > rhs:
                return True
            if lhs <= rhs:
                return False
        prec *= 2


@dataclass
class ZeroTestResult:
    verdict: str  # "zero" | "nonzero"
    mode: str
    evidence: dict = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return self.verdict == "zero"


def _needs_gaussian(slp: Slp, base) -> bool:
    vals = list(slp.scalars) + [base]
    return any(isinstance(simplify_exact(v), GaussianRational) for v in vals)


def is_zero_slp(
    slp: Slp,
    mode: str = "witness",
    trials: int = 5,
    prime_bits: int = 62,
    seed: int = 0,
    omega0=None,
    step: int | None = None,
    bit_budget: int = DEFAULT_BIT_BUDGET,
    exact: bool | None = None,
) -> ZeroTestResult:
    """Decide whether the polynomial computed by ``slp`` is identically zero.

    ``mode="witness"`` evaluates at the Kronecker witness point, exactly when
    the tower fits in ``bit_budget`` (and ``exact`` is not False), otherwise
    modulo ``trials`` random primes.  ``mode="sz"`` is Schwartz-Zippel.  A
    "nonzero" verdict is always certain; "zero" carries the stated error bound.
    """
    rng = random.Random(seed)
    if mode in ("sz", "schwartz-zippel"):
        return _schwartz_zippel(slp, trials, prime_bits, rng)
    if mode != "witness":
        raise ValueError(f"unknown mode {mode!r}")

    wp = witness_point(
        max(slp.size, 1), slp.depth, slp.scalar_height(), slp.n_inputs, omega0, step, bit_budget
    )
    evidence = {
        "L": slp.size,
        "depth": slp.depth,
        "omega0": str(wp.base),
        "N": wp.step,
        "tower_bits": wp.tower_bits,
    }
    if exact is None:
        exact = not wp.exceeds_budget
    if exact:
        value = slp.evaluate(wp.exact_points())
        evidence["projection"] = "exact"
        nonzero = bool(value)
        if nonzero:
            evidence["value_bits"] = _value_bits(value)
        return ZeroTestResult("nonzero" if nonzero else "zero", "witness", evidence)

    gaussian = _needs_gaussian(slp, wp.base)
    residues = []
    primes = []
    for _ in range(trials):
        while True:
            q = random_prime(prime_bits, rng, (lambda q: q % 4 == 1) if gaussian else None)
            i_mod = _sqrt_minus_one_mod_prime(q) if gaussian else None
            try:
                pts = wp.points_mod(q, i_mod)
                r = slp.evaluate(pts, modulus=q, i_mod=i_mod)
            except (ZeroDivisionError, ValueError):
                continue  # q divides a scalar denominator or the base
            break
        primes.append(q)
        residues.append(r)
        if r:
            break
    nonzero = any(residues)
    evidence.update(
        {
            "projection": "modular",
            "primes": primes,
            "residues": residues,
            # P(omega) is an integer of at most tower_bits * deg bits; each prime
            # is a false zero with probability <= (#prime divisors)/(#primes tried from)
            "zero_verdict_deterministic": False,
        }
    )
    return ZeroTestResult("nonzero" if nonzero else "zero", "witness", evidence)


def _value_bits(v) -> int:
    v = simplify_exact(v)
    if isinstance(v, GaussianRational):
        return max(abs(x) for x in v.normalized()).bit_length()
    v = Fraction(v)
    return max(abs(v.numerator), v.denominator).bit_length()


def _schwartz_zippel(slp: Slp, trials: int, prime_bits: int, rng: random.Random) -> ZeroTestResult:
    gaussian = _needs_gaussian(slp, 2)
    deg_bound = 2**slp.depth
    residues, primes = [], []
    for _ in range(trials):
        q = random_prime(prime_bits, rng, (lambda q: q % 4 == 1) if gaussian else None)
        i_mod = _sqrt_minus_one_mod_prime(q) if gaussian else None
        pt = [rng.randrange(q) for _ in range(slp.n_inputs)]
        try:
            r = slp.evaluate(pt, modulus=q, i_mod=i_mod)
        except ZeroDivisionError:
            continue
        primes.append(q)
        residues.append(r)
        if r:
            break
    nonzero = any(residues)
    err = Fraction(deg_bound, 2 ** (prime_bits - 1)) ** len(residues)
    return ZeroTestResult(
        "nonzero" if nonzero else "zero",
        "schwartz-zippel",
        {
            "primes": primes,
            "residues": residues,
            "degree_bound": deg_bound,
            "zero_error_bound": float(err),
        },
    )
