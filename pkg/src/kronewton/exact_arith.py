"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`; Gaussian rationals, p-adic
approximations, places and logarithmic heights live here.  Archimedean
quantities that are not exactly representable come back as flint ``arb``
balls, computed at the working precision set by :func:`working_precision`.
"""

from __future__ import annotations

import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import flint

DEFAULT_PRECISION = 128


@contextmanager
def working_precision(bits: int):
    """Temporarily set the ball-arithmetic precision (process global)."""
    old = flint.ctx.prec
    flint.ctx.prec = max(int(bits), 16)
    try:
        yield
    finally:
        flint.ctx.prec = old


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(Fraction(x), Fraction(0))
        if isinstance(x, complex):
            return GaussianRational(Fraction(x.real), Fraction(x.imag))
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def normalized(self) -> tuple[int, int, int]:
        """(a, b, c) with self = (a + b i)/c, c > 0 and gcd(a, b, c) = 1."""
        c = self.re.denominator * self.im.denominator // math.gcd(
            self.re.denominator, self.im.denominator
        )
        a = int(self.re * c)
        b = int(self.im * c)
        g = math.gcd(math.gcd(a, b), c)
        return a // g, b // g, c // g

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("GaussianRational division by zero")
            return GaussianRational(self.re / other, self.im / other)
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational(Fraction(1))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({format_gaussian(self)})"


I = GaussianRational(Fraction(0), Fraction(1))

Exact = Union[int, Fraction, GaussianRational]


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational))


def simplify_exact(x: Exact) -> Exact:
    """Collapse a real GaussianRational to a Fraction."""
    if isinstance(x, GaussianRational) and x.im == 0:
        return x.re
    return x


# ---------------------------------------------------------------------------
# Text formats: "a/b" and "a/b+c/d*i"
# ---------------------------------------------------------------------------

_RAT = r"\d+(?:\.\d+)?(?:/\d+)?"  # a/b, or a terminating decimal read exactly
_GAUSS_RE = re.compile(
    rf"^\s*(?:(?P<re>[+-]?{_RAT})(?![\d./]*\*i))?\s*"
    rf"(?:(?P<sign>[+-])?\s*(?P<im>{_RAT})?\*?i)?\s*$"
)


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_gaussian(x) -> str:
    x = GaussianRational.coerce(x)
    if x.im == 0:
        return format_rational(x.re)
    sign = "-" if x.im < 0 else "+"
    return f"{format_rational(x.re)}{sign}{format_rational(abs(x.im))}*i"


def parse_gaussian(text: str) -> GaussianRational:
    m = _GAUSS_RE.match(text)
    if not m or (m.group("re") is None and "i" not in text):
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_part = Fraction(0)
    if "i" in text:
        im_part = Fraction(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("sign") == "-":
            im_part = -im_part
    return GaussianRational(re_part, im_part)


def parse_exact(text: str) -> Exact:
    return simplify_exact(parse_gaussian(text))


# ---------------------------------------------------------------------------
# Balls
# ---------------------------------------------------------------------------


def ipow(x, k: int):
    """x**k by repeated squaring; arb's own power is NaN on balls straddling 0."""
    if k < 0:
        raise ValueError("negative exponent")
    out = None
    base = x
    while k:
        if k & 1:
            out = base if out is None else out * base
        k >>= 1
        if k:
            base = base * base
    return out if out is not None else x * 0 + 1


def to_acb(x) -> flint.acb:
    """Enclose an exact or ball value in an acb at the current precision."""
    if isinstance(x, flint.acb):
        return x
    if isinstance(x, flint.arb):
        return flint.acb(x)
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        return flint.acb(flint.fmpz(x))
    if isinstance(x, Fraction):
        return flint.acb(flint.arb(flint.fmpq(x.numerator, x.denominator)))
    if isinstance(x, GaussianRational):
        return flint.acb(
            flint.arb(flint.fmpq(x.re.numerator, x.re.denominator)),
            flint.arb(flint.fmpq(x.im.numerator, x.im.denominator)),
        )
    raise TypeError(f"cannot enclose {type(x).__name__}")


def arf_to_fraction(a) -> Fraction:
    man, exp = a.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


def arb_mid(a: flint.arb) -> Fraction:
    return arf_to_fraction(a.mid())


def arb_upper(a: flint.arb) -> Fraction:
    """Exact rational upper endpoint of a real ball."""
    return arf_to_fraction(a.mid()) + arf_to_fraction(a.rad())


def arb_lower(a: flint.arb) -> Fraction:
    return arf_to_fraction(a.mid()) - arf_to_fraction(a.rad())


def acb_mid(z: flint.acb) -> GaussianRational:
    return GaussianRational(arb_mid(z.real), arb_mid(z.imag))


def round_to_dyadic(z: flint.acb, bits: int) -> GaussianRational:
    """Round the centre of a ball to the grid 2^-bits (both parts)."""
    scale = 2**bits

    def rnd(a):
        f = arb_mid(a) * scale
        return Fraction(math.floor(f + Fraction(1, 2)), scale)

    return GaussianRational(rnd(z.real), rnd(z.imag))


class Ball:
    """A complex ball: centre, radius and the precision used to produce it.

    Thin wrapper over ``flint.acb`` that pins the precision of every
    operation to ``precision_bits`` so results do not depend on the ambient
    context.
    """

    __slots__ = ("value", "precision_bits")

    def __init__(self, value, precision_bits: int = DEFAULT_PRECISION):
        with working_precision(precision_bits):
            self.value = to_acb(value.value if isinstance(value, Ball) else value)
        self.precision_bits = precision_bits

    @property
    def center(self) -> GaussianRational:
        return acb_mid(self.value)

    @property
    def radius(self) -> Fraction:
        """Upper bound on the distance from the centre to any member."""
        re = arf_to_fraction(self.value.real.rad())
        im = arf_to_fraction(self.value.imag.rad())
        return re + im

    def _lift(self, other):
        prec = self.precision_bits
        if isinstance(other, Ball):
            prec = min(prec, other.precision_bits)
            other = other.value
        return prec, other

    def _op(self, other, fn):
        prec, o = self._lift(other)
        with working_precision(prec):
            return Ball(fn(self.value, to_acb(o)), prec)

    def __add__(self, other):
        return self._op(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._op(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._op(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._op(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._op(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._op(other, lambda a, b: b / a)

    def __neg__(self):
        return Ball(-self.value, self.precision_bits)

    def __pow__(self, k: int):
        with working_precision(self.precision_bits):
            return Ball(ipow(self.value, k), self.precision_bits)

    def contains(self, x) -> bool:
        with working_precision(self.precision_bits):
            return bool(self.value.contains(to_acb(x.value if isinstance(x, Ball) else x)))

    def abs_upper(self) -> Fraction:
        with working_precision(self.precision_bits):
            return arb_upper(abs(self.value))

    def __repr__(self):
        return f"Ball({self.value}, prec={self.precision_bits})"


# ---------------------------------------------------------------------------
# p-adic approximations
# ---------------------------------------------------------------------------


# absolute precision given to products with an exact zero scalar
_EXACT_ZERO_PRECISION = 1 << 30


def ord_p(x, p: int) -> float | int:
    """p-adic valuation of a nonzero rational; +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _strip(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return n, v


@dataclass(frozen=True)
class PadicApprox:
    """x = p^valuation * unit with unit known modulo p^digits.

    The zero approximation has unit == 0 and digits == 0; then ``valuation``
    is the absolute precision (x is known to be 0 mod p^valuation).
    """

    p: int
    unit: int
    valuation: int
    digits: int

    def __post_init__(self):
        if self.unit == 0:
            if self.digits != 0:
                object.__setattr__(self, "digits", 0)
        else:
            if self.digits <= 0:
                raise ValueError("known digits must be positive")
            if self.unit % self.p == 0:
                raise ValueError("unit part divisible by p")
            object.__setattr__(self, "unit", self.unit % self.p**self.digits)

    @classmethod
    def zero(cls, p: int, absolute_precision: int) -> "PadicApprox":
        return cls(p, 0, absolute_precision, 0)

    @classmethod
    def from_rational(cls, x, p: int, absolute_precision: int) -> "PadicApprox":
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, absolute_precision)
        num, a = _strip(x.numerator, p)
        den, b = _strip(x.denominator, p)
        v = a - b
        k = absolute_precision - v
        if k <= 0:
            return cls.zero(p, absolute_precision)
        mod = p**k
        return cls(p, num * pow(den, -1, mod) % mod, v, k)

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def absolute_precision(self) -> int:
        return self.valuation + self.digits

    @property
    def modulus(self) -> int:
        return self.p**self.digits

    def residue(self) -> Fraction:
        """Canonical rational representative p^v * unit."""
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def abs(self) -> Fraction:
        """|x|_p exactly, or the upper bound p^-N for the zero approximation."""
        return Fraction(1, 1) / Fraction(self.p) ** self.valuation

    def _coerce(self, other) -> "PadicApprox":
        if isinstance(other, PadicApprox):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicApprox.from_rational(other, self.p, self.absolute_precision)
        raise TypeError(f"cannot coerce {type(other).__name__} to PadicApprox")

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        n = min(self.absolute_precision, o.absolute_precision)
        m = min(self.valuation, o.valuation)
        span = n - m
        if span <= 0:
            return PadicApprox.zero(self.p, n)
        mod = self.p**span
        s = (self.unit * self.p ** (self.valuation - m) + o.unit * self.p ** (o.valuation - m)) % mod
        if s == 0:
            return PadicApprox.zero(self.p, n)
        s, t = _strip(s, self.p)
        return PadicApprox(self.p, s, m + t, span - t)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicApprox(self.p, -self.unit, self.valuation, self.digits)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return PadicApprox.zero(self.p, _EXACT_ZERO_PRECISION)
            if self.is_zero:
                return PadicApprox.zero(self.p, self.valuation + int(ord_p(c, self.p)))
            num, a = _strip(c.numerator, self.p)
            den, b = _strip(c.denominator, self.p)
            mod = self.modulus
            return PadicApprox(
                self.p, self.unit * num * pow(den, -1, mod) % mod, self.valuation + a - b, self.digits
            )
        if not isinstance(other, PadicApprox):
            return NotImplemented
        o = self._coerce(other)
        if self.is_zero or o.is_zero:
            if self.is_zero and o.is_zero:
                return PadicApprox.zero(self.p, self.valuation + o.valuation)
            z, nz = (self, o) if self.is_zero else (o, self)
            return PadicApprox.zero(self.p, z.valuation + nz.valuation)
        k = min(self.digits, o.digits)
        return PadicApprox(self.p, self.unit * o.unit, self.valuation + o.valuation, k)

    __rmul__ = __mul__

    def inverse(self) -> "PadicApprox":
        if self.is_zero:
            raise ZeroDivisionError("inverse of the zero p-adic approximation")
        return PadicApprox(self.p, pow(self.unit, -1, self.modulus), -self.valuation, self.digits)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if not isinstance(other, PadicApprox):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = PadicApprox(self.p, 1, 0, max(self.digits, 1))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self):
        if self.is_zero:
            return f"PadicApprox(0 + O({self.p}^{self.valuation}))"
        return f"PadicApprox({self.p}^{self.valuation}*{self.unit} + O({self.p}^{self.absolute_precision}))"


# ---------------------------------------------------------------------------
# Places and absolute values
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return bool(flint.fmpz(n).is_prime())


def sqrt_minus_one_mod(p: int) -> int:
    """Smallest s in (0, p) with s^2 = -1 mod p, for p = 1 mod 4."""
    if p % 4 != 1:
        raise ValueError(f"-1 is not a square mod {p}")
    for g in range(2, p):
        s = pow(g, (p - 1) // 4, p)
        if s * s % p == p - 1:
            return min(s, p - s)
    raise ArithmeticError("unreachable")  # pragma: no cover


@dataclass(frozen=True)
class Place:
    """An absolute value on Q or on Q(i).

    ``branch`` selects one of the two places above a split prime p = 1 mod 4
    in Q(i) (via i -> branch mod p); it is ``None`` for every other place.
    ``local_degree`` is n_nu in the product formula.
    """

    kind: str
    p: int | None = None
    local_degree: int = 1
    branch: int | None = None

    def __post_init__(self):
        if self.kind not in ("archimedean", "padic"):
            raise ValueError(f"unknown place kind {self.kind!r}")
        if self.kind == "padic" and (self.p is None or not is_prime(self.p)):
            raise ValueError(f"p-adic place needs a prime, got {self.p!r}")
        if self.local_degree < 1:
            raise ValueError("local degree must be >= 1")

    @classmethod
    def archimedean(cls, local_degree: int = 1) -> "Place":
        return cls("archimedean", None, local_degree)

    @classmethod
    def padic(cls, p: int) -> "Place":
        return cls("padic", p, 1)

    @classmethod
    def parse(cls, text: str) -> "Place":
        text = text.strip()
        if text in ("inf", "oo", "archimedean"):
            return cls.archimedean()
        if text.startswith("p:"):
            return cls.padic(int(text[2:]))
        raise ValueError(f"unrecognized place {text!r} (use inf or p:<prime>)")

    @property
    def is_archimedean(self) -> bool:
        return self.kind == "archimedean"

    def __str__(self):
        if self.is_archimedean:
            return "inf"
        if self.branch is not None:
            return f"p:{self.p}[i={self.branch}]"
        return f"p:{self.p}"


def gaussian_places_above(p: int) -> list[Place]:
    """Places of Q(i) above the rational prime p, with local degrees."""
    if p == 2 or p % 4 == 3:
        return [Place("padic", p, 2)]
    s = sqrt_minus_one_mod(p)
    return [Place("padic", p, 1, s), Place("padic", p, 1, p - s)]


def _hensel_sqrt_minus_one(s: int, p: int, k: int) -> int:
    mod = p
    r = s
    while mod < p**k:
        mod = min(mod * mod, p**k)
        r = (r - (r * r + 1) * pow(2 * r, -1, mod)) % mod
    return r


def padic_valuation(x, place: Place) -> Fraction | float:
    """Valuation normalised so that |x|_nu = p^(-valuation).

    For rationals this is ord_p.  For Gaussian rationals at a place of Q(i)
    the value is rational (half-integers above 2 and inert primes).
    """
    p = place.p
    if isinstance(x, PadicApprox):
        if x.is_zero:
            return math.inf
        return Fraction(x.valuation)
    x = simplify_exact(x)
    if not isinstance(x, GaussianRational):
        v = ord_p(x, p)
        return v if v == math.inf else Fraction(v)
    if not x:
        return math.inf
    a, b, c = x.normalized()
    vc = ord_p(c, p)
    if place.branch is None:
        # non-split: |x| = |N(x)|_p^(1/2)
        return Fraction(ord_p(a * a + b * b, p), 2) - vc
    bound = ord_p(a * a + b * b, p) + 1
    s = _hensel_sqrt_minus_one(place.branch, p, bound)
    t = (a + b * s) % p**bound
    return Fraction(ord_p(t, p) if t else bound) - vc


def _p_power(p: int, e: Fraction) -> Fraction | flint.arb:
    """p^e, exact when e is an integer."""
    e = Fraction(e)
    if e.denominator == 1:
        return Fraction(p) ** int(e)
    return flint.arb(p) ** flint.arb(flint.fmpq(e.numerator, e.denominator))


def abs_value(x, place: Place):
    """|x|_nu.  Exact Fraction whenever the value is rational, else an arb ball."""
    if place.is_archimedean:
        if isinstance(x, PadicApprox):
            raise TypeError("p-adic approximation has no archimedean absolute value")
        if isinstance(x, flint.acb):
            return abs(x)
        if isinstance(x, Ball):
            with working_precision(x.precision_bits):
                return abs(x.value)
        x = simplify_exact(x)
        if isinstance(x, GaussianRational):
            return _sqrt_rational(x.norm())
        return abs(Fraction(x))
    if isinstance(x, PadicApprox):
        return x.abs() if not x.is_zero else Fraction(0)
    v = padic_valuation(x, place)
    if v == math.inf:
        return Fraction(0)
    return _p_power(place.p, -v)


def _sqrt_rational(q: Fraction):
    q = Fraction(q)
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return flint.arb(flint.fmpq(q.numerator, q.denominator)).sqrt()


def vector_norm(x: Sequence, place: Place):
    """Hermitian norm (archimedean) or max-norm (ultrametric) of a vector."""
    if place.is_archimedean:
        if any(isinstance(c, (flint.acb, flint.arb, Ball)) for c in x):
            total = flint.arb(0)
            for c in x:
                a = abs_value(c, place)
                total += a * a if not isinstance(a, Fraction) else to_acb(a * a).real
            return total.nonnegative_part().sqrt()
        total = sum((GaussianRational.coerce(c).norm() for c in x), Fraction(0))
        return _sqrt_rational(total)
    best = Fraction(0)
    best_v = math.inf
    for c in x:
        v = padic_valuation(c, place)
        if v < best_v:
            best_v = v
    if best_v == math.inf:
        return best
    return _p_power(place.p, -best_v)


def product_formula(x, places: Iterable[Place]):
    """prod |x|_nu^{n_nu} over the given places (exact where possible)."""
    total = Fraction(1)
    for place in places:
        total = real_mul(total, _abs_power(x, place, place.local_degree))
    return total


def _abs_power(x, place: Place, k: int):
    """|x|_nu^k, exact whenever the result is rational."""
    if place.is_archimedean:
        x = simplify_exact(x)
        if isinstance(x, GaussianRational) and k % 2 == 0:
            return x.norm() ** (k // 2)
        a = abs_value(x, place)
        return ipow(a, k)
    v = padic_valuation(x, place)
    if v == math.inf:
        return Fraction(0)
    return _p_power(place.p, -v * k)


def as_arb(x) -> flint.arb:
    if isinstance(x, flint.arb):
        return x
    x = Fraction(x)
    return flint.arb(flint.fmpq(x.numerator, x.denominator))


def real_mul(a, b):
    """Multiply Fractions exactly, falling back to arb when either is a ball."""
    if isinstance(a, flint.arb) or isinstance(b, flint.arb):
        return as_arb(a) * as_arb(b)
    return a * b


def places_for(x, K_is_gaussian: bool = False) -> list[Place]:
    """Archimedean place plus all finite places where x is not a unit."""
    x = simplify_exact(x)
    if isinstance(x, GaussianRational):
        K_is_gaussian = True
        a, b, c = x.normalized()
        support = (a * a + b * b) * c
    else:
        support = Fraction(x).numerator * Fraction(x).denominator
    primes = sorted(int(q) for q, _ in flint.fmpz(abs(support)).factor()) if abs(support) > 1 else []
    if K_is_gaussian:
        places = [Place.archimedean(2)]
        for q in primes:
            places.extend(gaussian_places_above(q))
        return places
    return [Place.archimedean()] + [Place.padic(q) for q in primes]


# ---------------------------------------------------------------------------
# Heights
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class HeightValue:
    """Logarithmic height log(magnitude), kept exact through the integer magnitude."""

    magnitude: int

    def __post_init__(self):
        if self.magnitude < 1:
            object.__setattr__(self, "magnitude", 1)

    @property
    def value(self) -> float:
        return math.log(self.magnitude)

    @property
    def bits(self) -> int:
        """ceil(ht / log 2)."""
        return (self.magnitude - 1).bit_length()

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"HeightValue(log {self.magnitude} = {self.value:.6g})"


def height(x) -> HeightValue:
    """Logarithmic height of a rational, Gaussian rational, polynomial or vector."""
    if hasattr(x, "height") and not isinstance(x, (int, Fraction, GaussianRational)):
        h = x.height
        return h() if callable(h) else h
    if isinstance(x, (list, tuple)):
        return max((height(c) for c in x), default=HeightValue(1))
    x = simplify_exact(x)
    if isinstance(x, GaussianRational):
        a, b, c = x.normalized()
        return HeightValue(max(abs(a), abs(b), c))
    x = Fraction(x)
    return HeightValue(max(abs(x.numerator), x.denominator))


def coefficient_magnitude(c) -> int:
    """max(|Re|, |Im|) of an integer or Gaussian-integer coefficient."""
    c = simplify_exact(c)
    if isinstance(c, GaussianRational):
        a, b, d = c.normalized()
        return max(abs(a), abs(b), d)
    c = Fraction(c)
    return max(abs(c.numerator), c.denominator)
