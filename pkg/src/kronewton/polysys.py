"""Multivariate integer polynomials, square systems and straight-line programs."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

import flint

from .exact_arith import (
    Ball,
    GaussianRational,
    HeightValue,
    PadicApprox,
    coefficient_magnitude,
    format_gaussian,
    ipow,
    parse_exact,
    simplify_exact,
    to_acb,
)


class DimensionMismatch(ValueError):
    pass


class SingularJacobian(ArithmeticError):
    """DF(z) is singular where smoothness was asserted."""


def _lift(c, sample):
    """Bring an exact coefficient into the ring of ``sample``."""
    if isinstance(sample, flint.acb):
        return to_acb(c)
    if isinstance(sample, flint.arb):
        return to_acb(c).real if not isinstance(c, GaussianRational) else to_acb(c)
    if isinstance(sample, GaussianRational) and not isinstance(c, GaussianRational):
        return GaussianRational.coerce(c)
    return c


def _mod_scalar(c, m: int, i_mod: int | None = None) -> int:
    c = simplify_exact(c)
    if isinstance(c, GaussianRational):
        if i_mod is None:
            raise ValueError("Gaussian scalar needs a square root of -1 modulo m")
        return (_mod_scalar(c.re, m) + _mod_scalar(c.im, m) * i_mod) % m
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, m) % m


# ---------------------------------------------------------------------------
# MultiPoly
# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse polynomial in ``n_vars`` variables with exact coefficients.

    Terms are stored as ``{exponent tuple: coefficient}`` with no zero
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("n_vars", "terms", "_degree")

    def __init__(self, n_vars: int, terms: Mapping[tuple, object] | Iterable = ()):
        self.n_vars = n_vars
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple, object] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n_vars:
                raise DimensionMismatch(f"exponent {exps} has wrong length for {n_vars} vars")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = simplify_exact(c)
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            total = clean.get(exps, 0) + c
            if total:
                clean[exps] = total
            else:
                clean.pop(exps, None)
        self.terms = clean
        self._degree = max((sum(e) for e in clean), default=0)

    # constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, n_vars: int, c) -> "MultiPoly":
        return cls(n_vars, {(0,) * n_vars: c})

    @classmethod
    def variable(cls, i: int, n_vars: int) -> "MultiPoly":
        e = [0] * n_vars
        e[i] = 1
        return cls(n_vars, {tuple(e): 1})

    @classmethod
    def univariate(cls, coeffs: Sequence, n_vars: int = 1, var: int = 0) -> "MultiPoly":
        """From little-endian coefficients in variable ``var``."""
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * n_vars
            e[var] = k
            terms[tuple(e)] = c
        return cls(n_vars, terms)

    # properties -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def height(self) -> HeightValue:
        return HeightValue(max((coefficient_magnitude(c) for c in self.terms.values()), default=1))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get((0,) * self.n_vars, 0)

    def coefficients_univariate(self, var: int = 0) -> list:
        """Little-endian coefficient list, requires a polynomial in ``var`` only."""
        out = [0] * (self.degree + 1)
        for e, c in self.terms.items():
            if any(x for j, x in enumerate(e) if j != var):
                raise ValueError("polynomial is not univariate")
            out[e[var]] = c
        return out

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if other.n_vars != self.n_vars:
            raise DimensionMismatch("variable count mismatch")

    def _as_poly(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.n_vars, other)

    def __add__(self, other):
        o = self._as_poly(other)
        return MultiPoly(self.n_vars, list(self.terms.items()) + list(o.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.n_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._as_poly(other))

    def __rsub__(self, other):
        return self._as_poly(other) - self

    def __mul__(self, other):
        o = self._as_poly(other)
        out: dict[tuple, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.n_vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.n_vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.n_vars == other.n_vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.n_vars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n_vars, frozenset(self.terms.items())))

    def derivative(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MultiPoly(self.n_vars, out)

    def permute(self, perm: Sequence[int]) -> "MultiPoly":
        """Rename variable j to perm[j]."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.n_vars
            for j, x in enumerate(e):
                ne[perm[j]] = x
            out[tuple(ne)] = c
        return MultiPoly(self.n_vars, out)

    def embed(self, n_vars: int) -> "MultiPoly":
        """Same polynomial viewed in more variables (appended at the end)."""
        pad = (0,) * (n_vars - self.n_vars)
        return MultiPoly(n_vars, {e + pad: c for e, c in self.terms.items()})

    def substitute(self, polys: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace X_j with polys[j] (all in a common ring)."""
        if len(polys) != self.n_vars:
            raise DimensionMismatch("substitution length")
        target = polys[0].n_vars if polys else 0
        return self.evaluate(list(polys), zero=MultiPoly.constant(target, 0))

    # evaluation -----------------------------------------------------------

    def evaluate(self, point: Sequence, modulus: int | None = None, zero=None, i_mod: int | None = None):
        """Evaluate at ``point`` in any commutative ring the coordinates live in.

        With ``modulus`` the coordinates are integers and the result is reduced
        mod ``modulus`` (Gaussian coefficients need ``i_mod``).
        """
        if len(point) != self.n_vars:
            raise DimensionMismatch(f"point has {len(point)} coordinates, expected {self.n_vars}")
        if modulus is not None:
            return self._evaluate_mod(point, modulus, i_mod)
        if not self.terms:
            return zero if zero is not None else _zero_like(point)
        sample = point[0] if point else None
        powers: list[dict[int, object]] = [dict() for _ in range(self.n_vars)]

        def pw(j, k):
            cache = powers[j]
            if k not in cache:
                cache[k] = ipow(point[j], k)
            return cache[k]

        total = None
        for e, c in self.terms.items():
            term = None
            for j, k in enumerate(e):
                if k:
                    term = pw(j, k) if term is None else term * pw(j, k)
            if term is None:
                term = _lift(c, sample) if sample is not None else c
                if zero is not None and not isinstance(term, type(zero)):
                    term = zero + c
            else:
                term = term * (_lift(c, term) if not isinstance(term, MultiPoly) else c)
            total = term if total is None else total + term
        return total

    def _evaluate_mod(self, point, m: int, i_mod):
        pts = [_mod_scalar(x, m, i_mod) if not isinstance(x, int) else x % m for x in point]
        total = 0
        for e, c in self.terms.items():
            term = _mod_scalar(c, m, i_mod)
            for j, k in enumerate(e):
                if k:
                    term = term * pow(pts[j], k, m) % m
            total += term
        return total % m

    def __call__(self, *point):
        return self.evaluate(point)

    # text / json ----------------------------------------------------------

    def to_json(self) -> dict:
        terms = [[list(e), format_gaussian(c)] for e, c in sorted(self.terms.items(), reverse=True)]
        return {"vars": self.n_vars, "terms": terms}

    @classmethod
    def from_json(cls, obj: Mapping) -> "MultiPoly":
        n = int(obj["vars"])
        terms = []
        for e, c in obj["terms"]:
            terms.append((tuple(e), parse_exact(str(c)) if isinstance(c, str) else c))
        return cls(n, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"X{j + 1}" + (f"^{k}" if k > 1 else "") for j, k in enumerate(e) if k
            )
            cs = format_gaussian(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}" if "i" in cs or "/" in cs else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _zero_like(point):
    if point and isinstance(point[0], (flint.acb, flint.arb)):
        return point[0] * 0
    if point and isinstance(point[0], (PadicApprox, Ball, GaussianRational)):
        return point[0] * 0
    return 0


def variables(n: int) -> list[MultiPoly]:
    return [MultiPoly.variable(i, n) for i in range(n)]


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JetAtPoint:
    value: list
    jacobian: list[list]
    second: list  # second[i][j][k] = d^2 f_i / dX_j dX_k


class PolySystem:
    """A square system (f_1, ..., f_n) of polynomials in n variables.

    ``asserted`` records that the caller vouches for zero-dimensionality,
    smoothness and radicality; these are not checked at construction time.
    """

    def __init__(self, polys: Sequence[MultiPoly], asserted: bool = True):
        polys = tuple(polys)
        if not polys:
            raise ValueError("empty system")
        n = polys[0].n_vars
        if any(f.n_vars != n for f in polys):
            raise DimensionMismatch("polynomials live in different rings")
        if len(polys) != n:
            raise DimensionMismatch(f"system is not square: {len(polys)} equations in {n} variables")
        self.polys = polys
        self.n = n
        self.asserted = asserted
        self.jacobian_polys = tuple(tuple(f.derivative(j) for j in range(n)) for f in polys)
        self._derivatives: dict[tuple, MultiPoly] = {}

    @property
    def degree_bound(self) -> int:
        return max(f.degree for f in self.polys)

    @property
    def paper_regime(self) -> bool:
        return self.degree_bound <= 2

    @property
    def height_bound(self) -> HeightValue:
        return max(f.height() for f in self.polys)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __eq__(self, other):
        return isinstance(other, PolySystem) and self.polys == other.polys

    def __repr__(self):
        return "PolySystem(" + ", ".join(repr(f) for f in self.polys) + ")"

    def evaluate(self, z: Sequence, modulus: int | None = None) -> list:
        return [f.evaluate(z, modulus=modulus) for f in self.polys]

    def jacobian(self, z: Sequence, modulus: int | None = None) -> list[list]:
        return [[d.evaluate(z, modulus=modulus) for d in row] for row in self.jacobian_polys]

    def partial(self, i: int, index: tuple[int, ...]) -> MultiPoly:
        """d^k f_i / dX_index[0] ... dX_index[k-1] (index sorted, cached)."""
        key = (i, tuple(sorted(index)))
        if key not in self._derivatives:
            p = self.polys[i]
            for j in key[1]:
                p = p.derivative(j)
            self._derivatives[key] = p
        return self._derivatives[key]

    def derivative_tensor(self, z: Sequence, k: int) -> dict[tuple, list]:
        """Nonzero entries of D^k F(z): {sorted index tuple: [value per equation]}."""
        out = {}
        for idx in combinations_with_replacement(range(self.n), k):
            vals = []
            nonzero = False
            for i in range(self.n):
                d = self.partial(i, idx)
                if d.is_zero():
                    vals.append(0)
                else:
                    nonzero = True
                    vals.append(d.evaluate(z))
            if nonzero:
                out[idx] = vals
        return out

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(f.to_json()) for f in self.polys) + "\n"

    @classmethod
    def from_jsonl(cls, text: str, asserted: bool = True) -> "PolySystem":
        polys = [MultiPoly.from_json(json.loads(line)) for line in text.splitlines() if line.strip()]
        return cls(polys, asserted=asserted)


def jet(F: PolySystem, z: Sequence) -> JetAtPoint:
    """Value, Jacobian and second-derivative tensor of F at z."""
    n = F.n
    value = F.evaluate(z)
    jac = F.jacobian(z)
    zero = _zero_like(list(z))
    second = [[[zero for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for (a, b), vals in F.derivative_tensor(z, 2).items():
        for i in range(n):
            second[i][a][b] = vals[i]
            second[i][b][a] = vals[i]
    return JetAtPoint(value, jac, second)


# ---------------------------------------------------------------------------
# Straight-line programs
# ---------------------------------------------------------------------------

_OPS = {"input", "const", "add", "sub", "mul", "smul"}


@dataclass(frozen=True)
class Slp:
    """Division-free straight-line program.

    Instructions are tuples: ``("input", j)``, ``("const", c)``,
    ``("add", a, b)``, ``("sub", a, b)``, ``("mul", a, b)`` and
    ``("smul", c, a)`` where a, b index earlier instructions.  A ``mul`` with
    a constant operand is scalar and costs nothing.  ``size`` counts non-scalar
    multiplications; ``depth`` is the non-scalar multiplicative depth.
    """

    n_inputs: int
    instructions: tuple
    output: int = -1
    size: int = field(init=False)
    depth: int = field(init=False)
    scalar_mask: tuple = field(init=False, repr=False)

    def __post_init__(self):
        instrs = tuple(tuple(ins) for ins in self.instructions)
        object.__setattr__(self, "instructions", instrs)
        if not instrs:
            raise ValueError("empty SLP")
        out = self.output if self.output >= 0 else len(instrs) + self.output
        if not 0 <= out < len(instrs):
            raise ValueError("output index out of range")
        object.__setattr__(self, "output", out)
        const: list[bool] = []
        depth: list[int] = []
        size = 0
        for k, ins in enumerate(instrs):
            op = ins[0]
            if op not in _OPS:
                raise ValueError(f"unknown op {op!r}")
            refs = {"add": ins[1:3], "sub": ins[1:3], "mul": ins[1:3], "smul": ins[2:3]}.get(op, ())
            for r in refs:
                if not isinstance(r, int) or not 0 <= r < k:
                    raise ValueError(f"instruction {k} references {r}, not an earlier result")
            if op == "input":
                if not 0 <= ins[1] < self.n_inputs:
                    raise ValueError("input index out of range")
                const.append(False)
                depth.append(0)
            elif op == "const":
                const.append(True)
                depth.append(0)
            elif op in ("add", "sub"):
                const.append(const[ins[1]] and const[ins[2]])
                depth.append(max(depth[ins[1]], depth[ins[2]]))
            elif op == "smul":
                const.append(const[ins[2]])
                depth.append(depth[ins[2]])
            else:
                a, b = ins[1], ins[2]
                if const[a] or const[b]:
                    const.append(const[a] and const[b])
                    depth.append(max(depth[a], depth[b]))
                else:
                    const.append(False)
                    depth.append(max(depth[a], depth[b]) + 1)
                    size += 1
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "depth", max(depth))
        object.__setattr__(self, "scalar_mask", tuple(const))

    @property
    def scalars(self) -> list:
        out = []
        for ins in self.instructions:
            if ins[0] == "const":
                out.append(ins[1])
            elif ins[0] == "smul":
                out.append(ins[1])
        return out

    def scalar_height(self) -> HeightValue:
        return max((HeightValue(coefficient_magnitude(c)) for c in self.scalars), default=HeightValue(1))

    def evaluate(self, point: Sequence, modulus: int | None = None, i_mod: int | None = None):
        if len(point) != self.n_inputs:
            raise DimensionMismatch(f"SLP takes {self.n_inputs} inputs, got {len(point)}")
        vals: list = []
        if modulus is not None:
            pts = [x % modulus if isinstance(x, int) else _mod_scalar(x, modulus, i_mod) for x in point]
            for ins in self.instructions:
                op = ins[0]
                if op == "input":
                    vals.append(pts[ins[1]])
                elif op == "const":
                    vals.append(_mod_scalar(ins[1], modulus, i_mod))
                elif op == "add":
                    vals.append((vals[ins[1]] + vals[ins[2]]) % modulus)
                elif op == "sub":
                    vals.append((vals[ins[1]] - vals[ins[2]]) % modulus)
                elif op == "mul":
                    vals.append(vals[ins[1]] * vals[ins[2]] % modulus)
                else:
                    vals.append(_mod_scalar(ins[1], modulus, i_mod) * vals[ins[2]] % modulus)
            return vals[self.output]
        sample = point[0] if point else 0
        for ins in self.instructions:
            op = ins[0]
            if op == "input":
                vals.append(point[ins[1]])
            elif op == "const":
                vals.append(_lift(ins[1], sample))
            elif op == "add":
                vals.append(vals[ins[1]] + vals[ins[2]])
            elif op == "sub":
                vals.append(vals[ins[1]] - vals[ins[2]])
            elif op == "mul":
                vals.append(vals[ins[1]] * vals[ins[2]])
            else:
                vals.append(_lift(ins[1], sample) * vals[ins[2]])
        return vals[self.output]

    def to_multipoly(self) -> MultiPoly:
        """Expand symbolically (exponential in depth; for tests and small programs)."""
        xs = variables(self.n_inputs)
        out = self.evaluate(xs) if self.n_inputs else self.evaluate([])
        return out if isinstance(out, MultiPoly) else MultiPoly.constant(self.n_inputs, out)

    def to_json(self) -> dict:
        instrs = []
        for ins in self.instructions:
            if ins[0] == "const":
                instrs.append(["const", format_gaussian(ins[1])])
            elif ins[0] == "smul":
                instrs.append(["smul", format_gaussian(ins[1]), ins[2]])
            else:
                instrs.append(list(ins))
        return {"inputs": self.n_inputs, "instructions": instrs, "output": self.output}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Slp":
        instrs = []
        for ins in obj["instructions"]:
            op = ins[0]
            if op == "const":
                instrs.append(("const", parse_exact(str(ins[1]))))
            elif op == "smul":
                instrs.append(("smul", parse_exact(str(ins[1])), int(ins[2])))
            else:
                instrs.append((op,) + tuple(int(a) for a in ins[1:]))
        return cls(int(obj["inputs"]), tuple(instrs), int(obj.get("output", -1)))


class SlpBuilder:
    """Incremental SLP construction; node handles are instruction indices."""

    def __init__(self, n_inputs: int):
        self.n_inputs = n_inputs
        self.instructions: list[tuple] = []
        self._inputs: dict[int, int] = {}
        self._consts: dict = {}

    def _emit(self, ins) -> int:
        self.instructions.append(ins)
        return len(self.instructions) - 1

    def input(self, j: int) -> int:
        if j not in self._inputs:
            self._inputs[j] = self._emit(("input", j))
        return self._inputs[j]

    def const(self, c) -> int:
        c = simplify_exact(c)
        if isinstance(c, Fraction) and c.denominator == 1:
            c = c.numerator
        key = (type(c).__name__, c)
        if key not in self._consts:
            self._consts[key] = self._emit(("const", c))
        return self._consts[key]

    def add(self, a: int, b: int) -> int:
        return self._emit(("add", a, b))

    def sub(self, a: int, b: int) -> int:
        return self._emit(("sub", a, b))

    def mul(self, a: int, b: int) -> int:
        return self._emit(("mul", a, b))

    def smul(self, c, a: int) -> int:
        return self._emit(("smul", c, a))

    def pow(self, a: int, k: int) -> int:
        """a^k by repeated squaring (k >= 1)."""
        if k < 1:
            raise ValueError("pow needs k >= 1")
        result = None
        base = a
        while True:
            if k & 1:
                result = base if result is None else self.mul(result, base)
            k >>= 1
            if not k:
                return result
            base = self.mul(base, base)

    def build(self, output: int = -1) -> Slp:
        return Slp(self.n_inputs, tuple(self.instructions), output)


def random_prime(bits: int, rng: random.Random, condition=None) -> int:
    """Random prime of exactly ``bits`` bits, optionally meeting ``condition``."""
    while True:
        q = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        while not flint.fmpz(q).is_prime():
            q += 2
        if q.bit_length() == bits and (condition is None or condition(q)):
            return q


def compile_to_slp(f: MultiPoly, seed: int = 0) -> Slp:
    """Straight-line program for f: cached binary powers, monomial products, scalar sum.

    The result is checked against direct evaluation at 10 random points
    modulo a 62-bit prime.
    """
    b = SlpBuilder(f.n_vars)
    power_cache: dict[tuple[int, int], int] = {}

    def var_power(j: int, k: int) -> int:
        key = (j, k)
        if key in power_cache:
            return power_cache[key]
        if k == 1:
            node = b.input(j)
        elif k % 2 == 0:
            half = var_power(j, k // 2)
            node = b.mul(half, half)
        else:
            node = b.mul(var_power(j, k - 1), var_power(j, 1))
        power_cache[key] = node
        return node

    acc = None
    for e, c in sorted(f.terms.items()):
        mono = None
        for j, k in enumerate(e):
            if k:
                p = var_power(j, k)
                mono = p if mono is None else b.mul(mono, p)
        if mono is None:
            term = b.const(c)
        elif c == 1:
            term = mono
        else:
            term = b.smul(c, mono)
        acc = term if acc is None else b.add(acc, term)
    if acc is None:
        acc = b.const(0)
    slp = b.build(acc)

    rng = random.Random(seed)
    q = random_prime(62, rng, lambda q: q % 4 == 1)
    i_mod = _sqrt_minus_one_mod_prime(q)
    for _ in range(10):
        pt = [rng.randrange(q) for _ in range(f.n_vars)]
        if slp.evaluate(pt, modulus=q, i_mod=i_mod) != f.evaluate(pt, modulus=q, i_mod=i_mod):
            raise AssertionError("compiled SLP disagrees with its polynomial")  # pragma: no cover
    return slp


def _sqrt_minus_one_mod_prime(q: int) -> int:
    for g in range(2, 1000):
        s = pow(g, (q - 1) // 4, q)
        if s * s % q == q - 1:
            return s
    raise ArithmeticError("no square root of -1 found")  # pragma: no cover


def random_slp(
    rng: random.Random,
    n_inputs: int,
    max_size: int = 12,
    max_depth: int = 4,
    scalar_bound: int = 8,
    n_ops: int = 14,
) -> Slp:
    """Random SLP with integer scalars in [-scalar_bound, scalar_bound]."""
    b = SlpBuilder(n_inputs)
    nodes = [b.input(j) for j in range(n_inputs)]
    depth = {n: 0 for n in nodes}
    size = 0
    for _ in range(n_ops):
        r = rng.random()
        a = rng.choice(nodes)
        if r < 0.35 and size < max_size:
            c = rng.choice(nodes)
            d = max(depth[a], depth[c]) + 1
            if d <= max_depth:
                node = b.mul(a, c)
                size += 1
                depth[node] = d
                nodes.append(node)
                continue
        if r < 0.7:
            c = rng.choice(nodes)
            node = b.add(a, c) if rng.random() < 0.5 else b.sub(a, c)
            depth[node] = max(depth[a], depth[c])
        elif r < 0.85:
            s = rng.randint(-scalar_bound, scalar_bound) or 1
            node = b.smul(s, a)
            depth[node] = depth[a]
        else:
            s = rng.randint(-scalar_bound, scalar_bound)
            node = b.add(a, b.const(s))
            depth[node] = depth[a]
        nodes.append(node)
    return b.build(nodes[-1])
