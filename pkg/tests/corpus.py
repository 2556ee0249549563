"""Deterministic polynomial-system corpora for the unit and acceptance suites."""

import math
import random
from fractions import Fraction

from kronewton.newton import deform_system, mignotte_system
from kronewton.polysys import MultiPoly, PolySystem, variables


def _clear_denominators(f: MultiPoly) -> MultiPoly:
    den = 1
    for c in f.terms.values():
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    return f * den


def rational_zero_system(rng: random.Random, n: int, den: int = 4) -> tuple[PolySystem, list[Fraction]]:
    """Integer quadratic system with a prescribed rational zero and invertible Jacobian there."""
    X = variables(n)
    zeta = [Fraction(rng.randint(-9, 9), rng.randint(1, den)) for _ in range(n)]
    shifted = [X[j] - zeta[j] for j in range(n)]
    while True:
        A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        if _det(A) != 0:
            break
    polys = []
    for i in range(n):
        f = MultiPoly.constant(n, 0)
        for j in range(n):
            f = f + A[i][j] * shifted[j]
            for k in range(j, n):
                c = rng.randint(-3, 3)
                if c:
                    f = f + c * shifted[j] * shifted[k]
        polys.append(_clear_denominators(f))
    return PolySystem(polys), zeta


def _det(A):
    A = [[Fraction(x) for x in row] for row in A]
    n, sign, out = len(A), 1, Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        out *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return sign * out


def dense_system(rng: random.Random, n: int, c: int = 3) -> PolySystem:
    X = variables(n)
    polys = []
    for _ in range(n):
        f = MultiPoly.constant(n, rng.randint(-c, c))
        for j in range(n):
            f = f + rng.randint(-c, c) * X[j]
            for k in range(j, n):
                f = f + rng.randint(-c, c) * X[j] * X[k]
        polys.append(f)
    return PolySystem(polys)


def tower_system(shifts: list[int]) -> PolySystem:
    """X_1^2 - a_1, X_2^2 - X_1 - a_2, ...: a tower of square roots."""
    n = len(shifts)
    X = variables(n)
    polys = [X[0] * X[0] - shifts[0]]
    for i in range(1, n):
        polys.append(X[i] * X[i] - X[i - 1] - shifts[i])
    return PolySystem(polys)


def univariate(coeffs) -> PolySystem:
    return PolySystem([MultiPoly.univariate(list(coeffs))])


def geometric_corpus() -> list[tuple[str, PolySystem]]:
    """Twenty zero-dimensional systems with at most 16 points."""
    rng = random.Random(7)
    x1, x2 = variables(2)
    out = [
        ("sqrt2-diagonal", PolySystem([x1 * x1 - 2, x2 - x1])),
        ("fourth-root-2", PolySystem([x1 * x1 - 2, x2 * x2 - x1])),
        ("rational-point", univariate([-2, 1])),
        ("deform-rational", deform_system(univariate([-2, 1]))),
        ("deform-sqrt2", deform_system(univariate([-2, 0, 1]))),
        ("mignotte-3", mignotte_system(3)),
        ("mignotte-4", mignotte_system(4)),
        ("tower-3", tower_system([3, 1, 2])),
        ("tower-4", tower_system([2, 1, 1, 3])),
        ("double-deform", deform_system(deform_system(univariate([-2, 0, 1])))),
    ]
    for i in range(4):
        out.append((f"dense-2-{i}", dense_system(rng, 2)))
    for i in range(3):
        out.append((f"dense-3-{i}", dense_system(rng, 3)))
    out.append(("dense-4-0", dense_system(rng, 4)))
    for i in range(2):
        F, _ = rational_zero_system(rng, 2)
        out.append((f"rational-zero-{i}", F))
    return out


def round_trip_corpus() -> list[tuple[str, PolySystem]]:
    """Ten systems for the approximate-zero / Kronecker round trip."""
    rng = random.Random(11)
    x1, x2 = variables(2)
    return [
        ("fourth-root-2", PolySystem([x1 * x1 - 2, x2 * x2 - x1])),
        ("deform-sqrt2", deform_system(univariate([-2, 0, 1]))),
        ("mignotte-3", mignotte_system(3)),
        ("tower-3", tower_system([3, 1, 2])),
        ("tower-4", tower_system([2, 1, 1, 3])),
        ("dense-2-a", dense_system(rng, 2)),
        ("dense-2-b", dense_system(rng, 2)),
        ("dense-3-a", dense_system(rng, 3)),
        ("dense-3-b", dense_system(rng, 3)),
        ("dense-4", dense_system(rng, 4)),
    ]


def hensel_pairs() -> list[tuple[PolySystem, list[int], int]]:
    """(system, integer point, prime): a mix of basin points and non-basin points."""
    rng = random.Random(13)
    x1, x2 = variables(2)
    pairs = [
        (univariate([-2, 0, 1]), [3], 7),
        (univariate([-2, 0, 1]), [4], 7),
        (univariate([-2, 0, 1]), [1], 7),
        (univariate([-7, 0, 1]), [0], 7),
        (univariate([-7, 0, 1]), [3], 7),
        (univariate([1, 0, 1]), [2], 5),
        (univariate([1, 0, 1]), [1], 3),
        (univariate([-2, 0, 0, 1]), [3], 5),
        (PolySystem([x1 * x1 - 2, x2 * x2 - x1]), [3, 2], 7),
        (PolySystem([x1 * x1 - 2, x2 - x1]), [3, 3], 7),
        (PolySystem([x1 * x1 - 2, x2 - x1]), [3, 4], 7),
        (PolySystem([x1 * x2 - 1, x1 + x2 - 3]), [1, 2], 5),
    ]
    while len(pairs) < 20:
        p = rng.choice([3, 5, 7, 11])
        F = dense_system(rng, 2, c=4)
        pairs.append((F, [rng.randrange(p), rng.randrange(p)], p))
    return pairs
