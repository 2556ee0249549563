"""Small exact linear algebra over Q, Q(i) and Z/p^k."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import flint

from .polysys import SingularJacobian


def _is_zero(x) -> bool:
    return not x


def solve(A: Sequence[Sequence], b: Sequence) -> list:
    """Solve A x = b exactly by Gaussian elimination (field entries)."""
    n = len(A)
    M = [[_field(x) for x in row] + [_field(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not _is_zero(M[r][col])), None)
        if piv is None:
            raise SingularJacobian("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        for r in range(n):
            if r != col and not _is_zero(M[r][col]):
                f = M[r][col] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _field(x):
    return Fraction(x) if isinstance(x, int) else x


def inverse(A: Sequence[Sequence]) -> list[list]:
    n = len(A)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        cols.append(solve(A, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def det(A: Sequence[Sequence]):
    n = len(A)
    M = [[_field(x) for x in row] for row in A]
    d = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if not _is_zero(M[r][col])), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            d = -d
        d = d * M[col][col]
        inv = 1 / M[col][col]
        for r in range(col + 1, n):
            if not _is_zero(M[r][col]):
                f = M[r][col] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return d


def matvec(A, x):
    return [sum((a * b for a, b in zip(row, x)), 0 * x[0] if x else 0) for row in A]


def acb_matrix(A) -> flint.acb_mat:
    from .exact_arith import to_acb

    return flint.acb_mat([[to_acb(x) for x in row] for row in A])


def solve_mod(A: Sequence[Sequence[int]], b: Sequence[int], p: int, k: int) -> list[int]:
    """Solve A x = b mod p^k; requires det A to be a unit mod p."""
    mod = p**k
    n = len(A)
    M = [[x % mod for x in row] + [b[i] % mod] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] % p), None)
        if piv is None:
            raise SingularJacobian(f"Jacobian is singular modulo {p}")
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], -1, mod)
        M[col] = [x * inv % mod for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [(x - f * y) % mod for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]
