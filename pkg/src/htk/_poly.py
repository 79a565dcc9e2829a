"""Monomial bookkeeping for homogeneous polynomials in three variables.

A degree-n homogeneous polynomial on R^3 is stored as a dense coefficient
vector over the monomial basis x^a y^b z^c, ordered graded-lexicographically
with x > y > z.  All tables are small (degree <= ~12) and cached.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


def basis_size(n: int) -> int:
    """Number of degree-n monomials in three variables."""
    return (n + 1) * (n + 2) // 2


@lru_cache(maxsize=None)
def exponents(n: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples (a, b, c) with a+b+c = n, graded-lex order."""
    return tuple(
        (a, b, n - a - b) for a in range(n, -1, -1) for b in range(n - a, -1, -1)
    )


@lru_cache(maxsize=None)
def exponent_index(n: int) -> dict[tuple[int, int, int], int]:
    return {e: i for i, e in enumerate(exponents(n))}


@lru_cache(maxsize=None)
def multinomials(n: int) -> np.ndarray:
    """Multinomial weight n!/(a! b! c!) for each basis monomial."""
    fn = math.factorial(n)
    out = np.array(
        [
            fn // (math.factorial(a) * math.factorial(b) * math.factorial(c))
            for a, b, c in exponents(n)
        ],
        dtype=float,
    )
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _mul_index(n1: int, n2: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flat index triples (i, j, k): monomial_i(n1) * monomial_j(n2) = monomial_k."""
    idx = exponent_index(n1 + n2)
    left, right, target = [], [], []
    for i, (a1, b1, c1) in enumerate(exponents(n1)):
        for j, (a2, b2, c2) in enumerate(exponents(n2)):
            left.append(i)
            right.append(j)
            target.append(idx[(a1 + a2, b1 + b2, c1 + c2)])
    return np.array(left), np.array(right), np.array(target)


def poly_mul(c1: np.ndarray, n1: int, c2: np.ndarray, n2: int) -> np.ndarray:
    """Coefficients of the product of two homogeneous polynomials."""
    i, j, k = _mul_index(n1, n2)
    out = np.zeros(basis_size(n1 + n2), dtype=np.result_type(c1, c2))
    np.add.at(out, k, c1[i] * c2[j])
    return out


@lru_cache(maxsize=None)
def laplacian_matrix(n: int) -> np.ndarray:
    """Dense matrix applying the Laplacian, degree n -> degree n-2."""
    if n < 2:
        raise ValueError("Laplacian needs degree >= 2")
    mat = np.zeros((basis_size(n - 2), basis_size(n)))
    idx = exponent_index(n - 2)
    for j, (a, b, c) in enumerate(exponents(n)):
        if a >= 2:
            mat[idx[(a - 2, b, c)], j] += a * (a - 1)
        if b >= 2:
            mat[idx[(a, b - 2, c)], j] += b * (b - 1)
        if c >= 2:
            mat[idx[(a, b, c - 2)], j] += c * (c - 1)
    mat.setflags(write=False)
    return mat


# q(x, y, z) = x^2 + y^2 + z^2 over the degree-2 basis [x2 xy xz y2 yz z2]
Q_COEFFS = np.array([1.0, 0.0, 0.0, 1.0, 0.0, 1.0])
Q_COEFFS.setflags(write=False)


@lru_cache(maxsize=None)
def q_power(j: int) -> np.ndarray:
    """Coefficients of (x^2 + y^2 + z^2)^j."""
    if j == 0:
        return np.array([1.0])
    prev = q_power(j - 1)
    out = poly_mul(prev, 2 * (j - 1), Q_COEFFS, 2)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def leading_projection_factor(n: int, k: int) -> float:
    """Rational factor in the recursive extraction of the degree n-2k piece.

    Evaluated exactly as a Fraction before conversion: the factorial ratios
    overflow double precision well before the degrees used here.
    """
    num = Fraction(math.factorial(2 * n - 4 * k + 1)) * math.factorial(n - k)
    den = (
        Fraction(math.factorial(2 * n - 2 * k + 1))
        * math.factorial(k)
        * math.factorial(n - 2 * k)
    )
    return float(num / den)
