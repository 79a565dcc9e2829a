"""Harmonic projection, harmonic decomposition and the harmonic product.

Every homogeneous polynomial p of degree n splits uniquely as
p = h0 + q h1 + ... + q^r h_r with q = x^2+y^2+z^2, r = floor(n/2) and each
h_k harmonic of degree n-2k.  The pieces are extracted bottom-up: the lowest
piece comes from the r-fold Laplacian, the others from a rational multiple of
the k-fold Laplacian of what is left.  The harmonic product of two harmonic
tensors is the leading piece h0 of their symmetric product.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from . import _poly
from .tensor_core import (
    HarmTensor,
    SymTensor,
    full_to_kelvin,
    kelvin_from_harm4,
    kelvin_to_full,
    sym_product,
    symmetrize_full,
)


def harmonic_decompose(t: SymTensor) -> list[HarmTensor]:
    """Unique harmonic pieces [h0, h1, ..., hr] of orders n, n-2, ..., n-2r."""
    n = t.order
    if n <= 1:
        return [HarmTensor(n, t.coeffs)]
    r = n // 2
    parts: dict[int, np.ndarray] = {}

    lap_k = t.coeffs
    laps = [lap_k]  # laps[k] = Laplacian^k applied to p
    for k in range(1, r + 1):
        lap_k = _poly.laplacian_matrix(n - 2 * (k - 1)) @ lap_k
        laps.append(lap_k)

    if n % 2 == 0:
        parts[r] = laps[r] / factorial(2 * r + 1)
    else:
        parts[r] = laps[r] * (6.0 * (r + 1) / factorial(2 * r + 3))

    for k in range(r - 1, -1, -1):
        # Laplacian^k of (p - sum_{j>k} q^j h_j)
        acc = laps[k].copy()
        for j in range(k + 1, r + 1):
            qh = _poly.poly_mul(_poly.q_power(j), 2 * j, parts[j], n - 2 * j)
            for m in range(k):
                qh = _poly.laplacian_matrix(n - 2 * m) @ qh
            acc -= qh
        parts[k] = _poly.leading_projection_factor(n, k) * acc

    return [HarmTensor(n - 2 * k, parts[k]) for k in range(r + 1)]


def recompose_harmonic(parts: list[HarmTensor]) -> SymTensor:
    """Sum q^k h_k back into the original symmetric tensor."""
    n = parts[0].order
    out = np.zeros(_poly.basis_size(n))
    for k, h in enumerate(parts):
        out += _poly.poly_mul(_poly.q_power(k), 2 * k, h.coeffs, n - 2 * k)
    return SymTensor(n, out)


def harmonic_projection(t: SymTensor) -> HarmTensor:
    """Orthogonal projection onto the harmonic tensors of the same order."""
    return harmonic_decompose(t)[0]


def harmonic_product(h1: HarmTensor, h2: HarmTensor) -> HarmTensor:
    """Commutative, associative product: harmonic projection of h1 (.) h2."""
    return harmonic_projection(sym_product(h1, h2))


# -- harmonic decomposition of elasticity tensors -------------------------


@dataclass
class ElasticityQuintuple:
    """Irreducible pieces (alpha, beta, a', b', H) of an elasticity tensor.

    `dilatation` and `voigt` hold the two independent traces when the
    quintuple was produced by `decompose_elasticity`.
    """

    alpha: float
    beta: float
    a_prime: np.ndarray
    b_prime: np.ndarray
    h: HarmTensor
    dilatation: np.ndarray | None = None
    voigt: np.ndarray | None = None


def prod_sym4(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Totally symmetric product of two symmetric 3x3 tensors (full array)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = np.einsum("ij,kl->ijkl", a, b)
    ba = np.einsum("ij,kl->ijkl", b, a)
    t = (
        ab
        + ba
        + ab.transpose(0, 2, 1, 3)
        + ba.transpose(0, 2, 1, 3)
        + ab.transpose(0, 2, 3, 1)
        + ba.transpose(0, 2, 3, 1)
    )
    return t / 6.0


def prod_22(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Young-symmetrized (2,2) product of two symmetric 3x3 tensors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = np.einsum("ij,kl->ijkl", a, b)
    ba = np.einsum("ij,kl->ijkl", b, a)
    t = (
        2 * ab
        + 2 * ba
        - ab.transpose(0, 2, 1, 3)
        - ab.transpose(0, 2, 3, 1)
        - ba.transpose(0, 2, 1, 3)
        - ba.transpose(0, 2, 3, 1)
    )
    return t / 6.0


def _deviator(m: np.ndarray) -> np.ndarray:
    return m - np.trace(m) / 3.0 * np.eye(3)


def check_elasticity_kelvin(m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (6, 6):
        raise ValueError("elasticity Kelvin matrix must be 6x6")
    scale = max(float(np.linalg.norm(m)), 1e-300)
    if np.max(np.abs(m - m.T)) > tol * scale:
        raise ValueError("elasticity Kelvin matrix must be symmetric")
    return m


def decompose_elasticity(kelvin: np.ndarray) -> ElasticityQuintuple:
    """Split an elasticity tensor into its five irreducible pieces."""
    m = check_elasticity_kelvin(kelvin)
    e = kelvin_to_full(m)
    d = np.einsum("iikl->kl", e)  # dilatation tensor
    v = np.einsum("ijil->jl", e)  # Voigt tensor
    alpha = (np.trace(d) + 2 * np.trace(v)) / 15.0
    beta = (np.trace(d) - np.trace(v)) / 6.0
    a_prime = 2.0 / 7.0 * (_deviator(d) + 2 * _deviator(v))
    b_prime = 2.0 * (_deviator(d) - _deviator(v))
    eye = np.eye(3)
    rest = (
        alpha * prod_sym4(eye, eye)
        + beta * prod_22(eye, eye)
        + prod_sym4(eye, a_prime)
        + prod_22(eye, b_prime)
    )
    h_full = symmetrize_full(e - rest)
    h = HarmTensor(4, SymTensor.from_full(h_full).coeffs)
    return ElasticityQuintuple(alpha, beta, a_prime, b_prime, h, d, v)


def recompose_elasticity(qt: ElasticityQuintuple) -> np.ndarray:
    """Kelvin matrix of the elasticity tensor with the given pieces."""
    eye = np.eye(3)
    e = (
        qt.alpha * prod_sym4(eye, eye)
        + qt.beta * prod_22(eye, eye)
        + prod_sym4(eye, qt.a_prime)
        + prod_22(eye, qt.b_prime)
        + kelvin_to_full(kelvin_from_harm4(qt.h))
    )
    return full_to_kelvin(e)
