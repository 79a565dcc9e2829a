"""Binary forms and the Cartan correspondence with harmonic tensors.

An order-n real harmonic tensor corresponds to a degree-2n complex binary
form f(u, v) = sum_k a_k u^k v^{2n-k} whose coefficients satisfy the reality
constraint a_{2n-k} = (-1)^{n-k} conj(a_k).  The forward map substitutes
x = (u^2 - v^2)/2, y = (u^2 + v^2)/2i, z = uv into the harmonic polynomial;
the inverse substitutes back monomial by monomial and takes the harmonic
projection of the result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _poly
from .harmonic import harmonic_projection
from .tensor_core import HarmTensor, SymTensor


@dataclass(frozen=True)
class BinaryForm:
    """Degree-2n binary form; coeffs[k] multiplies u^k v^{degree-k}."""

    degree: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if self.degree < 0 or self.degree % 2 != 0:
            raise ValueError("degree must be a non-negative even integer")
        if c.shape != (self.degree + 1,):
            raise ValueError(f"expected {self.degree + 1} coefficients")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __call__(self, u: complex, v: complex) -> complex:
        return complex(sum(a * u**k * v ** (self.degree - k) for k, a in enumerate(self.coeffs)))


def reality_residual(f: BinaryForm) -> float:
    """Max deviation from a_{2n-k} = (-1)^{n-k} conj(a_k), relative."""
    n = f.degree // 2
    c = f.coeffs
    dev = max(
        abs(c[f.degree - k] - (-1) ** (n - k) * np.conj(c[k])) for k in range(n + 1)
    )
    scale = max(float(np.max(np.abs(c))), 1e-300)
    return float(dev) / scale


def _conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)


@lru_cache(maxsize=None)
def _cartan_matrix(n: int) -> np.ndarray:
    """Matrix sending degree-n polynomial coefficients to binary-form coefficients."""
    x_sub = np.array([-0.5, 0.0, 0.5], dtype=complex)  # v^2, uv, u^2
    y_sub = np.array([-0.5j, 0.0, -0.5j], dtype=complex)
    z_sub = np.array([0.0, 1.0, 0.0], dtype=complex)
    cols = []
    for a, b, c in _poly.exponents(n):
        term = np.array([1.0 + 0.0j])
        for base, e in ((x_sub, a), (y_sub, b), (z_sub, c)):
            for _ in range(e):
                term = _conv(term, base)
        cols.append(term)
    return np.column_stack(cols)


def cartan_map(h: HarmTensor) -> BinaryForm:
    """Binary form of degree 2n representing an order-n harmonic tensor."""
    f = _cartan_matrix(h.order) @ h.coeffs.astype(complex)
    return BinaryForm(2 * h.order, f)


@lru_cache(maxsize=None)
def _inverse_substitution_matrix(n: int) -> np.ndarray:
    """Matrix sending binary coefficients a_k to a degree-n polynomial in x, y, z."""
    m = _poly.basis_size(n)
    out = np.zeros((m, 2 * n + 1), dtype=complex)
    minus_x_iy = np.zeros(3, dtype=complex)
    minus_x_iy[:] = (-1.0, 1.0j, 0.0)  # -x + iy
    x_iy = np.array([1.0, 1.0j, 0.0], dtype=complex)  # x + iy
    z_lin = np.array([0.0, 0.0, 1.0], dtype=complex)
    for k in range(2 * n + 1):
        if k <= n:
            lin, lin_pow, z_pow = minus_x_iy, n - k, k
        else:
            lin, lin_pow, z_pow = x_iy, k - n, 2 * n - k
        term = np.array([1.0 + 0.0j])
        deg = 0
        for _ in range(z_pow):
            term = _poly.poly_mul(term, deg, z_lin, 1)
            deg += 1
        for _ in range(lin_pow):
            term = _poly.poly_mul(term, deg, lin, 1)
            deg += 1
        out[:, k] = term
    return out


def cartan_inverse(f: BinaryForm, tol: float = 1e-11) -> HarmTensor:
    """Order-n harmonic tensor represented by a reality-satisfying form."""
    if reality_residual(f) > 1e-9:
        raise ValueError("binary form violates the reality constraint")
    n = f.degree // 2
    p_c = _inverse_substitution_matrix(n) @ f.coeffs
    if n == 0:
        val = p_c[0]
        if abs(val.imag) > tol * max(abs(val), 1e-300):
            raise ValueError("inverse produced a non-real constant")
        return HarmTensor(0, np.array([val.real]))
    h_re = harmonic_projection(SymTensor(n, p_c.real))
    h_im = harmonic_projection(SymTensor(n, p_c.imag))
    scale = max(float(np.linalg.norm(h_re.coeffs)), 1e-300)
    if np.linalg.norm(h_im.coeffs) > tol * scale:
        raise ValueError("inverse produced a non-real harmonic part")
    return h_re


def form_multiply(f1: BinaryForm, f2: BinaryForm) -> BinaryForm:
    """Plain polynomial product of two binary forms; degrees add."""
    return BinaryForm(f1.degree + f2.degree, _conv(f1.coeffs, f2.coeffs))
