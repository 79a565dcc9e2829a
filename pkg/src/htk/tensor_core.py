"""Dense symmetric tensors on R^3 as homogeneous polynomials.

A totally symmetric tensor T of order n is identified with the polynomial
p(x) = T(x, ..., x); the tensor components are recovered by polarization.
Under this identification the symmetric tensor product is polynomial
multiplication and the trace is the Laplacian divided by n(n-1).

Fourth-order tensors with minor and major index symmetries additionally get
a Kelvin 6x6 matrix view in which composition is a plain matrix product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _poly

_SQRT2 = np.sqrt(2.0)

# Kelvin pair order (11, 22, 33, 23, 13, 12) and off-diagonal weights
KELVIN_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))
KELVIN_WEIGHTS = np.array([1.0, 1.0, 1.0, _SQRT2, _SQRT2, _SQRT2])


@dataclass(frozen=True)
class SymTensor:
    """Totally symmetric tensor stored as polynomial coefficients.

    `coeffs[i]` is the coefficient of the i-th graded-lex monomial of
    degree `order`; the component with exponent pattern (a, b, c) equals
    coeffs / multinomial(a, b, c).
    """

    order: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if c.shape != (_poly.basis_size(self.order),):
            raise ValueError(
                f"expected {_poly.basis_size(self.order)} coefficients for "
                f"order {self.order}, got {c.shape}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "SymTensor":
        return cls(order, np.zeros(_poly.basis_size(order)))

    @classmethod
    def from_scalar(cls, value: float) -> "SymTensor":
        return cls(0, np.array([float(value)]))

    @classmethod
    def from_vector(cls, w) -> "SymTensor":
        w = np.asarray(w, dtype=float)
        return cls(1, w.copy())

    @classmethod
    def from_matrix(cls, m) -> "SymTensor":
        """Order-2 tensor from a symmetric 3x3 matrix."""
        m = np.asarray(m, dtype=float)
        c = np.array(
            [m[0, 0], 2 * m[0, 1], 2 * m[0, 2], m[1, 1], 2 * m[1, 2], m[2, 2]]
        )
        return cls(2, c)

    @classmethod
    def from_full(cls, arr: np.ndarray) -> "SymTensor":
        """From a full (3,)*n component array, assumed totally symmetric."""
        arr = np.asarray(arr, dtype=float)
        n = arr.ndim
        mult = _poly.multinomials(n)
        c = np.empty(_poly.basis_size(n))
        for i, (a, b, cc) in enumerate(_poly.exponents(n)):
            idx = (0,) * a + (1,) * b + (2,) * cc
            c[i] = mult[i] * arr[idx]
        return cls(n, c)

    # -- views --------------------------------------------------------

    def full(self) -> np.ndarray:
        """Full (3,)*n component array."""
        comp = self.coeffs / _poly.multinomials(self.order)
        arr = np.empty((3,) * self.order)
        index = _poly.exponent_index(self.order)
        for idx in itertools.product(range(3), repeat=self.order):
            a = idx.count(0)
            b = idx.count(1)
            arr[idx] = comp[index[(a, b, self.order - a - b)]]
        return arr

    def scalar(self) -> float:
        if self.order != 0:
            raise ValueError("not an order-0 tensor")
        return float(self.coeffs[0])

    def vector(self) -> np.ndarray:
        if self.order != 1:
            raise ValueError("not an order-1 tensor")
        return self.coeffs.copy()

    def matrix(self) -> np.ndarray:
        if self.order != 2:
            raise ValueError("not an order-2 tensor")
        c = self.coeffs
        return np.array(
            [
                [c[0], c[1] / 2, c[2] / 2],
                [c[1] / 2, c[3], c[4] / 2],
                [c[2] / 2, c[4] / 2, c[5]],
            ]
        )

    def __call__(self, x) -> float:
        """Evaluate the polynomial at a point of R^3."""
        x = np.asarray(x, dtype=float)
        return float(
            sum(
                c * x[0] ** a * x[1] ** b * x[2] ** cc
                for c, (a, b, cc) in zip(self.coeffs, _poly.exponents(self.order))
            )
        )

    # -- linear structure ----------------------------------------------

    def _like(self, coeffs: np.ndarray) -> "SymTensor":
        cls = type(self)
        try:
            return cls(self.order, coeffs)
        except ValueError:
            # e.g. sum of harmonic tensors drifting off the harmonic subspace
            return SymTensor(self.order, coeffs)

    def __add__(self, other: "SymTensor") -> "SymTensor":
        if self.order != other.order:
            raise ValueError("orders differ")
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other: "SymTensor") -> "SymTensor":
        if self.order != other.order:
            raise ValueError("orders differ")
        return self._like(self.coeffs - other.coeffs)

    def __mul__(self, s: float) -> "SymTensor":
        return self._like(self.coeffs * float(s))

    __rmul__ = __mul__

    def __neg__(self) -> "SymTensor":
        return self._like(-self.coeffs)


class HarmTensor(SymTensor):
    """Traceless totally symmetric tensor (harmonic polynomial)."""

    _TRACE_TOL = 1e-12

    def __post_init__(self):
        super().__post_init__()
        if self.order >= 2:
            lap = _poly.laplacian_matrix(self.order) @ self.coeffs
            scale = float(np.linalg.norm(self.coeffs))
            if np.linalg.norm(lap) > self._TRACE_TOL * max(scale, 1e-300) * self.order**2:
                raise ValueError("tensor is not harmonic (non-zero trace)")

    @classmethod
    def from_traceless_matrix(cls, m) -> "HarmTensor":
        t = SymTensor.from_matrix(m)
        return cls(2, t.coeffs)


def inner_norm(t: SymTensor) -> float:
    """Euclidean norm sqrt(T . T) of the full index contraction."""
    w = _poly.multinomials(t.order)
    return float(np.sqrt(np.sum(t.coeffs**2 / w)))


def inner_dot(t1: SymTensor, t2: SymTensor) -> float:
    """Full contraction T1 . T2 of two tensors of equal order."""
    if t1.order != t2.order:
        raise ValueError("orders differ")
    w = _poly.multinomials(t1.order)
    return float(np.sum(t1.coeffs * t2.coeffs / w))


def sym_product(a: SymTensor, b: SymTensor) -> SymTensor:
    """Symmetric tensor product, realized as polynomial multiplication."""
    return SymTensor(a.order + b.order, _poly.poly_mul(a.coeffs, a.order, b.coeffs, b.order))


def trace(t: SymTensor) -> SymTensor:
    """Contraction over one index pair: Laplacian of p divided by n(n-1)."""
    n = t.order
    if n < 2:
        raise ValueError("trace needs order >= 2")
    lap = _poly.laplacian_matrix(n) @ t.coeffs
    return SymTensor(n - 2, lap / (n * (n - 1)))


# -- rotations ----------------------------------------------------------


def check_rotation(g: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate a 3x3 proper rotation matrix."""
    g = np.asarray(g, dtype=float)
    if g.shape != (3, 3):
        raise ValueError("rotation must be 3x3")
    if np.max(np.abs(g.T @ g - np.eye(3))) > tol:
        raise ValueError("matrix is not orthogonal")
    if abs(np.linalg.det(g) - 1.0) > tol:
        raise ValueError("matrix is not a proper rotation (det != 1)")
    return g


def rotation_about(axis, angle: float) -> np.ndarray:
    """Rotation matrix about an axis (Rodrigues formula)."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    k = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    return np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * (k @ k)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random rotation from a QR factorization of a Gaussian."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 2] = -q[:, 2]
    return q


def rotate(g: np.ndarray, t: SymTensor) -> SymTensor:
    """Action (g * p)(x) = p(g^{-1} x); preserves order and harmonicity."""
    g = check_rotation(g)
    n = t.order
    if n == 0:
        return t
    ginv = g.T
    # powers of the substituted linear forms L_i(x) = sum_j ginv[i, j] x_j
    pows = []
    for i in range(3):
        row = [np.array([1.0])]
        for a in range(n):
            row.append(_poly.poly_mul(row[-1], a, ginv[i], 1))
        pows.append(row)
    out = np.zeros(_poly.basis_size(n))
    for coeff, (a, b, c) in zip(t.coeffs, _poly.exponents(n)):
        if coeff == 0.0:
            continue
        term = _poly.poly_mul(pows[0][a], a, pows[1][b], b)
        term = _poly.poly_mul(term, a + b, pows[2][c], c)
        out += coeff * term
    if isinstance(t, HarmTensor):
        return HarmTensor(n, out)
    return SymTensor(n, out)


# -- Kelvin 6x6 view of fourth-order tensors -----------------------------


def kelvin_to_full(m: np.ndarray) -> np.ndarray:
    """Full 3^4 array of the minor/major-symmetric tensor held by a Kelvin matrix."""
    m = np.asarray(m)
    w = _kelvin_weight_products(m.dtype)
    full = np.empty((3, 3, 3, 3), dtype=m.dtype)
    for i_k, (i, j) in enumerate(KELVIN_PAIRS):
        for j_k, (k, l) in enumerate(KELVIN_PAIRS):
            v = m[i_k, j_k] / w[i_k, j_k]
            full[i, j, k, l] = full[j, i, k, l] = v
            full[i, j, l, k] = full[j, i, l, k] = v
    return full


def full_to_kelvin(t: np.ndarray) -> np.ndarray:
    """Kelvin matrix of a tensor with minor symmetries."""
    t = np.asarray(t)
    w = _kelvin_weight_products(t.dtype)
    m = np.empty((6, 6), dtype=t.dtype)
    for i_k, (i, j) in enumerate(KELVIN_PAIRS):
        for j_k, (k, l) in enumerate(KELVIN_PAIRS):
            m[i_k, j_k] = w[i_k, j_k] * t[i, j, k, l]
    return m


def _kelvin_weight_products(dtype) -> np.ndarray:
    # sqrt(2) * sqrt(2) is written as exactly 2 so that shear-shear entries
    # survive the round trip bit for bit
    w2 = np.array([1, 1, 1, 2, 2, 2], dtype=dtype)
    return np.sqrt(np.outer(w2, w2))


def matrix_to_kelvin_vec(b: np.ndarray) -> np.ndarray:
    """Kelvin 6-vector of a symmetric 3x3 matrix."""
    b = np.asarray(b)
    s = np.sqrt(b.dtype.type(2)) if b.dtype.kind == "f" else _SQRT2
    return np.array(
        [b[0, 0], b[1, 1], b[2, 2], s * b[1, 2], s * b[0, 2], s * b[0, 1]]
    )


def kelvin_vec_to_matrix(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    s = np.sqrt(v.dtype.type(2)) if v.dtype.kind == "f" else _SQRT2
    return np.array(
        [
            [v[0], v[5] / s, v[4] / s],
            [v[5] / s, v[1], v[3] / s],
            [v[4] / s, v[3] / s, v[2]],
        ]
    )


def compose4(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(A B)_ijkl = A_ijpq B_pqkl on Kelvin matrices: plain matrix product."""
    return np.asarray(a) @ np.asarray(b)


def apply4(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(A b)_ij = A_ijkl b_kl with A a Kelvin matrix, b a symmetric 3x3."""
    return kelvin_vec_to_matrix(np.asarray(a) @ matrix_to_kelvin_vec(b))


def tr13(a: np.ndarray) -> np.ndarray:
    """(tr13 A)_jl = A_ijil of the tensor held by a Kelvin matrix."""
    return np.einsum("ijil->jl", kelvin_to_full(a))


def kelvin_from_harm4(h: HarmTensor) -> np.ndarray:
    """Kelvin 6x6 matrix of an order-4 harmonic tensor."""
    if h.order != 4:
        raise ValueError("expected an order-4 harmonic tensor")
    return full_to_kelvin(h.full())


def harm4_from_kelvin(m: np.ndarray, tol: float = 1e-10) -> HarmTensor:
    """Order-4 harmonic tensor from its Kelvin matrix.

    Rejects matrices that are not symmetric, not consistent with total
    index symmetry, or that violate the traceless relations.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (6, 6):
        raise ValueError("Kelvin matrix must be 6x6")
    scale = max(float(np.linalg.norm(m)), 1e-300)
    if np.max(np.abs(m - m.T)) > tol * scale:
        raise ValueError("Kelvin matrix is not symmetric")
    full = kelvin_to_full(m)
    sym = symmetrize_full(full)
    if np.max(np.abs(sym - full)) > tol * scale:
        raise ValueError("Kelvin matrix is not totally symmetric")
    tr = np.einsum("iikl->kl", sym)
    if np.max(np.abs(tr)) > tol * scale:
        raise ValueError("Kelvin matrix violates the traceless relations")
    t = SymTensor.from_full(sym)
    return HarmTensor(4, t.coeffs)


def symmetrize_full(arr: np.ndarray) -> np.ndarray:
    """Total symmetrization of a full component array."""
    n = arr.ndim
    out = np.zeros_like(arr)
    perms = list(itertools.permutations(range(n)))
    for p in perms:
        out += np.transpose(arr, p)
    return out / len(perms)
