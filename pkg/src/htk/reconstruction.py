"""Normal forms per symmetry class and equivariant reconstruction formulas.

Members of the transversely isotropic, orthotropic, tetragonal and trigonal
classes of order-4 harmonic tensors can be rebuilt from low-order covariants:
outright for the first two classes, and up to an octahedrally symmetric
remainder for the last two.  All formulas are rational in the basic
invariants and validated on the printed normal forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariants import (InvariantSet, _ExactInvariants, _ExtendedInvariants, covariants,
                         deviator, invariants)
from .errors import DegenerateClassError
from .harmonic import harmonic_product, harmonic_projection
from .tensor_core import (
    HarmTensor,
    SymTensor,
    compose4,
    harm4_from_kelvin,
    inner_norm,
    kelvin_from_harm4,
    kelvin_to_full,
    random_rotation,
    rotate,
    symmetrize_full,
)

_SQRT2 = np.sqrt(2.0)


# -- normal forms and fixtures -------------------------------------------


def _transverse_kelvin(delta: float) -> np.ndarray:
    d = float(delta)
    return np.array(
        [
            [3 * d, d, -4 * d, 0, 0, 0],
            [d, 3 * d, -4 * d, 0, 0, 0],
            [-4 * d, -4 * d, 8 * d, 0, 0, 0],
            [0, 0, 0, -8 * d, 0, 0],
            [0, 0, 0, 0, -8 * d, 0],
            [0, 0, 0, 0, 0, 2 * d],
        ],
        dtype=float,
    )


def _orthotropic_kelvin(lams) -> np.ndarray:
    l1, l2, l3 = (float(x) for x in lams)
    return np.array(
        [
            [l2 + l3, -l3, -l2, 0, 0, 0],
            [-l3, l3 + l1, -l1, 0, 0, 0],
            [-l2, -l1, l2 + l1, 0, 0, 0],
            [0, 0, 0, -2 * l1, 0, 0],
            [0, 0, 0, 0, -2 * l2, 0],
            [0, 0, 0, 0, 0, -2 * l3],
        ],
        dtype=float,
    )


def _tetragonal_kelvin(sigma: float, delta: float) -> np.ndarray:
    s, d = float(sigma), float(delta)
    return np.array(
        [
            [3 * d - s, d + s, -4 * d, 0, 0, 0],
            [d + s, 3 * d - s, -4 * d, 0, 0, 0],
            [-4 * d, -4 * d, 8 * d, 0, 0, 0],
            [0, 0, 0, -8 * d, 0, 0],
            [0, 0, 0, 0, -8 * d, 0],
            [0, 0, 0, 0, 0, 2 * d + 2 * s],
        ],
        dtype=float,
    )


def _trigonal_kelvin(sigma: float, delta: float) -> np.ndarray:
    s, d = float(sigma), float(delta)
    r2s = _SQRT2 * s
    return np.array(
        [
            [3 * d, d, -4 * d, -r2s, 0, 0],
            [d, 3 * d, -4 * d, r2s, 0, 0],
            [-4 * d, -4 * d, 8 * d, 0, 0, 0],
            [-r2s, r2s, 0, -8 * d, 0, 0],
            [0, 0, 0, 0, -8 * d, -2 * s],
            [0, 0, 0, 0, -2 * s, 2 * d],
        ],
        dtype=float,
    )


# one-dimensional fixed-point fixtures: the transversely isotropic line and
# the cubic lines for the axis-aligned cube, the z-rotated (pi/4) cube, and
# the two cube orientations compatible with the trigonal normal form
TRANSVERSE_FIX = _transverse_kelvin(1.0)

CUBIC_FIX_1 = np.array(
    [
        [8, -4, -4, 0, 0, 0],
        [-4, 8, -4, 0, 0, 0],
        [-4, -4, 8, 0, 0, 0],
        [0, 0, 0, -8, 0, 0],
        [0, 0, 0, 0, -8, 0],
        [0, 0, 0, 0, 0, -8],
    ],
    dtype=float,
)

CUBIC_FIX_2 = np.array(
    [
        [-2, 6, -4, 0, 0, 0],
        [6, -2, -4, 0, 0, 0],
        [-4, -4, 8, 0, 0, 0],
        [0, 0, 0, -8, 0, 0],
        [0, 0, 0, 0, -8, 0],
        [0, 0, 0, 0, 0, 12],
    ],
    dtype=float,
)

TRIG_CUBIC_FIX_1 = np.array(
    [
        [3, 1, -4, -10, 0, 0],
        [1, 3, -4, 10, 0, 0],
        [-4, -4, 8, 0, 0, 0],
        [-10, 10, 0, -8, 0, 0],
        [0, 0, 0, 0, -8, -10 * _SQRT2],
        [0, 0, 0, 0, -10 * _SQRT2, 2],
    ],
    dtype=float,
)

TRIG_CUBIC_FIX_2 = np.array(
    [
        [3, 1, -4, 10, 0, 0],
        [1, 3, -4, -10, 0, 0],
        [-4, -4, 8, 0, 0, 0],
        [10, -10, 0, -8, 0, 0],
        [0, 0, 0, 0, -8, 10 * _SQRT2],
        [0, 0, 0, 0, 10 * _SQRT2, 2],
    ],
    dtype=float,
)

for _m in (TRANSVERSE_FIX, CUBIC_FIX_1, CUBIC_FIX_2, TRIG_CUBIC_FIX_1, TRIG_CUBIC_FIX_2):
    _m.setflags(write=False)


@dataclass
class NormalForm:
    """Canonical Kelvin matrix of a class member, with its parameters."""

    class_tag: str
    params: tuple
    kelvin: np.ndarray

    def tensor(self) -> HarmTensor:
        return harm4_from_kelvin(self.kelvin)


def normal_form(class_tag: str, params) -> NormalForm:
    """Canonical class representative; rejects parameters on a degeneracy.

    transverse: (delta,) with delta != 0
    orthotropic: (l1, l2, l3) pairwise distinct
    tetragonal: (sigma, delta) with sigma != 0, sigma^2 != 25 delta^2
    trigonal: (sigma, delta) with sigma != 0, sigma^2 != 50 delta^2
    cubic: (scale,) with scale != 0 (axis-aligned cube fixture)
    """
    params = tuple(float(p) for p in np.atleast_1d(params))
    if class_tag == "transverse":
        (delta,) = params
        if delta == 0:
            raise DegenerateClassError("transverse form needs delta != 0", "delta")
        return NormalForm(class_tag, params, _transverse_kelvin(delta))
    if class_tag == "orthotropic":
        l1, l2, l3 = params
        if l1 == l2 or l2 == l3 or l1 == l3:
            raise DegenerateClassError(
                "orthotropic form needs pairwise distinct values", "Delta3"
            )
        return NormalForm(class_tag, params, _orthotropic_kelvin(params))
    if class_tag == "tetragonal":
        sigma, delta = params
        if sigma == 0:
            raise DegenerateClassError("tetragonal form needs sigma != 0", "K10")
        if sigma**2 == 25 * delta**2:
            raise DegenerateClassError(
                "tetragonal form needs sigma^2 != 25 delta^2", "L10"
            )
        return NormalForm(class_tag, params, _tetragonal_kelvin(sigma, delta))
    if class_tag == "trigonal":
        sigma, delta = params
        if sigma == 0:
            raise DegenerateClassError("trigonal form needs sigma != 0", "K10")
        if sigma**2 == 50 * delta**2:
            raise DegenerateClassError(
                "trigonal form needs sigma^2 != 50 delta^2", "M10"
            )
        return NormalForm(class_tag, params, _trigonal_kelvin(sigma, delta))
    if class_tag == "cubic":
        (scale,) = params
        if scale == 0:
            raise DegenerateClassError("cubic fixture needs a non-zero scale", "J2")
        return NormalForm(class_tag, params, scale * CUBIC_FIX_1)
    raise ValueError(f"unknown class tag {class_tag!r}")


def random_in_class(class_tag: str, params, rotation=None, seed=None) -> HarmTensor:
    """Randomly rotated class member: rotate(g, normal form)."""
    if rotation is None:
        rotation = random_rotation(np.random.default_rng(seed))
    return rotate(rotation, normal_form(class_tag, params).tensor())


# -- helpers ---------------------------------------------------------------


def _harm2(m: np.ndarray) -> HarmTensor:
    # m is a deviator up to float dust, which matters when m is nearly zero
    return HarmTensor.from_traceless_matrix(deviator(m))


def _scale_threshold(h: HarmTensor, power: int, rtol: float = 1e-14) -> float:
    return rtol * max(inner_norm(h), 1e-300) ** power


def h_squared_harmonic(h: HarmTensor) -> HarmTensor:
    """Harmonic part of the composition H H (symmetrized)."""
    if h.order != 4:
        raise ValueError("expected an order-4 harmonic tensor")
    k = kelvin_from_harm4(h)
    full = kelvin_to_full(compose4(k, k))
    return harmonic_projection(SymTensor.from_full(symmetrize_full(full)))


# -- transversely isotropic class ------------------------------------------


def reconstruct_transverse(h: HarmTensor) -> HarmTensor:
    """Rebuild a transversely isotropic tensor from its quadratic covariant."""
    ext = _ExtendedInvariants(h)
    if abs(ext.J3) <= _scale_threshold(h, 3):
        raise DegenerateClassError(
            "J3 vanishes: no transversely isotropic reconstruction", "J3"
        )
    d2p = _harm2(deviator(ext.stack["d2"]).astype(float))
    return float(63.0 / 25.0 / ext.J3) * harmonic_product(d2p, d2p)


# -- orthotropic class -------------------------------------------------------


def _require_orthotropic(h: HarmTensor, inv) -> None:
    if inv.sigma1 is None or inv.Delta3 <= _scale_threshold(h, 6) / 432.0:
        raise DegenerateClassError(
            "Delta3 vanishes: tensor is not strictly orthotropic", "Delta3"
        )


_SNAP_GRID = 2.0**40


def _orthotropic_frame(h: HarmTensor) -> np.ndarray | None:
    """Eigenframe of a symmetric covariant, when its eigenvalues separate."""
    cov = covariants(h)
    scale = max(float(np.linalg.norm(cov.d2)), 1e-300)
    for combo in (cov.d2, cov.d2 + 0.31830988618379067 * cov.d3):
        vals, vecs = np.linalg.eigh(combo)
        if min(vals[1] - vals[0], vals[2] - vals[1]) > 1e-6 * scale:
            if np.linalg.det(vecs) < 0:
                vecs = vecs.copy()
                vecs[:, 2] = -vecs[:, 2]
            return vecs
    return None


def _snap_to_orthotropic(h: HarmTensor):
    """Nearest dyadic-parameter normal form in the covariant eigenframe.

    The rational sigma/axis formulas amplify off-class float dust by the
    ratio of the basic invariants to their cancelling combinations, which
    grows without bound towards the class boundaries.  Snapping a member
    onto the fixed-point subspace (a <= 1e-11 relative move, second order
    in any frame error) removes that dust; the snapped parameters sit on a
    2^-40 grid so the pattern's linear relations hold exactly in doubles.
    """
    frame = _orthotropic_frame(h)
    if frame is None:
        return None
    hf = rotate(frame.T, h)
    k = kelvin_from_harm4(hf)
    lams = np.array(
        [
            -0.5 * (k[1, 2] + k[3, 3] / 2),
            -0.5 * (k[0, 2] + k[4, 4] / 2),
            -0.5 * (k[0, 1] + k[5, 5] / 2),
        ]
    )
    lams = np.round(lams * _SNAP_GRID) / _SNAP_GRID
    k0 = _orthotropic_kelvin(lams)
    if np.linalg.norm(k - k0) > 1e-6 * max(np.linalg.norm(k), 1e-300):
        return None
    return frame, HarmTensor(4, SymTensor.from_full(kelvin_to_full(k0)).coeffs)


def _exact_orthotropic(h: HarmTensor):
    """Exact invariant pipeline, run on the snapped member when possible."""
    snapped = _snap_to_orthotropic(h)
    if snapped is None:
        return _ExactInvariants(h), None
    frame, h0 = snapped
    return _ExactInvariants(h0), frame


def lambda_prime(h: HarmTensor) -> np.ndarray:
    """Deviator of the second-order covariant carrying the orthotropic axes.

    On a rotated orthotropic normal form this recovers the rotated deviator
    of diag(l1, l2, l3).
    """
    ext, frame = _exact_orthotropic(h)
    _require_orthotropic(h, ext)
    lp = ext.axis_deviator()
    return lp if frame is None else frame @ lp @ frame.T


def orthotropic_coefficients(inv, route: str = "lode") -> tuple[float, float, float]:
    """Scalar weights of the three-product orthotropic reconstruction.

    Two printed forms of the same rational invariants: `lode` uses the
    equivalent stress and Lode number, `rational` only the elementary
    symmetric functions and the discriminant.
    """
    s1, s2, s3 = inv.sigma1, inv.sigma2, inv.sigma3
    if s1 is None:
        raise DegenerateClassError("sigma invariants undefined (K6 <= 0)", "Delta3")
    if route == "lode":
        seq, lode = inv.sigma_eq, inv.lode
        if seq is None or lode is None or not (-1.0 < lode < 1.0):
            raise DegenerateClassError("Lode number outside (-1, 1)", "lode")
        den = 2 * (1 - lode**2)
        c1 = (5 * s1 + 7 * lode * seq) / (den * seq**2)
        c2 = -3 * (5 * lode * s1 + 7 * seq) / (den * seq**3)
        c3 = 9 * (5 * s1 + 7 * lode * seq) / (den * seq**4)
    elif route == "rational":
        d3 = inv.Delta3
        c1 = (s1**2 - 3 * s2) * (8 * s1**3 - 31 * s1 * s2 + 63 * s3) / (9 * d3)
        c2 = -(16 * s1**4 - 86 * s1**2 * s2 + 90 * s1 * s3 + 84 * s2**2) / (6 * d3)
        c3 = (8 * s1**3 - 31 * s1 * s2 + 63 * s3) / d3
    else:
        raise ValueError(f"unknown coefficient route {route!r}")
    return float(c1), float(c2), float(c3)


def reconstruct_orthotropic(h: HarmTensor, route: str = "lode") -> HarmTensor:
    """Rebuild an orthotropic tensor from its axis covariant and its square."""
    ext, frame = _exact_orthotropic(h)
    _require_orthotropic(h, ext)
    c1, c2, c3 = orthotropic_coefficients(ext, route)
    lp = ext.axis_deviator()
    if frame is not None:
        lp = frame @ lp @ frame.T
    lp2 = deviator(lp @ lp)
    a = _harm2(lp)
    b = _harm2(lp2)
    return (
        c1 * harmonic_product(a, a)
        + 2 * c2 * harmonic_product(a, b)
        + c3 * harmonic_product(b, b)
    )


def perfect_square_test(h: HarmTensor) -> np.ndarray | None:
    """Root of h = b * b when one exists; None otherwise.

    Applies to orthotropic and transversely isotropic tensors: the square
    condition is sigma1 > 0 with 49 sigma2 = 8 sigma1^2 on the orthotropic
    branch, and J3 > 0 on the transversely isotropic one.
    """
    ext, frame = _exact_orthotropic(h)
    if ext.sigma1 is not None and ext.Delta3 > _scale_threshold(h, 6) / 432.0:
        s1 = float(ext.sigma1)
        scale2 = max(inner_norm(h), 1e-300) ** 2
        if s1 <= 1e-8 * scale2**0.5 or abs(float(49 * ext.sigma2 - 8 * ext.sigma1**2)) > 1e-8 * scale2:
            return None
        lp = ext.axis_deviator()
        if frame is not None:
            lp = frame @ lp @ frame.T
        lp2 = deviator(lp @ lp)
        return np.sqrt(49 / (10 * (1 - ext.lode) * s1)) * (lp - 21 / (5 * s1) * lp2)
    # transversely isotropic branch: a square exactly when J3 > 0
    ext2 = _ExtendedInvariants(h)
    if ext2.J3 > _scale_threshold(h, 3):
        d2p = deviator(ext2.stack["d2"])
        return (np.sqrt(63 / (25 * ext2.J3)) * d2p).astype(float)
    return None


# -- tetragonal and trigonal classes ----------------------------------------


@dataclass
class SplitResult:
    """Transversely isotropic + cubic split of a tensor, for one branch."""

    transverse_part: HarmTensor
    cubic_part: HarmTensor
    branch: int


def _checked_parameters(h: HarmTensor, ext: _ExtendedInvariants, cubic_inv: str):
    if ext.K4 <= _scale_threshold(h, 4):
        raise DegenerateClassError("K4 vanishes", "K4")
    if ext.K10 <= _scale_threshold(h, 10):
        raise DegenerateClassError(
            "K10 vanishes: tensor is at least transversely isotropic", "K10"
        )
    degen = getattr(ext, cubic_inv)
    if abs(degen) <= _scale_threshold(h, 10):
        raise DegenerateClassError(
            f"{cubic_inv} vanishes: tensor is at least cubic", cubic_inv
        )


def tetragonal_parameters(h: HarmTensor) -> tuple[float, float]:
    """Rational invariants (sigma, delta) of a tetragonal tensor, sigma > 0."""
    ext = _ExtendedInvariants(h)
    _checked_parameters(h, ext, "L10")
    delta = ext.J5 / (4 * ext.K4)
    sigma = np.sqrt(ext.K10) / (4 * ext.K4)
    return float(sigma), float(delta)


def trigonal_parameters(h: HarmTensor) -> tuple[float, float]:
    """Rational invariants (sigma, delta) of a trigonal tensor, sigma > 0."""
    ext = _ExtendedInvariants(h)
    _checked_parameters(h, ext, "M10")
    delta = ext.J5 / (4 * ext.K4)
    sigma = np.sqrt(ext.K10) / (4 * np.sqrt(np.longdouble(2)) * ext.K4)
    return float(sigma), float(delta)


def _d2p_product(h: HarmTensor) -> HarmTensor:
    d2p = _harm2(deviator(covariants(h).d2))
    return harmonic_product(d2p, d2p)


def tetragonal_split(h: HarmTensor, k: int) -> SplitResult:
    """Split a tetragonal tensor into transversely isotropic + cubic parts."""
    if k not in (1, 2):
        raise ValueError("branch k must be 1 or 2")
    sigma, delta = tetragonal_parameters(h)
    sgn = 1.0 if k == 1 else -1.0
    t_coeff = (7.0 / 16.0) * (5 * delta + sgn * sigma) / (25 * delta**2 - sigma**2) ** 2
    t_part = t_coeff * _d2p_product(h)
    den = 5 * delta - sgn * sigma
    c_part = (1 - 14 * delta / den) * h + (7.0 / (2 * den)) * h_squared_harmonic(h)
    return SplitResult(t_part, HarmTensor(4, c_part.coeffs), k)


def trigonal_split(h: HarmTensor, k: int) -> SplitResult:
    """Split a trigonal tensor into transversely isotropic + cubic parts."""
    if k not in (1, 2):
        raise ValueError("branch k must be 1 or 2")
    sigma, delta = trigonal_parameters(h)
    sgn = 1.0 if k == 1 else -1.0
    t_coeff = (
        7.0 * (10 * delta - sgn * sigma * _SQRT2) / (8 * (50 * delta**2 - sigma**2) ** 2)
    )
    t_part = t_coeff * _d2p_product(h)
    den = 10 * delta + sgn * sigma * _SQRT2
    c_part = (1 - 7 * delta / den) * h - (7.0 / (6 * den)) * h_squared_harmonic(h)
    return SplitResult(t_part, HarmTensor(4, c_part.coeffs), k)


def tetragonal_split_rational(h: HarmTensor) -> SplitResult:
    """Branch-1 tetragonal split written directly in J5, K4, K10, L10."""
    ext = _ExtendedInvariants(h)
    _checked_parameters(h, ext, "L10")
    rk10 = np.sqrt(ext.K10)
    t_part = float(28 * ext.K4**3 * (5 * ext.J5 + rk10) / ext.L10**2) * _d2p_product(h)
    c_part = float(1 + 14 * ext.J5 * (5 * ext.J5 + rk10) / ext.L10) * h - float(
        14 * ext.K4 * (5 * ext.J5 + rk10) / ext.L10
    ) * h_squared_harmonic(h)
    return SplitResult(t_part, HarmTensor(4, c_part.coeffs), 1)


def trigonal_split_rational(h: HarmTensor) -> SplitResult:
    """Branch-2 trigonal split written directly in J5, K4, K10, M10."""
    ext = _ExtendedInvariants(h)
    _checked_parameters(h, ext, "M10")
    rk10 = np.sqrt(ext.K10)
    t_part = float(224 * ext.K4**3 * (10 * ext.J5 + rk10) / ext.M10**2) * _d2p_product(h)
    c_part = float(1 + 7 * ext.J5 * (10 * ext.J5 + rk10) / ext.M10) * h + float(
        14 * ext.K4 * (10 * ext.J5 + rk10) / (3 * ext.M10)
    ) * h_squared_harmonic(h)
    return SplitResult(t_part, HarmTensor(4, c_part.coeffs), 2)
