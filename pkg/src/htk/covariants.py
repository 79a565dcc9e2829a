"""Second-order covariants and the invariant algebra of order-4 harmonic tensors.

The nine basic invariants are traces of matrix covariants built from H by
composition and partial contraction; everything else used by the
reconstruction formulas (K4, K6, K10, the sigma family, the Lode number) is
a rational expression in them.

The rational expressions cancel catastrophically in double precision (the
combinations K6, K4, ... are orders of magnitude below the terms forming
them), so the whole stack is evaluated in extended precision and only the
results are returned as doubles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _poly
from .errors import DegenerateClassError
from .tensor_core import HarmTensor, apply4, compose4, full_to_kelvin, inner_norm, tr13


def deviator(m: np.ndarray) -> np.ndarray:
    """Traceless part m - (tr m / 3) Id, also for non-symmetric m."""
    m = np.asarray(m)
    return m - np.trace(m) / 3.0 * np.eye(3, dtype=m.dtype)


@dataclass
class CovariantSet:
    """Matrix covariants of an order-4 harmonic tensor.

    d2, d3, d4, d6 are symmetric; the others are general 3x3 matrices.
    """

    d2: np.ndarray
    d3: np.ndarray
    d4: np.ndarray
    d5: np.ndarray
    d6: np.ndarray
    d7: np.ndarray
    d8: np.ndarray
    d9: np.ndarray
    d10: np.ndarray

    def as_dict(self) -> dict[str, np.ndarray]:
        return {f"d{k}": getattr(self, f"d{k}") for k in range(2, 11)}


@dataclass
class InvariantSet:
    """Basic invariants J2..J10 and the derived rational invariants.

    The sigma family is only defined on the orthotropic branch (K6 > 0);
    outside it the fields are None rather than NaN.
    """

    J2: float
    J3: float
    J4: float
    J5: float
    J6: float
    J7: float
    J8: float
    J9: float
    J10: float
    K4: float
    K6: float
    K10: float
    L10: float
    M10: float
    Delta3: float
    sigma1: float | None
    sigma2: float | None
    sigma3: float | None
    sigma_eq: float | None
    lode: float | None

    def as_dict(self) -> dict[str, float | None]:
        keys = (
            [f"J{k}" for k in range(2, 11)]
            + ["K4", "K6", "K10", "L10", "M10", "Delta3"]
            + ["sigma1", "sigma2", "sigma3", "sigma_eq", "lode"]
        )
        return {k: getattr(self, k) for k in keys}


def _kelvin_extended(h: HarmTensor) -> np.ndarray:
    """Kelvin matrix of an order-4 harmonic tensor in extended precision."""
    comp = h.coeffs.astype(np.longdouble) / _poly.multinomials(4).astype(np.longdouble)
    index = _poly.exponent_index(4)
    full = np.empty((3, 3, 3, 3), dtype=np.longdouble)
    for idx in itertools.product(range(3), repeat=4):
        a, b = idx.count(0), idx.count(1)
        full[idx] = comp[index[(a, b, 4 - a - b)]]
    return full_to_kelvin(full)


def _covariant_stack(h: HarmTensor) -> dict[str, np.ndarray]:
    """All matrix covariants in extended precision."""
    if h.order != 4:
        raise ValueError("covariants are defined for order-4 tensors")
    hk = _kelvin_extended(h)
    hk2 = compose4(hk, hk)
    hk3 = compose4(hk2, hk)
    d2 = tr13(hk2)
    d3 = tr13(hk3)
    d4 = d2 @ d2
    return {
        "d2": d2,
        "d3": d3,
        "d4": d4,
        "d5": d2 @ apply4(hk, d2),
        "d6": d4 @ d2,
        "d7": d4 @ apply4(hk, d2),
        "d8": d4 @ apply4(hk2, d2),
        "d9": d4 @ apply4(hk, d4),
        "d10": d4 @ apply4(hk2, d4),
    }


def covariants(h: HarmTensor) -> CovariantSet:
    """The nine matrix covariants d2..d10."""
    stack = _covariant_stack(h)
    return CovariantSet(**{k: v.astype(float) for k, v in stack.items()})


class _ExtendedInvariants:
    """Extended-precision scalars backing the public InvariantSet."""

    def __init__(self, h: HarmTensor, degeneracy_rtol: float = 1e-14):
        stack = _covariant_stack(h)
        self.stack = stack
        j = {k: np.trace(stack[f"d{k}"]) for k in range(2, 11)}
        self.j = j
        for k in range(2, 11):
            setattr(self, f"J{k}", j[k])
        self.K4 = 3 * j[4] - j[2] ** 2
        self.K6 = 6 * j[6] - 9 * j[2] * j[4] - 20 * j[3] ** 2 + 3 * j[2] ** 3
        self.K10 = 2 * j[2] * self.K4**2 - 35 * j[5] ** 2
        self.L10 = self.K10 - 25 * j[5] ** 2
        self.M10 = self.K10 - 100 * j[5] ** 2
        self.Delta3 = self.K6 / 432
        nh = np.longdouble(max(inner_norm(h), 1e-300))
        self.norm = nh
        self.rtol = degeneracy_rtol
        self.sigma1 = self.sigma2 = self.sigma3 = None
        self.sigma_eq = self.lode = None
        if self.K6 > degeneracy_rtol * nh**6:
            self.sigma1 = (
                9
                * (3 * j[7] - 3 * j[2] * j[5] + 3 * j[3] * j[4] - j[2] ** 2 * j[3])
                / (2 * self.K6)
            )
            self.sigma2 = 4 * self.sigma1**2 / 7 - j[2] / 14
            self.sigma3 = -j[3] / 24 + self.sigma1**3 / 7 - self.sigma1 * j[2] / 56
            s2 = self.sigma1**2 - 3 * self.sigma2
            if s2 > 0:
                self.sigma_eq = np.sqrt(s2)
                self.lode = (
                    self.sigma1**3 - 4.5 * self.sigma1 * self.sigma2 + 13.5 * self.sigma3
                ) / self.sigma_eq**3

    def public(self) -> InvariantSet:
        opt = lambda v: None if v is None else float(v)
        return InvariantSet(
            *(float(self.j[k]) for k in range(2, 11)),
            float(self.K4),
            float(self.K6),
            float(self.K10),
            float(self.L10),
            float(self.M10),
            float(self.Delta3),
            opt(self.sigma1),
            opt(self.sigma2),
            opt(self.sigma3),
            opt(self.sigma_eq),
            opt(self.lode),
        )


def invariants(h: HarmTensor, degeneracy_rtol: float = 1e-14) -> InvariantSet:
    """All scalar invariants of an order-4 harmonic tensor.

    `degeneracy_rtol` scales (by the matching power of ||h||) the threshold
    under which K6 counts as vanishing and the sigma family comes back None.
    """
    return _ExtendedInvariants(h, degeneracy_rtol).public()


# -- exact rational pipeline ------------------------------------------------
#
# The orthotropic axis covariant divides by Delta3 after a cancellation of
# many orders of magnitude; near the edges of the class even 80-bit floats
# leave visible noise.  Everything involved is a rational function of the
# tensor components, so this branch runs on Fractions and is exact up to the
# double rounding of the input itself.

_PAIR_INDEX = {}
for _k, (_i, _j) in enumerate(
    ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))
):
    _PAIR_INDEX[(_i, _j)] = _k
    _PAIR_INDEX[(_j, _i)] = _k
_PAIR_MULT = (1, 1, 1, 2, 2, 2)
_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))


def _exact_components(h: HarmTensor) -> dict[tuple[int, int, int], Fraction]:
    mult = _poly.multinomials(h.order)
    return {
        e: Fraction(float(c)) / int(m)
        for e, c, m in zip(_poly.exponents(h.order), h.coeffs, mult)
    }


def _exact_pair_matrix(h: HarmTensor) -> list[list[Fraction]]:
    comp = _exact_components(h)
    out = [[Fraction(0)] * 6 for _ in range(6)]
    for a, (i, j) in enumerate(_PAIRS):
        for b, (k, l) in enumerate(_PAIRS):
            idx = (i, j, k, l)
            e = (idx.count(0), idx.count(1), idx.count(2))
            out[a][b] = comp[e]
    return out


def _compose_pair(a, b):
    return [
        [sum(_PAIR_MULT[k] * a[i][k] * b[k][j] for k in range(6)) for j in range(6)]
        for i in range(6)
    ]


def _tr13_pair(a):
    return [
        [
            sum(a[_PAIR_INDEX[(i, j)]][_PAIR_INDEX[(i, l)]] for i in range(3))
            for l in range(3)
        ]
        for j in range(3)
    ]


def _apply_pair(a, b3):
    vec = [b3[i][j] for i, j in _PAIRS]
    rows = [
        sum(_PAIR_MULT[k] * a[p][k] * vec[k] for k in range(6)) for p in range(6)
    ]
    out = [[Fraction(0)] * 3 for _ in range(3)]
    for p, (i, j) in enumerate(_PAIRS):
        out[i][j] = out[j][i] = rows[p]
    return out


def _mat3(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)
    ]


def _trace3(a) -> Fraction:
    return a[0][0] + a[1][1] + a[2][2]


def _deviator3(a):
    t = _trace3(a) / 3
    return [[a[i][j] - (t if i == j else 0) for j in range(3)] for i in range(3)]


class _ExactInvariants:
    """Fraction-exact J2..J7, sigma family and the axis-covariant pieces."""

    def __init__(self, h: HarmTensor, degeneracy_rtol: float = 1e-14):
        p = _exact_pair_matrix(h)
        p2 = _compose_pair(p, p)
        d2 = _tr13_pair(p2)
        d3 = _tr13_pair(_compose_pair(p2, p))
        d4 = _mat3(d2, d2)
        hd2 = _apply_pair(p, d2)
        d5 = _mat3(d2, hd2)
        self.d = {2: d2, 3: d3, 4: d4, 5: d5}
        self.J2 = _trace3(d2)
        self.J3 = _trace3(d3)
        self.J4 = _trace3(d4)
        self.J5 = _trace3(d5)
        self.J6 = _trace3(_mat3(d4, d2))
        self.J7 = _trace3(_mat3(d4, hd2))
        self.K4 = 3 * self.J4 - self.J2**2
        self.K6 = (
            6 * self.J6 - 9 * self.J2 * self.J4 - 20 * self.J3**2 + 3 * self.J2**3
        )
        self.K10 = 2 * self.J2 * self.K4**2 - 35 * self.J5**2
        self.Delta3 = self.K6 / 432
        nh = max(inner_norm(h), 1e-300)
        self.sigma1 = self.sigma2 = self.sigma3 = None
        self.sigma_eq = self.lode = None
        if self.K6 > degeneracy_rtol * Fraction(nh) ** 6:
            self.sigma1 = (
                9
                * (
                    3 * self.J7
                    - 3 * self.J2 * self.J5
                    + 3 * self.J3 * self.J4
                    - self.J2**2 * self.J3
                )
                / (2 * self.K6)
            )
            self.sigma2 = Fraction(4, 7) * self.sigma1**2 - self.J2 / 14
            self.sigma3 = (
                -self.J3 / 24 + self.sigma1**3 / 7 - self.sigma1 * self.J2 / 56
            )
            s2 = self.sigma1**2 - 3 * self.sigma2
            if s2 > 0:
                self.sigma_eq = float(np.sqrt(float(s2)))
                self.lode = float(
                    self.sigma1**3
                    - Fraction(9, 2) * self.sigma1 * self.sigma2
                    + Fraction(27, 2) * self.sigma3
                ) / self.sigma_eq**3

    def axis_deviator(self) -> np.ndarray:
        """Exact evaluation of the orthotropic axis covariant (lambda')."""
        s1, s2, s3 = self.sigma1, self.sigma2, self.sigma3
        a2 = 2 * (112 * s1**2 * s3 + 21 * s1 * s2**2 - 270 * s2 * s3)
        a3 = 8 * (14 * s1 * s3 - 11 * s1**2 * s2 + 15 * s2**2)
        combo = [
            [
                a2 * self.d[2][i][j]
                + a3 * self.d[3][i][j]
                - 54 * s3 * self.d[4][i][j]
                + 11 * s2 * self.d[5][i][j]
                for j in range(3)
            ]
            for i in range(3)
        ]
        combo = _deviator3(combo)
        scale = 8 * self.Delta3
        return np.array([[float(v / scale) for v in row] for row in combo])
