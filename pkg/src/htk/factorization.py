"""Multipole factorization of harmonic tensors via binary-form roots.

Every order-n harmonic tensor is the harmonic product of n linear forms
(x . w_i).  The vectors w_i come from the projective roots of the associated
degree-2n binary form: roots occur in antipodal pairs (lambda, -1/conj(lambda))
-- with (0, infinity) pairs allowed -- and each pair maps to one real vector
through an inverse stereographic projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .binary_forms import BinaryForm, cartan_map, form_multiply, reality_residual
from .errors import RootPairingError
from .harmonic import harmonic_product
from .tensor_core import HarmTensor, inner_dot, inner_norm, random_rotation, rotate

_COEFF_CUTOFF = 1e-13  # relative size under which a coefficient counts as zero
_PAIR_TOL = 1e-6  # relative mismatch allowed when matching antipodal roots


@dataclass
class PairedRoots:
    """Antipodally paired roots of a reality-satisfying binary form.

    `finite_pairs` holds one representative per pair, repeated for multiple
    pairs; `clustered` records whether any multiple root was consolidated.
    """

    finite_pairs: list[complex]
    infinity_multiplicity: int
    alpha: float
    clustered: bool = False


@dataclass
class MultipoleSet:
    """Vectors whose linear forms multiply back to the source tensor."""

    vectors: list[np.ndarray]
    ill_conditioned: bool = field(default=False)


def _polish_root(coeffs: np.ndarray, t: complex, steps: int = 3) -> complex:
    """Newton refinement of a root of sum_k coeffs[k] t^k."""
    deriv = coeffs[1:] * np.arange(1, len(coeffs))
    for _ in range(steps):
        p = np.polyval(coeffs[::-1], t)
        dp = np.polyval(deriv[::-1], t)
        if dp == 0:
            break
        step = p / dp
        if not np.isfinite(step):
            break
        t = t - step
    return t


def find_roots(f: BinaryForm) -> tuple[np.ndarray, int]:
    """Projective roots of a binary form, as (finite roots, multiplicity of infinity).

    Dehomogenizes to p(t) = f(t, 1); vanishing leading coefficients become
    roots at infinity.  Roots are companion-matrix eigenvalues polished by a
    few Newton steps.
    """
    c = f.coeffs
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        raise ValueError("zero form has no well-defined roots")
    nonzero = np.abs(c) > _COEFF_CUTOFF * scale
    hi = int(np.max(np.nonzero(nonzero)))
    inf_mult = f.degree - hi
    trimmed = c[: hi + 1]
    if len(trimmed) == 1:
        return np.array([], dtype=complex), inf_mult
    roots = np.roots(trimmed[::-1])
    polished = []
    rev = trimmed[::-1].copy()  # descending; reversed poly has roots 1/t
    for t in roots:
        if abs(t) <= 1.0:
            polished.append(_polish_root(trimmed, t))
        else:
            s = _polish_root(rev, 1.0 / t)
            polished.append(1.0 / s if s != 0 else t)
    return np.array(polished, dtype=complex), inf_mult


def root_residual(f: BinaryForm, t: complex) -> float:
    """Projective backward error of a reported root, relative to max |coeff|."""
    c = f.coeffs
    scale = float(np.max(np.abs(c)))
    if abs(t) <= 1.0:
        return abs(np.polyval(c[::-1], t)) / scale
    return abs(np.polyval(c, 1.0 / t)) / scale


def _chordal(a: complex, b: complex) -> float:
    """Distance of two points of the Riemann sphere (unit-vector metric)."""
    return 2.0 * abs(a - b) / np.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2))


def _polish_multiple_root(coeffs: np.ndarray, t: complex, mult: int) -> complex:
    """Refine an m-fold root as a simple root of the (m-1)-th derivative."""
    c = np.asarray(coeffs, dtype=complex)
    if abs(t) > 1.0:
        c = c[::-1]
        t = 1.0 / t
        flip = True
    else:
        flip = False
    for _ in range(mult - 1):
        c = c[1:] * np.arange(1, len(c))
    t = _polish_root(c, t, steps=8)
    return 1.0 / t if flip else t


def _cluster_roots(finite: np.ndarray, f: BinaryForm, tol: float = 1e-4):
    """Consolidate nearly coincident roots into (center, multiplicity) pairs.

    An exact m-fold root comes out of the companion matrix split by
    O(eps^(1/m)); the cluster center is re-polished on the (m-1)-th
    derivative, where it is a simple root.
    """
    groups: list[list[complex]] = []
    for t in finite:
        for grp in groups:
            if _chordal(t, grp[0]) < tol:
                grp.append(t)
                break
        else:
            groups.append([t])
    clusters = []
    clustered = False
    for grp in groups:
        center = complex(np.mean(grp))
        if len(grp) > 1:
            clustered = True
            if abs(center) > _COEFF_CUTOFF * 10:
                center = _polish_multiple_root(f.coeffs, center, len(grp))
        clusters.append((center, len(grp)))
    return clusters, clustered


def _attempt_pairing(
    finite: np.ndarray, inf_mult: int, f: BinaryForm, cluster_tol: float
) -> PairedRoots:
    scale = float(np.max(np.abs(f.coeffs)))
    clusters, clustered = _cluster_roots(finite, f, cluster_tol)
    zero_mult = sum(m for c, m in clusters if abs(c) <= _COEFF_CUTOFF * 10)
    if zero_mult != inf_mult:
        raise RootPairingError(
            f"{zero_mult} roots at zero cannot pair with {inf_mult} at infinity"
        )
    remaining = [(c, m) for c, m in clusters if abs(c) > _COEFF_CUTOFF * 10]
    pairs: list[complex] = []
    while remaining:
        lam, mult = remaining.pop(0)
        target = -1.0 / np.conj(lam)
        dists = [abs(t - target) for t, _ in remaining]
        if not dists:
            raise RootPairingError(f"root {lam} has no antipodal partner left")
        j = int(np.argmin(dists))
        tol = _PAIR_TOL * max(abs(target), 1.0)
        if dists[j] > tol:
            raise RootPairingError(
                f"root {lam}: nearest candidate {remaining[j][0]} is {dists[j]:.3e} "
                f"from the antipode {target} (tolerance {tol:.3e})"
            )
        partner, mult2 = remaining.pop(j)
        if mult != mult2:
            raise RootPairingError(
                f"roots {lam} and {partner} pair with multiplicities {mult} != {mult2}"
            )
        # keep the representative of smaller modulus for numerical balance
        pairs.extend([lam if abs(lam) <= abs(partner) else partner] * mult)
    hi = f.degree - inf_mult
    lead = f.coeffs[hi]
    denom = np.prod([np.conj(t) for t in pairs]) if pairs else 1.0
    alpha = lead / denom
    if abs(alpha.imag) > 1e-6 * max(abs(alpha), 1e-300 * scale):
        raise RootPairingError(f"scale factor {alpha} is not real")
    return PairedRoots(pairs, inf_mult, float(alpha.real), clustered)


def factored_form(paired: PairedRoots, degree: int) -> BinaryForm:
    """Binary form alpha u^r v^r prod (u - lambda v)(conj(lambda) u + v)."""
    c = np.array([paired.alpha], dtype=complex)
    deg = 0
    for lam in paired.finite_pairs:
        c = _conv_pair(c, lam)
        deg += 2
    r = paired.infinity_multiplicity
    out = np.zeros(degree + 1, dtype=complex)
    out[r : r + deg + 1] = c
    return BinaryForm(degree, out)


def _conv_pair(c: np.ndarray, lam: complex) -> np.ndarray:
    c = np.convolve(c, np.array([-lam, 1.0], dtype=complex))
    return np.convolve(c, np.array([1.0, np.conj(lam)], dtype=complex))


def form_mismatch(paired: PairedRoots, f: BinaryForm) -> float:
    rebuilt = factored_form(paired, f.degree)
    return float(
        np.max(np.abs(rebuilt.coeffs - f.coeffs)) / np.max(np.abs(f.coeffs))
    )


def pair_roots(roots: tuple[np.ndarray, int], f: BinaryForm) -> PairedRoots:
    """Match roots into antipodal pairs and recover the real scale factor.

    A root at 0 is the antipode of a root at infinity; finite non-zero roots
    lambda are matched greedily to the nearest -1/conj(lambda).  An m-fold
    root only comes out of the companion matrix to O(eps^(1/m)), so nearly
    coincident roots are consolidated first, at the smallest clustering
    radius for which the refactored form reproduces the input coefficients.
    """
    finite, inf_mult = roots
    best: PairedRoots | None = None
    best_res = np.inf
    last_err: RootPairingError | None = None
    for cluster_tol in (1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 3e-3, 1e-2):
        try:
            cand = _attempt_pairing(finite, inf_mult, f, cluster_tol)
        except RootPairingError as err:
            last_err = err
            continue
        res = form_mismatch(cand, f)
        if res <= 1e-9:
            return cand
        if res < best_res:
            best, best_res = cand, res
    if best is not None and best_res <= 1e-6:
        return best
    if best is not None:
        raise RootPairingError(
            f"no pairing reproduces the form (best residual {best_res:.3e})"
        )
    raise last_err if last_err is not None else RootPairingError("pairing failed")


def _pair_to_vector(lam: complex) -> np.ndarray:
    """Unit-free vector of the antipodal pair {lambda, -1/conj(lambda)}.

    Chosen so that the linear form's binary image is exactly
    (u - lambda v)(conj(lambda) u + v).
    """
    return np.array([2 * lam.real, 2 * lam.imag, 1.0 - abs(lam) ** 2])


def rebuild_from_multipoles(m: MultipoleSet | list[np.ndarray]) -> HarmTensor:
    """Harmonic product chain (x . w_1) * ... * (x . w_n)."""
    vectors = m.vectors if isinstance(m, MultipoleSet) else m
    if not vectors:
        raise ValueError("need at least one vector")
    out = HarmTensor(1, np.asarray(vectors[0], dtype=float))
    for w in vectors[1:]:
        out = harmonic_product(out, HarmTensor(1, np.asarray(w, dtype=float)))
    return out


def maxwell_multipoles(h: HarmTensor, seed: int = 1234) -> MultipoleSet:
    """Vectors w_1..w_n with (x.w_1) * ... * (x.w_n) equal to h.

    A fixed seeded rotation moves the configuration away from the
    stereographic pole before root extraction and is undone afterwards.
    The result is unique only up to permutations and scalings of product one;
    here all vectors are unit except the first, which carries the scale.
    """
    n = h.order
    norm_h = inner_norm(h)
    if norm_h == 0.0:
        raise ValueError("zero tensor has no multipole factorization")
    if n == 0:
        raise ValueError("order-0 tensors have no multipole factorization")
    rng = np.random.default_rng(seed)
    g = random_rotation(rng)
    f = cartan_map(rotate(g, h))
    paired = pair_roots(find_roots(f), f)
    vectors = [_pair_to_vector(lam) for lam in paired.finite_pairs]
    vectors += [np.array([0.0, 0.0, 1.0])] * paired.infinity_multiplicity
    ginv = g.T
    units = [ginv @ (w / np.linalg.norm(w)) for w in vectors]
    gaps = [
        min(np.linalg.norm(u - v), np.linalg.norm(u + v))
        for i, u in enumerate(units)
        for v in units[i + 1 :]
    ]
    ill = paired.clustered or any(0.0 < gap < 1e-4 for gap in gaps)
    # the fiber leaves only the overall scale to fix; fit it against h
    unit_build = rebuild_from_multipoles(units)
    scale = inner_dot(h, unit_build) / inner_dot(unit_build, unit_build)
    units[0] = units[0] * scale
    return MultipoleSet(units, ill_conditioned=ill)


def factor_equal_orders(h: HarmTensor, k: int, n: int) -> list[HarmTensor]:
    """Factor an order-(k n) harmonic tensor into k harmonic factors of order n."""
    if k <= 0 or n <= 0 or h.order != k * n:
        raise ValueError(f"order {h.order} does not split as {k} x {n}")
    if k == 1:
        return [h]
    vectors = maxwell_multipoles(h).vectors
    return [
        rebuild_from_multipoles(vectors[i * n : (i + 1) * n]) for i in range(k)
    ]


def square_difference(h: HarmTensor) -> tuple[HarmTensor, HarmTensor]:
    """Write an even-order tensor as h1 * h1 - h2 * h2 with half-order factors.

    Comes from any two-factor splitting h = p1 * p2 through the polynomial
    identity p1 p2 = ((p1+p2)/2)^2 - ((p1-p2)/2)^2.
    """
    if h.order % 2 != 0:
        raise ValueError("square difference needs an even-order tensor")
    n = h.order // 2
    if inner_norm(h) == 0.0:
        return HarmTensor.zero(n), HarmTensor.zero(n)
    p1, p2 = factor_equal_orders(h, 2, n)
    return 0.5 * (p1 + p2), 0.5 * (p1 - p2)
