"""Heuristic symmetry-class identification of order-4 harmonic tensors.

Classes are tried from most to least symmetric; a candidate class is
accepted when its reconstruction (or, for the cubic class, invariance under
a recovered octahedral frame) reproduces the tensor within tolerance.  The
router is heuristic: the tensors it cannot place are pooled as "lower".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariants import covariants, deviator
from .errors import DegenerateClassError
from .reconstruction import (
    reconstruct_orthotropic,
    reconstruct_transverse,
    tetragonal_split,
    trigonal_split,
)
from .tensor_core import (
    HarmTensor,
    inner_norm,
    kelvin_from_harm4,
    kelvin_vec_to_matrix,
    rotate,
    rotation_about,
)

CLASS_ORDER = (
    "isotropic",
    "transverse",
    "cubic",
    "tetragonal",
    "trigonal",
    "orthotropic",
    "lower",
)


@dataclass
class ClassLabel:
    tag: str
    residual: float


def octahedral_generators(axes: np.ndarray | None = None) -> list[np.ndarray]:
    """Quarter-turn generators of the cube group with the given axis frame."""
    if axes is None:
        axes = np.eye(3)
    return [rotation_about(axes[:, i], np.pi / 2) for i in range(3)]


def dihedral_generators(n: int) -> list[np.ndarray]:
    """Generators of the dihedral group about the z-axis."""
    return [rotation_about([0, 0, 1], 2 * np.pi / n), rotation_about([1, 0, 0], np.pi)]


def o2_sample_generators() -> list[np.ndarray]:
    """A finite probe of the axial group about z: two irrational turns + flip."""
    return [
        rotation_about([0, 0, 1], 1.0),
        rotation_about([0, 0, 1], np.sqrt(2)),
        rotation_about([1, 0, 0], np.pi),
    ]


def symmetry_residual(h: HarmTensor, generators: list[np.ndarray]) -> float:
    """Max relative change of h under the given rotations; 0 for the zero tensor."""
    nh = inner_norm(h)
    if nh == 0.0:
        return 0.0
    return max(inner_norm(rotate(g, h) - h) / nh for g in generators)


def _cubic_axes(h: HarmTensor) -> np.ndarray | None:
    """Cube axes of a (putative) cubic tensor from its Kelvin eigenspaces.

    A cubic tensor's Kelvin matrix has a double eigenvalue whose eigenspace
    consists of tensors diagonal in the cube frame; the eigenvectors of a
    generic member of that plane are the cube axes.  Returns None when the
    spectrum does not show the cubic 1+2+3 clustering.
    """
    k = kelvin_from_harm4(h)
    scale = max(float(np.linalg.norm(k)), 1e-300)
    vals, vecs = np.linalg.eigh(k)
    # drop the pair closest to the identity direction (always an eigenvector
    # of eigenvalue 0 for harmonic tensors)
    id_dir = np.array([1.0, 1.0, 1.0, 0, 0, 0]) / np.sqrt(3.0)
    drop = int(np.argmax(np.abs(vecs.T @ id_dir)))
    keep = [i for i in range(6) if i != drop]
    vals = vals[keep]
    vecs = vecs[:, keep]
    # split the sorted five into a double and a triple, either way around
    order = np.argsort(vals)
    vals = vals[order]
    vecs = vecs[:, order]
    cand = [
        (np.ptp(vals[:2]) + np.ptp(vals[2:]), vecs[:, :2]),
        (np.ptp(vals[:3]) + np.ptp(vals[3:]), vecs[:, 3:]),
    ]
    spread, pair = min(cand, key=lambda t: t[0])
    if spread > 1e-6 * scale:
        return None
    for mix in (0.618, 0.382, 0.867):
        m = kelvin_vec_to_matrix(pair[:, 0] + mix * pair[:, 1])
        evals, axes = np.linalg.eigh(m)
        if min(evals[1] - evals[0], evals[2] - evals[1]) > 1e-6 * max(
            np.max(np.abs(evals)), 1e-300
        ):
            if np.linalg.det(axes) < 0:
                axes = axes.copy()
                axes[:, 2] = -axes[:, 2]
            return axes
    return None


def cubic_residual(h: HarmTensor) -> float:
    """Distance of h from the cubic class: octahedral invariance in the
    recovered cube frame, plus the required vanishing of the quadratic
    covariant's deviator."""
    nh = inner_norm(h)
    if nh == 0.0:
        return 0.0
    d2p_rel = float(np.linalg.norm(deviator(covariants(h).d2))) / nh**2
    axes = _cubic_axes(h)
    if axes is None:
        return np.inf
    return max(symmetry_residual(h, octahedral_generators(axes)), d2p_rel)


def classify(h: HarmTensor, tol: float = 1e-7) -> ClassLabel:
    """Symmetry class of an order-4 harmonic tensor, by reconstruction residual.

    Classes are tested from most to least symmetric; the first whose model
    reproduces h within `tol` (relative) wins.  Unmatched tensors are
    labelled "lower" with the smallest residual seen.
    """
    nh = inner_norm(h)
    if nh <= tol:
        return ClassLabel("isotropic", nh)
    best = np.inf

    def residual_of(build):
        try:
            return inner_norm(build() - h) / nh
        except DegenerateClassError:
            return np.inf

    r = residual_of(lambda: reconstruct_transverse(h))
    if r <= tol:
        return ClassLabel("transverse", float(r))
    best = min(best, r)

    r = cubic_residual(h)
    if r <= tol:
        return ClassLabel("cubic", float(r))
    best = min(best, r)

    def split_sum(split, k):
        def build():
            s = split(h, k)
            return s.transverse_part + s.cubic_part

        return build

    r = residual_of(split_sum(tetragonal_split, 1))
    if r <= tol:
        return ClassLabel("tetragonal", float(r))
    best = min(best, r)

    r = residual_of(split_sum(trigonal_split, 1))
    if r <= tol:
        return ClassLabel("trigonal", float(r))
    best = min(best, r)

    r = residual_of(lambda: reconstruct_orthotropic(h))
    if r <= tol:
        return ClassLabel("orthotropic", float(r))
    best = min(best, r)

    return ClassLabel("lower", float(best) if np.isfinite(best) else 1.0)
