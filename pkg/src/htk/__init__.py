"""Harmonic tensor kit: decomposition, products, multipoles, reconstruction.

Symmetric tensors on R^3 are stored as homogeneous polynomials, which turns
the symmetric product into polynomial multiplication, the trace into the
Laplacian, and the harmonic pieces into an explicit recursion.  On top of
that sit the Cartan correspondence with binary forms, the Maxwell-multipole
factorization, and equivariant reconstruction formulas per symmetry class.
"""

from .binary_forms import BinaryForm, cartan_inverse, cartan_map, form_multiply
from .classify import (
    ClassLabel,
    classify,
    cubic_residual,
    dihedral_generators,
    o2_sample_generators,
    octahedral_generators,
    symmetry_residual,
)
from .covariants import CovariantSet, InvariantSet, covariants, deviator, invariants
from .errors import DegenerateClassError, RootPairingError
from .factorization import (
    MultipoleSet,
    PairedRoots,
    factor_equal_orders,
    find_roots,
    maxwell_multipoles,
    pair_roots,
    rebuild_from_multipoles,
    square_difference,
)
from .harmonic import (
    ElasticityQuintuple,
    decompose_elasticity,
    harmonic_decompose,
    harmonic_product,
    harmonic_projection,
    recompose_elasticity,
    recompose_harmonic,
)
from .reconstruction import (
    NormalForm,
    SplitResult,
    h_squared_harmonic,
    lambda_prime,
    normal_form,
    orthotropic_coefficients,
    perfect_square_test,
    random_in_class,
    reconstruct_orthotropic,
    reconstruct_transverse,
    tetragonal_parameters,
    tetragonal_split,
    tetragonal_split_rational,
    trigonal_parameters,
    trigonal_split,
    trigonal_split_rational,
)
from .tensor_core import (
    HarmTensor,
    SymTensor,
    apply4,
    check_rotation,
    compose4,
    harm4_from_kelvin,
    inner_dot,
    inner_norm,
    kelvin_from_harm4,
    random_rotation,
    rotate,
    rotation_about,
    sym_product,
    tr13,
    trace,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
