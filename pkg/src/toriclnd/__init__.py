"""Exact-arithmetic toolkit for lattice monoids and locally nilpotent derivations.

The package models an affine (possibly non-normal) toric variety through its
weight monoid P inside a lattice: cones and duality (`cone`), membership,
holes and saturation (`monoid`), Demazure roots and their descent to the
non-normal algebra (`roots`), sparse graded derivations with exponentials,
kernels and slices (`derivation`), and one-sided degree-truncated probes of
kernel-intersection and kernel-generation invariants (`invariants`).  The
`corpus` module ships regression cases with frozen expected facts and the
`cli` module exposes everything as deterministic commands.
"""

__version__ = "0.1.0"

from .cone import Cone, DegenerateGeometryError, Face, dual_cone, face_hat
from .derivation import (
    AlgebraElement,
    Derivation,
    HomogeneousDerivation,
    SliceResult,
    commutator,
    find_slice,
    grade_decompose,
    hull_vertex_components,
    kernel_basis,
    kernel_homogeneous,
    slice_theorem_check,
    verify_locally_nilpotent,
)
from .exactmath import (
    DegenerateInputError,
    DimensionError,
    TruncatedSubspace,
    hull_vertices,
    lattice_points_in_box,
    pairing,
    primitive,
    rref,
    solve_linear,
    subspace_contains,
    subspace_intersect,
)
from .invariants import (
    DerivationFamily,
    ProbeResult,
    all_roots_family,
    coefficient_vanishes,
    generate_subalgebra,
    hd_probe,
    hd_star_probe,
    ml_equals_ml_star_check,
    ml_probe,
    slice_admitting_family,
    user_family,
)
from .monoid import AffineMonoid, HoleReport
from .roots import (
    DemazureRoot,
    enumerate_roots,
    is_well_defined,
    lemma_one_check,
    root_from_vector,
    roots_with_slice,
    well_defined_roots,
)
