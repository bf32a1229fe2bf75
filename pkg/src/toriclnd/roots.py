"""Demazure roots of a pointed cone and their action on a non-normal monoid.

A root is a lattice vector e pairing to -1 with exactly one ray of sigma (its
distinguished ray) and nonnegatively with all others.  The root set is
infinite in general, so enumeration is bounded by a sup-norm coordinate
bound, which is part of every result.

On a monoid P with holes, the homogeneous derivation attached to a root only
descends to the graded algebra when shifting P by e creates no new holes:
(P + e) intersect P_sat must stay inside P.  That criterion is checked by
quantifying over the holes (the scarcer set), bounded by degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cone import Cone, DegenerateGeometryError
from .exactmath import Vec, lattice_points_in_box, pairing, vneg, vsub
from .monoid import AffineMonoid, AlmostSaturated, PreconditionError


@dataclass(frozen=True)
class DemazureRoot:
    """A root vector with its distinguished ray (primitive generator and index)."""

    vector: Vec
    ray: Vec
    ray_index: int


@dataclass(frozen=True)
class HoldsUpToBound:
    bound: int

    label = "HoldsUpToBound"


@dataclass(frozen=True)
class Violation:
    witness: Vec

    label = "Violation"


@dataclass(frozen=True)
class LemmaOneReport:
    """Cross-check of the smoothness criterion for the orbit of a ray.

    Both sides are bounded searches: an almost-saturated witness for the dual
    face, and a well-defined root with the given distinguished ray.  The two
    conditions are equivalent in exact arithmetic, so the verdict is either
    agreement or inconclusive-at-bounds, never a contradiction claim.
    """

    ray: Vec
    verdict: str  # "agree-yes" | "agree-no" | "inconclusive-at-bounds"
    root_witness: Optional[DemazureRoot]
    saturation_witness: Optional[Vec]
    coord_bound: int
    degree_bound: int


def enumerate_roots(sigma: Cone, coord_bound: int) -> list[DemazureRoot]:
    """All Demazure roots of sup-norm <= coord_bound, by (ray index, lex)."""
    if coord_bound < 1:
        raise PreconditionError("coordinate bound must be at least 1")
    if not sigma.pointed or not sigma.full_dim:
        raise DegenerateGeometryError("Demazure roots need a pointed full-dimensional cone")
    rays = sigma.generators
    n = sigma.rank
    box_lo = (-coord_bound,) * n
    box_hi = (coord_bound,) * n
    out: list[DemazureRoot] = []
    for idx, ray in enumerate(rays):
        others = [r for r in rays if r != ray]
        for e in lattice_points_in_box(
            box_lo,
            box_hi,
            lambda e: pairing(e, ray) == -1 and all(pairing(e, r) >= 0 for r in others),
        ):
            out.append(DemazureRoot(vector=e, ray=ray, ray_index=idx))
    return out


def root_from_vector(monoid: AffineMonoid, e: Vec) -> DemazureRoot:
    """Classify a vector as a Demazure root of the monoid's cone, or fail."""
    rays = monoid.cone_sigma.generators
    distinguished = None
    for idx, ray in enumerate(rays):
        value = pairing(e, ray)
        if value == -1:
            if distinguished is not None:
                raise PreconditionError(f"{e} pairs to -1 with two rays")
            distinguished = (idx, ray)
        elif value < 0:
            raise PreconditionError(f"{e} pairs to {value} < 0 with ray {ray}")
    if distinguished is None:
        raise PreconditionError(f"{e} does not pair to -1 with any ray")
    return DemazureRoot(vector=tuple(e), ray=distinguished[1], ray_index=distinguished[0])


def is_well_defined(monoid: AffineMonoid, root: DemazureRoot, degree_bound: int):
    """Bounded check of the descent criterion (P + e) intersect P_sat inside P.

    A violation is a hole q with q - e in P; holes are searched in graded-lex
    order up to the degree bound, so the witness is canonical.
    """
    e = root.vector
    for q in monoid.holes_up_to(degree_bound).holes:
        if monoid.contains(vsub(q, e)):
            return Violation(q)
    return HoldsUpToBound(degree_bound)


def well_defined_roots(
    monoid: AffineMonoid, coord_bound: int, degree_bound: int
) -> list[DemazureRoot]:
    return [
        r
        for r in enumerate_roots(monoid.cone_sigma, coord_bound)
        if isinstance(is_well_defined(monoid, r, degree_bound), HoldsUpToBound)
    ]


def roots_with_slice(
    monoid: AffineMonoid, coord_bound: int, degree_bound: int
) -> list[DemazureRoot]:
    """Well-defined roots whose derivation has a slice, i.e. -e lies in P.

    The derivation sends the monomial with exponent -e to the pairing of the
    ray with -e, which is 1; so -e in P is exactly a monomial slice.
    """
    return [
        r
        for r in well_defined_roots(monoid, coord_bound, degree_bound)
        if monoid.contains(vneg(r.vector))
    ]


def lemma_one_check(
    monoid: AffineMonoid, ray_index: int, coord_bound: int, degree_bound: int
) -> LemmaOneReport:
    """Compare the almost-saturated-face test with the root-existence test."""
    from .cone import face_hat

    rays = monoid.cone_sigma.rays()
    if not 0 <= ray_index < len(rays):
        raise PreconditionError(f"ray index {ray_index} out of range")
    tau = rays[ray_index]
    hat = face_hat(tau, monoid.cone_dual)
    face_verdict = monoid.almost_saturated_face(hat, degree_bound)
    face_yes = isinstance(face_verdict, AlmostSaturated)

    root_witness = None
    for r in enumerate_roots(monoid.cone_sigma, coord_bound):
        if r.ray_index == ray_index and isinstance(
            is_well_defined(monoid, r, degree_bound), HoldsUpToBound
        ):
            root_witness = r
            break

    if face_yes and root_witness is not None:
        verdict = "agree-yes"
    elif not face_yes and root_witness is None:
        verdict = "agree-no"
    else:
        verdict = "inconclusive-at-bounds"
    return LemmaOneReport(
        ray=tau.generators[0],
        verdict=verdict,
        root_witness=root_witness,
        saturation_witness=face_verdict.witness if face_yes else None,
        coord_bound=coord_bound,
        degree_bound=degree_bound,
    )
