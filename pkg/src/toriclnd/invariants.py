"""Degree-truncated probes of kernel-intersection and kernel-generation invariants.

The invariants quantify over all locally nilpotent derivations, which no
finite computation can enumerate, so every probe is one-sided and says so:

* intersection probes (the Makar-Limanov style ML and its slice-restricted
  variant ML*) intersect finitely many kernels, hence give an UPPER bound of
  the true invariant's truncation;
* generation probes (the Derksen style HD and HD*) generate from finitely
  many kernels, hence give a LOWER bound.

The default slice-restricted family consists of the slice-admitting root
derivations together with all locally nilpotent, slice-admitting pairwise
sums (slice root) + (root); that family of sums is exactly the device that
pushes intersection probes below a single homogeneous kernel on non-normal
examples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .derivation import (
    AlgebraElement,
    Derivation,
    NonNilpotentEvidenceError,
    VerifiedUpToBound,
    find_slice,
    kernel_basis,
    verify_locally_nilpotent,
)
from .exactmath import Echelon, TruncatedSubspace, Vec, vadd, vneg
from .monoid import AffineMonoid, PreconditionError
from .roots import roots_with_slice, well_defined_roots

UPPER_BOUND = "upper-bound-of-invariant"
LOWER_BOUND = "lower-bound-of-invariant"


class EmptyFamilyError(ValueError):
    """A probe was asked to run over an empty derivation family."""


@dataclass(frozen=True)
class DerivationFamily:
    """A finite family of verified locally nilpotent derivations.

    `notes` carries one provenance string per member (which roots, whether a
    slice was found); for slice-admitting families `slices` holds the
    verified slice of each member.
    """

    members: tuple[Derivation, ...]
    kind: str  # "all-roots" | "slice-admitting" | "user-supplied"
    notes: tuple[str, ...]
    slices: tuple[Optional[AlgebraElement], ...]

    def __len__(self):
        return len(self.members)


def all_roots_family(
    monoid: AffineMonoid, coord_bound: int, degree_bound: int, cap: int = 64
) -> DerivationFamily:
    """One derivation per well-defined root within the coordinate bound."""
    members, notes = [], []
    for root in well_defined_roots(monoid, coord_bound, degree_bound):
        d = Derivation.from_roots(monoid, [(1, root)], degree_bound, check=False)
        status = verify_locally_nilpotent(d, cap)
        if not isinstance(status, VerifiedUpToBound):
            raise RuntimeError(f"root derivation {root.vector} failed nilpotency check")
        members.append(d)
        notes.append(f"root {root.vector} with distinguished ray {root.ray}")
    return DerivationFamily(
        members=tuple(members),
        kind="all-roots",
        notes=tuple(notes),
        slices=(None,) * len(members),
    )


def slice_admitting_family(
    monoid: AffineMonoid,
    coord_bound: int,
    degree_bound: int,
    slice_degree: int,
    cap: int = 64,
) -> DerivationFamily:
    """Slice-admitting roots plus all slice-admitting sums (slice root) + (root)."""
    slice_roots = roots_with_slice(monoid, coord_bound, degree_bound)
    all_roots = well_defined_roots(monoid, coord_bound, degree_bound)
    members, notes, slices = [], [], []
    seen: set[tuple] = set()

    def admit(d: Derivation, note: str) -> None:
        key = tuple(sorted((c.root.vector, c.coefficient) for c in d.components))
        if key in seen:
            return
        if not isinstance(verify_locally_nilpotent(d, cap), VerifiedUpToBound):
            return
        found = find_slice(d, slice_degree)
        if found.slice is None:
            return
        seen.add(key)
        members.append(d)
        notes.append(note)
        slices.append(found.slice)

    for s in slice_roots:
        d = Derivation.from_roots(monoid, [(1, s)], degree_bound, check=False)
        admit(d, f"slice-admitting root {s.vector}")
    for s in slice_roots:
        for r in all_roots:
            if r.vector == s.vector:
                continue
            d = Derivation.from_roots(monoid, [(1, s), (1, r)], degree_bound, check=False)
            admit(d, f"sum of slice root {s.vector} and root {r.vector}")
    return DerivationFamily(
        members=tuple(members),
        kind="slice-admitting",
        notes=tuple(notes),
        slices=tuple(slices),
    )


def user_family(
    monoid: AffineMonoid,
    derivations: Sequence[Derivation],
    slice_degree: Optional[int] = None,
    cap: int = 64,
) -> DerivationFamily:
    """Wrap user-supplied derivations, verifying nilpotency (and slices if asked)."""
    members, notes, slices = [], [], []
    for d in derivations:
        status = verify_locally_nilpotent(d, cap)
        if not isinstance(status, VerifiedUpToBound):
            raise NonNilpotentEvidenceError(
                f"nilpotency unverifiable within cap {cap}: "
                f"the chain of generator {status.witness} kept growing"
            )
        s = None
        if slice_degree is not None:
            s = find_slice(d, slice_degree).slice
            if s is None:
                raise PreconditionError(
                    f"no slice up to degree {slice_degree} for a supplied derivation; "
                    "slice-restricted probes need slice-verified members"
                )
        members.append(d)
        notes.append("user-supplied derivation " + repr(d))
        slices.append(s)
    return DerivationFamily(
        members=tuple(members), kind="user-supplied", notes=tuple(notes), slices=tuple(slices)
    )


# -- probes --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    """A truncated subspace bounding an invariant from one declared side."""

    subspace: TruncatedSubspace
    degree: int
    direction: str
    family_kind: str
    member_count: int
    note: str = ""


def ml_probe(family: DerivationFamily, degree: int) -> ProbeResult:
    """Intersection of the truncated kernels over the family (an upper bound).

    The intersection always contains the constants, so the loop stops early
    once it reaches dimension one.  Single-root members with an already-seen
    distinguished ray are skipped: their kernels coincide.
    """
    if not family.members:
        raise EmptyFamilyError("intersection probe over an empty family")
    acc: Optional[TruncatedSubspace] = None
    seen_rays = set()
    for member in family.members:
        if len(member.components) == 1:
            ray = member.components[0].root.ray
            if ray in seen_rays:
                continue
            seen_rays.add(ray)
        ker = kernel_basis(member, degree)
        acc = ker if acc is None else acc.intersect(ker)
        if acc.dim <= 1:
            break
    return ProbeResult(
        subspace=acc,
        degree=degree,
        direction=UPPER_BOUND,
        family_kind=family.kind,
        member_count=len(family.members),
    )


def generate_subalgebra(
    monoid: AffineMonoid, seeds: Sequence[TruncatedSubspace], degree: int
) -> TruncatedSubspace:
    """Smallest subspace containing 1 and the seeds, closed under bounded products.

    Products are kept only when the factors' degrees sum to at most the
    bound; the algebra is a graded domain, so that is exactly the condition
    for the product to stay inside the truncation.  Closure is reached by
    iterated pairwise multiplication over a stable list of representatives.
    """
    ambient = monoid.truncation_set(degree)
    index = {m: i for i, m in enumerate(ambient)}
    ech = Echelon(len(ambient))

    reps: list[tuple[dict[int, Fraction], int]] = []  # (vector, top degree)

    def snapshot(vec) -> None:
        stored = ech.insert(vec)
        if stored is not None:
            reps.append((stored, max(monoid.degree(ambient[c]) for c in stored)))

    origin = (0,) * monoid.rank
    snapshot({index[origin]: Fraction(1)})
    for seed in seeds:
        if seed.ambient != ambient:
            raise PreconditionError("seed subspaces must share the truncation ambient")
        for row in seed.rows:
            snapshot(row)

    frontier = list(range(len(reps)))
    while frontier:
        next_start = len(reps)
        for fi in frontier:
            u, du = reps[fi]
            for gi in range(len(reps)):
                if gi >= next_start:
                    break
                v, dv = reps[gi]
                if du + dv > degree:
                    continue
                prod: dict[int, Fraction] = {}
                for cu, au in u.items():
                    mu = ambient[cu]
                    for cv, av in v.items():
                        w = index[vadd(mu, ambient[cv])]
                        s = prod.get(w, Fraction(0)) + au * av
                        if s:
                            prod[w] = s
                        else:
                            prod.pop(w, None)
                if prod:
                    snapshot(prod)
        if ech.dim == len(ambient):
            break
        frontier = list(range(next_start, len(reps)))
    return TruncatedSubspace(ambient, ech)


def hd_probe(family: DerivationFamily, degree: int) -> ProbeResult:
    """Subalgebra generated by the truncated kernels (a lower bound)."""
    if not family.members:
        raise EmptyFamilyError("generation probe over an empty family")
    monoid = family.members[0].monoid
    seeds = [kernel_basis(member, degree) for member in family.members]
    return ProbeResult(
        subspace=generate_subalgebra(monoid, seeds, degree),
        degree=degree,
        direction=LOWER_BOUND,
        family_kind=family.kind,
        member_count=len(family.members),
    )


def hd_star_probe(family: DerivationFamily, degree: int) -> ProbeResult:
    """Generation probe restricted to slice-verified families."""
    if family.kind not in ("slice-admitting", "user-supplied"):
        raise PreconditionError("slice-restricted probe needs a slice-admitting family")
    if any(s is None for s in family.slices):
        raise PreconditionError("every member of a slice-restricted family needs a slice")
    return hd_probe(family, degree)


def coefficient_vanishes(space: TruncatedSubspace, m: Vec) -> bool:
    """True iff the coordinate functional at the monomial m kills the subspace."""
    return space.coordinate_vanishes(m)


# -- consistency check of the intersection-probe equality -----------------------------


@dataclass(frozen=True)
class MlStarComparison:
    """Probe-level comparison of the plain and slice-restricted intersections."""

    status: str  # "equal" | "different" | "hypothesis-not-met"
    degree: int
    plain: Optional[ProbeResult]
    restricted: Optional[ProbeResult]
    discrepancy: tuple = ()


def ml_equals_ml_star_check(
    monoid: AffineMonoid,
    coord_bound: int,
    degree_bound: int,
    slice_degree: int,
    degree: int,
    cap: int = 64,
) -> MlStarComparison:
    """Compare intersection probes over the full and slice-admitting families.

    This is a bounded consistency check of the expected equality, not a
    proof: both families are finite samples.  When no derivation with a
    slice exists the hypothesis fails and the slice-restricted invariant
    degenerates to the whole algebra.
    """
    restricted_family = slice_admitting_family(
        monoid, coord_bound, degree_bound, slice_degree, cap
    )
    if not restricted_family.members:
        return MlStarComparison(
            status="hypothesis-not-met", degree=degree, plain=None, restricted=None
        )
    plain = ml_probe(all_roots_family(monoid, coord_bound, degree_bound, cap), degree)
    restricted = ml_probe(restricted_family, degree)
    if plain.subspace == restricted.subspace:
        return MlStarComparison("equal", degree, plain, restricted)
    bigger, smaller = restricted.subspace, plain.subspace
    discrepancy = tuple(
        tuple(sorted(row.items()))
        for row in bigger.rows
        if not smaller.contains_vector(row)
    )
    return MlStarComparison("different", degree, plain, restricted, discrepancy)
