"""Finitely generated submonoids of a lattice: membership, saturation, holes.

A monoid P is given by generators inside M = Z^n.  It spans the rational cone
sigma_dual = Q>=0 * P, whose dual sigma lives in the dual lattice N.  The
grading vector w0 (by default the sum of the primitive ray generators of
sigma) is interior to sigma, so every nonzero element of P has positive
degree and all enumerations below are finite.

Saturation questions quantify over infinitely many lattice points, so the
corresponding operations are bounded semi-decisions: every verdict carries
the degree bound it was established under.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Optional, Sequence

from .cone import Cone, DegenerateGeometryError, Face, InvalidFaceError
from .exactmath import (
    DimensionError,
    Vec,
    lattice_points_in_box,
    pairing,
    vsub,
)


class PreconditionError(ValueError):
    """An operation was called on arguments outside its contract."""


# -- bounded verdicts ---------------------------------------------------------


@dataclass(frozen=True)
class SaturatedUpToBound:
    bound: int

    label = "SaturatedUpToBound"


@dataclass(frozen=True)
class NotSaturated:
    witness: Vec

    label = "NotSaturated"


@dataclass(frozen=True)
class HoleFreeUpToBound:
    bound: int

    label = "HoleFreeUpToBound"


@dataclass(frozen=True)
class CounterexampleFound:
    hole: Vec

    label = "CounterexampleFound"


@dataclass(frozen=True)
class AlmostSaturated:
    witness: Vec

    label = "AlmostSaturated"


@dataclass(frozen=True)
class NoWitnessUpToBound:
    bound: int

    label = "NoWitnessUpToBound"


@dataclass(frozen=True)
class HoleReport:
    """Holes (saturation points missing from P) up to a degree bound."""

    bound: int
    holes: tuple[Vec, ...]
    complete: bool = True


class AffineMonoid:
    """A finitely generated, full-rank, pointed submonoid of Z^n."""

    def __init__(self, generators: Sequence[Vec], grading: Optional[Vec] = None):
        gens = {tuple(int(c) for c in g) for g in generators}
        gens.discard(())
        ranks = {len(g) for g in gens}
        if len(ranks) != 1:
            raise DimensionError("monoid generators must share one rank")
        self.rank = ranks.pop()
        gens = {g for g in gens if any(g)}
        if not gens:
            raise DegenerateGeometryError("a monoid needs at least one nonzero generator")

        self.cone_dual = Cone.from_generators(sorted(gens), self.rank)
        if not self.cone_dual.full_dim:
            raise DegenerateGeometryError(
                "generators do not span a full-rank sublattice; "
                "the torus action would not be effective"
            )
        if not self.cone_dual.pointed:
            raise DegenerateGeometryError(
                "the weight cone contains a line, so no positive grading exists"
            )
        self.cone_sigma = self.cone_dual.dual()

        if grading is None:
            w0 = tuple(sum(r[j] for r in self.cone_sigma.generators) for j in range(self.rank))
        else:
            w0 = tuple(int(c) for c in grading)
            if len(w0) != self.rank:
                raise DimensionError("grading vector rank mismatch")
        for r in self.cone_dual.generators:
            if pairing(w0, r) <= 0:
                raise DegenerateGeometryError(
                    f"grading vector {w0} is not interior: ray {r} has nonpositive degree"
                )
        self.grading = w0
        self.generators = tuple(sorted(gens, key=self.graded_key))
        self._members: dict[Vec, bool] = {(0,) * self.rank: True}
        self._truncations: dict[int, tuple[Vec, ...]] = {}
        self._saturation_cache: dict[int, tuple[Vec, ...]] = {}

    # -- grading ---------------------------------------------------------------

    def degree(self, m: Vec) -> int:
        return pairing(self.grading, m)

    def graded_key(self, m: Vec):
        """Graded lexicographic sort key: by w0-degree, ties broken lex."""
        return (pairing(self.grading, m), m)

    # -- membership --------------------------------------------------------------

    def in_saturation(self, m: Vec) -> bool:
        """Membership in the saturation M intersect sigma_dual."""
        if len(m) != self.rank:
            raise DimensionError(f"point {m} does not have rank {self.rank}")
        return self.cone_dual.contains(m)

    def contains(self, m: Vec) -> bool:
        """Exact membership in P, by memoized descent along generators.

        Every generator has positive degree, so subtracting generators
        strictly lowers the degree and the search terminates.
        """
        m = tuple(m)
        if len(m) != self.rank:
            raise DimensionError(f"point {m} does not have rank {self.rank}")
        cached = self._members.get(m)
        if cached is not None:
            return cached
        if not self.in_saturation(m):
            self._members[m] = False
            return False
        deg = self.degree(m)
        answer = False
        for g in self.generators:
            if self.degree(g) > deg:
                break
            if self.contains(vsub(m, g)):
                answer = True
                break
        self._members[m] = answer
        return answer

    # -- bounded enumeration -------------------------------------------------------

    def _saturation_points_up_to(self, bound: int) -> tuple[Vec, ...]:
        """All lattice points of sigma_dual with degree <= bound, graded-lex sorted.

        The degree slice is the convex hull of 0 and the scaled ray
        generators, so a coordinate box containing those vertices suffices.
        """
        cached = self._saturation_cache.get(bound)
        if cached is not None:
            return cached
        if bound < 0:
            raise PreconditionError("degree bound must be nonnegative")
        lo, hi = [], []
        for j in range(self.rank):
            vals = [Fraction(bound * r[j], self.degree(r)) for r in self.cone_dual.generators]
            lo.append(min(0, min(floor(v) for v in vals)))
            hi.append(max(0, max(ceil(v) for v in vals)))
        points = lattice_points_in_box(
            tuple(lo),
            tuple(hi),
            lambda p: self.degree(p) <= bound and self.in_saturation(p),
        )
        points = tuple(sorted(points, key=self.graded_key))
        self._saturation_cache[bound] = points
        return points

    def truncation_set(self, bound: int) -> tuple[Vec, ...]:
        """All monoid elements of degree <= bound, graded-lex sorted."""
        cached = self._truncations.get(bound)
        if cached is None:
            cached = tuple(
                m for m in self._saturation_points_up_to(bound) if self.contains(m)
            )
            self._truncations[bound] = cached
        return cached

    def holes_up_to(self, bound: int) -> HoleReport:
        """Saturation points of degree <= bound that are missing from P."""
        holes = tuple(
            m for m in self._saturation_points_up_to(bound) if not self.contains(m)
        )
        return HoleReport(bound=bound, holes=holes)

    def is_saturated(self, bound: int):
        """NotSaturated with the smallest hole, or SaturatedUpToBound."""
        max_gen = max(self.degree(g) for g in self.generators)
        if bound < max_gen:
            raise PreconditionError(
                f"degree bound {bound} is below the largest generator degree {max_gen}"
            )
        holes = self.holes_up_to(bound).holes
        if holes:
            return NotSaturated(holes[0])
        return SaturatedUpToBound(bound)

    def is_saturation_point(self, p: Vec, bound: int):
        """Bounded check that the moved cone p + sigma_dual has no holes."""
        if not self.contains(p):
            raise PreconditionError(f"{p} is not an element of the monoid")
        for h in self.holes_up_to(bound).holes:
            if self.cone_dual.contains(vsub(h, p)):
                return CounterexampleFound(h)
        return HoleFreeUpToBound(bound)

    def _check_face(self, face: Face) -> None:
        if face.parent != self.cone_dual:
            raise InvalidFaceError("face does not belong to this monoid's weight cone")

    def almost_saturated_face(self, face: Face, bound: int):
        """Search the face for a saturation point of P, up to the degree bound."""
        self._check_face(face)
        for m in self.truncation_set(bound):
            if face.contains_point(m) and isinstance(
                self.is_saturation_point(m, bound), HoleFreeUpToBound
            ):
                return AlmostSaturated(m)
        return NoWitnessUpToBound(bound)

    def orbit_ideal_basis(self, face: Face, bound: int) -> tuple[Vec, ...]:
        """Monomials of the truncation lying off the given face of sigma_dual."""
        self._check_face(face)
        return tuple(m for m in self.truncation_set(bound) if not face.contains_point(m))

    def __repr__(self):
        return (
            f"AffineMonoid(rank={self.rank}, generators={list(self.generators)}, "
            f"grading={self.grading})"
        )
