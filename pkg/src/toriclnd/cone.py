"""Rational polyhedral cones with exact duality and face lattices.

A cone is stored with both descriptions: `generators` (V-description) and
`facet_normals` (H-description, vectors in the dual lattice).  Duality is
computed by the double description method at desk scale: halfspaces are
inserted one at a time into a (lineality, extreme rays) representation with
exact integer arithmetic, and results are canonicalized by primitive-sorting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .exactmath import (
    DegenerateInputError,
    DimensionError,
    Vec,
    integer_rank,
    pairing,
    primitive,
    vneg,
)


class DegenerateGeometryError(ValueError):
    """Geometry violating the effectiveness assumptions (non-pointed, not full-dim, ...)."""


class InvalidFaceError(ValueError):
    """A face object does not belong to the cone it was used with."""


def _unit_vectors(rank: int) -> list[Vec]:
    return [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]


def _combine(a: int, u: Vec, b: int, v: Vec) -> Vec:
    return primitive(tuple(a * x + b * y for x, y in zip(u, v)))


def _double_description(normals: Sequence[Vec], rank: int) -> tuple[list[Vec], list[Vec]]:
    """Lineality basis and extreme rays of the cone {v : <a, v> >= 0 for all a}.

    Rays carry the exact set of inserted halfspaces tight at them, which makes
    the algebraic adjacency test exact: p and q span a 2-face (mod lineality)
    iff the normals tight at both have rank n - dim(lineality) - 2.
    """
    lineality: list[Vec] = _unit_vectors(rank)
    rays: list[tuple[Vec, frozenset[int]]] = []
    inserted: dict[int, Vec] = {}

    for idx, a in enumerate(normals):
        if not any(a):
            continue
        vals = [pairing(a, l) for l in lineality]
        split = next((j for j, v in enumerate(vals) if v), None)
        if split is not None:
            l0, v0 = lineality[split], vals[split]
            if v0 < 0:
                l0, v0 = vneg(l0), -v0
            new_lin = []
            for j, (l, val) in enumerate(zip(lineality, vals)):
                if j == split:
                    continue
                new_lin.append(l if val == 0 else _combine(v0, l, -val, l0))
            new_rays = []
            for r, tight in rays:
                vr = pairing(a, r)
                moved = r if vr == 0 else _combine(v0, r, -vr, l0)
                new_rays.append((moved, tight | {idx}))
            new_rays.append((l0, frozenset(inserted)))
            lineality, rays = new_lin, new_rays
        else:
            plus, zero, minus = [], [], []
            for r, tight in rays:
                v = pairing(a, r)
                if v > 0:
                    plus.append((r, tight))
                elif v < 0:
                    minus.append((r, tight))
                else:
                    zero.append((r, tight | {idx}))
            target = rank - len(lineality) - 2
            survivors = plus + zero
            existing = {r for r, _ in survivors}
            for (p, tp), (q, tq) in itertools.product(plus, minus):
                common = tp & tq
                if integer_rank([inserted[i] for i in common]) != target:
                    continue
                w = _combine(pairing(a, p), q, -pairing(a, q), p)
                if w in existing:
                    continue
                existing.add(w)
                survivors.append((w, common | {idx}))
            rays = survivors
        inserted[idx] = a
    return lineality, [r for r, _ in rays]


def _generating_set(lineality: Sequence[Vec], rays: Sequence[Vec]) -> tuple[Vec, ...]:
    gens = {primitive(r) for r in rays if any(r)}
    for l in lineality:
        gens.add(primitive(l))
        gens.add(primitive(vneg(l)))
    return tuple(sorted(gens))


@dataclass(frozen=True)
class Face:
    """A face of a cone: the parent generators killed by a set of facet normals."""

    parent: "Cone"
    active: tuple[int, ...]
    generators: tuple[Vec, ...]
    dim: int

    def contains_point(self, m: Vec) -> bool:
        """Point of the parent cone lying on this face."""
        if not self.parent.contains(m):
            return False
        normals = self.parent.facet_normals
        return all(pairing(normals[i], m) == 0 for i in self.active)


class Cone:
    """Finitely generated rational cone with cross-validated dual descriptions."""

    __slots__ = ("rank", "generators", "facet_normals", "pointed", "full_dim")

    def __init__(self, rank: int, generators: tuple[Vec, ...], facet_normals: tuple[Vec, ...]):
        self.rank = rank
        self.generators = generators
        self.facet_normals = facet_normals
        self.pointed = integer_rank(facet_normals) == rank
        self.full_dim = integer_rank(generators) == rank

    @classmethod
    def from_generators(cls, generators: Sequence[Vec], rank: int) -> "Cone":
        if rank < 1:
            raise DegenerateInputError("cone rank must be positive")
        prim = set()
        for g in generators:
            if len(g) != rank:
                raise DimensionError(f"generator {g} does not have rank {rank}")
            if any(g):
                prim.add(primitive(tuple(g)))
        prim = tuple(sorted(prim))
        facet_normals = _generating_set(*_double_description(prim, rank))
        canonical = _generating_set(*_double_description(facet_normals, rank))
        cone = cls(rank, canonical, facet_normals)
        cone._validate(prim)
        return cone

    @classmethod
    def from_inequalities(cls, normals: Sequence[Vec], rank: int) -> "Cone":
        prim = tuple(sorted({primitive(tuple(a)) for a in normals if any(a)}))
        generators = _generating_set(*_double_description(prim, rank))
        facet_normals = _generating_set(*_double_description(generators, rank))
        return cls(rank, generators, facet_normals)

    def _validate(self, original: tuple[Vec, ...]) -> None:
        for g in itertools.chain(original, self.generators):
            if any(pairing(f, g) < 0 for f in self.facet_normals):
                raise RuntimeError(f"double description inconsistency at generator {g}")
        if self.pointed and not set(self.generators) <= set(original) and original:
            raise RuntimeError("extreme rays escaped the original generating set")

    # -- basic queries --------------------------------------------------------

    def contains(self, v: Vec) -> bool:
        if len(v) != self.rank:
            raise DimensionError(f"point {v} does not have rank {self.rank}")
        return all(pairing(f, v) >= 0 for f in self.facet_normals)

    def is_pointed(self) -> bool:
        return self.pointed

    def is_full_dim(self) -> bool:
        return self.full_dim

    def dual(self) -> "Cone":
        """The dual cone; an exact involution on canonical forms.

        Generators and facet normals swap roles, because the facet normals
        were computed as the canonical generating set of the dual.
        """
        if not self.generators:
            raise DegenerateInputError("dual of the zero cone is the whole space")
        return Cone(self.rank, self.facet_normals, self.generators)

    # -- faces -----------------------------------------------------------------

    def _face_from_generators(self, gens: tuple[Vec, ...]) -> Face:
        active = tuple(
            i
            for i, f in enumerate(self.facet_normals)
            if all(pairing(f, g) == 0 for g in gens)
        )
        return Face(self, active, gens, integer_rank(gens))

    def rays(self) -> list[Face]:
        """One-dimensional faces, ordered by their sorted primitive generators."""
        if not self.pointed:
            raise DegenerateGeometryError("rays of a non-pointed cone are not well defined")
        return [self._face_from_generators((g,)) for g in self.generators]

    def faces(self) -> list[Face]:
        """The full face lattice, by brute force over active-normal subsets."""
        if not self.pointed:
            raise DegenerateGeometryError("face lattice requires a pointed cone")
        normals = self.facet_normals
        seen: dict[tuple[Vec, ...], Face] = {}
        for k in range(len(normals) + 1):
            for subset in itertools.combinations(range(len(normals)), k):
                gens = tuple(
                    g
                    for g in self.generators
                    if all(pairing(normals[i], g) == 0 for i in subset)
                )
                if gens not in seen:
                    seen[gens] = self._face_from_generators(gens)
        return sorted(seen.values(), key=lambda f: (f.dim, f.generators))

    # -- identity ---------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.generators == other.generators
            and self.facet_normals == other.facet_normals
        )

    def __hash__(self):
        return hash((self.rank, self.generators, self.facet_normals))

    def __repr__(self):
        return (
            f"Cone(rank={self.rank}, generators={list(self.generators)}, "
            f"facets={list(self.facet_normals)})"
        )


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def face_hat(tau: Face, sigma_dual: Cone) -> Face:
    """The face of the dual cone orthogonal to `tau` (tau_perp intersect dual).

    `tau` must be a face of a cone sigma and `sigma_dual` its dual; dimensions
    then satisfy dim(tau) + dim(face_hat(tau)) = rank.
    """
    sigma = tau.parent
    if set(sigma_dual.generators) != set(sigma.facet_normals) or set(
        sigma_dual.facet_normals
    ) != set(sigma.generators):
        raise InvalidFaceError("second argument is not the dual of the face's parent cone")
    expected = tuple(
        g
        for g in sigma.generators
        if all(pairing(sigma.facet_normals[i], g) == 0 for i in tau.active)
    )
    if expected != tau.generators:
        raise InvalidFaceError("face generators are inconsistent with its active normals")
    gens = tuple(
        g
        for g in sigma_dual.generators
        if all(pairing(g, w) == 0 for w in tau.generators)
    )
    return sigma_dual._face_from_generators(gens)
