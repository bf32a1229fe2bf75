"""Sparse graded algebra elements and derivations built from Demazure roots.

An algebra element is a finite rational combination of monomials with
exponents in the monoid P.  A derivation is a finite rational combination of
homogeneous root derivations; the root of every component must be well
defined on P, which is enforced at construction (up to a degree bound, like
every saturation statement here).

A homogeneous component with root e and distinguished ray p acts on the
monomial with exponent m by  m  ->  <p, m> * (m + e).  Everything else
(Leibniz products, exponentials, kernels, slices) is exact linear algebra
over that formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .exactmath import (
    DegenerateInputError,
    DimensionError,
    Echelon,
    TruncatedSubspace,
    Vec,
    hull_vertices,
    pairing,
    vadd,
)
from .monoid import AffineMonoid, PreconditionError
from .roots import DemazureRoot, HoldsUpToBound, Violation, is_well_defined

Scalar = Union[int, Fraction]


class MonoidMismatchError(ValueError):
    """Operands are defined over different monoids."""


class WellDefinednessError(ValueError):
    """A derivation produced an exponent outside the monoid.

    This means the construction-time degree bound was too small to catch a
    descent violation of one of the roots.
    """


class NonNilpotentEvidenceError(RuntimeError):
    """An iteration cap was hit while a derivation chain kept growing."""


def _check_same_monoid(a, b):
    if a.monoid is not b.monoid and a.monoid.generators != b.monoid.generators:
        raise MonoidMismatchError("operands live over different monoids")


class AlgebraElement:
    """Finite rational combination of monomials with exponents in the monoid."""

    __slots__ = ("monoid", "terms")

    def __init__(self, monoid: AffineMonoid, terms: Mapping[Vec, Scalar], _trusted=False):
        self.monoid = monoid
        if _trusted:
            self.terms = dict(terms)
            return
        clean: dict[Vec, Fraction] = {}
        for exponent, coefficient in terms.items():
            c = Fraction(coefficient)
            if not c:
                continue
            exponent = tuple(int(x) for x in exponent)
            if not monoid.contains(exponent):
                raise WellDefinednessError(
                    f"exponent {exponent} is not an element of the monoid"
                )
            clean[exponent] = clean.get(exponent, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, monoid: AffineMonoid) -> "AlgebraElement":
        return cls(monoid, {}, _trusted=True)

    @classmethod
    def one(cls, monoid: AffineMonoid) -> "AlgebraElement":
        return cls.monomial(monoid, (0,) * monoid.rank)

    @classmethod
    def monomial(cls, monoid: AffineMonoid, exponent: Vec, coefficient: Scalar = 1) -> "AlgebraElement":
        return cls(monoid, {tuple(exponent): Fraction(coefficient)})

    # -- ring structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[Vec, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: self.monoid.graded_key(t[0]))

    def coefficient(self, exponent: Vec) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def degree(self) -> Optional[int]:
        """Top w0-degree of the support; None for the zero element."""
        if not self.terms:
            return None
        return max(self.monoid.degree(e) for e in self.terms)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same_monoid(self, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return AlgebraElement(self.monoid, out, _trusted=True)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.monoid, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, scalar: Scalar) -> "AlgebraElement":
        s = Fraction(scalar)
        if not s:
            return AlgebraElement.zero(self.monoid)
        return AlgebraElement(self.monoid, {e: s * c for e, c in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            _check_same_monoid(self, other)
            out: dict[Vec, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = vadd(e1, e2)  # stays in P: monoids are closed under addition
                    s = out.get(e, Fraction(0)) + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        out.pop(e, None)
            return AlgebraElement(self.monoid, out, _trusted=True)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.monoid.generators == other.monoid.generators and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.sorted_terms():
            bits.append(f"{c}*X{e}")
        return " + ".join(bits)


# -- nilpotency status ------------------------------------------------------------


@dataclass(frozen=True)
class VerifiedUpToBound:
    """All generator chains vanish; `chain_bound` is the longest chain seen.

    The bound is the least k with derivation^k = 0 on the worst generator
    monomial; verified on generators plus the Leibniz rule gives local
    nilpotency on every element.
    """

    chain_bound: int

    label = "VerifiedUpToBound"


@dataclass(frozen=True)
class Inconclusive:
    witness: Optional[Vec] = None

    label = "Inconclusive"


@dataclass(frozen=True)
class Unchecked:
    label = "Unchecked"


@dataclass(frozen=True)
class HomogeneousDerivation:
    """One root derivation scaled by a nonzero rational coefficient."""

    monoid: AffineMonoid
    root: DemazureRoot
    coefficient: Fraction

    def image_of_monomial(self, m: Vec) -> Optional[tuple[Vec, Fraction]]:
        k = pairing(self.root.ray, m)
        if not k:
            return None
        return vadd(m, self.root.vector), self.coefficient * k

    def apply(self, f: AlgebraElement) -> AlgebraElement:
        _check_same_monoid(self, f)
        out: dict[Vec, Fraction] = {}
        for m, c in f.terms.items():
            hit = self.image_of_monomial(m)
            if hit is None:
                continue
            e, v = hit
            s = out.get(e, Fraction(0)) + c * v
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        for e in out:
            if not self.monoid.contains(e):
                raise WellDefinednessError(
                    f"image exponent {e} escaped the monoid; "
                    "the construction-time degree bound was too small"
                )
        return AlgebraElement(self.monoid, out, _trusted=True)


class Derivation:
    """Formal rational combination of homogeneous root derivations."""

    __slots__ = ("monoid", "components", "_nilpotency")

    def __init__(self, monoid: AffineMonoid, components: Sequence[HomogeneousDerivation]):
        merged: dict[DemazureRoot, Fraction] = {}
        for comp in components:
            merged[comp.root] = merged.get(comp.root, Fraction(0)) + comp.coefficient
        comps = [
            HomogeneousDerivation(monoid, root, coeff)
            for root, coeff in merged.items()
            if coeff
        ]
        comps.sort(key=lambda c: monoid.graded_key(c.root.vector))
        self.monoid = monoid
        self.components = tuple(comps)
        self._nilpotency = Unchecked()

    @classmethod
    def from_roots(
        cls,
        monoid: AffineMonoid,
        parts: Iterable[tuple[Scalar, DemazureRoot]],
        degree_bound: int,
        check: bool = True,
    ) -> "Derivation":
        """Build a derivation, enforcing that every root descends to the monoid."""
        comps = []
        for coeff, root in parts:
            if check:
                verdict = is_well_defined(monoid, root, degree_bound)
                if isinstance(verdict, Violation):
                    raise WellDefinednessError(
                        f"root {root.vector} is not well defined: "
                        f"hole {verdict.witness} is reachable from the monoid"
                    )
            comps.append(HomogeneousDerivation(monoid, root, Fraction(coeff)))
        return cls(monoid, comps)

    @classmethod
    def zero(cls, monoid: AffineMonoid) -> "Derivation":
        return cls(monoid, ())

    @property
    def nilpotency(self):
        return self._nilpotency

    def is_zero(self) -> bool:
        return not self.components

    def apply(self, f: AlgebraElement) -> AlgebraElement:
        _check_same_monoid(self, f)
        out = AlgebraElement.zero(self.monoid)
        for comp in self.components:
            out = out + comp.apply(f)
        return out

    def exp(self, t: Scalar, f: AlgebraElement, cap: int = 64) -> AlgebraElement:
        """exp(t * derivation) applied to f, as a terminating exact sum."""
        _check_same_monoid(self, f)
        t = Fraction(t)
        total = AlgebraElement.zero(self.monoid)
        term = f
        i = 0
        while not term.is_zero():
            if i > cap:
                raise NonNilpotentEvidenceError(
                    f"exp did not terminate within {cap} applications"
                )
            total = total + term.scale(t**i / math.factorial(i))
            term = self.apply(term)
            i += 1
        return total

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.monoid.generators == other.monoid.generators and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        if not self.components:
            return "Derivation(0)"
        bits = [f"{c.coefficient}*D{c.root.vector}" for c in self.components]
        return "Derivation(" + " + ".join(bits) + ")"


# -- operations on derivations -------------------------------------------------------


@dataclass(frozen=True)
class CommutatorTerm:
    """A homogeneous piece of a commutator: m -> <functional, m> * (m + degree).

    Commutators of root derivations are homogeneous but generally not root
    derivations again, so they are reported in this general form.
    """

    degree: Vec
    functional: tuple[Fraction, ...]


def commutator(d1: Derivation, d2: Derivation) -> tuple[CommutatorTerm, ...]:
    """Homogeneous components of [d1, d2]; an empty tuple means they commute."""
    _check_same_monoid(d1, d2)
    acc: dict[Vec, list[Fraction]] = {}
    n = d1.monoid.rank
    for c1 in d1.components:
        e, p = c1.root.vector, c1.root.ray
        for c2 in d2.components:
            f, q = c2.root.vector, c2.root.ray
            scale = c1.coefficient * c2.coefficient
            # [D_e, D_f](X^m) = (<p,f><q,m> - <q,e><p,m>) X^{m+e+f}
            w = [scale * (pairing(p, f) * q[j] - pairing(q, e) * p[j]) for j in range(n)]
            if not any(w):
                continue
            key = vadd(e, f)
            if key in acc:
                acc[key] = [a + b for a, b in zip(acc[key], w)]
            else:
                acc[key] = w
    out = []
    for degree in sorted(acc, key=d1.monoid.graded_key):
        w = acc[degree]
        if any(w):
            out.append(CommutatorTerm(degree=degree, functional=tuple(w)))
    return tuple(out)


def verify_locally_nilpotent(d: Derivation, cap: int = 64):
    """Iterate the derivation on every generator monomial until the chain dies.

    Returns VerifiedUpToBound(k) with k the least power killing the worst
    generator, or Inconclusive with the offending generator.  The verdict is
    stamped on the derivation.
    """
    if cap < 1:
        raise PreconditionError("iteration cap must be at least 1")
    worst = 0
    for g in d.monoid.generators:
        f = AlgebraElement.monomial(d.monoid, g)
        steps = 0
        while not f.is_zero():
            steps += 1
            if steps > cap:
                status = Inconclusive(witness=g)
                d._nilpotency = status
                return status
            f = d.apply(f)
        worst = max(worst, steps)
    status = VerifiedUpToBound(max(worst, 1))
    d._nilpotency = status
    return status


def grade_decompose(d: Derivation, w: Vec) -> list[tuple[int, Derivation]]:
    """Group components by their w-degree, ascending; concatenation recovers d."""
    buckets: dict[int, list[HomogeneousDerivation]] = {}
    for comp in d.components:
        buckets.setdefault(pairing(w, comp.root.vector), []).append(comp)
    return [(deg, Derivation(d.monoid, buckets[deg])) for deg in sorted(buckets)]


def hull_vertex_components(d: Derivation) -> list[HomogeneousDerivation]:
    """Components whose degree vectors are vertices of the degree hull."""
    if d.is_zero():
        raise DegenerateInputError("the zero derivation has no degree hull")
    verts = set(hull_vertices([c.root.vector for c in d.components]))
    return [c for c in d.components if c.root.vector in verts]


# -- kernels and slices ------------------------------------------------------------


def _degree_inflation(d: Derivation) -> int:
    """Largest nonnegative degree shift among components (0 for none)."""
    shifts = [d.monoid.degree(c.root.vector) for c in d.components]
    return max([0] + shifts)


def _image_rows(
    d: Derivation, domain: Sequence[Vec], codomain_index: Mapping[Vec, int]
) -> dict[int, dict[int, Fraction]]:
    """Equation rows (codomain monomial -> sparse row over domain unknowns)."""
    rows: dict[int, dict[int, Fraction]] = {}
    for j, m in enumerate(domain):
        for comp in d.components:
            hit = comp.image_of_monomial(m)
            if hit is None:
                continue
            e, v = hit
            if not d.monoid.contains(e):
                raise WellDefinednessError(
                    f"image exponent {e} escaped the monoid during kernel assembly"
                )
            i = codomain_index[e]
            row = rows.setdefault(i, {})
            s = row.get(j, Fraction(0)) + v
            if s:
                row[j] = s
            else:
                row.pop(j, None)
    return rows


def kernel_basis(d: Derivation, degree: int) -> TruncatedSubspace:
    """Exact kernel of the derivation on the degree-truncated coefficient space.

    The derivation may raise degrees, so the linear system's codomain is
    inflated by the largest component degree shift; nothing is silently
    dropped.
    """
    monoid = d.monoid
    domain = monoid.truncation_set(degree)
    codomain = monoid.truncation_set(degree + _degree_inflation(d))
    cindex = {m: i for i, m in enumerate(codomain)}
    rows = _image_rows(d, domain, cindex)
    ech = Echelon(len(domain))
    for i in sorted(rows):
        ech.insert(rows[i])
    pivots = set(ech.pivots)
    basis = []
    for free in range(len(domain)):
        if free in pivots:
            continue
        v = {free: Fraction(1)}
        for p, row in zip(ech.pivots, ech.rows):
            c = row.get(free)
            if c:
                v[p] = -c
        basis.append(v)
    return TruncatedSubspace.from_vectors(domain, basis)


def kernel_homogeneous(monoid: AffineMonoid, root: DemazureRoot, degree: int) -> TruncatedSubspace:
    """Closed-form kernel of a root derivation: monomials orthogonal to its ray."""
    domain = monoid.truncation_set(degree)
    points = [m for m in domain if pairing(root.ray, m) == 0]
    return TruncatedSubspace.span_of_monomials(domain, points)


@dataclass(frozen=True)
class SliceResult:
    """A slice (preimage of 1) found by degree-bounded linear algebra, if any."""

    slice: Optional[AlgebraElement]
    search_degree: int


def find_slice(d: Derivation, degree: int) -> SliceResult:
    """Solve derivation(s) = 1 over coefficients supported on the truncation.

    The constant term of s is normalized away by excluding the origin from
    the unknowns; the reported solution is the echelon-canonical one.
    """
    monoid = d.monoid
    origin = (0,) * monoid.rank
    domain = [m for m in monoid.truncation_set(degree) if m != origin]
    codomain = monoid.truncation_set(degree + _degree_inflation(d))
    cindex = {m: i for i, m in enumerate(codomain)}
    rows = _image_rows(d, domain, cindex)
    aug = len(domain)
    target = cindex[origin]
    ech = Echelon(len(domain) + 1)
    for i in sorted(set(rows) | {target}):
        row = dict(rows.get(i, {}))
        if i == target:
            row[aug] = Fraction(1)
        ech.insert(row)
    if aug in ech.pivots:
        return SliceResult(slice=None, search_degree=degree)
    terms = {}
    for p, row in zip(ech.pivots, ech.rows):
        c = row.get(aug)
        if c:
            terms[domain[p]] = c
    return SliceResult(
        slice=AlgebraElement(monoid, terms, _trusted=True), search_degree=degree
    )


@dataclass(frozen=True)
class SliceTheoremReport:
    """Whether kernel and slice regenerate the whole truncated algebra."""

    passed: bool
    missing: tuple[Vec, ...]
    degree: int
    internal_degree: int
    generated_dim: int


def slice_theorem_check(
    d: Derivation, s: AlgebraElement, degree: int, cap: int = 64
) -> SliceTheoremReport:
    """Check that the subalgebra generated by Ker(d) and s covers the truncation.

    The kernel is computed at an inflated internal degree: writing a monomial
    as a polynomial in s with kernel coefficients takes as many s-factors and
    derivation applications as the monomial's vanishing chain is long, so the
    inflation is (chain length - 1) * (degree of s + largest upward shift).
    """
    from .invariants import generate_subalgebra

    if d.apply(s) != AlgebraElement.one(d.monoid):
        raise PreconditionError("the supplied element is not a slice of the derivation")
    chain = 1
    for m in d.monoid.truncation_set(degree):
        f = AlgebraElement.monomial(d.monoid, m)
        steps = 0
        while not f.is_zero():
            steps += 1
            if steps > cap:
                raise NonNilpotentEvidenceError(
                    f"chain of {m} did not vanish within {cap} applications"
                )
            f = d.apply(f)
        chain = max(chain, steps)
    internal = degree + (chain - 1) * ((s.degree() or 0) + _degree_inflation(d))
    internal = max(internal, s.degree() or 0)  # the seed must fit the ambient
    ker = kernel_basis(d, internal)
    ambient = ker.ambient
    index = {m: i for i, m in enumerate(ambient)}
    if any(m not in index for m in s.terms):
        raise PreconditionError("slice support exceeds the checked truncation degree")
    svec = {index[m]: c for m, c in s.terms.items()}
    seed = TruncatedSubspace.from_vectors(ambient, list(ker.rows) + [svec])
    generated = generate_subalgebra(d.monoid, [seed], internal)
    missing = tuple(
        m
        for m in d.monoid.truncation_set(degree)
        if not generated.contains_vector({index[m]: Fraction(1)})
    )
    return SliceTheoremReport(
        passed=not missing,
        missing=missing,
        degree=degree,
        internal_degree=internal,
        generated_dim=generated.dim,
    )
