"""Built-in regression corpus: monoids with frozen expected facts.

Each case records its expected values together with a provenance note naming
the oracle that produced them (hand computation, brute-force enumeration,
closed-form kernel description, ...), so a failing regression immediately
names what to re-derive.

The flagship case is `punctured_octant`: the monoid obtained from Z^3_{>=0}
by removing the two vertical rays above (1,0,0) and (0,1,0).  Its algebra is
generated by x^2, xy, y^2, x^3, x^2*y, x*y^2, y^3 and z, it is not saturated,
and it separates the slice-restricted generation probe from the plain one
while the intersection probes agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .derivation import Derivation, grade_decompose, find_slice
from .exactmath import Vec
from .invariants import (
    DerivationFamily,
    all_roots_family,
    coefficient_vanishes,
    hd_probe,
    hd_star_probe,
    ml_equals_ml_star_check,
    ml_probe,
    user_family,
)
from .monoid import AffineMonoid, NotSaturated, SaturatedUpToBound
from .roots import (
    enumerate_roots,
    is_well_defined,
    HoldsUpToBound,
    lemma_one_check,
    root_from_vector,
    roots_with_slice,
    well_defined_roots,
)


@dataclass(frozen=True)
class Bounds:
    """Search bounds shared by the whole pipeline."""

    coord_bound: int = 3
    degree_bound: int = 10
    slice_degree: int = 4
    truncation_degree: int = 8


DEFAULT_BOUNDS = Bounds()


@dataclass(frozen=True)
class Fact:
    name: str
    kind: str
    params: tuple  # sorted (key, value) pairs
    expected: object
    provenance: str


def _fact(name, kind, params, expected, provenance) -> Fact:
    return Fact(name, kind, tuple(sorted(params.items())), expected, provenance)


@dataclass(frozen=True)
class ScenarioCase:
    name: str
    rank: int
    generators: tuple[Vec, ...]
    grading: Optional[Vec]
    bounds: Bounds
    facts: tuple[Fact, ...]
    derivations: tuple[tuple[tuple[str, Vec], ...], ...] = ()
    elements: tuple[tuple[tuple[str, Vec], ...], ...] = ()

    def build(self) -> AffineMonoid:
        return AffineMonoid(self.generators, grading=self.grading)


# ---------------------------------------------------------------------------
# the corpus


def punctured_octant() -> ScenarioCase:
    """The non-normal flagship example: the octant monoid with two rays removed."""
    e1, e2, e3 = (0, 0, -1), (-1, 1, 0), (1, -1, 0)
    device = (
        ((("1", e1),)),
        ((("1", e1), ("1", e2))),
        ((("1", e1), ("1", e3))),
    )
    facts = (
        _fact("generator-count", "generator-count", {}, 8,
              "the eight displayed algebra generators"),
        _fact("holes-up-to-2", "holes", {"bound": 2},
              ((0, 1, 0), (1, 0, 0), (0, 1, 1), (1, 0, 1)),
              "points of the two removed rays with degree at most 2"),
        _fact("holes-up-to-3", "holes", {"bound": 3},
              ((0, 1, 0), (1, 0, 0), (0, 1, 1), (1, 0, 1), (0, 1, 2), (1, 0, 2)),
              "points of the two removed rays with degree at most 3"),
        _fact("not-saturated", "saturation", {"bound": 10},
              {"label": "NotSaturated", "witness": (0, 1, 0)},
              "smallest hole in graded-lex order"),
        _fact("member-1-1-5", "membership", {"point": (1, 1, 5)}, True,
              "(1,1,0) + 5*(0,0,1)"),
        _fact("nonmember-1-0-3", "membership", {"point": (1, 0, 3)}, False,
              "lies on a removed ray"),
        _fact("member-origin", "membership", {"point": (0, 0, 0)}, True,
              "empty combination"),
        _fact("root-down-z-held", "well-defined-root", {"root": e1},
              {"holds": True}, "shifting holes down in z lands on holes again"),
        _fact("root-down-x-violated", "well-defined-root", {"root": (-1, 0, 0)},
              {"holds": False, "witness": (0, 1, 0)},
              "hole (0,1,0) minus the root is (1,1,0), an element of the monoid"),
        _fact("degree-minus-one-census", "degree-minus-one-roots", {},
              {"census": ((-1, 0, 0), (0, -1, 0), (0, 0, -1)),
               "well_defined": ((0, 0, -1),)},
              "brute-force enumeration: degree -1 forces all but one coordinate to vanish"),
        _fact("slice-roots", "slice-roots", {}, ((0, 0, -1),),
              "a root has a monomial slice iff its negative lies in the monoid"),
        _fact("truncation-at-2", "truncation-count", {"bound": 2}, 6,
              "six monomials of degree at most 2 once the four hole points are removed"),
        _fact("lemma-ray-0", "lemma-one", {"ray_index": 0}, "agree-yes",
              "witness root (0,0,-1); saturation point (0,2,0) on the orthogonal face"),
        _fact("lemma-ray-1", "lemma-one", {"ray_index": 1}, "agree-yes",
              "witness root with distinguished ray (0,1,0); saturation point by hand"),
        _fact("lemma-ray-2", "lemma-one", {"ray_index": 2}, "agree-yes",
              "witness root (-1,1,0); saturation point (0,2,0): its moved cone avoids both rays"),
        _fact("ml-all-roots-constants", "ml-constants", {"family": "all-roots"}, True,
              "kernels of the three coordinate-plane rays meet in the constants"),
        _fact("ml-device-constants", "ml-constants", {"family": device}, True,
              "pairwise differences recover all three homogeneous kernels"),
        _fact("hd-full", "hd-full", {"family": "all-roots"}, True,
              "plane monomials times powers of z reach every truncated monomial"),
        _fact("hd-star-misses-z", "hd-star-missing-monomial",
              {"family": device, "monomial": (0, 0, 1)}, True,
              "every slice-admitting kernel has zero coefficient at z, and products keep it"),
        _fact("ml-star-equal", "ml-star-check", {}, "equal",
              "both intersection probes collapse to the constants"),
    )
    return ScenarioCase(
        name="punctured-octant",
        rank=3,
        generators=(
            (2, 0, 0), (1, 1, 0), (0, 2, 0), (3, 0, 0),
            (2, 1, 0), (1, 2, 0), (0, 3, 0), (0, 0, 1),
        ),
        grading=None,
        bounds=DEFAULT_BOUNDS,
        facts=facts,
        derivations=device,
        elements=(
            ((("1", (2, 0, 0)),)),      # x^2
            ((("1", (0, 0, 1)),)),      # z
        ),
    )


def _plane() -> ScenarioCase:
    facts = (
        _fact("saturated", "saturation", {"bound": 6},
              {"label": "SaturatedUpToBound"}, "standard monoid has no holes"),
        _fact("no-holes", "holes", {"bound": 5}, (), "brute force over the degree box"),
        _fact("slice-roots", "slice-roots", {}, ((0, -1), (-1, 0)),
              "negatives of the two unit generators, in (ray index, lex) order"),
        _fact("ml-constants-d6", "ml-constants", {"family": "all-roots", "degree": 6}, True,
              "the two partial-derivative kernels meet in the constants"),
        _fact("lemma-ray-0", "lemma-one", {"ray_index": 0}, "agree-yes",
              "saturated monoid: the origin is a saturation point on every face"),
        _fact("lemma-ray-1", "lemma-one", {"ray_index": 1}, "agree-yes",
              "saturated monoid: the origin is a saturation point on every face"),
        _fact("ml-star-equal", "ml-star-check", {}, "equal",
              "partial derivatives have slices; both probes are the constants"),
    )
    return ScenarioCase(
        name="plane", rank=2, generators=((1, 0), (0, 1)), grading=None,
        bounds=DEFAULT_BOUNDS, facts=facts,
    )


def _space() -> ScenarioCase:
    facts = (
        _fact("saturated", "saturation", {"bound": 6},
              {"label": "SaturatedUpToBound"}, "standard monoid has no holes"),
        _fact("root-count-bound-1", "root-count", {"coord_bound": 1}, 12,
              "brute force over the 3^3 box per ray: four roots each"),
        _fact("lemma-ray-0", "lemma-one", {"ray_index": 0}, "agree-yes", "saturated"),
        _fact("lemma-ray-1", "lemma-one", {"ray_index": 1}, "agree-yes", "saturated"),
        _fact("lemma-ray-2", "lemma-one", {"ray_index": 2}, "agree-yes", "saturated"),
        _fact("ml-star-equal", "ml-star-check", {}, "equal",
              "three partial-derivative kernels meet in the constants"),
    )
    return ScenarioCase(
        name="space", rank=3, generators=((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        grading=None, bounds=DEFAULT_BOUNDS, facts=facts,
    )


def _cusp() -> ScenarioCase:
    facts = (
        _fact("hole-is-one", "holes", {"bound": 5}, ((1,),),
              "the single gap of the numerical semigroup generated by 2 and 3"),
        _fact("not-saturated", "saturation", {"bound": 5},
              {"label": "NotSaturated", "witness": (1,)}, "the gap 1"),
        _fact("no-wd-roots", "wd-root-count", {}, 0,
              "the only root is -1 and the gap 1 shifts back into the monoid"),
        _fact("lemma-ray-0", "lemma-one", {"ray_index": 0}, "agree-no",
              "no well-defined root, and the zero face's moved cone contains the gap"),
        _fact("ml-star-hypothesis", "ml-star-check", {}, "hypothesis-not-met",
              "no derivation admits a slice"),
    )
    return ScenarioCase(
        name="cusp", rank=1, generators=((2,), (3,)), grading=None,
        bounds=DEFAULT_BOUNDS, facts=facts,
    )


def _square_cone() -> ScenarioCase:
    facts = (
        _fact("saturated", "saturation", {"bound": 8},
              {"label": "SaturatedUpToBound"},
              "greedy decomposition against the four lattice-square generators"),
        _fact("face-count", "face-count", {}, 10,
              "brute force: origin, four rays, four two-dimensional faces, full cone"),
        _fact("biduality", "biduality", {}, True,
              "recomputing the dual from facet normals reproduces the swap dual"),
        _fact("lemma-ray-0", "lemma-one", {"ray_index": 0}, "agree-yes", "saturated"),
        _fact("lemma-ray-1", "lemma-one", {"ray_index": 1}, "agree-yes", "saturated"),
        _fact("lemma-ray-2", "lemma-one", {"ray_index": 2}, "agree-yes", "saturated"),
        _fact("lemma-ray-3", "lemma-one", {"ray_index": 3}, "agree-yes", "saturated"),
    )
    return ScenarioCase(
        name="square-cone", rank=3,
        generators=((0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)),
        grading=None, bounds=DEFAULT_BOUNDS, facts=facts,
    )


def standard_corpus() -> list[ScenarioCase]:
    return [punctured_octant(), _plane(), _space(), _cusp(), _square_cone()]


def case_by_name(name: str) -> ScenarioCase:
    for case in standard_corpus():
        if case.name == name:
            return case
    raise KeyError(f"no corpus case named {name!r}")


# ---------------------------------------------------------------------------
# evaluation of expected facts


@dataclass(frozen=True)
class FactOutcome:
    fact: Fact
    passed: bool
    got: object


def _family_from_spec(monoid: AffineMonoid, spec, bounds: Bounds) -> DerivationFamily:
    if spec == "all-roots":
        return all_roots_family(monoid, bounds.coord_bound, bounds.degree_bound)
    derivations = [
        derivation_from_parts(monoid, parts, bounds.degree_bound) for parts in spec
    ]
    return user_family(monoid, derivations, slice_degree=bounds.slice_degree)


def derivation_from_parts(
    monoid: AffineMonoid, parts: Sequence[tuple[str, Vec]], degree_bound: int
) -> Derivation:
    """Build a derivation from (coefficient string, root vector) pairs."""
    resolved = [
        (Fraction(coeff), root_from_vector(monoid, tuple(vec))) for coeff, vec in parts
    ]
    return Derivation.from_roots(monoid, resolved, degree_bound)


def evaluate_fact(monoid: AffineMonoid, fact: Fact, bounds: Bounds) -> FactOutcome:
    params = dict(fact.params)
    kind = fact.kind
    d = params.get("degree", bounds.truncation_degree)

    if kind == "generator-count":
        got = len(monoid.generators)
    elif kind == "holes":
        got = monoid.holes_up_to(params["bound"]).holes
    elif kind == "saturation":
        verdict = monoid.is_saturated(params["bound"])
        got = {"label": verdict.label}
        if isinstance(verdict, NotSaturated):
            got["witness"] = verdict.witness
    elif kind == "membership":
        got = monoid.contains(params["point"])
    elif kind == "truncation-count":
        got = len(monoid.truncation_set(params["bound"]))
    elif kind == "well-defined-root":
        root = root_from_vector(monoid, params["root"])
        verdict = is_well_defined(monoid, root, bounds.degree_bound)
        if isinstance(verdict, HoldsUpToBound):
            got = {"holds": True}
        else:
            got = {"holds": False, "witness": verdict.witness}
    elif kind == "degree-minus-one-roots":
        roots = enumerate_roots(monoid.cone_sigma, bounds.coord_bound)
        census = sorted(r.vector for r in roots if monoid.degree(r.vector) == -1)
        wd = sorted(
            r.vector
            for r in roots
            if monoid.degree(r.vector) == -1
            and isinstance(is_well_defined(monoid, r, bounds.degree_bound), HoldsUpToBound)
        )
        got = {"census": tuple(census), "well_defined": tuple(wd)}
    elif kind == "slice-roots":
        got = tuple(
            r.vector for r in roots_with_slice(monoid, bounds.coord_bound, bounds.degree_bound)
        )
    elif kind == "wd-root-count":
        got = len(well_defined_roots(monoid, bounds.coord_bound, bounds.degree_bound))
    elif kind == "root-count":
        got = len(enumerate_roots(monoid.cone_sigma, params["coord_bound"]))
    elif kind == "lemma-one":
        got = lemma_one_check(
            monoid, params["ray_index"], bounds.coord_bound, bounds.degree_bound
        ).verdict
    elif kind == "ml-constants":
        fam = _family_from_spec(monoid, params["family"], bounds)
        got = ml_probe(fam, d).subspace.dim == 1
    elif kind == "hd-full":
        fam = _family_from_spec(monoid, params["family"], bounds)
        probe = hd_probe(fam, d)
        got = probe.subspace.dim == len(monoid.truncation_set(d))
    elif kind == "hd-star-missing-monomial":
        fam = _family_from_spec(monoid, params["family"], bounds)
        probe = hd_star_probe(fam, d)
        full = len(monoid.truncation_set(d))
        got = probe.subspace.dim < full and coefficient_vanishes(
            probe.subspace, params["monomial"]
        )
    elif kind == "ml-star-check":
        got = ml_equals_ml_star_check(
            monoid,
            bounds.coord_bound,
            bounds.degree_bound,
            bounds.slice_degree,
            d,
        ).status
    elif kind == "face-count":
        got = len(monoid.cone_dual.faces())
    elif kind == "biduality":
        from .cone import Cone

        recomputed = Cone.from_generators(monoid.cone_dual.facet_normals, monoid.rank)
        got = recomputed == monoid.cone_dual.dual()
    else:
        raise ValueError(f"unknown fact kind {kind!r}")
    return FactOutcome(fact=fact, passed=(got == fact.expected), got=got)


def evaluate_case(case: ScenarioCase) -> list[FactOutcome]:
    monoid = case.build()
    return [evaluate_fact(monoid, fact, case.bounds) for fact in case.facts]


# ---------------------------------------------------------------------------
# the end-to-end verification checklist used by the `verify-paper` command


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str


def _device_family(monoid: AffineMonoid, bounds: Bounds) -> DerivationFamily:
    """The three-member slice family: the slice root alone and its two sums."""
    case = punctured_octant()
    derivations = [
        derivation_from_parts(monoid, parts, bounds.degree_bound)
        for parts in case.derivations
    ]
    return user_family(monoid, derivations, slice_degree=bounds.slice_degree)


def verification_checks(monoid: AffineMonoid, bounds: Bounds) -> list[CheckOutcome]:
    """Run the flagship end-to-end assertions against a monoid.

    With the built-in punctured-octant monoid every check passes; a corrupted
    scenario fails the corresponding check with a diagnostic.
    """
    out: list[CheckOutcome] = []
    d = bounds.truncation_degree

    def run(name, body):
        try:
            passed, detail = body()
        except (ValueError, KeyError) as exc:
            passed, detail = False, f"error: {exc}"
        out.append(CheckOutcome(name=name, passed=passed, detail=detail))

    def check_ml_all():
        fam = all_roots_family(monoid, bounds.coord_bound, bounds.degree_bound)
        probe = ml_probe(fam, d)
        basis = probe.subspace.basis_elements()
        ok = probe.subspace.dim == 1 and basis[0] == {(0,) * monoid.rank: Fraction(1)}
        return ok, f"intersection of {len(fam)} root kernels has dimension {probe.subspace.dim}"

    def check_ml_device():
        fam = _device_family(monoid, bounds)
        probe = ml_probe(fam, d)
        ok = probe.subspace.dim == 1
        return ok, f"slice-family intersection has dimension {probe.subspace.dim}"

    def check_hd_full():
        fam = all_roots_family(monoid, bounds.coord_bound, bounds.degree_bound)
        probe = hd_probe(fam, d)
        full = len(monoid.truncation_set(d))
        ok = probe.subspace.dim == full
        missing = [
            m
            for m in monoid.truncation_set(d)
            if not probe.subspace.contains_vector({probe.subspace.index_of(m): Fraction(1)})
        ]
        detail = f"generated {probe.subspace.dim} of {full} truncated monomials"
        if missing:
            detail += f"; missing {missing[:8]}"
        return ok, detail

    def check_hd_star():
        fam = _device_family(monoid, bounds)
        probe = hd_star_probe(fam, d)
        full = len(monoid.truncation_set(d))
        z = (0, 0, 1) if monoid.rank == 3 else (0,) * monoid.rank
        vanishes = coefficient_vanishes(probe.subspace, z)
        ok = probe.subspace.dim < full and vanishes
        return ok, (
            f"slice-family generation has dimension {probe.subspace.dim} of {full}; "
            f"coefficient at {z} vanishes: {vanishes}"
        )

    def check_census():
        roots = enumerate_roots(monoid.cone_sigma, bounds.coord_bound)
        minus_one = sorted(r.vector for r in roots if monoid.degree(r.vector) == -1)
        wd = sorted(
            r.vector
            for r in roots
            if monoid.degree(r.vector) == -1
            and isinstance(is_well_defined(monoid, r, bounds.degree_bound), HoldsUpToBound)
        )
        expected = [(-1, 0, 0), (0, -1, 0), (0, 0, -1)]
        ok = minus_one == expected and wd == [(0, 0, -1)]
        return ok, f"degree -1 roots {minus_one}, well defined {wd}"

    def check_lowest_degree():
        fam = _device_family(monoid, bounds)
        lows = []
        for member in fam.members:
            parts = grade_decompose(member, monoid.grading)
            lows.append(parts[0][0] if parts else 0)
        for root in well_defined_roots(monoid, bounds.coord_bound, bounds.degree_bound):
            lows.append(monoid.degree(root.vector))
        ok = all(l >= -1 for l in lows)
        return ok, f"lowest component degrees observed: {sorted(set(lows))}"

    run("intersection-probe-all-roots-is-constants", check_ml_all)
    run("intersection-probe-slice-family-is-constants", check_ml_device)
    run("generation-probe-all-roots-is-full", check_hd_full)
    run("generation-probe-slice-family-misses-z", check_hd_star)
    run("degree-minus-one-root-census", check_census)
    run("lowest-component-degree-at-least-minus-one", check_lowest_degree)
    return out


# ---------------------------------------------------------------------------
# scenario export


def scenario_dict(case: ScenarioCase) -> dict:
    """The CLI scenario-file form of a corpus case (see cli.SCENARIO_SCHEMA)."""
    out = {
        "schemaVersion": 1,
        "name": case.name,
        "latticeRank": case.rank,
        "monoidGenerators": [list(g) for g in case.generators],
        "bounds": {
            "coordBound": case.bounds.coord_bound,
            "degreeBound": case.bounds.degree_bound,
            "sliceDegree": case.bounds.slice_degree,
            "truncationDegree": case.bounds.truncation_degree,
        },
    }
    if case.grading is not None:
        out["gradingVector"] = list(case.grading)
    if case.derivations:
        out["derivations"] = [
            {"components": [{"coefficient": c, "root": list(v)} for c, v in parts]}
            for parts in case.derivations
        ]
    if case.elements:
        out["elements"] = [
            {"terms": [{"coefficient": c, "exponent": list(v)} for c, v in terms]}
            for terms in case.elements
        ]
    return out
