"""Command-line front end: scenario ingestion, analysis, probes, verification.

Input is a JSON scenario file; output is a deterministic report, as aligned
text (default) or canonical JSON (`--format json`).  Identical inputs produce
byte-identical reports: nothing time- or environment-dependent is written to
stdout (timings go to stderr), integers beyond 2^53 - 1 and all rationals are
serialized as decimal strings, and keys are emitted in sorted order.

Exit codes: 0 success, 1 verification-assertion failure, 2 input error,
3 degenerate geometry, 4 nilpotency unverifiable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .corpus import (
    Bounds,
    case_by_name,
    derivation_from_parts,
    punctured_octant,
    scenario_dict,
    standard_corpus,
    verification_checks,
)
from .cone import DegenerateGeometryError, InvalidFaceError
from .derivation import (
    AlgebraElement,
    Derivation,
    NonNilpotentEvidenceError,
    WellDefinednessError,
    find_slice,
    slice_theorem_check,
)
from .exactmath import DegenerateInputError, DimensionError
from .invariants import (
    EmptyFamilyError,
    all_roots_family,
    hd_probe,
    hd_star_probe,
    ml_probe,
    slice_admitting_family,
    user_family,
)
from .monoid import AffineMonoid, NotSaturated, PreconditionError
from .roots import HoldsUpToBound, enumerate_roots, is_well_defined, lemma_one_check

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_INPUT = 2
EXIT_GEOMETRY = 3
EXIT_NILPOTENCY = 4

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """The scenario file violates the input schema."""


# ---------------------------------------------------------------------------
# scenario loading


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioError(message)


def _int_list(value, rank: int, what: str) -> tuple[int, ...]:
    _require(
        isinstance(value, list)
        and len(value) == rank
        and all(isinstance(c, int) and not isinstance(c, bool) for c in value),
        f"{what} must be a list of {rank} integers, got {value!r}",
    )
    return tuple(value)


def _coefficient(value, what: str) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ScenarioError(f"{what}: cannot parse rational {value!r}: {exc}") from None
    raise ScenarioError(f"{what} must be an integer or a 'p/q' string, got {value!r}")


class Scenario:
    """A validated scenario: monoid, bounds, optional derivations and elements."""

    def __init__(self, data: dict, overrides: dict):
        _require(isinstance(data, dict), "scenario must be a JSON object")
        _require(
            data.get("schemaVersion") == SCHEMA_VERSION,
            f"schemaVersion must be {SCHEMA_VERSION}",
        )
        rank = data.get("latticeRank")
        _require(
            isinstance(rank, int) and not isinstance(rank, bool) and rank >= 1,
            "latticeRank must be a positive integer",
        )
        gens = data.get("monoidGenerators")
        _require(
            isinstance(gens, list) and gens, "monoidGenerators must be a nonempty list"
        )
        generators = tuple(_int_list(g, rank, "monoid generator") for g in gens)

        grading = data.get("gradingVector")
        if grading is not None:
            grading = _int_list(grading, rank, "gradingVector")

        raw_bounds = data.get("bounds", {})
        _require(isinstance(raw_bounds, dict), "bounds must be an object")
        bounds_kwargs = {}
        for json_key, attr in (
            ("coordBound", "coord_bound"),
            ("degreeBound", "degree_bound"),
            ("sliceDegree", "slice_degree"),
            ("truncationDegree", "truncation_degree"),
        ):
            value = overrides.get(attr)
            if value is None:
                value = raw_bounds.get(json_key)
            if value is not None:
                _require(
                    isinstance(value, int) and not isinstance(value, bool) and value >= 0,
                    f"bound {json_key} must be a nonnegative integer",
                )
                bounds_kwargs[attr] = value
        self.bounds = Bounds(**bounds_kwargs)
        _require(self.bounds.coord_bound >= 1, "coordBound must be at least 1")

        self.name = data.get("name", "scenario")
        self.data = data
        self.rank = rank
        self.monoid = AffineMonoid(generators, grading=grading)

        self.derivations: list[Derivation] = []
        for i, dspec in enumerate(data.get("derivations", [])):
            _require(
                isinstance(dspec, dict) and isinstance(dspec.get("components"), list),
                f"derivations[{i}] must be an object with a components list",
            )
            parts = []
            for j, comp in enumerate(dspec["components"]):
                _require(
                    isinstance(comp, dict),
                    f"derivations[{i}].components[{j}] must be an object",
                )
                coeff = _coefficient(
                    comp.get("coefficient", "1"), f"derivations[{i}].components[{j}]"
                )
                root = _int_list(
                    comp.get("root"), rank, f"derivations[{i}].components[{j}].root"
                )
                parts.append((str(coeff), root))
            try:
                self.derivations.append(
                    derivation_from_parts(self.monoid, parts, self.bounds.degree_bound)
                )
            except (PreconditionError, WellDefinednessError) as exc:
                raise ScenarioError(f"derivations[{i}]: {exc}") from None

        self.elements: list[AlgebraElement] = []
        for i, espec in enumerate(data.get("elements", [])):
            _require(
                isinstance(espec, dict) and isinstance(espec.get("terms"), list),
                f"elements[{i}] must be an object with a terms list",
            )
            terms = {}
            for j, term in enumerate(espec["terms"]):
                _require(isinstance(term, dict), f"elements[{i}].terms[{j}] must be an object")
                coeff = _coefficient(term.get("coefficient", "1"), f"elements[{i}].terms[{j}]")
                expo = _int_list(term.get("exponent"), rank, f"elements[{i}].terms[{j}].exponent")
                terms[expo] = terms.get(expo, Fraction(0)) + coeff
            try:
                self.elements.append(AlgebraElement(self.monoid, terms))
            except WellDefinednessError as exc:
                raise ScenarioError(f"elements[{i}]: {exc}") from None

        self.exp_parameter = _coefficient(data.get("expParameter", "1"), "expParameter")

    @property
    def input_hash(self) -> str:
        canonical = json.dumps(self.data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def load_scenario(path: Optional[str], overrides: dict) -> Scenario:
    if path is None:
        data = scenario_dict(punctured_octant())
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario file is not valid JSON: {exc}") from None
    return Scenario(data, overrides)


# ---------------------------------------------------------------------------
# serialization


MAX_JSON_INT = 2**53 - 1


def jsonable(value):
    """Convert report values to JSON-safe, lossless, deterministic form."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value if abs(value) <= MAX_JSON_INT else str(value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            if not isinstance(k, str):
                raise TypeError(f"report keys must be strings, got {k!r}")
            out[k] = jsonable(v)
        return out
    raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def element_terms(element: AlgebraElement) -> list[dict]:
    return [
        {"coefficient": c, "exponent": list(e)} for e, c in element.sorted_terms()
    ]


def subspace_summary(subspace, full_basis: bool = True) -> dict:
    out = {
        "ambientSize": len(subspace.ambient),
        "dimension": subspace.dim,
    }
    if full_basis:
        out["basis"] = [
            [{"coefficient": c, "exponent": list(e)} for e, c in sorted(row.items())]
            for row in subspace.basis_elements()
        ]
    return out


def _render_text(value, indent: int = 0, key: Optional[str] = None) -> list[str]:
    pad = "  " * indent
    label = f"{key}: " if key is not None else ""
    if isinstance(value, dict):
        lines = [f"{pad}{key}:"] if key is not None else []
        for k in sorted(value):
            lines.extend(_render_text(value[k], indent + (1 if key is not None else 0), k))
        return lines
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            joined = ", ".join(str(v) for v in value)
            return [f"{pad}{label}[{joined}]"]
        lines = [f"{pad}{key}:"] if key is not None else []
        for i, v in enumerate(value):
            lines.extend(_render_text(v, indent + (1 if key is not None else 0), f"[{i}]"))
        return lines
    return [f"{pad}{label}{value}"]


def emit_report(report: dict, fmt: str) -> None:
    payload = jsonable(report)
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(_render_text(payload)) + "\n")


def base_report(command: str, scenario: Optional[Scenario]) -> dict:
    report = {
        "schemaVersion": SCHEMA_VERSION,
        "tool": "toriclnd",
        "toolVersion": __version__,
        "command": command,
    }
    if scenario is not None:
        report["scenario"] = scenario.name
        report["inputHash"] = scenario.input_hash
        report["bounds"] = {
            "coordBound": scenario.bounds.coord_bound,
            "degreeBound": scenario.bounds.degree_bound,
            "sliceDegree": scenario.bounds.slice_degree,
            "truncationDegree": scenario.bounds.truncation_degree,
        }
    return report


# ---------------------------------------------------------------------------
# command bodies


def cmd_analyze(scenario: Scenario) -> tuple[dict, int]:
    monoid = scenario.monoid
    bounds = scenario.bounds
    holes = monoid.holes_up_to(bounds.degree_bound)
    saturation = monoid.is_saturated(
        max(bounds.degree_bound, max(monoid.degree(g) for g in monoid.generators))
    )
    rays = []
    for i, ray_face in enumerate(monoid.cone_sigma.rays()):
        lemma = lemma_one_check(monoid, i, bounds.coord_bound, bounds.degree_bound)
        entry = {
            "ray": list(ray_face.generators[0]),
            "verdict": lemma.verdict,
            "coordBound": lemma.coord_bound,
            "degreeBound": lemma.degree_bound,
        }
        if lemma.root_witness is not None:
            entry["rootWitness"] = list(lemma.root_witness.vector)
        if lemma.saturation_witness is not None:
            entry["saturationWitness"] = list(lemma.saturation_witness)
        rays.append(entry)
    sat_entry = {"label": saturation.label}
    if isinstance(saturation, NotSaturated):
        sat_entry["witness"] = list(saturation.witness)
    else:
        sat_entry["bound"] = saturation.bound
    results = {
        "monoid": {
            "rank": monoid.rank,
            "generators": [list(g) for g in monoid.generators],
            "grading": list(monoid.grading),
            "weightConeRays": [list(g) for g in monoid.cone_dual.generators],
            "weightConeFacetNormals": [list(f) for f in monoid.cone_dual.facet_normals],
            "sigmaRays": [list(g) for g in monoid.cone_sigma.generators],
        },
        "holes": {
            "bound": holes.bound,
            "completeUpToBound": holes.complete,
            "count": len(holes.holes),
            "points": [list(h) for h in holes.holes],
        },
        "saturation": sat_entry,
        "rays": rays,
    }
    return results, EXIT_OK


def cmd_roots(scenario: Scenario) -> tuple[dict, int]:
    monoid = scenario.monoid
    bounds = scenario.bounds
    entries = []
    counts = {"total": 0, "wellDefined": 0, "withSlice": 0}
    for root in enumerate_roots(monoid.cone_sigma, bounds.coord_bound):
        verdict = is_well_defined(monoid, root, bounds.degree_bound)
        holds = isinstance(verdict, HoldsUpToBound)
        entry = {
            "vector": list(root.vector),
            "distinguishedRay": list(root.ray),
            "rayIndex": root.ray_index,
            "degree": monoid.degree(root.vector),
            "wellDefined": {"label": verdict.label},
        }
        if holds:
            entry["wellDefined"]["bound"] = verdict.bound
            entry["hasSlice"] = monoid.contains(tuple(-c for c in root.vector))
        else:
            entry["wellDefined"]["witness"] = list(verdict.witness)
            entry["hasSlice"] = False
        counts["total"] += 1
        counts["wellDefined"] += holds
        counts["withSlice"] += entry["hasSlice"]
        entries.append(entry)
    return {"counts": counts, "roots": entries}, EXIT_OK


def _require_derivations(scenario: Scenario) -> None:
    if not scenario.derivations:
        raise ScenarioError("this command needs a 'derivations' block in the scenario")


def cmd_apply(scenario: Scenario) -> tuple[dict, int]:
    _require_derivations(scenario)
    if not scenario.elements:
        raise ScenarioError("this command needs an 'elements' block in the scenario")
    results = []
    for i, d in enumerate(scenario.derivations):
        for j, f in enumerate(scenario.elements):
            results.append(
                {
                    "derivation": i,
                    "element": j,
                    "input": element_terms(f),
                    "image": element_terms(d.apply(f)),
                }
            )
    return {"applications": results}, EXIT_OK


def cmd_exp(scenario: Scenario) -> tuple[dict, int]:
    _require_derivations(scenario)
    if not scenario.elements:
        raise ScenarioError("this command needs an 'elements' block in the scenario")
    t = scenario.exp_parameter
    results = []
    for i, d in enumerate(scenario.derivations):
        for j, f in enumerate(scenario.elements):
            results.append(
                {
                    "derivation": i,
                    "element": j,
                    "t": t,
                    "input": element_terms(f),
                    "image": element_terms(d.exp(t, f)),
                }
            )
    return {"exponentials": results}, EXIT_OK


def cmd_slice(scenario: Scenario) -> tuple[dict, int]:
    _require_derivations(scenario)
    bounds = scenario.bounds
    results = []
    for i, d in enumerate(scenario.derivations):
        found = find_slice(d, bounds.slice_degree)
        entry = {"derivation": i, "searchDegree": found.search_degree}
        if found.slice is None:
            entry["found"] = False
        else:
            entry["found"] = True
            entry["slice"] = element_terms(found.slice)
            check = slice_theorem_check(d, found.slice, bounds.slice_degree)
            entry["sliceTheorem"] = {
                "passed": check.passed,
                "checkedDegree": check.degree,
                "internalDegree": check.internal_degree,
                "generatedDimension": check.generated_dim,
                "missing": [list(m) for m in check.missing],
            }
        results.append(entry)
    return {"slices": results}, EXIT_OK


def cmd_invariants(scenario: Scenario, probe: str) -> tuple[dict, int]:
    monoid = scenario.monoid
    bounds = scenario.bounds
    d = bounds.truncation_degree
    note = ""
    if scenario.derivations:
        slice_degree = bounds.slice_degree if probe in ("ml-star", "hd-star") else None
        family = user_family(monoid, scenario.derivations, slice_degree=slice_degree)
    elif probe in ("ml", "hd"):
        family = all_roots_family(monoid, bounds.coord_bound, bounds.degree_bound)
    else:
        family = slice_admitting_family(
            monoid, bounds.coord_bound, bounds.degree_bound, bounds.slice_degree
        )

    if not family.members:
        ambient = monoid.truncation_set(d)
        from .exactmath import TruncatedSubspace

        if probe in ("ml", "ml-star"):
            # an empty intersection family bounds nothing: the probe is the
            # whole truncated algebra (for ml-star this is the definitional
            # fallback when no derivation has a slice)
            subspace = TruncatedSubspace.span_of_monomials(ambient, ambient)
            direction = "upper-bound-of-invariant"
            note = "empty family: probe degenerates to the full truncation"
        else:
            subspace = TruncatedSubspace.span_of_monomials(ambient, [(0,) * monoid.rank])
            direction = "lower-bound-of-invariant"
            note = "empty family: nothing generates beyond the constants"
        results = {
            "probe": probe,
            "direction": direction,
            "familyKind": family.kind,
            "memberCount": 0,
            "degree": d,
            "note": note,
            "subspace": subspace_summary(subspace),
        }
        return {"invariants": results}, EXIT_OK

    if probe == "ml" or probe == "ml-star":
        result = ml_probe(family, d)
    elif probe == "hd":
        result = hd_probe(family, d)
    else:
        result = hd_star_probe(family, d)
    results = {
        "probe": probe,
        "direction": result.direction,
        "familyKind": family.kind,
        "memberCount": result.member_count,
        "degree": d,
        "fullTruncationSize": len(monoid.truncation_set(d)),
        "subspace": subspace_summary(result.subspace),
    }
    return {"invariants": results}, EXIT_OK


def cmd_verify_paper(scenario: Scenario) -> tuple[dict, int]:
    checks = verification_checks(scenario.monoid, scenario.bounds)
    entries = [
        {"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks
    ]
    overall = all(c.passed for c in checks)
    results = {
        "checks": entries,
        "overall": "PASS" if overall else "FAIL",
    }
    return {"verification": results}, EXIT_OK if overall else EXIT_ASSERTION


def cmd_corpus_export(out_dir: str, name: Optional[str], fmt: str) -> tuple[dict, int]:
    import os

    cases = [case_by_name(name)] if name else standard_corpus()
    written = []
    os.makedirs(out_dir, exist_ok=True)
    for case in cases:
        data = scenario_dict(case)
        payload = json.dumps(jsonable(data), sort_keys=True, indent=2) + "\n"
        path = os.path.join(out_dir, f"{case.name}.json")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(payload)
        written.append(
            {
                "name": case.name,
                "path": path,
                "sha256": hashlib.sha256(payload.encode()).hexdigest(),
            }
        )
    return {"export": {"written": written}}, EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toriclnd",
        description=(
            "Exact-arithmetic analysis of lattice monoids: holes and saturation, "
            "Demazure roots, locally nilpotent derivations with slices, and "
            "degree-truncated invariant probes.  Text output is plain (NO_COLOR "
            "is respected trivially); JSON output is canonical and byte-stable."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--scenario", help="path to a scenario JSON file (default: built-in example)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--coord-bound", type=int, dest="coord_bound")
        p.add_argument("--degree-bound", type=int, dest="degree_bound")
        p.add_argument("--slice-degree", type=int, dest="slice_degree")
        p.add_argument("--truncation-degree", type=int, dest="truncation_degree")

    for name, doc in (
        ("analyze", "cone data, holes, saturation and per-ray smoothness checks"),
        ("roots", "enumerate Demazure roots with well-definedness verdicts"),
        ("apply", "apply the scenario derivations to the scenario elements"),
        ("exp", "exponentiate the scenario derivations on the scenario elements"),
        ("slice", "search for slices and check the slice-theorem reconstruction"),
    ):
        add_common(sub.add_parser(name, help=doc))

    p_inv = sub.add_parser("invariants", help="run a truncated invariant probe")
    p_inv.add_argument("probe", choices=("ml", "ml-star", "hd", "hd-star"))
    add_common(p_inv)

    p_verify = sub.add_parser(
        "verify-paper",
        help="run the built-in end-to-end verification scenario and assert its facts",
    )
    add_common(p_verify)

    p_corpus = sub.add_parser("corpus", help="corpus utilities")
    corpus_sub = p_corpus.add_subparsers(dest="corpus_command", required=True)
    p_export = corpus_sub.add_parser("export", help="export corpus cases as scenario JSON")
    p_export.add_argument("--out-dir", default=".")
    p_export.add_argument("--name", help="export a single case by name")
    p_export.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "format", "text")
    started = time.monotonic()
    try:
        if args.command == "corpus":
            report = base_report("corpus export", None)
            results, code = cmd_corpus_export(args.out_dir, args.name, fmt)
        else:
            overrides = {
                key: getattr(args, key, None)
                for key in ("coord_bound", "degree_bound", "slice_degree", "truncation_degree")
            }
            scenario = load_scenario(args.scenario, overrides)
            report = base_report(args.command, scenario)
            if args.command == "analyze":
                results, code = cmd_analyze(scenario)
            elif args.command == "roots":
                results, code = cmd_roots(scenario)
            elif args.command == "apply":
                results, code = cmd_apply(scenario)
            elif args.command == "exp":
                results, code = cmd_exp(scenario)
            elif args.command == "slice":
                results, code = cmd_slice(scenario)
            elif args.command == "invariants":
                results, code = cmd_invariants(scenario, args.probe)
            elif args.command == "verify-paper":
                results, code = cmd_verify_paper(scenario)
            else:  # pragma: no cover
                raise ScenarioError(f"unknown command {args.command!r}")
    except ScenarioError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DimensionError, PreconditionError, InvalidFaceError, WellDefinednessError, EmptyFamilyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DegenerateGeometryError, DegenerateInputError) as exc:
        print(f"degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except NonNilpotentEvidenceError as exc:
        print(f"nilpotency unverifiable: {exc}", file=sys.stderr)
        return EXIT_NILPOTENCY

    report["results"] = results
    emit_report(report, fmt)
    elapsed = time.monotonic() - started
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
