import json
import subprocess
import sys

import pytest

from toriclnd.cli import main
from toriclnd.corpus import punctured_octant, scenario_dict


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out


def run_json(args, capsys):
    code, out = run_cli(list(args) + ["--format", "json"], capsys)
    return code, json.loads(out)


@pytest.fixture()
def scenario_file(tmp_path):
    path = tmp_path / "flagship.json"
    path.write_text(json.dumps(scenario_dict(punctured_octant())))
    return str(path)


def test_analyze_builtin(capsys):
    code, report = run_json(["analyze"], capsys)
    assert code == 0
    results = report["results"]
    assert results["monoid"]["grading"] == [1, 1, 1]
    assert results["holes"]["count"] == 20  # degree bound 10: ten per removed ray
    assert results["saturation"]["label"] == "NotSaturated"
    assert [r["verdict"] for r in results["rays"]] == ["agree-yes"] * 3
    assert report["bounds"]["truncationDegree"] == 8


def test_analyze_scenario_file(scenario_file, capsys):
    code, report = run_json(["analyze", "--scenario", scenario_file], capsys)
    assert code == 0
    assert report["results"]["holes"]["points"][0] == [0, 1, 0]


def test_roots_command(capsys):
    code, report = run_json(["roots", "--coord-bound", "1"], capsys)
    assert code == 0
    results = report["results"]
    assert results["counts"]["total"] == 12
    assert results["counts"]["wellDefined"] == 6
    assert results["counts"]["withSlice"] == 1
    down_x = next(r for r in results["roots"] if r["vector"] == [-1, 0, 0])
    assert down_x["wellDefined"]["label"] == "Violation"
    assert down_x["wellDefined"]["witness"] == [0, 1, 0]
    down_z = next(r for r in results["roots"] if r["vector"] == [0, 0, -1])
    assert down_z["wellDefined"]["label"] == "HoldsUpToBound"
    assert down_z["hasSlice"] is True


def test_apply_command(capsys):
    # builtin scenario ships the three derivations and the elements x^2 and z
    code, report = run_json(["apply"], capsys)
    assert code == 0
    apps = report["results"]["applications"]
    first = next(a for a in apps if a["derivation"] == 0 and a["element"] == 1)
    assert first["image"] == [{"coefficient": "1/1", "exponent": [0, 0, 0]}]


def test_exp_command(capsys):
    code, report = run_json(["exp"], capsys)
    assert code == 0
    exps = report["results"]["exponentials"]
    # derivation 1 is down-z plus the tilt y d/dx; on x^2 with t = 1 the
    # orbit is x^2 + 2xy + y^2
    entry = next(e for e in exps if e["derivation"] == 1 and e["element"] == 0)
    assert entry["image"] == [
        {"coefficient": "1/1", "exponent": [0, 2, 0]},
        {"coefficient": "2/1", "exponent": [1, 1, 0]},
        {"coefficient": "1/1", "exponent": [2, 0, 0]},
    ]


def test_slice_command(capsys):
    code, report = run_json(["slice"], capsys)
    assert code == 0
    slices = report["results"]["slices"]
    assert all(s["found"] for s in slices)
    assert all(s["slice"] == [{"coefficient": "1/1", "exponent": [0, 0, 1]}] for s in slices)
    assert all(s["sliceTheorem"]["passed"] for s in slices)


def test_invariants_ml(capsys):
    scenario = scenario_dict(punctured_octant())
    del scenario["derivations"]
    import json as _json
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as tmp:
        tmp.write(_json.dumps(scenario))
        path = tmp.name
    code, report = run_json(["invariants", "ml", "--scenario", path], capsys)
    assert code == 0
    inv = report["results"]["invariants"]
    assert inv["direction"] == "upper-bound-of-invariant"
    assert inv["familyKind"] == "all-roots"
    assert inv["subspace"]["dimension"] == 1
    assert inv["subspace"]["basis"] == [[{"coefficient": "1/1", "exponent": [0, 0, 0]}]]


def test_invariants_hd_star_with_user_family(capsys):
    code, report = run_json(["invariants", "hd-star"], capsys)
    assert code == 0
    inv = report["results"]["invariants"]
    assert inv["direction"] == "lower-bound-of-invariant"
    assert inv["familyKind"] == "user-supplied"
    assert inv["subspace"]["dimension"] < inv["fullTruncationSize"]
    # the z monomial never shows up in the generated basis
    for row in inv["subspace"]["basis"]:
        assert all(term["exponent"] != [0, 0, 1] for term in row)


def test_invariants_ml_star_empty_family_note(tmp_path, capsys):
    cusp = {
        "schemaVersion": 1,
        "latticeRank": 1,
        "monoidGenerators": [[2], [3]],
    }
    path = tmp_path / "cusp.json"
    path.write_text(json.dumps(cusp))
    code, report = run_json(["invariants", "ml-star", "--scenario", str(path)], capsys)
    assert code == 0
    inv = report["results"]["invariants"]
    assert inv["memberCount"] == 0
    assert "full truncation" in inv["note"]
    assert inv["subspace"]["dimension"] == inv["subspace"]["ambientSize"]


def test_verify_paper_passes(capsys):
    code, report = run_json(["verify-paper"], capsys)
    assert code == 0
    verification = report["results"]["verification"]
    assert verification["overall"] == "PASS"
    assert len(verification["checks"]) == 6
    assert all(c["passed"] for c in verification["checks"])


def test_verify_paper_low_truncation_still_passes(capsys):
    code, report = run_json(["verify-paper", "--truncation-degree", "2"], capsys)
    assert code == 0
    assert report["results"]["verification"]["overall"] == "PASS"


def test_verify_paper_corrupted_scenario_fails(tmp_path, capsys):
    data = scenario_dict(punctured_octant())
    data["monoidGenerators"] = [
        g for g in data["monoidGenerators"] if g != [0, 0, 1]
    ] + [[0, 0, 2]]
    del data["derivations"]
    del data["elements"]
    path = tmp_path / "corrupt.json"
    path.write_text(json.dumps(data))
    code, report = run_json(["verify-paper", "--scenario", str(path)], capsys)
    assert code == 1
    verification = report["results"]["verification"]
    assert verification["overall"] == "FAIL"
    failed = [c["name"] for c in verification["checks"] if not c["passed"]]
    assert "degree-minus-one-root-census" in failed


def test_corpus_export(tmp_path, capsys):
    code, report = run_json(["corpus", "export", "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    written = report["results"]["export"]["written"]
    assert len(written) == 5
    for entry in written:
        payload = json.loads((tmp_path / f"{entry['name']}.json").read_text())
        assert payload["schemaVersion"] == 1


def test_exit_code_input_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{\"schemaVersion\": 2}")
    assert main(["analyze", "--scenario", str(path)]) == 2
    path.write_text("not json")
    assert main(["analyze", "--scenario", str(path)]) == 2


def test_exit_code_degenerate_geometry(tmp_path, capsys):
    path = tmp_path / "degenerate.json"
    path.write_text(json.dumps({
        "schemaVersion": 1,
        "latticeRank": 2,
        "monoidGenerators": [[1, 0], [2, 0]],
    }))
    assert main(["analyze", "--scenario", str(path)]) == 3


def test_exit_code_ill_defined_derivation(tmp_path, capsys):
    data = scenario_dict(punctured_octant())
    data["derivations"] = [{"components": [{"coefficient": "1", "root": [-1, 0, 0]}]}]
    path = tmp_path / "bad_derivation.json"
    path.write_text(json.dumps(data))
    assert main(["apply", "--scenario", str(path)]) == 2


def test_exit_code_missing_blocks(tmp_path, capsys):
    data = scenario_dict(punctured_octant())
    del data["derivations"]
    path = tmp_path / "noderiv.json"
    path.write_text(json.dumps(data))
    assert main(["apply", "--scenario", str(path)]) == 2


def test_reports_byte_identical_across_runs(tmp_path):
    script = (
        "import sys; from toriclnd.cli import main; sys.exit(main(sys.argv[1:]))"
    )
    outs = []
    for _ in range(2):
        proc = subprocess.run(
            [sys.executable, "-c", script, "verify-paper", "--format", "json"],
            capture_output=True,
        )
        assert proc.returncode == 0
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
    for command in (["analyze"], ["roots"], ["invariants", "hd"], ["slice"]):
        runs = [
            subprocess.run(
                [sys.executable, "-c", script, *command, "--format", "json"],
                capture_output=True,
            ).stdout
            for _ in range(2)
        ]
        assert runs[0] == runs[1] and runs[0]


def test_text_format_deterministic_and_plain(capsys):
    code1, out1 = run_cli(["analyze"], capsys)
    code2, out2 = run_cli(["analyze"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "\x1b[" not in out1  # no ANSI color, NO_COLOR trivially respected
