import json

import pytest

from shabrauer.cli import main, parse_arguments
from tests.test_data import C2_SIGN, REPEATED_GENERATORS, V4_PROBLEM


@pytest.fixture
def problem_file(tmp_path):
    def write(document, name="problem.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)
    return write


def run_json(capsys, argv):
    status = main(argv + ["--json"])
    return status, json.loads(capsys.readouterr().out)


def test_parse_arguments():
    args = parse_arguments(["cohomology", "--input", "p.json", "--degree", "2", "-vv"])
    assert (args.command, args.degree, args.verbose, args.oracle) == ("cohomology", 2, 2, False)
    with pytest.raises(SystemExit):
        parse_arguments([])
    with pytest.raises(SystemExit):
        parse_arguments(["sha"])


def test_sha_json(capsys, problem_file):
    status, payload = run_json(capsys, ["sha", "--input", problem_file(V4_PROBLEM), "--oracle"])
    assert status == 0
    assert payload["sha"] == {"free_rank": "0", "invariant_factors": ["2"]}
    assert payload["structures"]["H1(complex)"]["invariant_factors"] == ["2"]
    assert len(payload["restrictions"]) == 3
    assert payload["oracle"]["agrees"] is True
    assert len(payload["input_digest"]) == 64
    assert payload["generators"][0]["arities"] == ["2", "1"]


def test_sha_text(capsys, problem_file):
    assert main(["sha", "--input", problem_file(V4_PROBLEM), "--exhaustive"]) == 0
    out = capsys.readouterr().out
    assert "Sha^1_omega,alg = Z/2" in out
    assert "restrictions to cyclic subgroups:" in out


def test_brauer(capsys, problem_file):
    status, payload = run_json(capsys, ["brauer", "--input", problem_file(V4_PROBLEM)])
    assert status == 0
    assert payload["interpretation"] == "Char0_WithPoint_Isomorphism"
    assert payload["identification"]["holds"] is True
    assert payload["hypotheses"]["field"] == "char0"
    assert len(payload["caveats"]) == 1


def test_cohomology_with_oracle(capsys, problem_file):
    path = problem_file(V4_PROBLEM)
    status, payload = run_json(capsys, ["cohomology", "--input", path, "--module", "J", "--degree", "2", "--oracle"])
    assert status == 0
    assert payload["structures"] == {"H2(J)": {"free_rank": "0", "invariant_factors": ["2"]}}
    assert payload["oracle"] == {
        "oracle": "dimension_shift",
        "structure": {"free_rank": "0", "invariant_factors": ["2"]},
        "agrees": True,
    }


def test_cohomology_single_module(capsys, problem_file):
    status, payload = run_json(capsys, ["cohomology", "--input", problem_file(C2_SIGN)])
    assert status == 0
    assert payload["structures"]["H1(sign)"]["invariant_factors"] == ["2"]


@pytest.mark.parametrize("argv, status, kind", [
    (["cohomology", "--degree", "1"], 2, "SchemaError"),
    (["cohomology", "--module", "nope"], 2, "SchemaError"),
    (["cohomology", "--module", "J", "--degree", "3"], 3, "DegreeUnsupported"),
    (["sha", "--max-order", "2"], 4, "OrderBoundExceeded"),
    (["sha", "--workers", "0"], 2, "SchemaError"),
])
def test_error_documents(capsys, problem_file, argv, status, kind):
    argv = argv[:1] + ["--input", problem_file(V4_PROBLEM)] + argv[1:]
    code, payload = run_json(capsys, argv)
    assert code == status
    assert payload["error"]["type"] == kind
    assert payload["error"]["exit_code"] == str(status)
    assert payload["exit_status"] == str(status)


def test_missing_input_file(capsys, tmp_path):
    code, payload = run_json(capsys, ["validate", "--input", str(tmp_path / "missing.json")])
    assert code == 2
    assert "does not exist" in payload["error"]["message"]


def test_schema_error_text(capsys, problem_file):
    path = problem_file({"group": {"named": "V4"}, "stray": True})
    assert main(["validate", "--input", path]) == 2
    out = capsys.readouterr().out
    assert "error (SchemaError)" in out
    assert "exit status: 2" in out


def test_validate(capsys, problem_file):
    status, payload = run_json(capsys, ["validate", "--input", problem_file(V4_PROBLEM)])
    assert status == 0
    assert [d["name"] for d in payload["diagnostics"]] == ["J", "zero", "complex"]
    bad = {"group": {"named": "C2"}, "modules": {"M": {"ambient_rank": 1, "action": [[[2]]]}}}
    status, payload = run_json(capsys, ["validate", "--input", problem_file(bad, "bad.json")])
    assert status == 3
    assert payload["diagnostics"][0]["valid"] is False
    assert "generator #0" in payload["diagnostics"][0]["failures"][0]


def test_abelianize_preset(capsys):
    status, payload = run_json(capsys, ["abelianize", "--preset", "e", "--prime", "3"])
    assert status == 0
    assert payload["structures"]["abelianization"]["invariant_factors"] == ["3", "9", "9"]
    assert len(payload["exponents"]) == 3


def test_abelianize_relators(capsys):
    status, payload = run_json(capsys, ["abelianize", "--generators", "x, y", "--relator", "x^2", "--relator", "[x,y]"])
    assert status == 0
    assert payload["structures"]["abelianization"] == {"free_rank": "1", "invariant_factors": ["2"]}
    assert main(["abelianize", "--preset", "h0"]) == 0
    assert "Z/2 x Z/2 x Z/4" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["abelianize"],
    ["abelianize", "--preset", "e", "--relator", "x^2"],
    ["abelianize", "--generators", "x", "--relator", "y^2"],
])
def test_abelianize_errors(capsys, argv):
    status, payload = run_json(capsys, argv)
    assert status == 2
    assert payload["error"]["exit_code"] == "2"


def test_log_file(capsys, problem_file, tmp_path):
    log_file = tmp_path / "shabrauer.log"
    assert main(["sha", "--input", problem_file(V4_PROBLEM), "-v", "--log-file", str(log_file)]) == 0
    assert "Sha^1_omega,alg(V4" in log_file.read_text()


def test_validate_repeated_generators(capsys, problem_file):
    status, payload = run_json(capsys, ["validate", "--input", problem_file(REPEATED_GENERATORS)])
    assert status == 0
    assert payload["diagnostics"][0]["valid"] is True
    status, payload = run_json(capsys, ["cohomology", "--input", problem_file(REPEATED_GENERATORS, "r.json"),
                                        "--degree", "1"])
    assert status == 0
    assert payload["structures"]["H1(sign)"]["invariant_factors"] == ["2"]
