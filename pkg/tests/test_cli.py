"""命令行端到端测试: 退出码与 JSON 报告"""
import json

import pytest

from config import REPORT_SCHEMA_PATH
from main import main


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_homology_of_boundary(capsys, fixture_path):
    code, payload = run_json(capsys, "homology", str(fixture_path("boundary_delta2.json")))
    assert code == 0
    assert payload["verdict"] == "success"
    assert [H["group"] for H in payload["result"]["homology"]] == ["Z", "Z", "0"]
    assert payload["input"] == {"name": "boundary of the 2-simplex", "kind": "sset",
                                "file": "boundary_delta2.json", "trunc": 3, "range": 2}


def test_report_matches_schema(tmp_path, capsys, fixture_path):
    report = tmp_path / "out" / "report.json"
    assert main(["verify", "theorem-b", str(fixture_path("terminal_to_bz2.json")), "--report", str(report)]) == 0
    assert "confirmed" in capsys.readouterr().out
    payload = json.loads(report.read_text(encoding="utf-8"))
    schema = json.loads(REPORT_SCHEMA_PATH.read_text(encoding="utf-8"))
    assert set(schema["required"]) <= set(payload) <= set(schema["properties"])
    assert payload["schema_version"] == "1.0"
    assert payload["command"] in schema["properties"]["command"]["enum"]
    assert payload["verdict"] == "confirmed"


@pytest.mark.parametrize("argv, expected", [
    (["verify", "theorem-b", "terminal_to_bz2.json"], 0),
    (["verify", "theorem-b", "naturals_self_action.json"], 2),
    (["verify", "puppe", "puppe_broken.json"], 2),
    (["verify", "group-completion", "z2_monoid.json"], 0),
    (["validate-site", "sierpinski_site.json"], 0),
    (["validate-site", "site_missing_maximal.json"], 1),
    (["hocolim", "span_circle.json"], 0),
    (["homology", "bad_range.json"], 4),
])
def test_exit_codes(argv, expected, capsys, fixture_path):
    *command, name = argv
    assert main([*command, str(fixture_path(name))]) == expected


def test_nerve_of_a_group_is_kan_but_not_trivial(capsys, fixture_path):
    path = str(fixture_path("bz2_nerve.json"))
    assert main(["check-fibration", path]) == 0
    capsys.readouterr()
    code, payload = run_json(capsys, "check-fibration", path, "--kind", "trivial", "--n-max", "2")
    assert code == 1
    assert payload["verdict"] == "refuted"


def test_hypotheses_witness_is_reported(capsys, fixture_path):
    code, payload = run_json(capsys, "verify", "theorem-b", str(fixture_path("naturals_self_action.json")))
    assert code == 2
    assert payload["verdict"] == "hypotheses-not-met"
    assert payload["result"]["witness"]["morphism"] == 1


def test_range_override_above_truncation(capsys, fixture_path):
    assert main(["homology", str(fixture_path("boundary_delta2.json")), "--range", "3"]) == 4
    assert "range must be below truncation" in capsys.readouterr().err


def test_wrong_document_kind(capsys, fixture_path):
    assert main(["validate-site", str(fixture_path("boundary_delta2.json"))]) == 4


def test_unknown_command_exits_with_input_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate", "x.json"])
    assert info.value.code == 4


def test_unknown_oracle(capsys, fixture_path):
    assert main(["verify", "theorem-b", str(fixture_path("terminal_to_bz2.json")), "--oracle", "guess"]) == 4


def test_stalk_and_sheafify(capsys, fixture_path):
    assert main(["stalk", str(fixture_path("presheaf_local_map.json"))]) == 0
    assert main(["sheafify", str(fixture_path("presheaf_not_sheaf.json"))]) == 0


def test_suite_runs_every_case(capsys, fixture_path):
    code, payload = run_json(capsys, "suite", str(fixture_path("suite.json")))
    assert code == 0
    rows = payload["result"]["cases"]
    assert len(rows) == 8
    assert all(row["ok"] for row in rows)


def test_reports_are_deterministic(tmp_path, capsys, fixture_path):
    path = str(fixture_path("arrow_to_bz2.json"))
    outputs = []
    for i, threads in enumerate(["1", "1", "4"]):
        report = tmp_path / f"r{i}.json"
        assert main(["verify", "theorem-b", path, "--threads", threads, "--report", str(report)]) == 0
        outputs.append(report.read_text(encoding="utf-8"))
    assert outputs[0] == outputs[1] == outputs[2]
