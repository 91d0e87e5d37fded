import json
import math

import pytest

import main
from ScenarioRunner.report_core import CheckRecord, Report, format_residual, report_to_dict
from ScenarioRunner.scenario_adapter import applicable_suites, run_suite, scenario_suites
from ScenarioRunner.scenario_model import load_scenario, scenario_from_dict
from utils.exceptions import ScenarioError

NEGATIVE_KERNEL = {
    "kind": "bundle+kernel",
    "bundle": {"points": ["a", "b"], "fiber_dims": 1},
    "kernel": {"blocks": {"(a,a)": [[-1]], "(a,b)": [[0]], "(b,a)": [[0]], "(b,b)": [[1]]}},
}
TRANSPOSE_MAP = {"kind": "cpmap", "algebra": {"blocks": [2]}, "map": "transpose"}


def write_json(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.mark.parametrize(
    "data, location",
    [
        ({"kind": "lattice"}, "kind"),
        ({"kind": "bundle+kernel", "kernel": {"family": "szego", "samples": [0, "x"]}}, "kernel.samples[1]"),
        ({"kind": "bundle+kernel", "bundle": {"points": ["a"], "fiber_dims": 2,
                                              "pairings": {"a": [[1, 0], [0]]}},
          "kernel": {"blocks": {}}}, "bundle.pairings.a[1]"),
        ({"kind": "grassmann", "ambient_dim": 2, "subspaces": [{"vectors": [[1, 0, 0]]}]}, "subspaces[0].vectors"),
        ({"kind": "cpmap", "algebra": {"blocks": [2]}, "map": "conjugate"}, "map"),
    ],
)
def test_scenario_error_locations(data, location):
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(data)
    assert info.value.location == location


def test_json_syntax_error_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": "cpmap",\n  "algebra": }', encoding="utf-8")
    with pytest.raises(ScenarioError) as info:
        load_scenario(str(path))
    assert info.value.location.startswith(str(path) + ":2:")


def test_load_scenario_uses_file_name(scenario_dir):
    scenario = load_scenario(f"{scenario_dir}/szego.json")
    assert scenario.scenario_id == "szego"
    assert scenario.kind == "bundle+kernel"
    assert list(scenario.get("kernel").bundle.points) == [0j, 0.5 + 0j, 0.5j, -0.3 - 0.4j]


def test_format_residual():
    assert format_residual(0.1) == "0.10000000000000001"
    assert format_residual(0.0) == "0"
    assert format_residual(None) is None
    assert format_residual(math.nan) is None
    assert format_residual(math.inf) is None


def test_timing_only_with_flag():
    report = Report("s", "cpmap", [CheckRecord("positivity", "x", True, 1e-12)], {"positivity": 0.5})
    assert "timing" not in report_to_dict(report)
    assert report_to_dict(report, timing=True)["timing"] == {"positivity": "0.5"}
    assert report_to_dict(report)["checks"][0]["residual"] == "9.9999999999999998e-13"


def test_empty_report_fails():
    assert Report("s", "cpmap").verdict == "fail"


def test_applicable_suites():
    assert applicable_suites("cpmap") == ["positivity", "stinespring", "gns"]
    assert applicable_suites("gns") == ["positivity", "stinespring", "gns", "tracial"]
    assert "property" in applicable_suites("grassmann", include_property=True)
    assert "pullback" not in applicable_suites("homogeneous")


def test_check_passes(scenario_dir):
    assert main.main(["check", f"{scenario_dir}/szego.json"]) == 0


def test_negative_controls_fail(tmp_path):
    kernel = write_json(tmp_path, "negative.json", NEGATIVE_KERNEL)
    assert main.main(["check", kernel, "--suite", "positivity"]) == 1
    transpose = write_json(tmp_path, "transpose.json", TRANSPOSE_MAP)
    assert main.main(["check", transpose, "--suite", "positivity"]) == 1


def test_failed_precondition_is_a_failure(tmp_path):
    transpose = write_json(tmp_path, "transpose.json", TRANSPOSE_MAP)
    assert main.main(["stinespring", transpose, "--suite", "stinespring"]) == 1


def test_input_errors(tmp_path, scenario_dir):
    assert main.main(["check", str(tmp_path / "missing.json")]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    assert main.main(["check", str(broken)]) == 2
    assert main.main(["check", f"{scenario_dir}/szego.json", "--suite", "tracial"]) == 2


def test_json_report(capsys, scenario_dir):
    assert main.main(["check", f"{scenario_dir}/szego.json", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["scenario"] == "szego"
    assert payload["verdict"] == "pass"
    assert "timing" not in payload
    for check in payload["checks"]:
        assert set(check) == {"suite", "name", "pass", "residual", "details"}
        assert check["residual"] is None or isinstance(check["residual"], str)


def test_reports_are_deterministic(capsys, scenario_dir):
    args = ["check", f"{scenario_dir}/kraus_channel.json", "--format", "json", "--suite", "positivity", "--seed", "7"]
    main.main(args)
    first = capsys.readouterr().out
    main.main(args)
    assert capsys.readouterr().out == first


def test_timing_flag(capsys, scenario_dir):
    main.main(["check", f"{scenario_dir}/gaussian.json", "--format", "json", "--timing"])
    payload = json.loads(capsys.readouterr().out)
    assert set(payload["timing"]) == {c["suite"] for c in payload["checks"]}


@pytest.mark.parametrize("name", main.demo_names())
def test_demo_passes(name):
    assert main.main(["demo", name]) == 0


def test_demo_names():
    assert {"szego", "gaussian", "kraus_channel", "m2_diagonal_gns", "tautological_c3",
            "m2_clifford_homogeneous", "m3_signed_permutations"} <= set(main.demo_names())


def test_run_suite_on_parsed_scenario():
    report = run_suite(scenario_from_dict(TRANSPOSE_MAP, "transpose"), "positivity")
    assert report.scenario_id == "transpose"
    assert not report.passed
    assert {c.suite for c in report.checks} == {"positivity"}
    with pytest.raises(ScenarioError):
        run_suite(scenario_from_dict(TRANSPOSE_MAP, "transpose"), "lattice")
    with pytest.raises(ScenarioError):
        run_suite(scenario_from_dict(TRANSPOSE_MAP, "transpose"), "pullback")


def test_undecodable_file_is_an_input_error(tmp_path):
    path = tmp_path / "latin.json"
    path.write_bytes(b"\xff\xfe{")
    with pytest.raises(ScenarioError) as info:
        load_scenario(str(path))
    assert info.value.location == str(path)
    assert main.main(["check", str(path)]) == 2


@pytest.mark.parametrize(
    "data, location",
    [
        ({"kind": "cpmap", "algebra": {"blocks": [2]}, "kraus": []}, "kraus"),
        ({"kind": "cpmap", "algebra": {"blocks": [2]}, "kraus": {"V": [[1, 0], [0, 1]]}}, "kraus"),
    ],
)
def test_malformed_kraus_list_is_located(data, location):
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(data)
    assert info.value.location == location


def test_malformed_payloads_are_input_errors(tmp_path):
    wrong_involution = {
        "kind": "grassmann",
        "ambient_dim": 2,
        "subspaces": [{"vectors": [[1, 0]]}],
        "involution": {"matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]},
    }
    with pytest.raises(ScenarioError):
        scenario_from_dict(wrong_involution)
    assert main.main(["stinespring", write_json(tmp_path, "empty.json",
                                                {"kind": "cpmap", "algebra": {"blocks": [2]}, "kraus": []})]) == 2
    assert main.main(["check", write_json(tmp_path, "involution.json", wrong_involution)]) == 2


def test_gns_is_offered_only_for_states(scenario_dir):
    channel = scenario_from_dict({"kind": "cpmap", "algebra": {"blocks": [2]}, "map": "identity"})
    assert "gns" not in scenario_suites(channel)
    assert "gns" in scenario_suites(load_scenario(f"{scenario_dir}/m2_diagonal_gns.json"))


@pytest.mark.parametrize("name", main.demo_names())
def test_check_passes_on_shipped_scenarios(name, scenario_dir):
    assert main.main(["check", f"{scenario_dir}/{name}.json"]) == 0
