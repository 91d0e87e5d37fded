import numpy as np
import pytest

from CompletelyPositive.algebra_core import CpMap, MatrixAlgebra
from ScenarioRunner.scenario_adapter import ScenarioAdapter
from ScenarioRunner.scenario_model import scenario_from_dict
from Universality.homogeneous_core import finite_group
from Universality.tracial_gns_core import tracial_gns_suite, tracial_residual
from utils.exceptions import PreconditionError

H = [[0.7071067811865476, 0.7071067811865476], [0.7071067811865476, -0.7071067811865476]]
S = [[1, 0], [0, [0, 1]]]


def diagonal_part(a):
    return np.diag(np.diag(a))


def test_tracial_residual():
    alg = MatrixAlgebra.full(2)
    assert tracial_residual(CpMap.state_from_density(alg, np.eye(2) / 2)) <= 1e-15
    assert tracial_residual(CpMap.state_from_density(alg, np.diag([0.7, 0.3]))) == pytest.approx(0.4)


def test_trace_state_on_m2(rng, clifford_generators):
    alg, sub = MatrixAlgebra.full(2), MatrixAlgebra.diagonal(2)
    phi = CpMap.state_from_density(alg, np.eye(2) / 2)
    report = tracial_gns_suite(alg, sub, diagonal_part, phi, finite_group(clifford_generators), rng=rng)
    assert report.passed, report.checks
    assert report.dims == {"H_A": 4, "H_B": 2, "cosets": 6}
    assert report.conjugation.exists
    for name in ("theta1", "theta2", "theta3"):
        assert report.checks[name] <= 1e-8
    assert report.checks["tau_involution"] <= 1e-10
    assert report.checks["tau_antiunitary"] <= 1e-10


def test_non_tracial_state_is_rejected(rng, clifford_generators):
    alg, sub = MatrixAlgebra.full(2), MatrixAlgebra.diagonal(2)
    phi = CpMap.state_from_density(alg, np.diag([0.7, 0.3]))
    with pytest.raises(PreconditionError) as info:
        tracial_gns_suite(alg, sub, diagonal_part, phi, finite_group(clifford_generators), rng=rng)
    assert info.value.check == "tracial"
    assert info.value.residual == pytest.approx(0.4)


def test_non_tracial_scenario_records_precondition():
    data = {
        "kind": "gns",
        "algebra": {"blocks": [2]},
        "state": [[0.7, 0], [0, 0.3]],
        "subalgebra": "diagonal",
        "group_generators": [H, S],
    }
    records = ScenarioAdapter(scenario_from_dict(data, "non_tracial")).run_suite("tracial")
    assert len(records) == 1
    assert records[0].name == "precondition"
    assert not records[0].passed
    assert "tracial" in records[0].details


def test_trace_scenario_passes():
    data = {
        "kind": "gns",
        "algebra": {"blocks": [2]},
        "state": "trace",
        "group_generators": [H, S],
    }
    report = ScenarioAdapter(scenario_from_dict(data, "trace")).run(["tracial"])
    assert report.passed, [c for c in report.checks if not c.passed]
