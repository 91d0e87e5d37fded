import numpy as np
import pytest

from CompletelyPositive.algebra_core import CpMap, MatrixAlgebra, StarHomomorphism, random_unital_cp
from CompletelyPositive.stinespring_core import (compression_factorization, cpos_morphism_bound, gns, stinespring,
                                                 tensor_morphism, two_squares, validate_expectation)
from utils.config_manager import ConfigManager
from utils.exceptions import PreconditionError


def diagonal_part(a):
    return np.diag(np.diag(a))


def test_random_kraus_maps_dilate(rng):
    for _ in range(50):
        n = int(rng.integers(2, 4))
        phi = random_unital_cp(rng, n, int(rng.integers(1, 4)))
        data = stinespring(phi)
        res = data.residuals
        assert res["isometry"] <= 1e-10
        assert res["dilation"] <= 1e-8
        assert res["choi"] <= 1e-8
        for name in ("multiplicative", "adjoint", "unit"):
            assert res[name] <= 1e-8, name


def test_single_kraus_unitary_channel(rng):
    u = np.array([[0, 1], [1, 0]], dtype=complex)
    phi = CpMap.from_kraus(MatrixAlgebra.full(2), [u])
    data = stinespring(phi)
    assert data.space_dim == 2
    assert data.residuals["dilation"] <= 1e-12
    a = MatrixAlgebra.full(2).random_element(rng)
    v = data.isometry
    assert np.allclose(v.conj().T @ data.pi(a) @ v, u.conj().T @ a @ u)


def test_gns_of_trace_state():
    phi = CpMap.state_from_density(MatrixAlgebra.full(2), np.eye(2) / 2)
    data = gns(phi)
    assert data.space_dim == 4
    cyclic = data.natural_map(np.eye(2))
    assert abs(np.vdot(cyclic, cyclic) - 1.0) < 1e-12


def test_gns_of_pure_state():
    phi = CpMap.state_from_density(MatrixAlgebra.full(2), np.diag([1.0, 0.0]))
    assert gns(phi).space_dim == 2


def test_gns_requires_state():
    with pytest.raises(PreconditionError) as info:
        gns(CpMap.trace_map(2))
    assert info.value.check == "state"

    with pytest.raises(PreconditionError) as info:
        gns(CpMap.state_from_density(MatrixAlgebra.full(2), np.diag([2.0, -1.0])))
    assert info.value.check == "state"


def test_stinespring_preconditions():
    with pytest.raises(PreconditionError) as info:
        stinespring(CpMap.from_kraus(MatrixAlgebra.full(2), [2 * np.eye(2)]))
    assert info.value.check == "unital"
    assert info.value.residual == pytest.approx(3.0)

    with pytest.raises(PreconditionError) as info:
        stinespring(CpMap.transpose(2))
    assert info.value.check == "completely_positive"


def test_compression_factorization(rng):
    for n in (2, 3):
        report = compression_factorization(random_unital_cp(rng, n, 2))
        assert report.passed
        assert report.least_M == pytest.approx(1.0, abs=1e-8)
        assert report.compression_dim == n


def test_compression_factorization_uses_explicit_tol(rng):
    phi = random_unital_cp(rng, 3, 2)
    ConfigManager.instance().set_config({"tolerance_config": {"dilation": 0.0}})
    assert compression_factorization(phi, tol=1e-8).passed


def test_validate_expectation(rng):
    alg, sub = MatrixAlgebra.full(3), MatrixAlgebra.diagonal(3)
    assert validate_expectation(diagonal_part, alg, sub, rng).valid
    report = validate_expectation(lambda a: a, alg, sub, rng)
    assert not report.valid
    assert report.checks["range"] > 0.1


def test_two_squares_for_trace_state(rng):
    phi = CpMap.state_from_density(MatrixAlgebra.full(2), np.eye(2) / 2)
    report = two_squares(diagonal_part, MatrixAlgebra.diagonal(2), phi, rng=rng)
    assert report.passed, report.checks
    assert report.dims == {"H_A": 4, "H_B": 2}


def test_two_squares_rejects_non_invariant_state(rng):
    phi = CpMap.state_from_density(MatrixAlgebra.full(2), np.array([[0.5, 0.5], [0.5, 0.5]]))
    with pytest.raises(PreconditionError) as info:
        two_squares(diagonal_part, MatrixAlgebra.diagonal(2), phi, rng=rng)
    assert info.value.check == "phi_invariance"


def test_identity_is_cpos_morphism(rng):
    phi = random_unital_cp(rng, 2, 2)
    alpha = StarHomomorphism.identity(phi.domain)
    bound = cpos_morphism_bound(alpha, np.eye(2), phi, phi)
    assert bound.is_morphism
    assert bound.least_M == pytest.approx(1.0)
    assert bound.equality_residual <= 1e-12

    doubled = cpos_morphism_bound(alpha, 2 * np.eye(2), phi, phi)
    assert doubled.least_M == pytest.approx(4.0)

    h = tensor_morphism(alpha, np.eye(2), phi, phi)
    assert h.intertwining_residual <= 1e-9
    assert h.norm == pytest.approx(1.0)
