import numpy as np
import pytest

from Grassmannian.grassmann_core import (GrassKernelSpec, adapted_spec, compression_expectation_residual,
                                         compression_map, conditional_expectation, involution_indices,
                                         involutive_identity_residual, involutive_kernel, make_spec,
                                         tautological_transfer, universal_kernel, validate_involution)
from CompletelyPositive.stinespring_core import dilation_identity_check
from LikeHermitianBundle.bundle_core import validate_bundle
from LinearAlgebra.linalg_core import Subspace, orthonormal_basis, projection
from LinearAlgebra.random_matrices import random_complex
from LinearAlgebra.semilinear import SemilinearMap
from ReproducingKernel.kernel_core import check_positive, exchange_residual, kernel_difference
from Universality.universality_core import diagonal_identity_residual, transfer_kernel
from utils.exceptions import DimensionError, KernelToolkitError

SWAP = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
C3_SUBSPACES = {
    "L1": [[1, 0, 0]],
    "L2": [[0, 1, 0]],
    "P12": [[1, 0, 0], [0, 1, 0]],
    "D": [[1, 1, 1]],
    "Wp": [[1, 1j, 0]],
    "Wm": [[1, -1j, 0]],
}


def c3_spec(involution=None):
    spanning = [np.array(v, dtype=complex).T for v in C3_SUBSPACES.values()]
    return make_spec(3, spanning, involution, list(C3_SUBSPACES.keys()))


def test_universal_kernel_is_positive_with_identity_diagonal():
    q = universal_kernel(c3_spec())
    assert check_positive(q).positive
    assert diagonal_identity_residual(q) <= 1e-10
    assert exchange_residual(q) <= 1e-12


def test_tautological_transfer_kernel_is_universal_kernel():
    spec = c3_spec()
    q = universal_kernel(spec)
    k_r = transfer_kernel(tautological_transfer(spec), q.bundle)
    res, _ = kernel_difference(k_r, q)
    assert res <= 1e-9
    assert diagonal_identity_residual(k_r) <= 1e-10


def test_random_grassmann_kernel(rng):
    spanning = [random_complex(rng, (4, int(rng.integers(1, 4)))) for _ in range(5)]
    q = universal_kernel(make_spec(4, spanning))
    assert check_positive(q).positive
    assert diagonal_identity_residual(q) <= 1e-10


def test_linear_involution_kernel():
    spec = c3_spec(SemilinearMap.of(SWAP))
    assert involution_indices(spec) == [1, 0, 2, 3, 5, 4]
    q_c = involutive_kernel(spec)
    assert validate_bundle(q_c.bundle).valid
    assert q_c.bundle.star("Wp") == "Wm"
    assert check_positive(q_c).positive
    assert exchange_residual(q_c) <= 1e-9
    assert involutive_identity_residual(spec) <= 1e-9


def test_antilinear_involution_kernel():
    conj = SemilinearMap.identity(3, antilinear=True)
    spec = c3_spec(conj)
    assert involution_indices(spec) == [0, 1, 2, 3, 5, 4]
    q_c = involutive_kernel(spec)
    assert validate_bundle(q_c.bundle).valid
    assert check_positive(q_c).positive
    assert involutive_identity_residual(spec) <= 1e-9


def test_list_must_be_closed_under_involution():
    spec = make_spec(3, [np.array([[1], [1j], [0]])], SemilinearMap.of(SWAP))
    with pytest.raises(KernelToolkitError):
        involutive_kernel(spec)


def test_involution_must_be_isometric():
    with pytest.raises(KernelToolkitError):
        validate_involution(SemilinearMap.of(2 * np.eye(2)))


def test_zero_dimensional_subspace_is_rejected():
    with pytest.raises(DimensionError):
        make_spec(2, [np.zeros((2, 1))])


def test_conditional_expectation():
    p = projection(orthonormal_basis(np.array([[1.0], [1.0], [0.0]])))
    expectation = conditional_expectation(p)
    t = np.arange(9, dtype=complex).reshape(3, 3)
    image = expectation(t)
    assert np.allclose(image @ p, p @ image)
    assert np.allclose(expectation(image), image)
    with pytest.raises(KernelToolkitError):
        conditional_expectation(np.array([[1.0, 1.0], [0.0, 0.0]]))


def test_compression_map_and_expectation(rng):
    s0 = orthonormal_basis(random_complex(rng, (4, 3)))
    k = orthonormal_basis(s0.basis[:, :2])
    phi = compression_map(k, s0)
    assert phi.is_unital()
    assert compression_expectation_residual(k, s0) <= 1e-9
    assert compression_expectation_residual(s0, s0) <= 1e-9

    outside = orthonormal_basis(random_complex(rng, (4, 1)))
    with pytest.raises(KernelToolkitError):
        compression_map(outside, s0)


@pytest.mark.parametrize("label", list(C3_SUBSPACES.keys()))
def test_compression_dilation_is_identity_representation(label):
    spec = c3_spec()
    sub = spec.points[spec.labels.index(label)]
    checks = dilation_identity_check(sub)
    assert int(checks["space_dim"]) == 3
    assert checks["co_isometry"] <= 1e-8
    assert checks["isometry"] <= 1e-8
    assert checks["identity_representation"] <= 1e-8


def test_tautological_transfer_is_not_isometric_under_involution():
    from utils.exceptions import PreconditionError

    spec = c3_spec(SemilinearMap.of(SWAP))
    q_c = involutive_kernel(spec)
    with pytest.raises(PreconditionError) as info:
        transfer_kernel(tautological_transfer(spec), q_c.bundle)
    assert info.value.check == "transfer_isometry"


@pytest.mark.parametrize("vector", [[0, 1, 0], [0, -1, 0], [0, 1j, 0]])
def test_adapted_spec_is_stable(vector):
    conj = SemilinearMap.identity(3, antilinear=True)
    spec = GrassKernelSpec(3, (Subspace(3, np.array([vector], dtype=complex).T),), conj, ("L2",))
    once = adapted_spec(spec)
    twice = adapted_spec(once)
    assert np.allclose(once.points[0].basis, twice.points[0].basis)
    assert np.allclose(conj.apply(once.points[0].basis), once.points[0].basis)


def test_adapted_spec_fixes_column_signs():
    conj = SemilinearMap.identity(3, antilinear=True)
    spec = GrassKernelSpec(3, (Subspace(3, np.array([[0, 1j, 0]], dtype=complex).T),), conj, ("L2",))
    assert np.allclose(adapted_spec(spec).points[0].basis[:, 0], [0, 1, 0])
