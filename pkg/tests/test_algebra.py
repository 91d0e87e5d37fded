import numpy as np
import pytest

from CompletelyPositive.algebra_core import (CpMap, MatrixAlgebra, StarHomomorphism, amplification_check,
                                             choi_matrix, is_completely_positive, random_unital_cp)
from LinearAlgebra.random_matrices import random_unitary
from utils.exceptions import DimensionError


def test_algebra_dimensions():
    assert MatrixAlgebra.full(3).dim == 9
    assert MatrixAlgebra.diagonal(3).dim == 3
    scalars = MatrixAlgebra.scalars(2)
    assert scalars.dim == 1
    assert scalars.size == 2
    assert np.allclose(scalars.coordinates(np.eye(2)), [1.0])
    blocks = MatrixAlgebra((2, 1))
    assert blocks.size == 3
    assert blocks.dim == 5


def test_membership():
    diag = MatrixAlgebra.diagonal(2)
    assert diag.contains(np.diag([2.0, 1j]))
    assert not diag.contains(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert MatrixAlgebra((1, 1), (1, 2)).contains(np.diag([1.0, 3.0, 3.0]))
    assert not MatrixAlgebra((1, 1), (1, 2)).contains(np.diag([1.0, 3.0, 2.0]))


def test_invalid_algebra():
    with pytest.raises(DimensionError):
        MatrixAlgebra((0,))
    with pytest.raises(DimensionError):
        MatrixAlgebra((2,), (1, 1))


def test_left_multiplication_matrix(rng):
    alg = MatrixAlgebra((2, 1))
    a, b = alg.random_element(rng), alg.random_element(rng)
    assert np.allclose(alg.left_matrix(a) @ alg.coordinates(b), alg.coordinates(a @ b))
    assert np.allclose(alg.right_matrix(a) @ alg.coordinates(b), alg.coordinates(b @ a))
    assert np.allclose(alg.adjoint_matrix() @ alg.coordinates(a).conj(), alg.coordinates(a.conj().T))


def test_choi_matrices():
    identity = choi_matrix(CpMap.identity(2))
    expected = np.zeros((4, 4))
    expected[np.ix_([0, 3], [0, 3])] = 1.0
    assert np.allclose(identity, expected)

    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.allclose(choi_matrix(CpMap.transpose(2)), swap)


def test_transpose_is_not_completely_positive(rng):
    phi = CpMap.transpose(2)
    assert phi.is_unital()
    assert phi.is_hermitian_preserving()
    assert not is_completely_positive(phi)
    assert amplification_check(phi, 1, 5, rng).positive
    report = amplification_check(phi, 2, 20, rng)
    assert not report.positive
    assert report.min_eigenvalue < 0


@pytest.mark.parametrize("phi", [CpMap.identity(3), CpMap.trace_map(3)])
def test_named_maps_are_completely_positive(rng, phi):
    assert phi.is_unital()
    assert is_completely_positive(phi)
    assert amplification_check(phi, 2, 5, rng).positive


def test_random_unital_cp(rng):
    for n in (2, 3):
        for n_kraus in (1, 2, 3):
            phi = random_unital_cp(rng, n, n_kraus)
            assert phi.is_unital()
            assert phi.is_hermitian_preserving()
            assert is_completely_positive(phi)


def test_kraus_shape_is_checked():
    with pytest.raises(DimensionError):
        CpMap.from_kraus(MatrixAlgebra.full(2), [np.eye(3)])


def test_state_from_density():
    alg = MatrixAlgebra.full(2)
    state = CpMap.state_from_density(alg, np.eye(2) / 2)
    assert state.codomain_dim == 1
    assert state.is_unital()
    assert state.apply(np.diag([3.0, 1.0]))[0, 0] == pytest.approx(2.0)


def test_restriction_to_subalgebra():
    phi = CpMap.trace_map(2)
    restricted = phi.restrict(MatrixAlgebra.diagonal(2))
    assert restricted.domain.dim == 2
    assert np.allclose(restricted.apply(np.diag([1.0, 3.0])), 2 * np.eye(2))


def test_inner_automorphism(rng):
    alg = MatrixAlgebra((1, 1))
    alpha = StarHomomorphism.inner(alg, random_unitary(rng, 2))
    assert alpha.is_valid()
