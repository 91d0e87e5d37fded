import numpy as np
import pytest

from LinearAlgebra.linalg_core import (form_bound, gram_quotient, is_projection, orthonormal_basis,
                                       pairing_adjoint, projection, psd_check, require_invertible,
                                       same_subspace)
from LinearAlgebra.random_matrices import random_complex, random_hermitian_pd, random_invertible, random_unitary
from LinearAlgebra.semilinear import SemilinearMap
from utils.exceptions import DimensionError, PairingError, PositivityError


def test_psd_check():
    assert psd_check(np.diag([1.0, 2.0])).is_psd

    report = psd_check(np.diag([1.0, -1.0]))
    assert report.is_hermitian
    assert not report.is_psd
    assert report.min_eigenvalue == pytest.approx(-1.0)

    report = psd_check(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert not report.is_hermitian
    assert not report.is_psd

    assert psd_check(np.zeros((0, 0))).is_psd


def test_psd_check_rejects_non_square():
    with pytest.raises(DimensionError):
        psd_check(np.ones((2, 3)))


def test_orthonormal_basis_rank():
    vectors = np.array([[1, 2], [0, 0], [0, 0]], dtype=complex)
    sub = orthonormal_basis(vectors)
    assert sub.dim == 1
    assert sub.orthonormality_residual() < 1e-14

    assert orthonormal_basis(np.zeros((3, 2))).dim == 0


def test_same_subspace_ignores_basis_choice(rng):
    v = random_complex(rng, (4, 2))
    mixed = v @ random_invertible(rng, 2)
    same, res = same_subspace(orthonormal_basis(v), orthonormal_basis(mixed))
    assert same
    assert res < 1e-12

    other = orthonormal_basis(random_complex(rng, (4, 2)))
    assert not same_subspace(orthonormal_basis(v), other)[0]


def test_projection_is_projection(rng):
    p = projection(orthonormal_basis(random_complex(rng, (5, 2))))
    ok, res = is_projection(p)
    assert ok
    assert res < 1e-12
    assert not is_projection(2 * p)[0]


def test_gram_quotient_reproduces_gram(rng):
    x = random_complex(rng, (2, 4))
    quotient = gram_quotient(x.conj().T @ x)
    assert quotient.rank == 2
    assert quotient.reproduction_residual() < 1e-12


def test_gram_quotient_rejects_indefinite():
    with pytest.raises(PositivityError) as info:
        gram_quotient(np.diag([1.0, -0.5]))
    assert info.value.min_eigenvalue == pytest.approx(-0.5)


def test_pairing_adjoint_identity(rng):
    g_src = random_invertible(rng, 3)
    g_tgt = random_invertible(rng, 2)
    op = random_complex(rng, (2, 3))
    adj = pairing_adjoint(op, g_src, g_tgt)
    xi = random_complex(rng, 3)
    eta = random_complex(rng, 2)
    lhs = np.vdot(eta, g_tgt @ op @ xi)
    rhs = np.vdot(adj @ eta, g_src @ xi)
    assert abs(lhs - rhs) < 1e-10


def test_require_invertible_rejects_singular():
    with pytest.raises(PairingError):
        require_invertible(np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_form_bound(rng):
    source = random_hermitian_pd(rng, 3)
    bound = form_bound(2 * source, source)
    assert bound.is_bounded
    assert bound.least_M == pytest.approx(2.0)

    degenerate = np.diag([1.0, 0.0])
    bound = form_bound(np.eye(2), degenerate)
    assert not bound.is_bounded
    assert bound.least_M == float("inf")


def test_semilinear_compose_and_inverse(rng):
    m = SemilinearMap.of(random_invertible(rng, 3), antilinear=True)
    x = random_complex(rng, 3)
    roundtrip = m.compose(m.inverse())
    assert not roundtrip.antilinear
    assert np.allclose(roundtrip.matrix, np.eye(3))
    assert np.allclose(m.inverse().apply(m.apply(x)), x)

    conj = SemilinearMap.identity(3, antilinear=True)
    assert conj.involution_residual() == 0.0
    assert np.allclose(conj.apply(x), x.conj())


def test_semilinear_unitarity(rng):
    u = SemilinearMap.of(random_unitary(rng, 4), antilinear=True)
    assert u.unitarity_residual() < 1e-12
    assert u.norm() == pytest.approx(1.0)


def test_semilinear_apply_checks_dimension():
    with pytest.raises(DimensionError):
        SemilinearMap.identity(2).apply(np.ones(3))
