import numpy as np
import pytest

from CompletelyPositive.algebra_core import MatrixAlgebra
from ReproducingKernel.kernel_core import check_positive, kernel_difference, max_block_norm
from ReproducingKernel.symmetry_core import equivariance_check
from Universality.homogeneous_core import (SampledHomogeneous, complexified_universality, coset_representatives,
                                           finite_group, group_action, homogeneous_bundle, homogeneous_kernel,
                                           orbit_compare, same_modulo_phase)
from Universality.universality_core import diagonal_identity_residual
from utils.exceptions import KernelToolkitError


def sampled(n):
    """π = 恒等表示，G_B = 对角酉群，H_B = C e1"""
    return SampledHomogeneous(lambda u: u, MatrixAlgebra.diagonal(n).contains, np.eye(n, dtype=complex)[:, :1])


def test_same_modulo_phase():
    a = np.array([[0, 1], [1, 0]], dtype=complex)
    assert same_modulo_phase(a, 1j * a)
    assert not same_modulo_phase(a, 2 * a)
    assert not same_modulo_phase(a, np.eye(2))


def test_clifford_group_and_cosets(clifford_generators):
    group = finite_group(clifford_generators)
    assert len(group) == 24
    assert np.allclose(group[0], np.eye(2))
    diagonal = MatrixAlgebra.diagonal(2).contains
    assert sum(1 for u in group if diagonal(u)) == 4
    assert len(coset_representatives(group, diagonal)) == 6


def test_signed_permutation_cosets(signed_permutation_generators):
    group = finite_group(signed_permutation_generators)
    assert len(group) == 24
    reps = coset_representatives(group, MatrixAlgebra.diagonal(3).contains)
    assert len(reps) == 6
    hb = homogeneous_bundle(sampled(3), reps)
    k = hb.kernel()
    assert check_positive(k).positive
    assert diagonal_identity_residual(k) <= 1e-10


def test_group_order_is_bounded(clifford_generators):
    with pytest.raises(KernelToolkitError):
        finite_group(clifford_generators, max_order=10)


def test_clifford_homogeneous_kernel(clifford_generators):
    group = finite_group(clifford_generators)
    hb = homogeneous_bundle(sampled(2), coset_representatives(group, MatrixAlgebra.diagonal(2).contains))
    assert len(hb.labels) == 6
    k = hb.kernel()
    assert check_positive(k).positive
    assert diagonal_identity_residual(k) <= 1e-10

    res, _ = kernel_difference(k, hb.transfer_kernel())
    assert res <= 1e-9 * max(1.0, max_block_norm(k))

    actions = group_action(hb, group)
    assert equivariance_check(k, actions).passed

    s0 = hb.locate(np.eye(2))
    assert s0 is not None
    report = complexified_universality(k, actions, s0)
    assert report.passed, report.checks
    assert report.checks["zeta_orbit"] <= 1e-8

    orbit = orbit_compare(hb.bundle, actions, {i: u for i, u in enumerate(group)}, hb.transfer(), s0)
    assert orbit.passed, orbit.checks
    assert set(orbit.orbit) == set(hb.labels)


def test_complexified_universality_needs_self_dual_base_point(clifford_generators):
    group = finite_group(clifford_generators)
    hb = homogeneous_bundle(sampled(2), coset_representatives(group, MatrixAlgebra.diagonal(2).contains))
    k = hb.kernel()
    report = complexified_universality(k, group_action(hb, group), "nope")
    assert report.passed is None
    assert report.reason == "s0* ≠ s0"


def test_duplicate_cosets_are_rejected():
    with pytest.raises(KernelToolkitError):
        homogeneous_bundle(sampled(2), [np.eye(2), np.diag([1, 1j])])


def test_homogeneous_kernel_matches_bundle_kernel(clifford_generators):
    group = finite_group(clifford_generators)
    reps = coset_representatives(group, MatrixAlgebra.diagonal(2).contains)
    res, _ = kernel_difference(homogeneous_kernel(sampled(2), reps), homogeneous_bundle(sampled(2), reps).kernel())
    assert res <= 1e-12
