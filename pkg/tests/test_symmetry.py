import numpy as np

from LikeHermitianBundle.bundle_core import BundleMorphism
from ReproducingKernel.kernel_zoo import family_kernel
from ReproducingKernel.symmetry_core import ActionSample, conjugation, equivariance_check, trivial_action


def complex_conjugation(k, antilinear=True):
    b = k.bundle
    return BundleMorphism(b, b, {s: b.star(s) for s in b.points},
                          {s: np.eye(b.dim(s), dtype=complex) for s in b.points}, antilinear)


def test_conjugation_of_real_kernel():
    k = family_kernel("gaussian", [0, 0.7, 1.5], gamma=0.8)
    result = conjugation(k, complex_conjugation(k))
    assert result.exists, result.reason
    assert result.checks["operator_involution"] <= 1e-10
    assert result.checks["antiunitary"] <= 1e-10
    assert result.checks["evaluation"] <= 1e-9
    assert result.symmetry_residual <= 1e-12


def test_conjugation_requires_symmetric_kernel():
    k = family_kernel("szego", [0.5, 0.5j])
    result = conjugation(k, complex_conjugation(k))
    assert not result.exists
    assert result.reason == "对称条件不成立"
    assert result.offending_block is not None
    assert result.symmetry_residual > 0.1


def test_conjugation_requires_antilinear_map():
    k = family_kernel("gaussian", [0, 1])
    result = conjugation(k, complex_conjugation(k, antilinear=False))
    assert not result.exists
    assert result.operator is None


def test_conjugation_requires_isometry():
    k = family_kernel("gaussian", [0, 1])
    b = k.bundle
    tau = BundleMorphism(b, b, {s: s for s in b.points}, {s: 1j * np.eye(1) for s in b.points}, True)
    assert conjugation(k, tau).exists

    doubled = BundleMorphism(b, b, {s: s for s in b.points}, {s: 2 * np.eye(1, dtype=complex) for s in b.points},
                             True)
    result = conjugation(k, doubled)
    assert not result.exists
    assert "involution" in result.checks


def test_equivariance_under_reflection():
    points = [0, 1, 2, 3]
    k = family_kernel("gaussian", points, gamma=0.3)
    assert equivariance_check(k, trivial_action(k)).passed

    # x ↦ 3 − x 保持距离，Gaussian 核在该反射下等变
    reflect = ActionSample("r", {x: 3 - x for x in points}, {x: np.eye(1, dtype=complex) for x in points}, "r")
    report = equivariance_check(k, [reflect])
    assert report.passed
    assert report.residual < 1e-14

    szego = family_kernel("szego", [0.0, 0.5])
    swap = ActionSample("w", {0.0: 0.5, 0.5: 0.0}, {x: np.eye(1, dtype=complex) for x in (0.0, 0.5)}, "w")
    report = equivariance_check(szego, [swap])
    assert not report.passed
    assert report.worst is not None
