import numpy as np
import pytest

from LikeHermitianBundle.bundle_core import (BundleMorphism, apply_morphism, compose, hermitian_bundle,
                                             identity_morphism, is_adjointable, make_bundle, quasi_adjoint,
                                             validate_bundle)
from LikeHermitianBundle.bundle_samples import perturb_pairing, random_bundle
from LinearAlgebra.random_matrices import random_complex
from utils.exceptions import BundleMismatchError, DimensionError


@pytest.mark.parametrize("involutive", [False, True])
def test_random_bundle_is_valid(rng, involutive):
    for _ in range(10):
        b = random_bundle(rng, 5, 3, involutive=involutive)
        report = validate_bundle(b)
        assert report.valid, report.violations
        for z in b.points:
            assert b.star(b.star(z)) == z


def test_hermitian_bundle_is_hermitian(rng):
    b = random_bundle(rng, 3, 2)
    assert b.is_hermitian()
    assert hermitian_bundle(["a", "b"], 2).is_hermitian()
    swapped = make_bundle(["x", "y"], {"x": 1, "y": 1}, {"x": "y", "y": "x"})
    assert not swapped.is_hermitian()


def test_broken_conjugate_symmetry_is_reported():
    b = perturb_pairing(hermitian_bundle(["a", "b"], 2), "a")
    report = validate_bundle(b)
    assert not report.valid
    assert {(v.kind, v.point) for v in report.violations} == {("conjugate_symmetry", "a")}
    assert report.max_residual == pytest.approx(1.0)


def test_non_involution_is_reported():
    b = make_bundle(["a", "b", "c"], {"a": 1, "b": 1, "c": 1}, {"a": "b", "b": "c", "c": "a"})
    kinds = {v.kind for v in validate_bundle(b).violations}
    assert kinds == {"involution"}


def test_singular_pairing_is_reported():
    b = hermitian_bundle(["a"], 2, {"a": np.array([[1.0, 0.0], [0.0, 0.0]])})
    kinds = {v.kind for v in validate_bundle(b).violations}
    assert "duality" in kinds


def test_bad_pairing_shape():
    with pytest.raises(DimensionError):
        make_bundle(["a", "b"], {"a": 1, "b": 2}, {"a": "b", "b": "a"})


def test_morphism_must_commute_with_involution():
    source = hermitian_bundle(["a"], 1)
    target = make_bundle(["x", "y"], {"x": 1, "y": 1}, {"x": "y", "y": "x"})
    with pytest.raises(BundleMismatchError):
        BundleMorphism(source, target, {"a": "x"}, {"a": np.eye(1, dtype=complex)})


def test_morphism_fiber_shape():
    b = hermitian_bundle(["a"], 2)
    with pytest.raises(DimensionError):
        BundleMorphism(b, b, {"a": "a"}, {"a": np.eye(3, dtype=complex)})


def test_identity_is_adjointable(rng):
    b = random_bundle(rng, 3, 3, involutive=True)
    report = is_adjointable(identity_morphism(b))
    assert report.adjointable
    assert report.isometry_residual < 1e-12
    assert report.inverse_residual < 1e-10


def test_compose_matches_sequential_application(rng):
    b = hermitian_bundle(["a", "b"], 2)
    maps = {z: random_complex(rng, (2, 2)) for z in b.points}
    m1 = BundleMorphism(b, b, {"a": "b", "b": "a"}, maps, antilinear=True)
    m2 = BundleMorphism(b, b, {"a": "a", "b": "b"}, {z: random_complex(rng, (2, 2)) for z in b.points})
    composed = compose(m1, m2)
    assert composed.antilinear
    xi = random_complex(rng, 2)
    z, image = apply_morphism(composed, "a", xi)
    mid_point, mid = apply_morphism(m2, "a", xi)
    expected_point, expected = apply_morphism(m1, mid_point, mid)
    assert z == expected_point == "b"
    assert np.allclose(image, expected)


@pytest.mark.parametrize("antilinear", [False, True])
def test_quasi_adjoint_identity(rng, antilinear):
    source = random_bundle(rng, 2, 3)
    target = random_bundle(rng, 2, 3, prefix="q")
    base_map = {"p0": "q1", "p1": "q0"}
    maps = {z: random_complex(rng, (target.dim(base_map[z]), source.dim(z))) for z in source.points}
    m = BundleMorphism(source, target, base_map, maps, antilinear)
    z = "p0"
    n = quasi_adjoint(m, z)
    xi = random_complex(rng, source.dim(z))
    eta = random_complex(rng, target.dim(base_map[z]))
    lhs = np.vdot(eta, target.G(base_map[z]) @ m.delta(z).apply(xi))
    if antilinear:
        rhs = np.conj(np.vdot(n @ eta.conj(), source.G(z) @ xi))
    else:
        rhs = np.vdot(n @ eta, source.G(z) @ xi)
    assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))
