import numpy as np
import pytest

from LikeHermitianBundle.bundle_core import BundleMorphism, hermitian_bundle, identity_morphism
from LikeHermitianBundle.bundle_samples import random_bundle
from LinearAlgebra.random_matrices import random_complex
from ReproducingKernel.kernel_core import check_positive, make_kernel, max_block_norm
from ReproducingKernel.kernel_zoo import family_kernel, random_morphism, random_positive_kernel
from ReproducingKernel.pullback_core import (functor_residual, hom_bound, induced_operator, pullback,
                                             pullback_characterization)
from ReproducingKernel.rkhs_core import (build_rkhs, evaluate, inner, inner_product_residual,
                                         reproducing_residual, section_coordinates)
from utils.exceptions import NotAMorphismError, PositivityError

SZEGO_SAMPLES = [0, 0.5, 0.5j, -0.3 - 0.4j]


def ones_kernel():
    b = hermitian_bundle(["a", "b"], 1)
    return make_kernel(b, {(s, t): [[1.0]] for s in b.points for t in b.points})


def test_rkhs_of_szego_kernel():
    k = family_kernel("szego", SZEGO_SAMPLES)
    r = build_rkhs(k)
    assert r.dim == 4
    assert reproducing_residual(r) < 1e-9
    assert inner_product_residual(r) < 1e-12


def test_rank_deficient_kernel():
    r = build_rkhs(ones_kernel())
    assert r.dim == 1
    assert reproducing_residual(r) < 1e-12


def test_non_positive_kernel_has_no_rkhs():
    b = hermitian_bundle(["a"], 1)
    with pytest.raises(PositivityError):
        build_rkhs(make_kernel(b, {("a", "a"): [[-1.0]]}))


def test_evaluation_and_inner_product(rng):
    bundle = random_bundle(rng, 3, 2, involutive=True)
    k = random_positive_kernel(rng, bundle)
    r = build_rkhs(k)
    s, t = bundle.points[0], bundle.points[-1]
    xi = random_complex(rng, bundle.dim(s))
    section = section_coordinates(r, s, xi)
    for u in bundle.points:
        assert np.allclose(evaluate(r, section, u), k.block(u, s) @ xi, atol=1e-9)

    szego = family_kernel("szego", SZEGO_SAMPLES)
    r = build_rkhs(szego)
    p, q = SZEGO_SAMPLES[1], SZEGO_SAMPLES[2]
    value = inner(r, section_coordinates(r, q, [2.0]), section_coordinates(r, p, [1j]))
    expected = np.conj(1j) * szego.block(p, q)[0, 0] * 2.0
    assert abs(value - expected) < 1e-12


def test_pullback_of_positive_kernel_is_positive(rng):
    for antilinear in (False, True):
        for _ in range(10):
            target = random_bundle(rng, 3, 3, involutive=True)
            source = random_bundle(rng, 4, 3, involutive=True, prefix="q")
            k = random_positive_kernel(rng, target)
            pulled = pullback(random_morphism(rng, source, target, antilinear), k)
            report = check_positive(pulled)
            assert report.positive, report.min_eigenvalue


def test_identity_pullback_characterization():
    k = family_kernel("gaussian", [0, 0.7, 1.5], gamma=0.8)
    ch = pullback_characterization(identity_morphism(k.bundle), k, k)
    assert ch.equal
    assert ch.isometry
    assert ch.is_morphism
    assert ch.consistent
    assert ch.least_M == pytest.approx(1.0)
    assert ch.square_residual < 1e-9


def test_scaled_morphism_bound_and_norm():
    k = family_kernel("szego", SZEGO_SAMPLES)
    m = BundleMorphism(k.bundle, k.bundle, {s: s for s in k.points},
                       {s: 2 * np.eye(1, dtype=complex) for s in k.points})
    ch = pullback_characterization(m, k, k)
    assert not ch.equal
    assert not ch.isometry
    assert ch.consistent
    assert hom_bound(m, k, k).least_M == pytest.approx(4.0)

    r = build_rkhs(k)
    op = induced_operator(m, r, r)
    norms = op.norm_report()
    assert op.norm == pytest.approx(2.0)
    assert norms["norm_squared_residual"] < 1e-9
    assert norms["within_sqrt_M"]
    assert norms["within_M"]


def test_unbounded_map_is_not_a_morphism():
    source = ones_kernel()
    target = family_kernel("szego", [0.0, 0.5])
    m = BundleMorphism(source.bundle, target.bundle, {"a": 0.0, "b": 0.5},
                       {s: np.eye(1, dtype=complex) for s in source.points})
    bound = hom_bound(m, source, target)
    assert not bound.is_morphism
    assert bound.least_M == float("inf")
    with pytest.raises(NotAMorphismError):
        induced_operator(m, build_rkhs(source), build_rkhs(target))


@pytest.mark.parametrize("seed", range(5))
def test_functor_law(seed):
    rng = np.random.default_rng(seed)
    bundles = [random_bundle(rng, 3, 2, involutive=True, prefix=f"b{j}_") for j in range(3)]
    rkhs = [build_rkhs(random_positive_kernel(rng, b)) for b in bundles]
    m2 = random_morphism(rng, bundles[0], bundles[1])
    m1 = random_morphism(rng, bundles[1], bundles[2], antilinear=bool(seed % 2))
    res = functor_residual(m1, m2, rkhs[0], rkhs[1], rkhs[2])
    h1 = induced_operator(m1, rkhs[1], rkhs[2])
    h2 = induced_operator(m2, rkhs[0], rkhs[1])
    assert res <= 1e-10 * max(1.0, h1.norm * h2.norm)


def test_isometric_pullback_is_characterized(rng):
    target = random_bundle(rng, 3, 2)
    k = random_positive_kernel(rng, target)
    m = random_morphism(rng, target, target)
    pulled = pullback(m, k)
    ch = pullback_characterization(m, pulled, k)
    assert ch.equal
    assert ch.isometry
    assert ch.consistent
    assert ch.residual <= 1e-9 * max(1.0, max_block_norm(pulled))
