"""
迹态 GNS 的应用：左、右、伴随正则表示的齐性核与三个反态射拉回恒等式。

H_A 为 φ 的 GNS 空间，H_B ⊆ H_A 为 B 的闭包，C[f] = [f*]。
    λ(u)[f] = [u f],  ρ(u)[f] = [f u⁻¹],  π(u) = λ(u) ρ(u)
反态射 δ: [(u, f)] ↦ [(u^{-*}, C f)] 给出
    Θ1*K_ρ = K_λ,  Θ2*K_λ = K_ρ,  Θ3*K_π = K_π
并由 Θ3 诱导 H^{K_π} 上的共轭 τ̄。
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from CompletelyPositive.algebra_core import CpMap, MatrixAlgebra
from CompletelyPositive.stinespring_core import gns, validate_expectation
from LikeHermitianBundle.bundle_core import BundleMorphism
from LinearAlgebra.linalg_core import orthonormal_basis, pseudo_inverse, residual
from ReproducingKernel.kernel_core import Kernel, kernel_difference, max_block_norm
from ReproducingKernel.pullback_core import pullback
from ReproducingKernel.symmetry_core import ConjugationResult, conjugation
from Universality.homogeneous_core import (HomogeneousBundle, SampledHomogeneous, coset_representatives,
                                           homogeneous_bundle)
from utils.config_manager import resolve_tol
from utils.exceptions import PreconditionError
from utils.logger import LogManager

logger = LogManager.get_logger("UV")


def tracial_residual(phi: CpMap) -> float:
    """max |φ(ab) − φ(ba)|，a, b 取遍矩阵单位基"""
    basis = phi.domain.basis
    return max(residual(phi.apply(a @ b), phi.apply(b @ a)) for a in basis for b in basis)


@dataclass
class TracialGnsReport:
    passed: bool
    checks: Dict[str, float] = field(default_factory=dict)
    dims: Dict[str, int] = field(default_factory=dict)
    kernels: Dict[str, Kernel] = field(default_factory=dict)
    conjugation: Optional[ConjugationResult] = None


def _antimorphism(src: HomogeneousBundle, tgt: HomogeneousBundle, conj_matrix: np.ndarray) -> BundleMorphism:
    """δ([(u_s, f)]) = [(u_s^{-*}, C f)]，在目标陪集代表元下的坐标"""
    b = src.h.hb_basis
    base_map, fiber_maps = {}, {}
    for s, u in zip(src.labels, src.representatives):
        u_star = np.linalg.inv(u.conj().T)
        t = tgt.locate(u_star)
        h = np.linalg.inv(tgt.representative(t)) @ u_star
        base_map[s] = t
        fiber_maps[s] = b.conj().T @ tgt.h.rep(h) @ conj_matrix @ b.conj()
    return BundleMorphism(src.bundle, tgt.bundle, base_map, fiber_maps, True)


def tracial_gns_suite(alg: MatrixAlgebra, sub: MatrixAlgebra, expectation: Callable[[np.ndarray], np.ndarray],
                      phi: CpMap, group: Sequence, cosets: Optional[Sequence] = None,
                      tol: Optional[float] = None,
                      rng: Optional[np.random.Generator] = None) -> TracialGnsReport:
    """
    迹态 GNS 套件

    Args:
        alg: 代数 A
        sub: 子代数 B（与 A 共享嵌入）
        expectation: 条件期望 E: A → B
        phi: A 上满足 φ∘E = φ 的迹态
        group: A 的酉群的有限样本（含 G_B 的陪集代表元）
        cosets: 陪集代表元，省略时从 group 中按 B 成员关系去重得到

    Raises:
        PreconditionError: φ 不是态、不是迹态、E 不是条件期望或 φ∘E ≠ φ
    """
    tol = resolve_tol(tol)
    data = gns(phi, tol)
    trace_res = tracial_residual(phi)
    if trace_res > tol:
        logger.error(f"φ 不是迹态: 残差 {trace_res:.3e}")
        raise PreconditionError("tracial", trace_res, "φ(ab) ≠ φ(ba)，右正则表示无定义")
    report = validate_expectation(expectation, alg, sub, rng, tol=tol)
    if not report.valid:
        worst = max(report.checks.values())
        logger.error(f"E 不是条件期望: {report.checks}")
        raise PreconditionError("expectation", worst)
    invariance = max(residual(phi.apply(expectation(a)), phi.apply(a)) for a in alg.basis)
    if invariance > tol:
        logger.error(f"φ∘E ≠ φ: 残差 {invariance:.3e}")
        raise PreconditionError("phi_invariance", invariance)

    e_a = data.embedding
    e_pinv = pseudo_inverse(e_a, tol)
    conj_matrix = e_a @ alg.adjoint_matrix() @ pseudo_inverse(e_a.conj(), tol)
    c_b = np.column_stack([alg.coordinates(b) for b in sub.basis])
    hb_basis = orthonormal_basis(e_a @ c_b, tol).basis

    def lam(u):
        return e_a @ alg.left_matrix(u) @ e_pinv

    def rho(u):
        return e_a @ alg.right_matrix(np.linalg.inv(u)) @ e_pinv

    def pi(u):
        return lam(u) @ rho(u)

    def in_sub(u) -> bool:
        return sub.contains(u, tol)

    group = [np.asarray(u, dtype=complex) for u in group]
    reps = list(cosets) if cosets is not None else coset_representatives(group, in_sub)
    bundles = {name: homogeneous_bundle(SampledHomogeneous(rep, in_sub, hb_basis), reps, tol=tol)
               for name, rep in (("lambda", lam), ("rho", rho), ("pi", pi))}
    kernels = {name: hb.kernel() for name, hb in bundles.items()}

    theta_1 = _antimorphism(bundles["lambda"], bundles["rho"], conj_matrix)
    theta_2 = _antimorphism(bundles["rho"], bundles["lambda"], conj_matrix)
    theta_3 = _antimorphism(bundles["pi"], bundles["pi"], conj_matrix)
    res_1, _ = kernel_difference(pullback(theta_1, kernels["rho"]), kernels["lambda"])
    res_2, _ = kernel_difference(pullback(theta_2, kernels["lambda"]), kernels["rho"])
    res_3, _ = kernel_difference(pullback(theta_3, kernels["pi"]), kernels["pi"])

    tau = conjugation(kernels["pi"], theta_3, tol=tol)
    checks = {
        "tracial": trace_res,
        "theta1": res_1,
        "theta2": res_2,
        "theta3": res_3,
        "tau_involution": tau.checks.get("operator_involution", float("inf")),
        "tau_antiunitary": tau.checks.get("antiunitary", float("inf")),
    }
    bound = resolve_tol(None, "universality") * max(1.0, max(max_block_norm(k) for k in kernels.values()))
    iso_tol = resolve_tol(None, "isometry")
    passed = (tau.exists and max(res_1, res_2, res_3) <= bound
              and checks["tau_involution"] <= iso_tol and checks["tau_antiunitary"] <= iso_tol)
    dims = {"H_A": data.space_dim, "H_B": int(hb_basis.shape[1]), "cosets": len(bundles["pi"].labels)}
    if passed:
        logger.debug(f"迹态 GNS 套件成立: {dims}")
    else:
        logger.warning(f"迹态 GNS 套件不成立: {checks}")
    return TracialGnsReport(passed, checks, dims, kernels, tau)
