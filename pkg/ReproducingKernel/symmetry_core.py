"""
核的对称性：共轭线性对合 τ 诱导的共轭 τ̄，以及群作用下的等变性。
"""
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from LikeHermitianBundle.bundle_core import BundleMorphism, compose, is_isometry, same_bundle
from LinearAlgebra.linalg_core import max_abs, residual
from ReproducingKernel.kernel_core import Kernel, kernel_difference, scaled_tolerance
from ReproducingKernel.pullback_core import InducedOperator, induced_operator, pullback
from ReproducingKernel.rkhs_core import Rkhs, build_rkhs, evaluate
from utils.config_manager import resolve_tol
from utils.exceptions import KernelToolkitError
from utils.logger import LogManager

logger = LogManager.get_logger("KC")

Point = Hashable


@dataclass
class ConjugationResult:
    """τ̄ 的构造结果；exists 为假时 reason 说明失败原因"""
    exists: bool
    reason: str = ""
    offending_block: Optional[Tuple[Point, Point]] = None
    symmetry_residual: float = float("nan")
    operator: Optional[InducedOperator] = None
    checks: Dict[str, float] = field(default_factory=dict)


def conjugation(k: Kernel, tau: BundleMorphism, r: Optional[Rkhs] = None,
                tol: Optional[float] = None) -> ConjugationResult:
    """
    由共轭线性对合 τ（底映射为对合 s ↦ s*）构造 H^K 上的共轭 τ̄

    前置条件: τ² = id，τ 为等距。K(s,t) = τ⁻¹ K(s*,t*) τ 成立时，
    τ̄(K_ξ) = K_{τξ} 是共轭线性对合等距，且 (τ̄F)(t) = τ(F(t*))。
    """
    tol = resolve_tol(tol)
    b = k.bundle
    if not tau.antilinear:
        return ConjugationResult(False, "τ 不是共轭线性的")
    if not same_bundle(tau.source, b) or not same_bundle(tau.target, b):
        return ConjugationResult(False, "τ 不是该丛到自身的映射")
    if any(tau.zeta(s) != b.star(s) for s in b.points):
        return ConjugationResult(False, "τ 的底映射不是对合 s ↦ s*")

    involution_res = max_abs(np.concatenate(
        [(compose(tau, tau).fiber_maps[s] - np.eye(b.dim(s))).ravel() for s in b.points]))
    if involution_res > tol:
        logger.warning(f"τ² ≠ id: 残差 {involution_res:.3e}")
        return ConjugationResult(False, "τ² ≠ id", checks={"involution": involution_res})
    iso, iso_res = is_isometry(tau, tol)
    if not iso:
        logger.warning(f"τ 不是等距: 残差 {iso_res:.3e}")
        return ConjugationResult(False, "τ 不保持配对", checks={"isometry": iso_res})

    sym_res, where = kernel_difference(k, pullback(tau, k))
    if sym_res > scaled_tolerance(k, tol):
        logger.warning(f"对称条件 K(s,t) = τ⁻¹K(s*,t*)τ 在分块 {where} 处不成立: {sym_res:.3e}")
        return ConjugationResult(False, "对称条件不成立", where, sym_res)

    r = r or build_rkhs(k, tol)
    op = induced_operator(tau, r, r, tol)
    n = op.matrix
    identity = np.eye(r.dim)
    checks = {
        "involution": involution_res,
        "isometry": iso_res,
        "operator_involution": residual(n @ n.conj(), identity),
        "antiunitary": residual(n.conj().T @ n, identity),
        "evaluation": _evaluation_residual(op, tau, r),
    }
    logger.debug(f"τ̄ 构造完成: τ̄² 残差 {checks['operator_involution']:.3e}")
    return ConjugationResult(True, "", None, sym_res, op, checks)


def _evaluation_residual(op: InducedOperator, tau: BundleMorphism, r: Rkhs) -> float:
    """(τ̄F)(t) 与 τ_{t*}(F(t*)) 在生成元上的最大偏差"""
    b = r.kernel.bundle
    worst = 0.0
    for s in b.points:
        cols = r.columns(s)
        image = op.apply(cols)
        for t in b.points:
            lhs = evaluate(r, image, t)
            rhs = tau.delta(b.star(t)).apply(evaluate(r, cols, b.star(t)))
            worst = max(worst, residual(lhs, rhs))
    return worst


@dataclass(frozen=True)
class ActionSample:
    """群元 u 的采样作用：ν(u,·) 置换基空间，μ(u,s): D_s → D_{ν(u,s)}"""
    label: Hashable
    nu: Dict[Point, Point]
    mu: Dict[Point, np.ndarray]
    inverse: Hashable


@dataclass
class EquivarianceReport:
    passed: bool
    residual: float
    worst: Optional[Tuple[Hashable, Point, Point]] = None


def equivariance_check(k: Kernel, actions: Sequence[ActionSample],
                       tol: Optional[float] = None) -> EquivarianceReport:
    """
    检查 K(t, ν(u,s)) μ(u,s) = μ(u, ν(u⁻¹,t)) K(ν(u⁻¹,t), s)

    Raises:
        KernelToolkitError: 采样作用不封闭（ν 越出基空间或缺少逆元）
    """
    k.require_complete()
    b = k.bundle
    by_label = {a.label: a for a in actions}
    for a in actions:
        if a.inverse not in by_label:
            logger.error(f"采样作用缺少 {a.label} 的逆元")
            raise KernelToolkitError(f"采样作用缺少 {a.label} 的逆元")
        outside = [s for s in b.points if a.nu.get(s) not in b.base]
        if outside:
            logger.error(f"群元 {a.label} 把点 {outside} 映出基空间")
            raise KernelToolkitError(f"群元 {a.label} 把点 {outside} 映出基空间")

    tolerance = scaled_tolerance(k, tol)
    worst, where = 0.0, None
    for a in actions:
        inv = by_label[a.inverse]
        for s in b.points:
            for t in b.points:
                t_back = inv.nu[t]
                lhs = k.block(t, a.nu[s]) @ a.mu[s]
                rhs = a.mu[t_back] @ k.block(t_back, s)
                res = residual(lhs, rhs)
                if res > worst:
                    worst, where = res, (a.label, s, t)
    passed = worst <= tolerance
    if not passed:
        logger.debug(f"等变性在 {where} 处不成立: {worst:.3e}")
    return EquivarianceReport(passed, worst, where)


def trivial_action(k: Kernel) -> List[ActionSample]:
    b = k.bundle
    return [ActionSample("e", {s: s for s in b.points},
                         {s: np.eye(b.dim(s), dtype=complex) for s in b.points}, "e")]
