"""
万有态射 Δ_K = (δ_K, ζ_K) 与万有性验证。

在 H^K 的商空间坐标中，E_s 为点 s 处生成元 K_{e_i} 的坐标，
    ζ_K(s) = span(E_s),  δ_s = B_{ζ(s)}† E_s
于是 K 是 Grassmann 万有核 Q_{H^K}（或 Q_{H^K,C}）沿 Δ_K 的拉回。
"""
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

import numpy as np
import scipy.linalg as sla

from Grassmannian.grassmann_core import GrassKernelSpec, involutive_kernel, universal_kernel
from LikeHermitianBundle.bundle_core import Bundle, BundleMorphism
from LinearAlgebra.linalg_core import (Subspace, as_matrix, max_abs, orthonormal_basis, projection,
                                       pseudo_inverse, residual, same_subspace, smallest_singular_value)
from LinearAlgebra.semilinear import SemilinearMap
from ReproducingKernel.kernel_core import Kernel, kernel_difference, max_block_norm
from ReproducingKernel.pullback_core import pullback, pullback_characterization
from ReproducingKernel.rkhs_core import Rkhs, build_rkhs
from utils.config_manager import resolve_tol
from utils.exceptions import DimensionError, KernelToolkitError, PreconditionError
from utils.logger import LogManager

logger = LogManager.get_logger("UV")

Point = Hashable


@dataclass(eq=False)
class UniversalMorphism:
    """Δ_K：每个点 s 对应子空间 ζ(s) ⊆ C^{dim H^K} 与纤维映射 δ_s"""
    kernel: Kernel
    rkhs: Rkhs
    labels: Dict[Point, str]
    subspaces: Dict[str, Subspace]
    delta: Dict[Point, np.ndarray]

    def zeta(self, s: Point) -> Subspace:
        return self.subspaces[self.labels[s]]

    def delta_vector(self, s: Point, xi) -> np.ndarray:
        """K̂(ξ) = K_ξ 的坐标"""
        return self.rkhs.columns(s) @ np.asarray(xi, dtype=complex)

    def spec(self, involution: Optional[SemilinearMap] = None) -> GrassKernelSpec:
        names = tuple(self.subspaces.keys())
        return GrassKernelSpec(self.rkhs.dim, tuple(self.subspaces[n] for n in names), involution, names)

    def as_morphism(self, target: Bundle) -> BundleMorphism:
        points = self.kernel.bundle.points
        return BundleMorphism(self.kernel.bundle, target, {s: self.labels[s] for s in points},
                              {s: self.delta[s] for s in points}, False)


def build_universal_morphism(k: Kernel, tol: Optional[float] = None) -> UniversalMorphism:
    """
    构造 Δ_K；重合的 ζ(s) 共用同一个子空间标签和基

    Raises:
        PositivityError: K 不是正核
        DimensionError: 某点处 K̂ 为零（ζ(s) 零维）
    """
    r = build_rkhs(k, tol)
    labels: Dict[Point, str] = {}
    subspaces: Dict[str, Subspace] = {}
    delta: Dict[Point, np.ndarray] = {}
    for s in k.bundle.points:
        e_s = r.columns(s)
        sub = orthonormal_basis(e_s, tol) if r.dim else Subspace(0, np.zeros((0, 0), dtype=complex))
        if sub.dim == 0:
            logger.error(f"点 {s} 处 K̂ 为零，ζ_K(s) 是零维子空间")
            raise DimensionError(f"点 {s} 处 K̂ 为零，ζ_K(s) 是零维子空间")
        name = next((n for n, other in subspaces.items() if same_subspace(sub, other, tol)[0]), None)
        if name is None:
            name = f"Z{len(subspaces)}"
            subspaces[name] = sub
        labels[s] = name
        delta[s] = subspaces[name].basis.conj().T @ e_s
    logger.debug(f"万有态射: dim H^K={r.dim}, 不同的 ζ(s) 共 {len(subspaces)} 个")
    return UniversalMorphism(k, r, labels, subspaces, delta)


@dataclass
class UniversalityReport:
    """passed 为 None 表示假设不成立，不对定理下结论"""
    passed: Optional[bool]
    residual: float
    worst_block: Optional[tuple] = None
    checks: Dict[str, float] = field(default_factory=dict)
    compatible: bool = True
    reason: str = ""


def _universality_tol(k: Kernel, tol: Optional[float]) -> float:
    base = tol if tol is not None else resolve_tol(None, "universality")
    return base * max(1.0, max_block_norm(k))


def verify_universal_hermitian(k: Kernel, tol: Optional[float] = None) -> UniversalityReport:
    """
    K = Δ_K* Q_{H^K}（σ = id 的 Hermite 丛）

    另外用 G_s⁻¹ E_s† p_{ζ(s)} E_t 独立计算一遍，并报告拉回刻画的等距性与 M。

    Raises:
        PreconditionError: 丛不是 Hermite 的
    """
    if not k.bundle.is_hermitian(tol):
        logger.error("万有性验证需要 Hermite 丛 (σ = id, 配对 Hermite 正定)")
        raise PreconditionError("hermitian_bundle", message="σ ≠ id 或配对不是 Hermite 正定")
    um = build_universal_morphism(k, tol)
    q = universal_kernel(um.spec())
    m = um.as_morphism(q.bundle)
    res, worst = kernel_difference(k, pullback(m, q))

    b = k.bundle
    independent = 0.0
    for s in b.points:
        left = sla.solve(b.G(s), um.rkhs.columns(s).conj().T @ projection(um.zeta(s)))
        for t in b.points:
            independent = max(independent, residual(left @ um.rkhs.columns(t), k.block(s, t)))

    ch = pullback_characterization(m, k, q, tol)
    bound = _universality_tol(k, tol)
    checks = {
        "pullback": res,
        "independent": independent,
        "isometry": ch.isometry_residual,
        "least_M_minus_one": abs(ch.least_M - 1.0),
    }
    passed = res <= bound and independent <= bound and ch.isometry and ch.is_morphism
    if passed:
        logger.debug(f"万有性成立: 残差 {res:.3e}")
    else:
        logger.warning(f"万有性不成立: 残差 {res:.3e} @ {worst}")
    return UniversalityReport(passed, res, worst, checks)


def verify_universal_involutive(k: Kernel, c: SemilinearMap,
                                tol: Optional[float] = None) -> UniversalityReport:
    """
    K = Δ_K* Q_{H^K,C}，C 为 H^K 坐标上的线性等距对合

    假设 ζ_K(s*) = C(ζ_K(s)) 不成立时返回 passed=None 的报告。

    Raises:
        PreconditionError: C 共轭线性或不是等距对合
    """
    if c.antilinear:
        logger.error("带对合的万有性只对线性 C 验证")
        raise PreconditionError("linear_involution", message="C 是共轭线性的")
    um = build_universal_morphism(k, tol)
    if c.shape != (um.rkhs.dim, um.rkhs.dim):
        raise DimensionError(f"C 的形状 {c.shape} 应为 {(um.rkhs.dim,) * 2}")
    inv_res, iso_res = c.involution_residual(), c.unitarity_residual()
    if max(inv_res, iso_res) > resolve_tol(tol):
        logger.error(f"C 不是等距对合: C²残差 {inv_res:.3e}, 等距残差 {iso_res:.3e}")
        raise PreconditionError("involution", max(inv_res, iso_res), "C 不是等距对合")

    b = k.bundle
    compat = 0.0
    for s in b.points:
        image = orthonormal_basis(c.apply(um.zeta(s).basis), tol)
        compat = max(compat, same_subspace(image, um.zeta(b.star(s)), tol)[1])
    if compat > resolve_tol(tol):
        logger.warning(f"相容性假设 ζ(s*) = C ζ(s) 不成立: 残差 {compat:.3e}")
        return UniversalityReport(None, float("nan"), checks={"compatibility": compat},
                                  compatible=False, reason="ζ_K(s*) ≠ C(ζ_K(s))")

    q = involutive_kernel(um.spec(c), tol)
    m = um.as_morphism(q.bundle)
    res, worst = kernel_difference(k, pullback(m, q))
    passed = res <= _universality_tol(k, tol)
    if not passed:
        logger.warning(f"带对合的万有性不成立: 残差 {res:.3e} @ {worst}")
    return UniversalityReport(passed, res, worst, {"compatibility": compat, "pullback": res})


def transport_operator(r: Rkhs, vectors, op) -> np.ndarray:
    """
    把 C^n 上的算子搬到 H^K 坐标：W = Y E⁺，返回 W† op W

    Args:
        r: H^K
        vectors: n × (生成元个数)，第 j 列是第 j 个生成元在 C^n 中的等距像
        op: n × n 矩阵
    """
    y = as_matrix(vectors, "vectors")
    if y.shape[1] != len(r.generators):
        raise DimensionError(f"向量组列数 {y.shape[1]} 与生成元个数 {len(r.generators)} 不符")
    w = y @ pseudo_inverse(r.embedding)
    return w.conj().T @ as_matrix(op, "op") @ w


@dataclass(frozen=True)
class PointRank:
    fiber_dim: int
    rank: int
    smallest_singular_value: float
    invertible: bool
    round_trip_residual: float


def invertibility_and_rank(k: Kernel, tol: Optional[float] = None) -> Dict[Point, PointRank]:
    """
    每个点处 K(s,s) 的最小奇异值与 K̂|_{D_s} 的秩

    K(s,s) 可逆时 ξ ↦ K̂ξ ↦ ξ 的往返残差应为零；秩亏的点往返残差为 inf。
    """
    tol = resolve_tol(tol)
    r = build_rkhs(k, tol)
    result = {}
    for s in k.bundle.points:
        block = k.block(s, s)
        sigma = smallest_singular_value(block)
        e_s = r.columns(s)
        rank = orthonormal_basis(e_s, tol).dim if r.dim else 0
        dim = k.bundle.dim(s)
        invertible = sigma > tol * max(1.0, max_abs(block))
        trip = residual(pseudo_inverse(e_s, tol) @ e_s, np.eye(dim)) if rank == dim else float("inf")
        result[s] = PointRank(dim, rank, sigma, invertible, trip)
        if rank < dim:
            logger.debug(f"点 {s}: K̂ 秩亏 {rank}/{dim}")
    return result


def transfer_isometry_residual(r_maps: Mapping[Point, np.ndarray], bundle: Bundle) -> float:
    """max_z ‖G_z − R_{z*}† R_z‖"""
    return max(residual(bundle.G(z), r_maps[bundle.star(z)].conj().T @ r_maps[z]) for z in bundle.points)


def transfer_kernel(r_maps: Mapping[Point, object], bundle: Bundle,
                    tol: Optional[float] = None) -> Kernel:
    """
    传递映射 R 的核 K^R(s,t) = (R_{s*})^{-*} R_t = G_s⁻¹ R_{s*}† R_t

    Raises:
        PreconditionError: R_z 不单射或不保持配对
    """
    tol = resolve_tol(tol)
    mats = {z: as_matrix(r_maps[z], f"R[{z}]") for z in bundle.points}
    for z, m in mats.items():
        if m.shape[1] != bundle.dim(z):
            raise DimensionError(f"R[{z}] 列数 {m.shape[1]} 应为 {bundle.dim(z)}")
        if np.linalg.matrix_rank(m) < bundle.dim(z):
            logger.error(f"R[{z}] 不是单射")
            raise PreconditionError("transfer_injective", message=f"R[{z}] 不是单射")
    iso = transfer_isometry_residual(mats, bundle)
    if iso > tol * max(1.0, max(max_abs(bundle.G(z)) for z in bundle.points)):
        logger.error(f"R 不保持配对: 残差 {iso:.3e}")
        raise PreconditionError("transfer_isometry", iso, "G_z ≠ R_{z*}† R_z")
    blocks = {}
    for s in bundle.points:
        left = sla.solve(bundle.G(s), mats[bundle.star(s)].conj().T)
        for t in bundle.points:
            blocks[(s, t)] = left @ mats[t]
    return Kernel(bundle, blocks)


def canonical_transfer(k: Kernel, tol: Optional[float] = None) -> Tuple[Dict[Point, np.ndarray], float]:
    """
    R_K(ξ) = K_ξ，返回 (R_K, max ‖E_{s*}†E_s − G_s K(s,s)‖)

    即 (R_K ξ | R_K η) = (K(s,s) ξ | η)。
    """
    r = build_rkhs(k, tol)
    b = k.bundle
    maps = {s: r.columns(s) for s in b.points}
    res = max(residual(maps[b.star(s)].conj().T @ maps[s], b.G(s) @ k.block(s, s)) for s in b.points)
    return maps, res


def diagonal_identity_residual(k: Kernel) -> float:
    """max_s ‖K(s,s) − I‖"""
    return max(residual(k.block(s, s), np.eye(k.bundle.dim(s))) for s in k.bundle.points)
