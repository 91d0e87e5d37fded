"""
有限维 Grassmann 流形上的重言丛核。

点是 C^n 的子空间（以正交归一基存储），纤维即子空间本身：
    Q_H(S1, S2) = B1† B2
给定等距对合 C（线性或共轭线性）时，基空间对合为 S ↦ C(S)，
    Q_{H,C}(S1, S2) = B1† (C·B2)，配对 G_S = (C·B_{S*})† B_S
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from CompletelyPositive.algebra_core import CpMap, MatrixAlgebra
from LikeHermitianBundle.bundle_core import Bundle, hermitian_bundle, make_bundle
from LinearAlgebra.linalg_core import (Subspace, as_matrix, is_projection, max_abs, orthonormal_basis,
                                       projection, residual, same_subspace)
from LinearAlgebra.semilinear import SemilinearMap
from ReproducingKernel.kernel_core import Kernel
from utils.config_manager import resolve_tol
from utils.exceptions import DimensionError, KernelToolkitError
from utils.logger import LogManager

logger = LogManager.get_logger("GR")


@dataclass(frozen=True, eq=False)
class GrassKernelSpec:
    """子空间列表 + 可选的等距对合 C"""
    ambient_dim: int
    points: Tuple[Subspace, ...]
    involution: Optional[SemilinearMap] = None
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        points = tuple(self.points)
        object.__setattr__(self, "points", points)
        if not points:
            raise DimensionError("子空间列表为空")
        for i, sub in enumerate(points):
            if sub.ambient_dim != self.ambient_dim:
                logger.error(f"子空间 {i} 的环境维数 {sub.ambient_dim} ≠ {self.ambient_dim}")
                raise DimensionError(f"子空间 {i} 的环境维数 {sub.ambient_dim} ≠ {self.ambient_dim}")
            if sub.dim < 1:
                raise DimensionError(f"子空间 {i} 是零维的")
        labels = tuple(self.labels) or tuple(f"S{i}" for i in range(len(points)))
        if len(labels) != len(points) or len(set(labels)) != len(labels):
            raise DimensionError(f"标签个数或唯一性不符: {labels}")
        object.__setattr__(self, "labels", labels)
        if self.involution is not None and self.involution.shape != (self.ambient_dim, self.ambient_dim):
            raise DimensionError(f"对合矩阵形状 {self.involution.shape} 应为 {(self.ambient_dim,) * 2}")

    def basis(self, label: str) -> np.ndarray:
        return self.points[self.labels.index(label)].basis


def make_spec(ambient_dim: int, spanning: Sequence, involution: Optional[SemilinearMap] = None,
              labels: Sequence[str] = (), tol: Optional[float] = None) -> GrassKernelSpec:
    """由张成向量组（每项为 n×k 矩阵）构造 GrassKernelSpec"""
    subs = [orthonormal_basis(as_matrix(np.asarray(v, dtype=complex).reshape(ambient_dim, -1)), tol)
            for v in spanning]
    return GrassKernelSpec(int(ambient_dim), tuple(subs), involution, tuple(labels))


def validate_involution(c: SemilinearMap, tol: Optional[float] = None) -> Dict[str, float]:
    """
    C² = id 且 C 保持内积（共轭线性时为反酉）

    Raises:
        KernelToolkitError: 任一条件不成立
    """
    tol = resolve_tol(tol)
    checks = {"involution": c.involution_residual(), "isometry": c.unitarity_residual()}
    bad = {k: v for k, v in checks.items() if v > tol}
    if bad:
        logger.error(f"C 不是等距对合: {bad}")
        raise KernelToolkitError(f"C 不是等距对合: {bad}")
    return checks


def involution_indices(spec: GrassKernelSpec, tol: Optional[float] = None) -> List[int]:
    """
    ω_C 在子空间列表上的作用：第 i 个子空间的像 C(S_i) 在列表中的位置

    Raises:
        KernelToolkitError: 列表对 ω_C 不封闭
    """
    c = spec.involution
    if c is None:
        return list(range(len(spec.points)))
    result = []
    for i, sub in enumerate(spec.points):
        image = orthonormal_basis(c.apply(sub.basis), tol)
        match = [j for j, other in enumerate(spec.points) if same_subspace(image, other, tol)[0]]
        if not match:
            logger.error(f"子空间 {spec.labels[i]} 的像 C(S) 不在列表中")
            raise KernelToolkitError(f"子空间列表对 ω_C 不封闭: {spec.labels[i]}")
        result.append(match[0])
    for i, j in enumerate(result):
        if result[j] != i:
            raise KernelToolkitError(f"ω_C 在列表上不是对合: {spec.labels[i]} ↦ {spec.labels[j]}")
    return result


def _real_basis(c: SemilinearMap, basis: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """
    C 自共轭子空间的 C-实正交归一基（C 共轭线性）

    已是 C-实正交归一基时原样返回；否则每列模最大的分量取正实部（实部为零时取正虚部），
    因此重复适配得到同一组基。
    """
    n, k = basis.shape
    tol = resolve_tol(tol)
    image = c.apply(basis)
    if residual(image, basis) <= tol and residual(basis.conj().T @ basis, np.eye(k)) <= tol:
        return basis
    w = np.hstack([basis + image, 1j * (basis - image)])
    embedded = np.vstack([w.real, w.imag])
    u, s, _ = sla.svd(embedded, full_matrices=False)
    rank = int(np.sum(s > tol * s[0]))
    if rank != k:
        raise KernelToolkitError(f"C-实形式的实维数 {rank} 与复维数 {k} 不符")
    real_basis = u[:n, :k] + 1j * u[n:, :k]
    pivots = real_basis[np.argmax(np.abs(real_basis), axis=0), np.arange(k)]
    signs = np.where(np.abs(pivots.real) > tol, np.sign(pivots.real), np.sign(pivots.imag))
    signs[signs == 0] = 1.0
    return real_basis * signs


def adapted_spec(spec: GrassKernelSpec, tol: Optional[float] = None) -> GrassKernelSpec:
    """
    为共轭线性 C 重新选基：B_{C(S)} := C·B_S，自共轭子空间取 C-实基

    线性 C 或无 C 时原样返回。
    """
    c = spec.involution
    if c is None or not c.antilinear:
        return spec
    validate_involution(c, tol)
    partner = involution_indices(spec, tol)
    bases: Dict[int, np.ndarray] = {}
    for i, j in enumerate(partner):
        if i in bases:
            continue
        b = spec.points[i].basis
        if i == j:
            bases[i] = _real_basis(c, b, tol)
        else:
            bases[i] = b
            bases[j] = c.apply(b)
    subs = tuple(Subspace(spec.ambient_dim, bases[i]) for i in range(len(spec.points)))
    logger.debug(f"已为 {len(subs)} 个子空间选取 C-适配基")
    return GrassKernelSpec(spec.ambient_dim, subs, c, spec.labels)


def universal_kernel(spec: GrassKernelSpec) -> Kernel:
    """
    万有核 Q_H：σ = id 的 Hermite 重言丛，Q_H(S1, S2) = B1† B2
    """
    dims = {label: sub.dim for label, sub in zip(spec.labels, spec.points)}
    bundle = hermitian_bundle(spec.labels, dims)
    blocks = {}
    for l1, s1 in zip(spec.labels, spec.points):
        for l2, s2 in zip(spec.labels, spec.points):
            blocks[(l1, l2)] = s1.basis.conj().T @ s2.basis
    logger.debug(f"万有核: {len(spec.points)} 个子空间, 环境维数 {spec.ambient_dim}")
    return Kernel(bundle, blocks)


def involutive_bundle(spec: GrassKernelSpec, tol: Optional[float] = None) -> Bundle:
    """对合 ω_C 下的类 Hermite 重言丛（共轭线性 C 需先调用 adapted_spec）"""
    c = spec.involution
    partner = involution_indices(spec, tol)
    labels = spec.labels
    dims = {label: sub.dim for label, sub in zip(labels, spec.points)}
    involution = {labels[i]: labels[j] for i, j in enumerate(partner)}
    pairings = {}
    for i, j in enumerate(partner):
        b_i, b_j = spec.points[i].basis, spec.points[j].basis
        if c is None:
            pairings[labels[i]] = b_j.conj().T @ b_i
        elif c.antilinear:
            pairings[labels[i]] = np.eye(dims[labels[i]], dtype=complex)
        else:
            pairings[labels[i]] = c.apply(b_j).conj().T @ b_i
    return make_bundle(labels, dims, involution, pairings)


def involutive_kernel(spec: GrassKernelSpec, tol: Optional[float] = None) -> Kernel:
    """
    对合万有核 Q_{H,C}(S1, S2) = p_{S1} ∘ C 限制在 S2 上

    Args:
        spec: 带对合 C 的子空间列表，列表须对 ω_C 封闭
        tol: 容差

    Returns:
        类 Hermite 丛上的核；C 共轭线性时纤维坐标取自 adapted_spec 的适配基
    """
    c = spec.involution
    if c is None:
        return universal_kernel(spec)
    validate_involution(c, tol)
    if c.antilinear:
        spec = adapted_spec(spec, tol)
    bundle = involutive_bundle(spec, tol)
    images = {label: c.apply(sub.basis) for label, sub in zip(spec.labels, spec.points)}
    blocks = {}
    for l1, s1 in zip(spec.labels, spec.points):
        for l2 in spec.labels:
            blocks[(l1, l2)] = s1.basis.conj().T @ images[l2]
    return Kernel(bundle, blocks)


def involutive_identity_residual(spec: GrassKernelSpec, tol: Optional[float] = None) -> float:
    """‖Q_{H,C}(S1,S2) − Q_H(S1, C(S2)) · (B_{C(S2)}† C B2)‖ 的最大值"""
    c = spec.involution
    if c is None:
        return 0.0
    if c.antilinear:
        spec = adapted_spec(spec, tol)
    partner = involution_indices(spec, tol)
    q_c = involutive_kernel(spec, tol)
    q_h = universal_kernel(spec)
    worst = 0.0
    for i, l1 in enumerate(spec.labels):
        for j, l2 in enumerate(spec.labels):
            image = spec.points[partner[j]]
            change = image.basis.conj().T @ c.apply(spec.points[j].basis)
            rhs = q_h.block(l1, spec.labels[partner[j]]) @ change
            worst = max(worst, residual(q_c.block(l1, l2), rhs))
    return worst


def conditional_expectation(p, tol: Optional[float] = None) -> Callable[[np.ndarray], np.ndarray]:
    """
    E_p: T ↦ pTp + (1−p)T(1−p)，值域为 {p} 的交换子

    Raises:
        KernelToolkitError: p 不是正交投影
    """
    p = as_matrix(p, "projection")
    ok, res = is_projection(p, tol)
    if not ok:
        logger.error(f"p 不是正交投影: 残差 {res:.3e}")
        raise KernelToolkitError(f"p 不是正交投影 (残差 {res:.3e})")
    q = np.eye(p.shape[0]) - p

    def expectation(t: np.ndarray) -> np.ndarray:
        return p @ t @ p + q @ t @ q

    return expectation


def compression_map(k: Subspace, s0: Optional[Subspace] = None,
                    tol: Optional[float] = None) -> CpMap:
    """
    压缩映射 Φ_K: T ↦ p_K ∘ T ∘ ι_K，M_n → B(K)

    Args:
        k: 子空间 K
        s0: 包含 K 的子空间 S0，给出时检查 K ⊆ S0
        tol: 容差
    """
    tol = resolve_tol(tol)
    b = k.basis
    if b.shape[1] == 0:
        raise DimensionError("压缩到零维子空间没有意义")
    if s0 is not None:
        if s0.ambient_dim != k.ambient_dim:
            raise DimensionError("K 与 S0 的环境维数不同")
        outside = max_abs(b - projection(s0) @ b)
        if outside > tol:
            logger.error(f"K 不包含于 S0: 残差 {outside:.3e}")
            raise KernelToolkitError(f"K 不包含于 S0 (残差 {outside:.3e})")
    return CpMap.from_function(MatrixAlgebra.full(k.ambient_dim), b.shape[1],
                               lambda t: b.conj().T @ t @ b)


def compression_expectation_residual(k: Subspace, s0: Subspace, tol: Optional[float] = None) -> float:
    """‖Φ_K ∘ E_{p_{S0}} − Φ_K‖ 在矩阵单位基上的最大值"""
    phi = compression_map(k, s0, tol)
    expectation = conditional_expectation(projection(s0), tol)
    return max(residual(phi.apply(expectation(e)), phi.apply(e)) for e in phi.domain.basis)


def tautological_transfer(spec: GrassKernelSpec) -> Dict[str, np.ndarray]:
    """重言丛的传递映射：R_S 为 S 的包含映射（存储的正交归一基）"""
    return {label: sub.basis for label, sub in zip(spec.labels, spec.points)}
