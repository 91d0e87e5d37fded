"""
稠密复线性代数基础：Hermite 特征分解、半正定判定、正交化、子空间、
Gram 商空间以及非标准半双线性配对下的伴随。

约定:
    配对 (ξ|η) = η† G ξ，对第一个变量线性、对第二个变量共轭线性；
    G 的形状为 dim(η 所在纤维) × dim(ξ 所在纤维)。
    内积 <x, y> = y† x。
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla

from utils.config_manager import resolve_tol
from utils.exceptions import DimensionError, PairingError, PositivityError
from utils.logger import LogManager

logger = LogManager.get_logger("LA")

EPS = np.finfo(float).eps


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """
    转换为二维复矩阵并检查有限性

    Args:
        m: 任意可转换为数组的对象
        name: 出错时报告的名称

    Returns:
        complex128 二维数组
    """
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        logger.error(f"{name} 不是二维矩阵: ndim={arr.ndim}")
        raise DimensionError(f"{name} 不是二维矩阵: ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        logger.error(f"{name} 含有 NaN/Inf")
        raise DimensionError(f"{name} 含有 NaN/Inf")
    return arr


def require_square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    arr = as_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        logger.error(f"{name} 不是方阵: {arr.shape}")
        raise DimensionError(f"{name} 不是方阵: {arr.shape}")
    return arr


def max_abs(m: np.ndarray) -> float:
    """最大元素模，空矩阵返回 0"""
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def residual(a: np.ndarray, b: np.ndarray) -> float:
    """两个同形矩阵之差的最大元素模"""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"形状不一致: {a.shape} vs {b.shape}")
    return max_abs(a - b)


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


@dataclass(frozen=True)
class PsdReport:
    """半正定判定结果"""
    is_hermitian: bool
    is_psd: bool
    min_eigenvalue: float


def psd_check(m, tol: Optional[float] = None) -> PsdReport:
    """
    判定矩阵是否 Hermite 且半正定

    Args:
        m: 方阵
        tol: 相对容差 τ，默认读取配置

    Returns:
        PsdReport(is_hermitian, is_psd, min_eigenvalue)
    """
    tol = resolve_tol(tol)
    m = require_square(m)
    if m.shape[0] == 0:
        return PsdReport(True, True, 0.0)

    scale = max_abs(m)
    is_hermitian = max_abs(m - m.conj().T) <= tol * scale
    eigenvalues = sla.eigvalsh(hermitian_part(m))
    min_eig = float(eigenvalues[0])
    spectral = float(np.max(np.abs(eigenvalues)))
    is_psd = bool(is_hermitian and min_eig >= -tol * max(1.0, spectral))
    return PsdReport(bool(is_hermitian), is_psd, min_eig)


@dataclass(frozen=True)
class Subspace:
    """C^ambient_dim 中的子空间，以正交归一列基存储"""
    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        if self.basis.ndim != 2 or self.basis.shape[0] != self.ambient_dim:
            raise DimensionError(
                f"子空间基形状 {self.basis.shape} 与环境维数 {self.ambient_dim} 不符")

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    def orthonormality_residual(self) -> float:
        return residual(self.basis.conj().T @ self.basis, np.eye(self.dim))


def orthonormal_basis(vectors, tol: Optional[float] = None) -> Subspace:
    """
    列向量张成空间的正交归一基

    秩由奇异值截断 τ·σ_max 决定；零矩阵或空列集给出零维子空间。
    """
    tol = resolve_tol(tol)
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.ndim == 1:
        vectors = vectors.reshape(-1, 1)
    n = vectors.shape[0]
    if vectors.shape[1] == 0 or max_abs(vectors) == 0.0:
        return Subspace(n, np.zeros((n, 0), dtype=complex))

    u, s, _ = sla.svd(vectors, full_matrices=False)
    rank = int(np.sum(s > tol * s[0]))
    return Subspace(n, u[:, :rank])


def projection(s: Subspace) -> np.ndarray:
    """正交投影 p_S = B B†"""
    return s.basis @ s.basis.conj().T


def is_projection(p, tol: Optional[float] = None) -> Tuple[bool, float]:
    """幂等且 Hermite（容差 τ），返回 (是否投影, 残差)"""
    tol = resolve_tol(tol)
    p = require_square(p, "projection")
    res = max(max_abs(p @ p - p), max_abs(p - p.conj().T))
    return res <= tol * max(1.0, max_abs(p)), res


def same_subspace(s1: Subspace, s2: Subspace, tol: Optional[float] = None) -> Tuple[bool, float]:
    """通过投影矩阵比较两个子空间"""
    tol = resolve_tol(tol)
    if s1.ambient_dim != s2.ambient_dim:
        return False, float("inf")
    res = residual(projection(s1), projection(s2))
    return res <= tol, res


@dataclass(frozen=True)
class GramQuotient:
    """Gram 矩阵的商空间实现：embedding† embedding = gram"""
    gram: np.ndarray
    rank: int
    embedding: np.ndarray

    def coordinates(self, coefficients) -> np.ndarray:
        """生成元线性组合的商空间坐标"""
        return self.embedding @ np.asarray(coefficients, dtype=complex)

    def reproduction_residual(self) -> float:
        return residual(self.embedding.conj().T @ self.embedding, self.gram)


def gram_quotient(gram, tol: Optional[float] = None) -> GramQuotient:
    """
    对半正定 Gram 矩阵做商空间分解

    Args:
        gram: n×n Hermite 半正定矩阵
        tol: 半正定判定容差

    Returns:
        GramQuotient，embedding 的第 i 列是第 i 个生成元的坐标

    特征值截断 n·ε·λ_max，零空间方向映射为零向量。
    """
    gram = require_square(gram, "gram")
    report = psd_check(gram, tol)
    if not report.is_psd:
        logger.error(f"Gram 矩阵不是半正定的: λ_min={report.min_eigenvalue:.3e}")
        raise PositivityError("Gram 矩阵不是半正定的", report.min_eigenvalue)

    n = gram.shape[0]
    if n == 0:
        return GramQuotient(gram, 0, np.zeros((0, 0), dtype=complex))

    eigenvalues, eigenvectors = sla.eigh(hermitian_part(gram))
    lam_max = float(eigenvalues[-1])
    cutoff = n * EPS * lam_max
    keep = eigenvalues > cutoff if lam_max > 0 else np.zeros(n, dtype=bool)
    kept_values = eigenvalues[keep][::-1]
    kept_vectors = eigenvectors[:, keep][:, ::-1]
    embedding = np.sqrt(kept_values)[:, None] * kept_vectors.conj().T
    logger.debug(f"Gram 商空间: n={n}, 秩={embedding.shape[0]}")
    return GramQuotient(gram, int(embedding.shape[0]), embedding)


def smallest_singular_value(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(sla.svdvals(m)[-1])


def require_invertible(g: np.ndarray, name: str = "pairing", tol: Optional[float] = None) -> np.ndarray:
    """检查配对矩阵可逆（σ_min > τ·σ_max），否则抛出 PairingError"""
    tol = resolve_tol(tol)
    g = as_matrix(g, name)
    if g.shape[0] != g.shape[1] or g.shape[0] == 0:
        logger.error(f"{name} 不是非空方阵: {g.shape}")
        raise PairingError(f"{name} 不是非空方阵 {g.shape}", 0.0)
    s = sla.svdvals(g)
    if s[-1] <= tol * s[0]:
        logger.error(f"{name} 奇异: σ_min={s[-1]:.3e}")
        raise PairingError(f"{name} 奇异", float(s[-1]))
    return g


def pairing_adjoint(op, source_pairing, target_pairing) -> np.ndarray:
    """
    配对意义下的伴随

    Args:
        op: 从源纤维到目标纤维的矩阵
        source_pairing: 源纤维上的配对矩阵 G_source
        target_pairing: 目标纤维上的配对矩阵 G_target

    Returns:
        满足 (op ξ | η)_target = (ξ | A η)_source 的唯一 A = (G_source†)⁻¹ op† G_target†
    """
    op = as_matrix(op, "op")
    g_src = require_invertible(source_pairing, "source_pairing")
    g_tgt = require_invertible(target_pairing, "target_pairing")
    if op.shape[1] != g_src.shape[1] or op.shape[0] != g_tgt.shape[1]:
        logger.error(f"伴随维数不匹配: op {op.shape}, G_source {g_src.shape}, G_target {g_tgt.shape}")
        raise DimensionError(
            f"伴随维数不匹配: op {op.shape}, G_source {g_src.shape}, G_target {g_tgt.shape}")
    return sla.solve(g_src.conj().T, op.conj().T @ g_tgt.conj().T)


@dataclass(frozen=True)
class FormBound:
    """二次型比较结果: pulled ≤ M·source"""
    is_bounded: bool
    least_M: float
    null_residual: float


def form_bound(pulled, source, tol: Optional[float] = None) -> FormBound:
    """
    满足 pulled ≤ M·source 的最小 M

    在 source 的值域上取广义特征值的最大值；source 的零空间方向
    必须同时是 pulled 的零方向，否则不存在有限的 M。
    """
    tol = resolve_tol(tol)
    pulled = hermitian_part(require_square(pulled, "pulled"))
    source = hermitian_part(require_square(source, "source"))
    if pulled.shape != source.shape:
        raise DimensionError(f"二次型维数不一致: {pulled.shape} vs {source.shape}")
    if source.shape[0] == 0:
        return FormBound(True, 0.0, 0.0)

    eigenvalues, eigenvectors = sla.eigh(source)
    lam_max = max(float(eigenvalues[-1]), 0.0)
    keep = eigenvalues > tol * lam_max if lam_max > 0 else np.zeros(len(eigenvalues), dtype=bool)

    null_vectors = eigenvectors[:, ~keep]
    null_residual = max_abs(null_vectors.conj().T @ pulled @ null_vectors) if null_vectors.size else 0.0
    scale = max(1.0, max_abs(pulled), lam_max)
    if null_residual > tol * scale:
        logger.debug(f"拉回二次型在源零空间上非零: {null_residual:.3e}")
        return FormBound(False, float("inf"), null_residual)

    if not np.any(keep):
        return FormBound(True, 0.0, null_residual)

    range_vectors = eigenvectors[:, keep]
    inv_sqrt = 1.0 / np.sqrt(eigenvalues[keep])
    whitened = inv_sqrt[:, None] * (range_vectors.conj().T @ pulled @ range_vectors) * inv_sqrt[None, :]
    least_m = max(float(sla.eigvalsh(hermitian_part(whitened))[-1]), 0.0)
    return FormBound(True, least_m, null_residual)


def pseudo_inverse(m: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Moore-Penrose 伪逆，奇异值相对截断 τ"""
    tol = resolve_tol(tol)
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=complex)
    return sla.pinv(m, rtol=tol)


def spectral_norm(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(sla.svdvals(m)[0])
