"""
再生核希尔伯特空间 H^K 的有限维实现。

生成元为每个点的全部纤维基向量 K_{e_i}，Gram 矩阵
    Γ[(s,i),(t,j)] = (K_{e_j@t} | K_{e_i@s}) = (G_{s*} K(s*, t))[i, j]，
商空间坐标由 gram_quotient 给出，内积 <x, y> = y† x。
"""
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Tuple

import numpy as np
import scipy.linalg as sla

from LinearAlgebra.linalg_core import GramQuotient, gram_quotient, max_abs, residual
from ReproducingKernel.kernel_core import Kernel, check_positive
from utils.exceptions import DimensionError, PositivityError
from utils.logger import LogManager

logger = LogManager.get_logger("KC")

Point = Hashable


@dataclass(frozen=True, eq=False)
class Rkhs:
    kernel: Kernel
    generators: Tuple[Tuple[Point, int], ...]
    gram: np.ndarray
    quotient: GramQuotient
    offsets: Dict[Point, int]

    @property
    def dim(self) -> int:
        """H^K 的维数 = Gram 的数值秩"""
        return self.quotient.rank

    @property
    def embedding(self) -> np.ndarray:
        return self.quotient.embedding

    def columns(self, s: Point) -> np.ndarray:
        """点 s 处生成元的坐标 E_s（dim × fiber_dim(s)）"""
        if s not in self.offsets:
            raise DimensionError(f"未知点: {s}")
        start = self.offsets[s]
        return self.embedding[:, start:start + self.kernel.bundle.dim(s)]

    def generator_index(self, s: Point, i: int) -> int:
        return self.offsets[s] + i


def gram_matrix(k: Kernel) -> np.ndarray:
    """按内积公式组装生成元 Gram 矩阵"""
    k.require_complete()
    b = k.bundle
    rows = []
    for s in b.points:
        g = b.G(b.star(s))
        rows.append([g @ k.block(b.star(s), t) for t in b.points])
    return np.block(rows)


def build_rkhs(k: Kernel, tol: Optional[float] = None) -> Rkhs:
    """
    构造 H^K

    Args:
        k: 正核
        tol: 正定性容差

    Returns:
        Rkhs，dim 为 Gram 的数值秩
    """
    report = check_positive(k, tol)
    if not report.positive:
        logger.error(f"核不是(−*)-正定的: λ_min={report.min_eigenvalue:.3e}")
        raise PositivityError("核不是(−*)-正定的", report.min_eigenvalue)

    b = k.bundle
    generators = tuple((s, i) for s in b.points for i in range(b.dim(s)))
    gram = gram_matrix(k)
    quotient = gram_quotient(gram, tol)
    logger.debug(f"H^K: 生成元 {len(generators)} 个, 维数 {quotient.rank}")
    return Rkhs(k, generators, gram, quotient, b.offsets())


def section_coordinates(r: Rkhs, s: Point, xi) -> np.ndarray:
    """K_ξ = K(·, s)ξ 的商空间坐标"""
    xi = np.asarray(xi, dtype=complex)
    cols = r.columns(s)
    if xi.shape[0] != cols.shape[1]:
        raise DimensionError(f"向量维数 {xi.shape[0]} 与纤维维数 {cols.shape[1]} 不符")
    return cols @ xi


def inner(r: Rkhs, x, y) -> complex:
    """<x, y> = y† x"""
    return complex(np.vdot(np.asarray(y), np.asarray(x)))


def evaluate(r: Rkhs, F, t: Point) -> np.ndarray:
    """
    截面在点 t 的取值 F(t) ∈ D_t

    F(t) = G_t⁻¹ E_{t*}† F；对 F = K_ξ（ξ ∈ D_s）给出 K(t,s)ξ。
    """
    b = r.kernel.bundle
    if t not in b.base:
        raise DimensionError(f"未知点: {t}")
    F = np.asarray(F, dtype=complex)
    if F.shape[0] != r.dim:
        raise DimensionError(f"坐标维数 {F.shape[0]} 与 H^K 维数 {r.dim} 不符")
    return sla.solve(b.G(t), r.columns(b.star(t)).conj().T @ F)


def reproducing_residual(r: Rkhs) -> float:
    """所有生成元上 F(t) 与 K(t,s)ξ 的最大偏差"""
    b = r.kernel.bundle
    worst = 0.0
    for s in b.points:
        cols = r.columns(s)
        for t in b.points:
            values = evaluate(r, cols, t)
            worst = max(worst, residual(values, r.kernel.block(t, s)))
    return worst


def inner_product_residual(r: Rkhs) -> float:
    """坐标内积与 Gram 公式的偏差（相对 Gram 规模）"""
    return r.quotient.reproduction_residual() / max(1.0, max_abs(r.gram))


def null_generators(r: Rkhs, tol: float = 1e-12) -> List[Tuple[Point, int]]:
    """在商空间中映为零的生成元"""
    norms = np.linalg.norm(r.embedding, axis=0) if r.dim else np.zeros(len(r.generators))
    scale = max(1.0, float(np.max(norms)) if norms.size else 1.0)
    return [g for g, n in zip(r.generators, norms) if n <= tol * scale]
