"""
再生(−*)-核：分块表、正定性判定、配对伴随与正核锥运算。

核 K 在每对点 (s, t) 上给出矩阵 K(s,t): D_t → D_s，形状 dim(s) × dim(t)。
"""
from dataclasses import dataclass
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

import numpy as np

from LikeHermitianBundle.bundle_core import Bundle, same_bundle
from LinearAlgebra.linalg_core import as_matrix, max_abs, pairing_adjoint, psd_check, residual
from utils.config_manager import resolve_tol
from utils.exceptions import BundleMismatchError, DimensionError, IncompleteKernelError
from utils.logger import LogManager

logger = LogManager.get_logger("KC")

Point = Hashable
BlockKey = Tuple[Point, Point]


@dataclass(frozen=True, eq=False)
class Kernel:
    """丛上的两点截面 K(s,t)"""
    bundle: Bundle
    blocks: Mapping[BlockKey, np.ndarray]

    def __post_init__(self):
        for (s, t), block in self.blocks.items():
            if s not in self.bundle.base or t not in self.bundle.base:
                raise DimensionError(f"分块 ({s},{t}) 引用了未知点")
            expected = (self.bundle.dim(s), self.bundle.dim(t))
            if block.shape != expected:
                raise DimensionError(f"分块 ({s},{t}) 形状 {block.shape} 应为 {expected}")

    @property
    def points(self):
        return self.bundle.points

    def missing_blocks(self) -> List[BlockKey]:
        return [(s, t) for s in self.points for t in self.points if (s, t) not in self.blocks]

    def require_complete(self) -> "Kernel":
        missing = self.missing_blocks()
        if missing:
            logger.error(f"核分块不完整, 缺少 {len(missing)} 个")
            raise IncompleteKernelError(missing)
        return self

    def block(self, s: Point, t: Point) -> np.ndarray:
        try:
            return self.blocks[(s, t)]
        except KeyError:
            raise IncompleteKernelError([(s, t)]) from None


def make_kernel(bundle: Bundle, blocks: Mapping[BlockKey, object]) -> Kernel:
    mats = {key: as_matrix(value, f"K{key}") for key, value in blocks.items()}
    return Kernel(bundle, mats)


def kernel_from_function(bundle: Bundle, func) -> Kernel:
    """由 func(s, t) -> 矩阵 生成完整分块表"""
    return make_kernel(bundle, {(s, t): func(s, t) for s in bundle.points for t in bundle.points})


def positivity_matrix(k: Kernel) -> np.ndarray:
    """
    正定性判定用的分块矩阵 M，M_{lj} = G_{t_l} K(t_l, t_j*)

    行列均按 (t_l, D_{t_l*} 的基向量) 编号。
    """
    k.require_complete()
    b = k.bundle
    rows = []
    for tl in b.points:
        g = b.G(tl)
        rows.append([g @ k.block(tl, b.star(tj)) for tj in b.points])
    return np.block(rows)


@dataclass(frozen=True)
class PositivityReport:
    positive: bool
    min_eigenvalue: float
    hermitian: bool


def check_positive(k: Kernel, tol: Optional[float] = None) -> PositivityReport:
    """
    (−*)-正定性判定

    有限点集上遍历全部纤维基向量等价于定义中的全称量词（半双线性）。
    """
    m = positivity_matrix(k)
    report = psd_check(m, tol)
    logger.debug(f"正定性: λ_min={report.min_eigenvalue:.3e}, Hermite={report.is_hermitian}")
    return PositivityReport(report.is_psd, report.min_eigenvalue, report.is_hermitian)


def kernel_adjoint(k: Kernel, s: Point, t: Point) -> np.ndarray:
    """
    K(s,t) 关于配对的伴随 K(s,t)^{-*}: D_{s*} → D_{t*}

    对正核满足 K(s,t)^{-*} = K(t*, s*)。
    """
    b = k.bundle
    return pairing_adjoint(k.block(s, t), b.G(t), b.G(s))


def exchange_residual(k: Kernel) -> float:
    """max_{s,t} ‖K(s,t)^{-*} − K(t*, s*)‖"""
    k.require_complete()
    b = k.bundle
    worst = 0.0
    for s in b.points:
        for t in b.points:
            worst = max(worst, residual(kernel_adjoint(k, s, t), k.block(b.star(t), b.star(s))))
    return worst


def diagonal_positivity(k: Kernel, tol: Optional[float] = None) -> Dict[Point, float]:
    """每个点上 G_s K(s, s*) 的最小特征值（正核应全部非负）"""
    b = k.bundle
    return {s: psd_check(b.G(s) @ k.block(s, b.star(s)), tol).min_eigenvalue for s in b.points}


def kernel_difference(k1: Kernel, k2: Kernel) -> Tuple[float, Optional[BlockKey]]:
    """最大分块残差及其位置"""
    worst, where = -1.0, None
    for s in k1.points:
        for t in k1.points:
            res = residual(k1.block(s, t), k2.block(s, t))
            if res > worst:
                worst, where = res, (s, t)
    return max(worst, 0.0), where


def kernel_sum(k1: Kernel, k2: Kernel) -> Kernel:
    """正核锥中的加法"""
    if not same_bundle(k1.bundle, k2.bundle):
        logger.error("核相加失败: 丛不一致")
        raise BundleMismatchError("核相加失败: 丛不一致")
    k1.require_complete()
    k2.require_complete()
    return Kernel(k1.bundle, {key: k1.blocks[key] + k2.blocks[key] for key in k1.blocks})


def kernel_scale(k: Kernel, c: float) -> Kernel:
    """非负数乘"""
    if c < 0:
        logger.error(f"正核锥只允许非负数乘: c={c}")
        raise ValueError(f"正核锥只允许非负数乘: c={c}")
    return Kernel(k.bundle, {key: c * block for key, block in k.blocks.items()})


def max_block_norm(k: Kernel) -> float:
    return max((max_abs(b) for b in k.blocks.values()), default=0.0)


def scaled_tolerance(k: Kernel, tol: Optional[float] = None) -> float:
    """相对容差乘以核的规模"""
    return resolve_tol(tol) * max(1.0, max_block_norm(k))
