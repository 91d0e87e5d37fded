"""
经典标量核与随机正核/随机态射生成器。

标量核定义在平凡线丛上（σ = id，G = [1]），点即为采样值本身。
"""
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from LikeHermitianBundle.bundle_core import Bundle, BundleMorphism, hermitian_bundle
from LinearAlgebra.random_matrices import random_complex
from ReproducingKernel.kernel_core import Kernel
from utils.exceptions import DimensionError
from utils.logger import LogManager

logger = LogManager.get_logger("KC")


def szego(z: complex, w: complex) -> complex:
    """单位圆盘 Szegő 核 1/(1 − z·conj(w))"""
    return 1.0 / (1.0 - z * np.conj(w))


def bergman(z: complex, w: complex) -> complex:
    """单位圆盘 Bergman 核 1/(1 − z·conj(w))²"""
    return 1.0 / (1.0 - z * np.conj(w)) ** 2


def gaussian(x: complex, y: complex, gamma: float = 1.0) -> complex:
    """Gaussian 核 exp(−γ|x − y|²)"""
    return np.exp(-gamma * abs(x - y) ** 2)


KERNEL_FAMILIES: Dict[str, Callable] = {
    "szego": szego,
    "bergman": bergman,
    "gaussian": gaussian,
}


def scalar_kernel(points: Sequence, function: Callable[[complex, complex], complex]) -> Kernel:
    """平凡线丛上的标量核 K(s,t) = [function(s, t)]"""
    points = tuple(points)
    if len(set(points)) != len(points):
        raise DimensionError(f"采样点重复: {points}")
    bundle = hermitian_bundle(points, 1)
    blocks = {(s, t): np.array([[function(s, t)]], dtype=complex) for s in points for t in points}
    return Kernel(bundle, blocks)


def family_kernel(family: str, samples: Sequence, **parameters) -> Kernel:
    """按名称构造经典核"""
    if family not in KERNEL_FAMILIES:
        raise ValueError(f"不支持的核族: {family}. 可选值: {list(KERNEL_FAMILIES.keys())}")
    func = KERNEL_FAMILIES[family]
    if family in ("szego", "bergman"):
        outside = [z for z in samples if abs(z) >= 1]
        if outside:
            raise ValueError(f"{family} 核的采样点必须位于单位圆盘内: {outside}")
    return scalar_kernel(samples, lambda s, t: func(s, t, **parameters))


def random_positive_kernel(rng: np.random.Generator, bundle: Bundle,
                           rank: Optional[int] = None) -> Kernel:
    """
    随机正核 K(s,t) = G_s⁻¹ X_{s*}† X_t

    Args:
        rng: 随机数生成器
        bundle: 满足 G_{s*} = G_s† 的丛
        rank: 辅助空间维数，默认比生成元总数多 2（Gram 满秩）

    Returns:
        Gram 矩阵为 X† X 的正核
    """
    h = rank if rank is not None else bundle.total_dim() + 2
    xs = {s: random_complex(rng, (h, bundle.dim(s))) for s in bundle.points}
    blocks = {}
    for s in bundle.points:
        left = np.linalg.solve(bundle.G(s), xs[bundle.star(s)].conj().T)
        for t in bundle.points:
            blocks[(s, t)] = left @ xs[t]
    return Kernel(bundle, blocks)


def random_morphism(rng: np.random.Generator, source: Bundle, target: Bundle,
                    antilinear: bool = False) -> BundleMorphism:
    """
    随机(反)态射，底映射保持对合轨道结构

    自对偶点映到目标中的自对偶点，点对 {s, s*} 映到 {u, u*}。
    """
    self_dual = [u for u in target.points if target.star(u) == u]
    base_map = {}
    for orbit in source.base.orbits():
        if len(orbit) == 1:
            if not self_dual:
                raise DimensionError("目标丛没有自对偶点，无法映射源丛的自对偶点")
            base_map[orbit[0]] = self_dual[int(rng.integers(len(self_dual)))]
        else:
            u = target.points[int(rng.integers(len(target.points)))]
            base_map[orbit[0]] = u
            base_map[orbit[1]] = target.star(u)
    fiber_maps = {s: random_complex(rng, (target.dim(base_map[s]), source.dim(s)))
                  for s in source.points}
    return BundleMorphism(source, target, base_map, fiber_maps, antilinear)
