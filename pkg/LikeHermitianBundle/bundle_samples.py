"""
随机丛与随机配对生成器，供性质测试和 property 套件使用。
"""
from typing import Dict, Optional

import numpy as np

from LikeHermitianBundle.bundle_core import Bundle, make_bundle
from LinearAlgebra.random_matrices import random_hermitian_pd, random_invertible


def random_involution(rng: np.random.Generator, points) -> Dict:
    """随机对合：约一半的点两两配对，其余自对偶"""
    order = list(rng.permutation(len(points)))
    involution = {}
    while order:
        i = order.pop()
        if order and rng.random() < 0.5:
            j = order.pop()
            involution[points[i]] = points[j]
            involution[points[j]] = points[i]
        else:
            involution[points[i]] = points[i]
    return involution


def random_bundle(rng: np.random.Generator, n_points: int, max_fiber_dim: int,
                  involutive: bool = False, identity_pairings: bool = False,
                  prefix: str = "p") -> Bundle:
    """
    随机类 Hermite 丛

    Args:
        rng: 随机数生成器
        n_points: 点数
        max_fiber_dim: 纤维维数上界
        involutive: 是否使用非平凡对合
        identity_pairings: 是否所有配对取单位矩阵（仅 σ = id 时有意义）
        prefix: 点名前缀

    Returns:
        满足 G_{z*} = G_z† 的 Bundle
    """
    points = [f"{prefix}{i}" for i in range(n_points)]
    involution = random_involution(rng, points) if involutive else {z: z for z in points}

    dims: Dict[str, int] = {}
    pairings: Dict[str, np.ndarray] = {}
    for z in points:
        w = involution[z]
        if z in dims:
            continue
        d = int(rng.integers(1, max_fiber_dim + 1))
        dims[z] = dims[w] = d
        if identity_pairings and w == z:
            pairings[z] = np.eye(d, dtype=complex)
        elif w == z:
            pairings[z] = random_hermitian_pd(rng, d)
        else:
            g = random_invertible(rng, d)
            pairings[z] = g
            pairings[w] = g.conj().T
    return make_bundle(points, dims, involution, pairings)


def perturb_pairing(b: Bundle, point, amount: float = 0.5,
                    rng: Optional[np.random.Generator] = None) -> Bundle:
    """破坏某点的共轭对称性（负面测试用）"""
    pairings = dict(b.pairing)
    shift = np.full(pairings[point].shape, amount, dtype=complex)
    if rng is not None:
        shift = amount * rng.standard_normal(pairings[point].shape)
    pairings[point] = pairings[point] + 1j * shift
    return Bundle(b.base, dict(b.fiber_dim), pairings)
