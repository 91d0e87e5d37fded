"""
类 Hermite 向量丛的有限实现及其(反)态射。

基空间是带对合 z ↦ z* 的有限点集，纤维为坐标空间 C^d，
每个点 z 存储配对矩阵 G_z（形状 dim(z*) × dim(z)），(ξ|η)_{z,z*} = η† G_z ξ。
"""
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from LinearAlgebra.linalg_core import (as_matrix, max_abs, pairing_adjoint, residual,
                                       smallest_singular_value)
from LinearAlgebra.semilinear import SemilinearMap
from utils.config_manager import resolve_tol
from utils.exceptions import BundleMismatchError, DimensionError
from utils.logger import LogManager

logger = LogManager.get_logger("BD")

Point = Hashable


@dataclass(frozen=True)
class BaseSet:
    """有限基空间：有序点列 + 对合"""
    points: Tuple[Point, ...]
    involution: Mapping[Point, Point]

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise DimensionError(f"基空间含重复点: {list(self.points)}")
        missing = [p for p in self.points if p not in self.involution]
        if missing:
            raise DimensionError(f"对合未定义于点: {missing}")
        outside = [p for p in self.points if self.involution[p] not in self.involution]
        if outside:
            raise DimensionError(f"对合的像不在基空间中: {outside}")

    def star(self, z: Point) -> Point:
        return self.involution[z]

    def __contains__(self, z) -> bool:
        return z in self.involution

    def __len__(self) -> int:
        return len(self.points)

    def orbits(self) -> List[Tuple[Point, ...]]:
        """对合轨道：自对偶点为单元组，其余为点对"""
        seen = set()
        result = []
        for z in self.points:
            if z in seen:
                continue
            w = self.star(z)
            seen.update({z, w})
            result.append((z,) if w == z else (z, w))
        return result


@dataclass(frozen=True, eq=False)
class Bundle:
    """类 Hermite 丛：纤维维数 + 配对矩阵"""
    base: BaseSet
    fiber_dim: Mapping[Point, int]
    pairing: Mapping[Point, np.ndarray]

    def __post_init__(self):
        for z in self.base.points:
            d = self.fiber_dim.get(z)
            if d is None or int(d) < 1:
                raise DimensionError(f"点 {z} 的纤维维数必须为正整数, 实际为 {d}")
            if z not in self.pairing:
                raise DimensionError(f"点 {z} 缺少配对矩阵")
            g = self.pairing[z]
            expected = (self.fiber_dim[self.base.star(z)], d)
            if g.shape != expected:
                raise DimensionError(f"点 {z} 的配对矩阵形状 {g.shape} 应为 {expected}")

    @property
    def points(self) -> Tuple[Point, ...]:
        return self.base.points

    def star(self, z: Point) -> Point:
        return self.base.star(z)

    def dim(self, z: Point) -> int:
        return int(self.fiber_dim[z])

    def G(self, z: Point) -> np.ndarray:
        return self.pairing[z]

    def total_dim(self) -> int:
        return sum(self.dim(z) for z in self.points)

    def offsets(self) -> Dict[Point, int]:
        """生成元编号中每个点的起始位置"""
        result, start = {}, 0
        for z in self.points:
            result[z] = start
            start += self.dim(z)
        return result

    def is_hermitian(self, tol: Optional[float] = None) -> bool:
        """对合为恒等且每个 G_z 为 Hermite 正定"""
        tol = resolve_tol(tol)
        for z in self.points:
            if self.star(z) != z:
                return False
            g = self.G(z)
            if max_abs(g - g.conj().T) > tol * max(1.0, max_abs(g)):
                return False
            if np.linalg.eigvalsh((g + g.conj().T) / 2)[0] <= tol * max(1.0, max_abs(g)):
                return False
        return True


def make_bundle(points: Sequence[Point], fiber_dims: Mapping[Point, int],
                involution: Optional[Mapping[Point, Point]] = None,
                pairings: Optional[Mapping[Point, object]] = None) -> Bundle:
    """
    构造丛；省略对合时取恒等，省略配对时取单位矩阵

    Args:
        points: 点列
        fiber_dims: 每个点的纤维维数
        involution: 对合
        pairings: 每个点的配对矩阵

    Returns:
        Bundle
    """
    points = tuple(points)
    involution = dict(involution) if involution is not None else {z: z for z in points}
    base = BaseSet(points, involution)
    dims = {z: int(fiber_dims[z]) for z in points}
    mats = {}
    for z in points:
        if pairings is not None and z in pairings:
            mats[z] = as_matrix(pairings[z], f"pairing[{z}]")
        else:
            if dims[z] != dims[involution[z]]:
                raise DimensionError(f"点 {z} 与 {involution[z]} 纤维维数不同，无法使用默认配对")
            mats[z] = np.eye(dims[z], dtype=complex)
    return Bundle(base, dims, mats)


def hermitian_bundle(points: Sequence[Point], fiber_dims, pairings=None) -> Bundle:
    """σ = id 的 Hermite 丛，默认配对为标准内积"""
    if isinstance(fiber_dims, int):
        fiber_dims = {z: fiber_dims for z in points}
    return make_bundle(points, fiber_dims, None, pairings)


@dataclass(frozen=True)
class BundleViolation:
    kind: str
    point: Point
    residual: float


@dataclass
class BundleReport:
    valid: bool
    violations: List[BundleViolation] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((v.residual for v in self.violations), default=0.0)


def validate_bundle(b: Bundle, tol: Optional[float] = None) -> BundleReport:
    """
    校验类 Hermite 丛的公理

    报告对合非对合、配对奇异、共轭对称性 G_{z*} = G_z† 被破坏三类问题。
    """
    tol = resolve_tol(tol)
    violations: List[BundleViolation] = []
    for z in b.points:
        w = b.star(z)
        if b.star(w) != z:
            violations.append(BundleViolation("involution", z, 1.0))
            continue
        g = b.G(z)
        s = np.linalg.svd(g, compute_uv=False)
        if g.shape[0] != g.shape[1] or s[-1] <= tol * s[0]:
            violations.append(BundleViolation("duality", z, smallest_singular_value(g)))
        if b.dim(w) == g.shape[0]:
            res = max_abs(b.G(w) - g.conj().T)
            if res > tol * max(1.0, max_abs(g)):
                violations.append(BundleViolation("conjugate_symmetry", z, res))

    for v in violations:
        logger.debug(f"丛公理违例: {v.kind} @ {v.point}, 残差 {v.residual:.3e}")
    return BundleReport(not violations, violations)


@dataclass(frozen=True, eq=False)
class BundleMorphism:
    """丛(反)态射 Θ = (δ, ζ)"""
    source: Bundle
    target: Bundle
    base_map: Mapping[Point, Point]
    fiber_maps: Mapping[Point, np.ndarray]
    antilinear: bool = False

    def __post_init__(self):
        for z in self.source.points:
            if z not in self.base_map:
                raise DimensionError(f"底映射未定义于点 {z}")
            image = self.base_map[z]
            if image not in self.target.base:
                raise BundleMismatchError(f"点 {z} 的像 {image} 不在目标基空间中")
            if self.base_map[self.source.star(z)] != self.target.star(image):
                logger.error(f"底映射与对合不交换: ζ({z}*) ≠ ζ({z})*")
                raise BundleMismatchError(f"底映射与对合不交换: ζ({z}*) ≠ ζ({z})*")
            m = self.fiber_maps.get(z)
            expected = (self.target.dim(image), self.source.dim(z))
            if m is None or m.shape != expected:
                shape = None if m is None else m.shape
                raise DimensionError(f"点 {z} 的纤维映射形状 {shape} 应为 {expected}")

    def zeta(self, z: Point) -> Point:
        return self.base_map[z]

    def delta(self, z: Point) -> SemilinearMap:
        return SemilinearMap(self.fiber_maps[z], self.antilinear)


def make_morphism(source: Bundle, target: Bundle, base_map: Mapping[Point, Point],
                  fiber_maps: Mapping[Point, object], antilinear: bool = False) -> BundleMorphism:
    mats = {z: as_matrix(m, f"fiber_map[{z}]") for z, m in fiber_maps.items()}
    return BundleMorphism(source, target, dict(base_map), mats, bool(antilinear))


def identity_morphism(b: Bundle) -> BundleMorphism:
    return BundleMorphism(b, b, {z: z for z in b.points},
                          {z: np.eye(b.dim(z), dtype=complex) for z in b.points}, False)


def quasi_adjoint(m: BundleMorphism, z: Point) -> np.ndarray:
    """
    拟伴随 (δ_z)^{-*}: D_{ζ(z)*} → D̃_{z*}

    线性情形返回 A 使 (δξ|η) = (ξ|Aη)；共轭线性情形返回 N，
    对应的映射为 η ↦ N conj(η)，满足 (δξ|η) = conj((ξ|N conj η))。
    """
    g_src = m.source.G(z)
    g_tgt = m.target.G(m.zeta(z))
    delta = m.fiber_maps[z]
    if not m.antilinear:
        return pairing_adjoint(delta, g_src, g_tgt)
    # ξ ↦ M conj ξ 的对偶：N = (G̃†)⁻¹ Mᵀ Gᵀ
    return pairing_adjoint(delta.conj(), g_src, g_tgt.conj())


def isometry_residual(m: BundleMorphism) -> float:
    """max_z ‖G̃_z − δ_{z*}† G_{ζz} δ_z‖（共轭线性时取共轭）"""
    worst = 0.0
    for z in m.source.points:
        d_z = m.fiber_maps[z]
        d_star = m.fiber_maps[m.source.star(z)]
        pulled = d_star.conj().T @ m.target.G(m.zeta(z)) @ d_z
        if m.antilinear:
            pulled = pulled.conj()
        worst = max(worst, residual(pulled, m.source.G(z)))
    return worst


def is_isometry(m: BundleMorphism, tol: Optional[float] = None) -> Tuple[bool, float]:
    """配对保持判定，返回 (是否等距, 最大残差)"""
    tol = resolve_tol(tol)
    res = isometry_residual(m)
    return res <= tol, res


def same_bundle(a: Bundle, b: Bundle, tol: Optional[float] = None) -> bool:
    if a is b:
        return True
    tol = resolve_tol(tol)
    if a.points != b.points:
        return False
    for z in a.points:
        if a.star(z) != b.star(z) or a.dim(z) != b.dim(z):
            return False
        if max_abs(a.G(z) - b.G(z)) > tol * max(1.0, max_abs(a.G(z))):
            return False
    return True


def compose(m1: BundleMorphism, m2: BundleMorphism) -> BundleMorphism:
    """m1 ∘ m2，要求 m2 的目标丛等于 m1 的源丛"""
    if not same_bundle(m2.target, m1.source):
        logger.error("复合失败: m2 的目标丛与 m1 的源丛不一致")
        raise BundleMismatchError("复合失败: m2 的目标丛与 m1 的源丛不一致")
    base_map = {z: m1.zeta(m2.zeta(z)) for z in m2.source.points}
    fiber_maps = {}
    for z in m2.source.points:
        composed = m1.delta(m2.zeta(z)).compose(m2.delta(z))
        fiber_maps[z] = composed.matrix
    return BundleMorphism(m2.source, m1.target, base_map, fiber_maps, m1.antilinear != m2.antilinear)


def apply_morphism(m: BundleMorphism, z: Point, xi) -> Tuple[Point, np.ndarray]:
    """Θ 作用于 D_z 中的向量，返回 (ζ(z), δ_z ξ)"""
    if z not in m.source.base:
        raise DimensionError(f"未知点: {z}")
    xi = np.asarray(xi, dtype=complex)
    if xi.shape[0] != m.source.dim(z):
        raise DimensionError(f"向量维数 {xi.shape[0]} 与纤维维数 {m.source.dim(z)} 不符")
    return m.zeta(z), m.delta(z).apply(xi)


@dataclass
class AdjointabilityReport:
    """等距双射的可伴随性：拟伴随等于对合点处 δ 的逆"""
    bijective: bool
    isometry: bool
    isometry_residual: float
    inverse_residual: float

    @property
    def adjointable(self) -> bool:
        return self.bijective and self.isometry


def is_adjointable(m: BundleMorphism, tol: Optional[float] = None) -> AdjointabilityReport:
    """检查纤维双射等距这一充分条件，并验证 (δ_z)^{-*} = (δ_{z*})⁻¹"""
    tol = resolve_tol(tol)
    bijective = all(
        m.fiber_maps[z].shape[0] == m.fiber_maps[z].shape[1]
        and smallest_singular_value(m.fiber_maps[z]) > tol * max(1.0, max_abs(m.fiber_maps[z]))
        for z in m.source.points)
    iso, iso_res = is_isometry(m, tol)
    inv_res = float("inf")
    if bijective:
        inv_res = 0.0
        for z in m.source.points:
            expected = m.delta(m.source.star(z)).inverse().matrix
            inv_res = max(inv_res, residual(quasi_adjoint(m, z), expected))
    return AdjointabilityReport(bijective, iso, iso_res, inv_res)
