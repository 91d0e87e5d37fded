"""
采样齐性丛 G_A/G_B ×_{G_B} H_B 上的核 K^π，复化万有性与轨道比较。

陪集 s = u_s G_B 以代表元 u_s 存储，纤维坐标取 H_B 的正交归一基 B_H：
    K^π(s,t) = B_H† α(u_s)⁻¹ α(u_t) B_H
    G_s     = (B_H† α(u_s* w_{s*}) B_H)†，w_{s*} 为 u_s^{-*} 所在陪集的代表元
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from LikeHermitianBundle.bundle_core import Bundle, BundleMorphism, make_bundle
from LinearAlgebra.linalg_core import (as_matrix, max_abs, orthonormal_basis, pseudo_inverse, residual,
                                       same_subspace)
from ReproducingKernel.kernel_core import Kernel, kernel_difference, max_block_norm
from ReproducingKernel.pullback_core import pullback
from ReproducingKernel.rkhs_core import build_rkhs
from ReproducingKernel.symmetry_core import ActionSample, equivariance_check
from Universality.universality_core import UniversalityReport, transfer_isometry_residual, transfer_kernel
from utils.config_manager import resolve_tol
from utils.exceptions import DimensionError, KernelToolkitError, PreconditionError
from utils.logger import LogManager

logger = LogManager.get_logger("UV")

Point = Hashable


def same_modulo_phase(a: np.ndarray, b: np.ndarray, tol: Optional[float] = None) -> bool:
    """b = c·a 且 |c| = 1"""
    tol = resolve_tol(tol)
    norm = np.vdot(a, a).real
    if norm == 0.0:
        return max_abs(b) <= tol
    c = np.vdot(a, b) / norm
    return abs(abs(c) - 1.0) <= tol * 10 and residual(b, c * a) <= tol * max(1.0, max_abs(a)) * 10


def finite_group(generators: Sequence, max_order: int = 1000,
                 tol: Optional[float] = None) -> List[np.ndarray]:
    """
    生成元在相位意义下生成的有限群（广度优先），第一个元素为单位元

    Raises:
        KernelToolkitError: 元素个数超过 max_order
    """
    gens = [as_matrix(g, "generator") for g in generators]
    if not gens:
        raise DimensionError("至少需要一个生成元")
    n = gens[0].shape[0]
    elements = [np.eye(n, dtype=complex)]
    frontier = list(elements)
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                y = g @ x
                if not any(same_modulo_phase(e, y, tol) for e in elements):
                    elements.append(y)
                    fresh.append(y)
                    if len(elements) > max_order:
                        logger.error(f"生成的群超过 {max_order} 个元素")
                        raise KernelToolkitError(f"生成的群超过 {max_order} 个元素")
        frontier = fresh
    logger.debug(f"有限群: {len(elements)} 个元素（模相位）")
    return elements


@dataclass(frozen=True, eq=False)
class SampledHomogeneous:
    """(π_A, G_B 成员判定, H_B)"""
    rep: Callable[[np.ndarray], np.ndarray]
    subgroup_test: Callable[[np.ndarray], bool]
    hb_basis: np.ndarray

    @property
    def fiber_dim(self) -> int:
        return int(self.hb_basis.shape[1])

    def restricted(self, u) -> np.ndarray:
        """π_B(u) = B_H† π_A(u) B_H"""
        return self.hb_basis.conj().T @ self.rep(u) @ self.hb_basis

    def invariance_residual(self, u) -> float:
        """‖(I − P) π_A(u) B_H‖，u ∈ G_B 时应为零"""
        image = self.rep(u) @ self.hb_basis
        return max_abs(image - self.hb_basis @ (self.hb_basis.conj().T @ image))


@dataclass(eq=False)
class HomogeneousBundle:
    h: SampledHomogeneous
    labels: Tuple[str, ...]
    representatives: Tuple[np.ndarray, ...]
    bundle: Bundle

    def representative(self, label: str) -> np.ndarray:
        return self.representatives[self.labels.index(label)]

    def locate(self, u) -> Optional[str]:
        """u 所在陪集的标签"""
        for label, rep in zip(self.labels, self.representatives):
            if self.h.subgroup_test(np.linalg.inv(rep) @ u):
                return label
        return None

    def kernel(self) -> Kernel:
        """K^π(s,t) = B_H† α(u_s)⁻¹ α(u_t) B_H"""
        b = self.h.hb_basis
        left = {s: b.conj().T @ np.linalg.inv(self.h.rep(u)) for s, u in zip(self.labels, self.representatives)}
        right = {s: self.h.rep(u) @ b for s, u in zip(self.labels, self.representatives)}
        return Kernel(self.bundle, {(s, t): left[s] @ right[t] for s in self.labels for t in self.labels})

    def transfer(self) -> Dict[str, np.ndarray]:
        """R([(u, f)]) = α(u) f"""
        return {s: self.h.rep(u) @ self.h.hb_basis for s, u in zip(self.labels, self.representatives)}

    def transfer_kernel(self, tol: Optional[float] = None) -> Kernel:
        return transfer_kernel(self.transfer(), self.bundle, tol)


def _star(u: np.ndarray) -> np.ndarray:
    """u^{-*} = (u*)⁻¹"""
    return np.linalg.inv(u.conj().T)


def homogeneous_bundle(h: SampledHomogeneous, cosets: Sequence, prefix: str = "c",
                       tol: Optional[float] = None) -> HomogeneousBundle:
    """
    由陪集代表元构造齐性丛；缺失的 u^{-*} 陪集自动补入

    Raises:
        KernelToolkitError: 代表元列表中有两个元素属于同一陪集
    """
    reps = [as_matrix(u, "coset") for u in cosets]
    if not reps:
        raise DimensionError("陪集列表为空")
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if h.subgroup_test(np.linalg.inv(reps[i]) @ reps[j]):
                logger.error(f"陪集代表元 {i} 与 {j} 属于同一陪集")
                raise KernelToolkitError(f"陪集代表元 {i} 与 {j} 属于同一陪集")

    def find(u):
        return next((i for i, rep in enumerate(reps) if h.subgroup_test(np.linalg.inv(rep) @ u)), None)

    i = 0
    while i < len(reps):
        if find(_star(reps[i])) is None:
            logger.debug(f"补入陪集 u^{{-*}} (代表元 {i})")
            reps.append(_star(reps[i]))
        i += 1

    labels = tuple(f"{prefix}{i}" for i in range(len(reps)))
    involution = {labels[i]: labels[find(_star(u))] for i, u in enumerate(reps)}
    k = h.fiber_dim
    pairings = {}
    for i, u in enumerate(reps):
        w = reps[labels.index(involution[labels[i]])]
        g_elem = u.conj().T @ w
        res = h.invariance_residual(g_elem)
        if res > resolve_tol(tol) * max(1.0, max_abs(h.rep(g_elem))):
            logger.error(f"成员判定与 H_B 不相容: 残差 {res:.3e}")
            raise KernelToolkitError(f"成员判定与 H_B 不相容 (残差 {res:.3e})")
        pairings[labels[i]] = h.restricted(g_elem).conj().T
    bundle = make_bundle(labels, {s: k for s in labels}, involution, pairings)
    logger.debug(f"齐性丛: {len(labels)} 个陪集, 纤维维数 {k}")
    return HomogeneousBundle(h, labels, tuple(reps), bundle)


def homogeneous_kernel(h: SampledHomogeneous, cosets: Sequence, tol: Optional[float] = None) -> Kernel:
    return homogeneous_bundle(h, cosets, tol=tol).kernel()


def group_action(hb: HomogeneousBundle, samples: Sequence,
                 tol: Optional[float] = None) -> List[ActionSample]:
    """
    群元 w 在陪集上的作用：ν(w, s) = w u_s G_B，μ(w, s) = π_B(u_t⁻¹ w u_s)

    Raises:
        KernelToolkitError: 作用越出陪集列表或缺少逆元
    """
    tol = resolve_tol(tol)
    mats = [as_matrix(w, "sample") for w in samples]
    actions = []
    for idx, w in enumerate(mats):
        nu, mu = {}, {}
        for s, u in zip(hb.labels, hb.representatives):
            t = hb.locate(w @ u)
            if t is None:
                logger.error(f"群元 {idx} 把陪集 {s} 映出陪集列表")
                raise KernelToolkitError(f"群元 {idx} 把陪集 {s} 映出陪集列表")
            g_elem = np.linalg.inv(hb.representative(t)) @ w @ u
            nu[s] = t
            mu[s] = hb.h.restricted(g_elem)
        inverse = next((j for j, v in enumerate(mats)
                        if same_modulo_phase(np.eye(w.shape[0]), v @ w, tol)), None)
        if inverse is None:
            logger.error(f"群元 {idx} 的逆不在样本中")
            raise KernelToolkitError(f"群元 {idx} 的逆不在样本中")
        actions.append(ActionSample(idx, nu, mu, inverse))
    return actions


def coset_representatives(group: Sequence, subgroup_test: Callable[[np.ndarray], bool]) -> List[np.ndarray]:
    """群元列表中每个陪集取第一个元素"""
    reps: List[np.ndarray] = []
    for u in group:
        if not any(subgroup_test(np.linalg.inv(r) @ u) for r in reps):
            reps.append(u)
    return reps


def complexified_universality(k: Kernel, actions: Sequence[ActionSample], s0: Point,
                              tol: Optional[float] = None) -> UniversalityReport:
    """
    复化万有性：K(s,t) = (δ̃_{s*})^{-*} Q^C(ζ̃(s), ζ̃(t)) δ̃_t

    群通过 U_u = E D_u E⁺ 作用在 H^K 上；取 ν(v_s, s) = s0 的样本 v_s，U_s = U_{v_s}⁻¹，
        δ̃_s = B0† E_{s0} μ(v_s, s),   Q^C(s,t) = B0† U_s⁻¹ U_t B0,
        G̃_s = B0† U_{s*}† U_s B0
    同时检查 U_u ζ(s) = ζ(ν(u,s))。假设（s0 自对偶、等变性、传递性）不成立时 passed=None。
    """
    b = k.bundle
    tol_u = tol if tol is not None else resolve_tol(None, "universality")
    if s0 not in b.base or b.star(s0) != s0:
        logger.warning(f"基点 {s0} 不是自对偶点")
        return UniversalityReport(None, float("nan"), compatible=False, reason="s0* ≠ s0")
    eq = equivariance_check(k, actions, tol)
    if not eq.passed:
        logger.warning(f"等变性不成立: 残差 {eq.residual:.3e} @ {eq.worst}")
        return UniversalityReport(None, float("nan"), checks={"equivariance": eq.residual},
                                  compatible=False, reason="等变性不成立")
    to_s0 = {}
    for s in b.points:
        a = next((a for a in actions if a.nu[s] == s0), None)
        if a is None:
            logger.warning(f"采样作用不传递: 没有样本把 {s} 映到 {s0}")
            return UniversalityReport(None, float("nan"), checks={"equivariance": eq.residual},
                                      compatible=False, reason=f"作用不传递: {s}")
        to_s0[s] = a

    r = build_rkhs(k, tol)
    e = r.embedding
    e_pinv = pseudo_inverse(e, tol)
    offsets = b.offsets()

    def induced(a: ActionSample) -> np.ndarray:
        d = np.zeros((b.total_dim(), b.total_dim()), dtype=complex)
        for s in b.points:
            row, col = offsets[a.nu[s]], offsets[s]
            d[row:row + b.dim(a.nu[s]), col:col + b.dim(s)] = a.mu[s]
        return e @ d @ e_pinv

    ops = {a.label: induced(a) for a in actions}
    orbit = 0.0
    for a in actions:
        for s in b.points:
            moved = orthonormal_basis(ops[a.label] @ r.columns(s), tol)
            orbit = max(orbit, same_subspace(moved, orthonormal_basis(r.columns(a.nu[s]), tol), tol)[1])

    b0 = orthonormal_basis(r.columns(s0), tol).basis
    dim0 = b0.shape[1]
    u_inv = {s: ops[to_s0[s].label] for s in b.points}
    u_s = {s: pseudo_inverse(u_inv[s], tol) for s in b.points}
    delta = {s: b0.conj().T @ r.columns(s0) @ to_s0[s].mu[s] for s in b.points}
    pairings = {s: b0.conj().T @ u_s[b.star(s)].conj().T @ u_s[s] @ b0 for s in b.points}
    involution = {s: b.star(s) for s in b.points}
    target = make_bundle(b.points, {s: dim0 for s in b.points}, involution, pairings)
    q_c = Kernel(target, {(s, t): b0.conj().T @ u_inv[s] @ u_s[t] @ b0 for s in b.points for t in b.points})
    m = BundleMorphism(b, target, {s: s for s in b.points}, delta, False)
    res, worst = kernel_difference(k, pullback(m, q_c))

    scale = max(1.0, max_block_norm(k))
    checks = {"equivariance": eq.residual, "zeta_orbit": orbit, "pullback": res}
    passed = res <= tol_u * scale and orbit <= tol_u * scale
    if not passed:
        logger.warning(f"复化万有性不成立: 残差 {res:.3e} @ {worst}, 轨道残差 {orbit:.3e}")
    return UniversalityReport(passed, res, worst, checks)


@dataclass
class OrbitComparison:
    passed: bool
    checks: Dict[str, float] = field(default_factory=dict)
    orbit: Tuple[Point, ...] = ()
    reason: str = ""


def orbit_compare(bundle: Bundle, actions: Sequence[ActionSample], rep: Mapping[Hashable, np.ndarray],
                  r_maps: Mapping[Point, np.ndarray], z0: Point,
                  tol: Optional[float] = None) -> OrbitComparison:
    """
    轨道比较：z0 的轨道上 θ_s = R_z⁻¹ π(u_s) B0 满足 R ∘ θ = R0，且 K^π = θ* K^R

    Args:
        bundle: 带群作用的丛
        actions: 采样作用 (ν, μ)
        rep: 样本标签 → π(u)
        r_maps: 传递映射 R_z
        z0: 自对偶基点

    Raises:
        PreconditionError: z0 不自对偶、R 不满足传递条件或轨道对对合不封闭
    """
    tol = resolve_tol(tol)
    if z0 not in bundle.base or bundle.star(z0) != z0:
        raise PreconditionError("self_dual_base_point", message=f"{z0}* ≠ {z0}")
    mats = {z: as_matrix(r_maps[z], f"R[{z}]") for z in bundle.points}
    isometry = transfer_isometry_residual(mats, bundle)
    equivariance = 0.0
    for a in actions:
        for z in bundle.points:
            lhs = mats[a.nu[z]] @ a.mu[z]
            equivariance = max(equivariance, residual(lhs, rep[a.label] @ mats[z]))
    scale = max(1.0, max(max_abs(m) for m in mats.values()))
    if isometry > tol * scale:
        logger.error(f"R 不保持配对: 残差 {isometry:.3e}")
        raise PreconditionError("transfer_isometry", isometry)
    if equivariance > tol * scale ** 2:
        logger.error(f"R 不等变: 残差 {equivariance:.3e}")
        raise PreconditionError("transfer_equivariance", equivariance)

    b0 = orthonormal_basis(mats[z0], tol).basis
    first: Dict[Point, ActionSample] = {}
    for a in actions:
        first.setdefault(a.nu[z0], a)
    orbit = tuple(z for z in bundle.points if z in first)
    if any(bundle.star(z) not in first for z in orbit):
        raise PreconditionError("orbit_involution", message="z0 的轨道对对合不封闭")

    moved = {z: rep[first[z].label] @ b0 for z in orbit}
    theta, inverse_res = {}, 0.0
    for z in orbit:
        theta[z] = pseudo_inverse(mats[z], tol) @ moved[z]
        inverse_res = max(inverse_res, residual(mats[z] @ theta[z], moved[z]))

    dim0 = b0.shape[1]
    pairings = {z: moved[bundle.star(z)].conj().T @ moved[z] for z in orbit}
    source = make_bundle(orbit, {z: dim0 for z in orbit}, {z: bundle.star(z) for z in orbit}, pairings)
    blocks = {(s, t): b0.conj().T @ np.linalg.inv(rep[first[s].label]) @ moved[t] for s in orbit for t in orbit}
    k_pi = Kernel(source, blocks)
    k_r = transfer_kernel(mats, bundle, tol)
    m = BundleMorphism(source, bundle, {z: z for z in orbit}, theta, False)
    res, worst = kernel_difference(k_pi, pullback(m, k_r))

    checks = {"isometry": isometry, "equivariance": equivariance, "theta_inverse": inverse_res, "pullback": res}
    passed = inverse_res <= tol * scale and res <= tol * max(1.0, max_block_norm(k_pi))
    if not passed:
        logger.warning(f"轨道比较不成立: {checks}")
    return OrbitComparison(passed, checks, orbit)
