"""
核范畴中的态射：有界性常数、诱导算子 H^Θ、核的拉回以及拉回刻画。

记 D 为生成元之间的转移矩阵：D[(ζ(s),k), (s,i)] = δ_s[k,i]。
拉回二次型 P = D† Γ_tgt D（共轭线性态射取 conj(P)）。
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from LikeHermitianBundle.bundle_core import BundleMorphism, compose, quasi_adjoint, same_bundle
from LinearAlgebra.linalg_core import (FormBound, form_bound, max_abs, pseudo_inverse, residual,
                                       spectral_norm)
from LinearAlgebra.semilinear import SemilinearMap
from ReproducingKernel.kernel_core import Kernel, check_positive, kernel_difference, scaled_tolerance
from ReproducingKernel.rkhs_core import Rkhs, build_rkhs, evaluate
from utils.config_manager import resolve_tol
from utils.exceptions import BundleMismatchError, NotAMorphismError
from utils.logger import LogManager

logger = LogManager.get_logger("KC")


def transfer_matrix(m: BundleMorphism) -> np.ndarray:
    """生成元转移矩阵 D（目标生成元 × 源生成元）"""
    src, tgt = m.source, m.target
    src_off, tgt_off = src.offsets(), tgt.offsets()
    d = np.zeros((tgt.total_dim(), src.total_dim()), dtype=complex)
    for s in src.points:
        row, col = tgt_off[m.zeta(s)], src_off[s]
        block = m.fiber_maps[s]
        d[row:row + block.shape[0], col:col + block.shape[1]] = block
    return d


def pulled_form(m: BundleMorphism, gram_tgt: np.ndarray) -> np.ndarray:
    """P = D† Γ_tgt D，共轭线性时取共轭"""
    d = transfer_matrix(m)
    p = d.conj().T @ gram_tgt @ d
    return p.conj() if m.antilinear else p


def _check_bundles(m: BundleMorphism, k_src: Kernel, k_tgt: Kernel):
    if not same_bundle(m.source, k_src.bundle) or not same_bundle(m.target, k_tgt.bundle):
        logger.error("态射的源/目标丛与核不一致")
        raise BundleMismatchError("态射的源/目标丛与核不一致")


@dataclass(frozen=True)
class HomBound:
    is_morphism: bool
    least_M: float
    null_residual: float


def hom_bound(m: BundleMorphism, k_src: Kernel, k_tgt: Kernel,
              tol: Optional[float] = None) -> HomBound:
    """
    满足 Σ(K(ζ..)δ.. | δ..) ≤ M·Σ(K̃(..)..|..) 的最小常数 M

    等于 (拉回 Gram, 源 Gram) 在源 Gram 值域上的最大广义特征值；
    源 Gram 零空间上拉回二次型不为零时不存在有限 M。
    """
    _check_bundles(m, k_src, k_tgt)
    r_src = build_rkhs(k_src, tol)
    r_tgt = build_rkhs(k_tgt, tol)
    return _bound_from_rkhs(m, r_src, r_tgt, tol)


def _bound_from_rkhs(m: BundleMorphism, r_src: Rkhs, r_tgt: Rkhs,
                     tol: Optional[float] = None) -> HomBound:
    bound: FormBound = form_bound(pulled_form(m, r_tgt.gram), r_src.gram, tol)
    logger.debug(f"态射有界性: M={bound.least_M:.6g}, 零空间残差 {bound.null_residual:.3e}")
    return HomBound(bound.is_bounded, bound.least_M, bound.null_residual)


@dataclass(frozen=True, eq=False)
class InducedOperator:
    """H^Θ 在两个商空间坐标下的矩阵（共轭线性时 x ↦ N conj(x)）"""
    source: Rkhs
    target: Rkhs
    matrix: np.ndarray
    antilinear: bool
    least_M: float

    def as_semilinear(self) -> SemilinearMap:
        return SemilinearMap(self.matrix, self.antilinear)

    def apply(self, x) -> np.ndarray:
        return self.as_semilinear().apply(x)

    @property
    def norm(self) -> float:
        return spectral_norm(self.matrix)

    def norm_report(self, tol: Optional[float] = None) -> dict:
        """‖H‖ 与 M 的关系：‖H‖² = M，因此 ‖H‖ ≤ √M；字面上的 ‖H‖ ≤ M 单独报告"""
        tol = resolve_tol(tol)
        norm = self.norm
        return {
            "norm": norm,
            "least_M": self.least_M,
            "norm_squared_residual": abs(norm ** 2 - self.least_M),
            "within_sqrt_M": norm <= np.sqrt(self.least_M) * (1 + tol) + tol,
            "within_M": norm <= self.least_M * (1 + tol) + tol,
        }


def induced_operator(m: BundleMorphism, r_src: Rkhs, r_tgt: Rkhs,
                     tol: Optional[float] = None) -> InducedOperator:
    """
    诱导算子 H^Θ: K̃_ξ ↦ K_{δ(ξ)}

    Raises:
        NotAMorphismError: 不存在有限的 M
    """
    _check_bundles(m, r_src.kernel, r_tgt.kernel)
    bound = _bound_from_rkhs(m, r_src, r_tgt, tol)
    if not bound.is_morphism:
        logger.error(f"不是核范畴中的态射: 零空间残差 {bound.null_residual:.3e}")
        raise NotAMorphismError("不是核范畴中的态射", bound.null_residual)

    d = transfer_matrix(m)
    e_src = r_src.embedding
    if m.antilinear:
        matrix = r_tgt.embedding @ d @ pseudo_inverse(e_src.conj(), tol)
    else:
        matrix = r_tgt.embedding @ d @ pseudo_inverse(e_src, tol)
    return InducedOperator(r_src, r_tgt, matrix, m.antilinear, bound.least_M)


def compose_induced(h1: InducedOperator, h2: InducedOperator) -> SemilinearMap:
    """H1 ∘ H2 作为半线性映射"""
    return h1.as_semilinear().compose(h2.as_semilinear())


def functor_residual(m1: BundleMorphism, m2: BundleMorphism, r0: Rkhs, r1: Rkhs, r2: Rkhs,
                     tol: Optional[float] = None) -> float:
    """‖H^{Θ1∘Θ2} − H^{Θ1} H^{Θ2}‖"""
    h12 = induced_operator(compose(m1, m2), r0, r2, tol)
    product = compose_induced(induced_operator(m1, r1, r2, tol), induced_operator(m2, r0, r1, tol))
    if product.antilinear != h12.antilinear:
        return float("inf")
    return residual(h12.matrix, product.matrix)


def pullback(m: BundleMorphism, k: Kernel) -> Kernel:
    """
    拉回 Θ*K(s,t) = (δ_{s*})^{-*} ∘ K(ζ(s), ζ(t)) ∘ δ_t

    共轭线性时 (δ_{s*})^{-*} 与 δ_t 都含共轭，合成后仍为线性分块：
    N_{s*} conj(K(ζs,ζt)) conj(M_t)。
    """
    if not same_bundle(m.target, k.bundle):
        logger.error("拉回失败: 态射目标丛与核的丛不一致")
        raise BundleMismatchError("拉回失败: 态射目标丛与核的丛不一致")
    k.require_complete()
    src = m.source
    adjoints = {s: quasi_adjoint(m, src.star(s)) for s in src.points}
    blocks = {}
    for s in src.points:
        for t in src.points:
            inner = k.block(m.zeta(s), m.zeta(t))
            delta_t = m.fiber_maps[t]
            if m.antilinear:
                blocks[(s, t)] = adjoints[s] @ inner.conj() @ delta_t.conj()
            else:
                blocks[(s, t)] = adjoints[s] @ inner @ delta_t
    return Kernel(src, blocks)


def commuting_square_residual(m: BundleMorphism, r_src: Rkhs, r_tgt: Rkhs,
                              tol: Optional[float] = None) -> float:
    """(H^Θ F)(ζ(t)) 与 δ_t F(t) 在所有生成元上的最大偏差"""
    h = induced_operator(m, r_src, r_tgt, tol)
    worst = 0.0
    for s in m.source.points:
        cols = r_src.columns(s)
        image = h.apply(cols)
        for t in m.source.points:
            lhs = evaluate(r_tgt, image, m.zeta(t))
            rhs = m.delta(t).apply(evaluate(r_src, cols, t))
            worst = max(worst, residual(lhs, rhs))
    return worst


def _fiberwise_bijective(m: BundleMorphism) -> bool:
    for block in m.fiber_maps.values():
        if block.shape[0] != block.shape[1]:
            return False
        if np.linalg.matrix_rank(block) < block.shape[0]:
            return False
    return True


@dataclass
class PullbackCharacterization:
    equal: bool
    residual: float
    worst_block: Optional[tuple]
    isometry: bool
    isometry_residual: float
    is_morphism: bool
    least_M: float
    consistent: bool
    square_residual: Optional[float] = None


def pullback_characterization(m: BundleMorphism, k_src: Kernel, k_tgt: Kernel,
                              tol: Optional[float] = None) -> PullbackCharacterization:
    """
    K̃ = Θ*K 当且仅当 Θ 是态射且 H^Θ 为等距

    等距判定为拉回 Gram 与源 Gram 一致；当所有 δ_z 为双射时
    额外报告求值交换方块的残差。
    """
    _check_bundles(m, k_src, k_tgt)
    pulled = pullback(m, k_tgt)
    res, where = kernel_difference(k_src, pulled)
    equal = res <= scaled_tolerance(k_src, tol)

    r_src = build_rkhs(k_src, tol)
    r_tgt = build_rkhs(k_tgt, tol)
    iso_res = residual(pulled_form(m, r_tgt.gram), r_src.gram)
    isometry = iso_res <= resolve_tol(tol) * max(1.0, max_abs(r_src.gram))
    bound = _bound_from_rkhs(m, r_src, r_tgt, tol)
    consistent = equal == (bound.is_morphism and isometry)

    square = None
    if bound.is_morphism and _fiberwise_bijective(m):
        square = commuting_square_residual(m, r_src, r_tgt, tol)

    if not consistent:
        logger.warning(f"拉回刻画不一致: equal={equal}, morphism={bound.is_morphism}, isometry={isometry}")
    return PullbackCharacterization(equal, res, where, isometry, iso_res, bound.is_morphism,
                                    bound.least_M, consistent, square)


def pullback_is_positive(m: BundleMorphism, k: Kernel, tol: Optional[float] = None) -> float:
    """拉回核的最小特征值（正核的拉回应非负）"""
    return check_positive(pullback(m, k), tol).min_eigenvalue
