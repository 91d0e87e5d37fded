"""
Stinespring 构造、GNS、两方块引理与 CPos 范畴中的态射。

对保单位 CP 映射 Φ: A → M_d，以 a_k ⊗ e_m（a_k 为 A 的矩阵单位基）为生成元，
Gram 矩阵 Γ[(l,n),(k,m)] = Φ(a_l* a_k)[n,m]。商空间坐标 x = E c（E†E = Γ），
    π(a) = E (L(a) ⊗ I_d) E⁺,    V = E (u ⊗ I_d)，u 为单位元坐标
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from CompletelyPositive.algebra_core import (CpMap, MatrixAlgebra, StarHomomorphism, choi_matrix,
                                             is_completely_positive)
from LinearAlgebra.linalg_core import (GramQuotient, Subspace, as_matrix, form_bound, gram_quotient,
                                       is_projection, max_abs, orthonormal_basis, pseudo_inverse,
                                       residual, spectral_norm)
from utils.config_manager import resolve_tol
from utils.exceptions import DimensionError, NotAMorphismError, PreconditionError
from utils.logger import LogManager

logger = LogManager.get_logger("CP")


@dataclass(eq=False)
class StinespringData:
    """Stinespring 表示 (K₀, π_Φ, V) 及其自检残差"""
    phi: CpMap
    quotient: GramQuotient
    isometry: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def algebra(self) -> MatrixAlgebra:
        return self.phi.domain

    @property
    def embedding(self) -> np.ndarray:
        return self.quotient.embedding

    @property
    def space_dim(self) -> int:
        return self.quotient.rank

    def lift(self, coefficient_map: np.ndarray) -> np.ndarray:
        """生成元系数空间上的算子在商空间坐标下的矩阵 E X E⁺"""
        return self.embedding @ coefficient_map @ pseudo_inverse(self.embedding)

    def pi(self, a) -> np.ndarray:
        left = self.algebra.left_matrix(np.asarray(a, dtype=complex))
        return self.lift(np.kron(left, np.eye(self.phi.codomain_dim)))

    @property
    def rep(self):
        return tuple(self.pi(b) for b in self.algebra.basis)

    def natural_map(self, a, h=None) -> np.ndarray:
        """a ⊗ h 的类 [a ⊗ h]；h 省略时取 H₀ 的第一个基向量（GNS 中即 [a]）"""
        d = self.phi.codomain_dim
        h = np.eye(d, dtype=complex)[:, 0] if h is None else np.asarray(h, dtype=complex)
        return self.embedding @ np.kron(self.algebra.coordinates(a), h)


def stinespring(phi: CpMap, tol: Optional[float] = None) -> StinespringData:
    """
    Φ 的 Stinespring 表示

    Args:
        phi: 保单位完全正映射
        tol: 容差

    Returns:
        StinespringData，residuals 含 isometry / dilation / multiplicative / adjoint / unit / choi

    Raises:
        PreconditionError: Φ 不保单位或不完全正
    """
    tol = resolve_tol(tol)
    unital_res = phi.unital_residual()
    if unital_res > tol:
        logger.error(f"Φ 不保单位: 残差 {unital_res:.3e}")
        raise PreconditionError("unital", unital_res)
    if not is_completely_positive(phi, tol):
        logger.error("Φ 不是完全正映射 (Choi 矩阵非半正定)")
        raise PreconditionError("completely_positive", message="Choi 矩阵非半正定")

    alg = phi.domain
    basis = alg.basis
    gram = np.block([[phi.apply(a_l.conj().T @ a_k) for a_k in basis] for a_l in basis])
    quotient = gram_quotient(gram, tol)
    e = quotient.embedding
    d = phi.codomain_dim
    v = e @ np.kron(alg.unit_coordinates()[:, None], np.eye(d))
    data = StinespringData(phi, quotient, v)

    reps = [data.pi(b) for b in basis]
    r = data.space_dim
    data.residuals = {
        "isometry": residual(v.conj().T @ v, np.eye(d)),
        "dilation": max(residual(phi.apply(b), v.conj().T @ p @ v) for b, p in zip(basis, reps)),
        "multiplicative": max(residual(data.pi(a @ b), pa @ pb)
                              for a, pa in zip(basis, reps) for b, pb in zip(basis, reps)),
        "adjoint": max(residual(data.pi(b.conj().T), p.conj().T) for b, p in zip(basis, reps)),
        "unit": residual(data.pi(alg.unit()), np.eye(r)),
    }
    dilated = CpMap.from_function(alg, d, lambda a: v.conj().T @ data.pi(a) @ v)
    data.residuals["choi"] = residual(choi_matrix(dilated), choi_matrix(phi))
    logger.debug(f"Stinespring: dim K₀={r}, 膨胀残差 {data.residuals['dilation']:.3e}")
    return data


def gns(phi: CpMap, tol: Optional[float] = None) -> StinespringData:
    """
    态 φ 的 GNS 表示（dim H₀ = 1 的 Stinespring 构造），natural_map(a) 给出 [a]

    Raises:
        PreconditionError: φ 不是态
    """
    if phi.codomain_dim != 1:
        logger.error(f"GNS 需要取值于 M_1 的泛函, 实际 codomain_dim={phi.codomain_dim}")
        raise PreconditionError("state", message=f"codomain_dim={phi.codomain_dim}")
    tol = resolve_tol(tol)
    if phi.unital_residual() > tol or not is_completely_positive(phi, tol):
        logger.error("φ 不是态: 需要正且 φ(1) = 1")
        raise PreconditionError("state", phi.unital_residual(), "φ 需要正且 φ(1) = 1")
    return stinespring(phi, tol)


def dilation_identity_check(k: Subspace, tol: Optional[float] = None) -> Dict[str, float]:
    """
    压缩映射 Φ_K 的 Stinespring 表示即恒等表示

    W = Y E⁺，Y 的列为 a_k B_K e_m；检查 W 酉且 W π(a) W† = a。
    """
    from Grassmannian.grassmann_core import compression_map

    phi = compression_map(k, tol=tol)
    data = stinespring(phi, tol)
    b = k.basis
    y = np.column_stack([a @ b[:, m] for a in phi.domain.basis for m in range(b.shape[1])])
    w = y @ pseudo_inverse(data.embedding, tol)
    n = k.ambient_dim
    return {
        "space_dim": float(data.space_dim),
        "co_isometry": residual(w @ w.conj().T, np.eye(n)) if w.shape[0] == n else float("inf"),
        "isometry": residual(w.conj().T @ w, np.eye(data.space_dim)),
        "identity_representation": max(residual(w @ data.pi(a) @ w.conj().T, a) for a in phi.domain.basis),
    }


@dataclass
class ExpectationReport:
    valid: bool
    checks: Dict[str, float]


def validate_expectation(expectation: Callable[[np.ndarray], np.ndarray], alg: MatrixAlgebra,
                         sub: MatrixAlgebra, rng: Optional[np.random.Generator] = None,
                         triples: int = 10, tol: Optional[float] = None) -> ExpectationReport:
    """
    条件期望 E: A → B 的校验：幂等、值域在 B 中、保单位、B-双模性质（随机三元组 b₁ a b₂）
    """
    tol = resolve_tol(tol)
    if sub.size != alg.size:
        raise DimensionError("子代数与代数的嵌入尺寸不同")
    rng = rng or np.random.default_rng(0)
    images = [expectation(a) for a in alg.basis]
    bimodule = 0.0
    for _ in range(triples):
        a = alg.random_element(rng)
        b1, b2 = sub.random_element(rng), sub.random_element(rng)
        bimodule = max(bimodule, residual(expectation(b1 @ a @ b2), b1 @ expectation(a) @ b2))
    checks = {
        "idempotent": max(residual(expectation(x), x) for x in images),
        "range": max(sub.membership_residual(x) for x in images),
        "unital": residual(expectation(alg.unit()), alg.unit()),
        "bimodule": bimodule,
    }
    valid = all(v <= tol * max(1.0, alg.size) for v in checks.values())
    if not valid:
        logger.debug(f"条件期望校验失败: {checks}")
    return ExpectationReport(valid, checks)


@dataclass
class TwoSquaresReport:
    passed: bool
    checks: Dict[str, float]
    dims: Dict[str, int]


def two_squares(expectation: Callable[[np.ndarray], np.ndarray], sub: MatrixAlgebra, phi: CpMap,
                tol: Optional[float] = None,
                rng: Optional[np.random.Generator] = None) -> TwoSquaresReport:
    """
    两方块引理：H_B ⊆ H_A，投影 P([a⊗y]) = [E(a)⊗y] 满足
        P ∘ ι_{h₀} = ι_{h₀} ∘ E,   P ∘ π_A(b) = π_B(b) ∘ P

    Raises:
        PreconditionError: E 不是条件期望或 Φ∘E ≠ Φ
    """
    tol = resolve_tol(tol)
    alg = phi.domain
    report = validate_expectation(expectation, alg, sub, rng, tol=tol)
    if not report.valid:
        worst = max(report.checks.values())
        logger.error(f"E 不是条件期望: {report.checks}")
        raise PreconditionError("expectation", worst, "E 不是条件期望")
    invariance = max(residual(phi.apply(expectation(a)), phi.apply(a)) for a in alg.basis)
    if invariance > tol:
        logger.error(f"Φ∘E ≠ Φ: 残差 {invariance:.3e}")
        raise PreconditionError("phi_invariance", invariance, "Φ∘E ≠ Φ")

    data_a = stinespring(phi, tol)
    data_b = stinespring(phi.restrict(sub), tol)
    d = phi.codomain_dim
    eye = np.eye(d)
    c_e = np.column_stack([sub.coordinates(expectation(a)) for a in alg.basis])
    c_i = np.column_stack([alg.coordinates(b) for b in sub.basis])
    p = data_b.embedding @ np.kron(c_e, eye) @ pseudo_inverse(data_a.embedding, tol)
    iota = data_a.embedding @ np.kron(c_i, eye) @ pseudo_inverse(data_b.embedding, tol)

    square_1 = residual(p @ data_a.embedding, data_b.embedding @ np.kron(c_e, eye))
    square_2 = max(residual(p @ data_a.pi(b), data_b.pi(b) @ p) for b in sub.basis)
    ip = iota @ p
    projection_res = is_projection(ip, tol)[1] if ip.size else 0.0
    checks = {
        "iota_isometry": residual(iota.conj().T @ iota, np.eye(data_b.space_dim)),
        "retraction": residual(p @ iota, np.eye(data_b.space_dim)),
        "projection": projection_res,
        "square_1": square_1,
        "square_2": square_2,
    }
    passed = all(v <= tol * max(1.0, d * alg.size) for v in checks.values())
    dims = {"H_A": data_a.space_dim, "H_B": data_b.space_dim}
    if passed:
        logger.debug(f"两方块交换: dim H_A={dims['H_A']}, dim H_B={dims['H_B']}")
    else:
        logger.warning(f"两方块不交换: {checks}")
    return TwoSquaresReport(passed, checks, dims)


@dataclass(frozen=True)
class CposBound:
    is_morphism: bool
    least_M: float
    null_residual: float
    equality_residual: float


def _cpos_transfer(alpha: StarHomomorphism, t: np.ndarray, phi: CpMap) -> np.ndarray:
    """D[(k',m'),(k,m)] = coords(α(ã_k))[k'] · T[m',m]"""
    c_alpha = np.column_stack([phi.domain.coordinates(img) for img in alpha.images])
    return np.kron(c_alpha, t)


def _stinespring_gram(phi: CpMap) -> np.ndarray:
    basis = phi.domain.basis
    return np.block([[phi.apply(a_l.conj().T @ a_k) for a_k in basis] for a_l in basis])


def cpos_morphism_bound(alpha: StarHomomorphism, t, phi_src: CpMap, phi_tgt: CpMap,
                        tol: Optional[float] = None) -> CposBound:
    """
    (α, T): (Ã, Φ̃, H̃₀) → (A, Φ, H₀) 的最小常数 M：
        Σ(Φ(α(a_l)*α(a_j)) T h_j | T h_l) ≤ M Σ(Φ̃(a_l* a_j) h_j | h_l)

    Raises:
        PreconditionError: α 不是 *-同态
    """
    tol = resolve_tol(tol)
    t = as_matrix(t, "T")
    if t.shape != (phi_tgt.codomain_dim, phi_src.codomain_dim):
        raise DimensionError(f"T 形状 {t.shape} 应为 {(phi_tgt.codomain_dim, phi_src.codomain_dim)}")
    if alpha.domain.size != phi_src.domain.size or alpha.codomain.size != phi_tgt.domain.size:
        raise DimensionError("α 的定义域/值域与 CP 映射的代数不符")
    hom_checks = alpha.check()
    worst = max(hom_checks.values())
    if worst > tol * max(1.0, alpha.codomain.size):
        logger.error(f"α 不是 *-同态: {hom_checks}")
        raise PreconditionError("star_homomorphism", worst)

    d = _cpos_transfer(alpha, t, phi_tgt)
    pulled = d.conj().T @ _stinespring_gram(phi_tgt) @ d
    source = _stinespring_gram(phi_src)
    bound = form_bound(pulled, source, tol)
    equality = residual(pulled, source)
    logger.debug(f"CPos 态射界: M={bound.least_M:.6g}, 等式残差 {equality:.3e}")
    return CposBound(bound.is_bounded, bound.least_M, bound.null_residual, equality)


@dataclass(eq=False)
class DilationMorphism:
    """α ⊗ T 在 Stinespring 空间上的连续延拓"""
    matrix: np.ndarray
    least_M: float
    intertwining_residual: float

    @property
    def norm(self) -> float:
        return spectral_norm(self.matrix)


def tensor_morphism(alpha: StarHomomorphism, t, phi_src: CpMap, phi_tgt: CpMap,
                    tol: Optional[float] = None) -> DilationMorphism:
    """
    α ⊗ T: Σ a_j ⊗ h_j ↦ Σ α(a_j) ⊗ T h_j，并验证 (α⊗T) π̃(u) = π(α(u)) (α⊗T)

    Raises:
        NotAMorphismError: (α, T) 不满足 CPos 态射条件
    """
    tol = resolve_tol(tol)
    bound = cpos_morphism_bound(alpha, t, phi_src, phi_tgt, tol)
    if not bound.is_morphism:
        logger.error(f"(α, T) 不是 CPos 态射: 零空间残差 {bound.null_residual:.3e}")
        raise NotAMorphismError("(α, T) 不是 CPos 态射", bound.null_residual)
    src = stinespring(phi_src, tol)
    tgt = stinespring(phi_tgt, tol)
    d = _cpos_transfer(alpha, as_matrix(t, "T"), phi_tgt)
    h = tgt.embedding @ d @ pseudo_inverse(src.embedding, tol)
    intertwining = max(residual(h @ src.pi(u), tgt.pi(alpha.apply(u)) @ h) for u in alpha.domain.basis)
    return DilationMorphism(h, bound.least_M, intertwining)


@dataclass
class FactorizationReport:
    passed: bool
    residual: float
    least_M: float
    equality_residual: float
    compression_dim: int


def compression_factorization(phi: CpMap, tol: Optional[float] = None) -> FactorizationReport:
    """
    Φ(a) = V* Φ_{V(H₀)}(π_A(a)) V，且 (π_A, V) 是 M = 1 的 CPos 态射（等式成立）

    显式给出的 tol 同时用于判定；未给出时判定使用配置中的 dilation 容差
    """
    from Grassmannian.grassmann_core import compression_map

    check_tol = resolve_tol(tol, "dilation")
    tol = resolve_tol(tol)
    data = stinespring(phi, tol)
    v = data.isometry
    r = data.space_dim
    range_v = orthonormal_basis(v, tol)
    t = range_v.basis.conj().T @ v
    phi_v = compression_map(Subspace(r, range_v.basis), tol=tol)
    reps = [data.pi(b) for b in phi.domain.basis]
    res = max(residual(phi.apply(b), t.conj().T @ phi_v.apply(p) @ t)
              for b, p in zip(phi.domain.basis, reps))
    alpha = StarHomomorphism(phi.domain, phi_v.domain, tuple(reps))
    bound = cpos_morphism_bound(alpha, t, phi, phi_v, tol)
    passed = (res <= check_tol and bound.is_morphism and abs(bound.least_M - 1.0) <= check_tol
              and bound.equality_residual <= check_tol * max(1.0, max_abs(_stinespring_gram(phi))))
    if passed:
        logger.debug(f"压缩分解成立: dim V(H₀)={range_v.dim}")
    else:
        logger.warning(f"压缩分解不成立: 残差 {res:.3e}, M={bound.least_M:.6g}")
    return FactorizationReport(passed, res, bound.least_M, bound.equality_residual, range_v.dim)
