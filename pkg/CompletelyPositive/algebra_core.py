"""
有限维 C*-代数（全矩阵代数的直和）与其上的完全正映射。

代数 A = ⊕ M_{n_i} 以 U · diag(a_i ⊗ I_{m_i}) · U† 的方式嵌入 M_N，
基为嵌入后的矩阵单位，坐标由 Hilbert-Schmidt 内积除以重数给出。
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from LinearAlgebra.linalg_core import as_matrix, max_abs, psd_check, residual
from LinearAlgebra.random_matrices import random_complex
from utils.config_manager import resolve_tol
from utils.exceptions import DimensionError
from utils.logger import LogManager

logger = LogManager.get_logger("CP")


@dataclass(frozen=True, eq=False)
class MatrixAlgebra:
    """⊕ M_{n_i}，第 i 块重数 m_i，可选酉标架 frame"""
    blocks: Tuple[int, ...]
    multiplicities: Tuple[int, ...] = ()
    frame: Optional[np.ndarray] = None
    basis: Tuple[np.ndarray, ...] = field(init=False, repr=False)
    labels: Tuple[Tuple[int, int, int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        blocks = tuple(int(n) for n in self.blocks)
        mults = tuple(int(m) for m in self.multiplicities) or tuple(1 for _ in blocks)
        if not blocks or any(n < 1 for n in blocks) or len(mults) != len(blocks) or any(m < 1 for m in mults):
            raise DimensionError(f"非法的代数分块: blocks={blocks}, multiplicities={mults}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "multiplicities", mults)

        size = sum(n * m for n, m in zip(blocks, mults))
        if self.frame is not None:
            frame = as_matrix(self.frame, "frame")
            if frame.shape != (size, size) or max_abs(frame.conj().T @ frame - np.eye(size)) > 1e-10:
                raise DimensionError(f"标架必须是 {size}×{size} 酉矩阵")
            object.__setattr__(self, "frame", frame)

        basis, labels = [], []
        offset = 0
        for i, (n, m) in enumerate(zip(blocks, mults)):
            for a in range(n):
                for b in range(n):
                    unit = np.zeros((size, size), dtype=complex)
                    local = np.zeros((n, n), dtype=complex)
                    local[a, b] = 1.0
                    unit[offset:offset + n * m, offset:offset + n * m] = np.kron(local, np.eye(m))
                    if self.frame is not None:
                        unit = self.frame @ unit @ self.frame.conj().T
                    basis.append(unit)
                    labels.append((i, a, b))
            offset += n * m
        object.__setattr__(self, "basis", tuple(basis))
        object.__setattr__(self, "labels", tuple(labels))

    @classmethod
    def full(cls, n: int) -> "MatrixAlgebra":
        return cls((n,))

    @classmethod
    def diagonal(cls, n: int) -> "MatrixAlgebra":
        return cls(tuple(1 for _ in range(n)))

    @classmethod
    def scalars(cls, n: int) -> "MatrixAlgebra":
        return cls((1,), (n,))

    @property
    def size(self) -> int:
        """嵌入的矩阵尺寸 N"""
        return self.basis[0].shape[0]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _stack(self) -> np.ndarray:
        return np.stack(self.basis)

    def _weights(self) -> np.ndarray:
        return np.array([self.multiplicities[i] for i, _, _ in self.labels], dtype=float)

    def coordinates(self, x) -> np.ndarray:
        """x 在矩阵单位基下的坐标（x 不在代数中时为其正交投影的坐标）"""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.size, self.size):
            raise DimensionError(f"元素形状 {x.shape} 应为 {(self.size, self.size)}")
        return np.einsum('kij,ij->k', self._stack().conj(), x) / self._weights()

    def element(self, coords) -> np.ndarray:
        return np.tensordot(np.asarray(coords, dtype=complex), self._stack(), axes=1)

    def membership_residual(self, x) -> float:
        return residual(self.element(self.coordinates(x)), np.asarray(x, dtype=complex))

    def contains(self, x, tol: Optional[float] = None) -> bool:
        tol = resolve_tol(tol)
        return self.membership_residual(x) <= tol * max(1.0, max_abs(np.asarray(x)))

    def unit(self) -> np.ndarray:
        return np.eye(self.size, dtype=complex)

    def unit_coordinates(self) -> np.ndarray:
        return self.coordinates(self.unit())

    def left_matrix(self, a) -> np.ndarray:
        """左乘 x ↦ a x 在基坐标下的矩阵"""
        return np.column_stack([self.coordinates(a @ b) for b in self.basis])

    def right_matrix(self, a) -> np.ndarray:
        """右乘 x ↦ x a 在基坐标下的矩阵"""
        return np.column_stack([self.coordinates(b @ a) for b in self.basis])

    def adjoint_matrix(self) -> np.ndarray:
        """坐标上的置换 J：coords(x*) = J conj(coords(x))"""
        return np.column_stack([self.coordinates(b.conj().T) for b in self.basis])

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return self.element(random_complex(rng, self.dim))

    def block_index(self, i: int, a: int, b: int) -> int:
        return self.labels.index((i, a, b))


@dataclass(frozen=True, eq=False)
class CpMap:
    """Φ: A → M_d，由基上的像给出"""
    domain: MatrixAlgebra
    codomain_dim: int
    images: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.images) != self.domain.dim:
            raise DimensionError(f"像的个数 {len(self.images)} 与代数维数 {self.domain.dim} 不符")
        for img in self.images:
            if img.shape != (self.codomain_dim, self.codomain_dim):
                raise DimensionError(f"像的形状 {img.shape} 应为 {(self.codomain_dim,) * 2}")

    def apply(self, x) -> np.ndarray:
        coords = self.domain.coordinates(x)
        return np.tensordot(coords, np.stack(self.images), axes=1)

    __call__ = apply

    @classmethod
    def from_function(cls, domain: MatrixAlgebra, codomain_dim: int,
                      func: Callable[[np.ndarray], np.ndarray]) -> "CpMap":
        images = tuple(as_matrix(func(b), "image") for b in domain.basis)
        return cls(domain, int(codomain_dim), images)

    @classmethod
    def from_kraus(cls, domain: MatrixAlgebra, kraus: Sequence) -> "CpMap":
        """Φ(a) = Σ V_i† a V_i，V_i 形状 N × d"""
        ops = [as_matrix(v, "kraus") for v in kraus]
        if not ops or any(v.shape[0] != domain.size for v in ops):
            raise DimensionError(f"Kraus 算子的行数必须为 {domain.size}")
        d = ops[0].shape[1]
        if any(v.shape[1] != d for v in ops):
            raise DimensionError("Kraus 算子列数不一致")
        return cls.from_function(domain, d, lambda a: sum(v.conj().T @ a @ v for v in ops))

    @classmethod
    def identity(cls, n: int) -> "CpMap":
        return cls.from_function(MatrixAlgebra.full(n), n, lambda a: a)

    @classmethod
    def transpose(cls, n: int) -> "CpMap":
        return cls.from_function(MatrixAlgebra.full(n), n, lambda a: a.T)

    @classmethod
    def trace_map(cls, n: int) -> "CpMap":
        """Φ(a) = tr(a)/n · I_n"""
        return cls.from_function(MatrixAlgebra.full(n), n, lambda a: np.trace(a) / n * np.eye(n))

    @classmethod
    def state_from_density(cls, domain: MatrixAlgebra, rho) -> "CpMap":
        """φ(a) = tr(ρ a)，作为到 M_1 的映射"""
        rho = as_matrix(rho, "density")
        if rho.shape != (domain.size, domain.size):
            raise DimensionError(f"密度矩阵形状 {rho.shape} 应为 {(domain.size,) * 2}")
        return cls.from_function(domain, 1, lambda a: np.array([[np.trace(rho @ a)]]))

    def restrict(self, sub: MatrixAlgebra) -> "CpMap":
        """限制到共享同一 M_N 的子代数"""
        if sub.size != self.domain.size:
            raise DimensionError("子代数与代数的嵌入尺寸不同")
        return CpMap.from_function(sub, self.codomain_dim, self.apply)

    def unital_residual(self) -> float:
        return residual(self.apply(self.domain.unit()), np.eye(self.codomain_dim))

    def is_unital(self, tol: Optional[float] = None) -> bool:
        return self.unital_residual() <= resolve_tol(tol)

    def hermitian_residual(self) -> float:
        return max(residual(self.apply(b.conj().T), self.apply(b).conj().T) for b in self.domain.basis)

    def is_hermitian_preserving(self, tol: Optional[float] = None) -> bool:
        return self.hermitian_residual() <= resolve_tol(tol)


def choi_matrix(phi: CpMap) -> np.ndarray:
    """
    Choi 矩阵：每个矩阵块上 [Φ(e_ab)]_{a,b} 的分块矩阵，各块直和

    Φ = M_2 上恒等映射时为 2·(最大纠缠投影)，转置映射时为交换矩阵。
    """
    alg = phi.domain
    pieces = []
    for i, n in enumerate(alg.blocks):
        rows = [[phi.images[alg.block_index(i, a, b)] for b in range(n)] for a in range(n)]
        pieces.append(np.block(rows))
    return sla.block_diag(*pieces)


def is_completely_positive(phi: CpMap, tol: Optional[float] = None) -> bool:
    """Choi 判据"""
    report = psd_check(choi_matrix(phi), tol)
    logger.debug(f"Choi 最小特征值: {report.min_eigenvalue:.3e}")
    return report.is_psd


@dataclass(frozen=True)
class AmplificationReport:
    n: int
    samples: int
    min_eigenvalue: float
    positive: bool


def amplification_check(phi: CpMap, n: int, samples: int, rng: np.random.Generator,
                        tol: Optional[float] = None) -> AmplificationReport:
    """
    定义式交叉检验：Φ_n 作用于随机正元 X = Y†Y ∈ M_n(A) 后仍为正
    """
    alg = phi.domain
    worst = float("inf")
    for _ in range(samples):
        y = [[alg.random_element(rng) for _ in range(n)] for _ in range(n)]
        x = [[sum(y[k][i].conj().T @ y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        amplified = np.block([[phi.apply(x[i][j]) for j in range(n)] for i in range(n)])
        scale = max(1.0, max_abs(amplified))
        worst = min(worst, psd_check(amplified, tol).min_eigenvalue / scale)
    positive = worst >= -resolve_tol(tol)
    return AmplificationReport(n, samples, worst, positive)


@dataclass(frozen=True, eq=False)
class StarHomomorphism:
    """α: A → B 的 *-同态，由基上的像给出"""
    domain: MatrixAlgebra
    codomain: MatrixAlgebra
    images: Tuple[np.ndarray, ...]

    def apply(self, x) -> np.ndarray:
        return np.tensordot(self.domain.coordinates(x), np.stack(self.images), axes=1)

    __call__ = apply

    @classmethod
    def from_function(cls, domain: MatrixAlgebra, codomain: MatrixAlgebra,
                      func: Callable[[np.ndarray], np.ndarray]) -> "StarHomomorphism":
        return cls(domain, codomain, tuple(as_matrix(func(b), "image") for b in domain.basis))

    @classmethod
    def identity(cls, alg: MatrixAlgebra) -> "StarHomomorphism":
        return cls(alg, alg, alg.basis)

    @classmethod
    def inner(cls, alg: MatrixAlgebra, u) -> "StarHomomorphism":
        """内自同构 x ↦ U x U†"""
        u = as_matrix(u, "unitary")
        frame = u if alg.frame is None else u @ alg.frame
        codomain = MatrixAlgebra(alg.blocks, alg.multiplicities, frame)
        return cls.from_function(alg, codomain, lambda x: u @ x @ u.conj().T)

    def check(self) -> Dict[str, float]:
        """乘性、*-保持、保单位与值域残差"""
        basis = self.domain.basis
        mult = max(residual(self.apply(a @ b), self.apply(a) @ self.apply(b)) for a in basis for b in basis)
        adj = max(residual(self.apply(a.conj().T), self.apply(a).conj().T) for a in basis)
        unit = residual(self.apply(self.domain.unit()), self.codomain.unit())
        rng = max(self.codomain.membership_residual(img) for img in self.images)
        return {"multiplicative": mult, "adjoint": adj, "unit": unit, "range": rng}

    def is_valid(self, tol: Optional[float] = None) -> bool:
        tol = resolve_tol(tol)
        return all(v <= tol for v in self.check().values())


def unital_kraus(rng: np.random.Generator, n: int, n_kraus: int, d: Optional[int] = None) -> List[np.ndarray]:
    """随机 Kraus 算子组 V_i (n×d)，按 (Σ V_i†V_i)^{-1/2} 归一使 Σ V_i†V_i = I_d"""
    d = d or n
    kraus = [random_complex(rng, (n, d)) for _ in range(n_kraus)]
    s = sum(v.conj().T @ v for v in kraus)
    w, q = sla.eigh(s)
    inv_sqrt = q @ np.diag(1.0 / np.sqrt(w)) @ q.conj().T
    return [v @ inv_sqrt for v in kraus]


def random_unital_cp(rng: np.random.Generator, n: int, n_kraus: int, d: Optional[int] = None) -> CpMap:
    """M_n → M_d 的随机保单位完全正映射"""
    return CpMap.from_kraus(MatrixAlgebra.full(n), unital_kraus(rng, n, n_kraus, d))
