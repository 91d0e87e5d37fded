"""
半线性映射：矩阵 + 共轭标志。

apply(ξ) = M ξ（线性）或 M conj(ξ)（共轭线性）。
复合 f∘g 的矩阵为 M_f · M_g（f 线性）或 M_f · conj(M_g)（f 共轭线性），标志取异或。
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from LinearAlgebra.linalg_core import as_matrix, max_abs, pseudo_inverse, spectral_norm
from utils.config_manager import resolve_tol
from utils.exceptions import DimensionError


@dataclass(frozen=True)
class SemilinearMap:
    matrix: np.ndarray
    antilinear: bool = False

    @classmethod
    def of(cls, matrix, antilinear: bool = False) -> "SemilinearMap":
        return cls(as_matrix(matrix, "semilinear"), bool(antilinear))

    @classmethod
    def identity(cls, n: int, antilinear: bool = False) -> "SemilinearMap":
        return cls(np.eye(n, dtype=complex), antilinear)

    @property
    def shape(self):
        return self.matrix.shape

    def apply(self, x) -> np.ndarray:
        """作用于向量或矩阵（逐列）"""
        x = np.asarray(x, dtype=complex)
        if x.shape[0] != self.matrix.shape[1]:
            raise DimensionError(f"维数不匹配: 映射 {self.matrix.shape}, 输入 {x.shape}")
        return self.matrix @ (x.conj() if self.antilinear else x)

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """self ∘ other"""
        if self.matrix.shape[1] != other.matrix.shape[0]:
            raise DimensionError(f"复合维数不匹配: {self.matrix.shape} ∘ {other.matrix.shape}")
        inner = other.matrix.conj() if self.antilinear else other.matrix
        return SemilinearMap(self.matrix @ inner, self.antilinear != other.antilinear)

    def inverse(self) -> "SemilinearMap":
        """逆映射；共轭线性时 ξ ↦ M conj ξ 的逆为 η ↦ conj(M⁻¹) conj η"""
        inv = np.linalg.inv(self.matrix)
        return SemilinearMap(inv.conj() if self.antilinear else inv, self.antilinear)

    def pseudo_inverse(self, tol: Optional[float] = None) -> "SemilinearMap":
        pinv = pseudo_inverse(self.matrix, tol)
        return SemilinearMap(pinv.conj() if self.antilinear else pinv, self.antilinear)

    def norm(self) -> float:
        """算子范数（共轭不改变范数）"""
        return spectral_norm(self.matrix)

    def is_involution(self, tol: Optional[float] = None) -> bool:
        return self.involution_residual() <= resolve_tol(tol)

    def involution_residual(self) -> float:
        if self.matrix.shape[0] != self.matrix.shape[1]:
            return float("inf")
        square = self.compose(self)
        return max_abs(square.matrix - np.eye(self.matrix.shape[0]))

    def unitarity_residual(self) -> float:
        """M†M = I 的残差（共轭线性时即反酉条件）"""
        n = self.matrix.shape[1]
        return max_abs(self.matrix.conj().T @ self.matrix - np.eye(n))
