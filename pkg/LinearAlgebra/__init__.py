"""
LinearAlgebra - 稠密复线性代数基础
半正定判定、子空间、Gram 商空间、配对伴随与半线性映射
"""

from .linalg_core import (FormBound, GramQuotient, PsdReport, Subspace, form_bound, gram_quotient,
                          is_projection, orthonormal_basis, pairing_adjoint, projection, psd_check,
                          same_subspace)
from .semilinear import SemilinearMap

__all__ = ['FormBound', 'GramQuotient', 'PsdReport', 'Subspace', 'form_bound', 'gram_quotient',
           'is_projection', 'orthonormal_basis', 'pairing_adjoint', 'projection', 'psd_check',
           'same_subspace', 'SemilinearMap']
