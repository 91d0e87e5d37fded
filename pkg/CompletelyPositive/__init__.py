"""
CompletelyPositive - 有限维 C*-代数上的完全正映射
Choi 判据、Stinespring/GNS 构造、两方块引理与 CPos 态射
"""

from .algebra_core import (CpMap, MatrixAlgebra, StarHomomorphism, amplification_check, choi_matrix,
                           is_completely_positive, random_unital_cp)
from .stinespring_core import (CposBound, StinespringData, compression_factorization, cpos_morphism_bound,
                               dilation_identity_check, gns, stinespring, tensor_morphism, two_squares,
                               validate_expectation)

__all__ = ['CpMap', 'MatrixAlgebra', 'StarHomomorphism', 'amplification_check', 'choi_matrix',
           'is_completely_positive', 'random_unital_cp', 'CposBound', 'StinespringData',
           'compression_factorization', 'cpos_morphism_bound', 'dilation_identity_check', 'gns',
           'stinespring', 'tensor_morphism', 'two_squares', 'validate_expectation']
