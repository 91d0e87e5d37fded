"""
ReproducingKernel - 再生(−*)-核
正定性、H^K 构造、态射界、诱导算子、拉回、共轭与等变性
"""

from .kernel_core import (Kernel, PositivityReport, check_positive, exchange_residual, kernel_adjoint,
                          kernel_scale, kernel_sum, make_kernel)
from .rkhs_core import Rkhs, build_rkhs, evaluate, inner, section_coordinates
from .pullback_core import (HomBound, InducedOperator, PullbackCharacterization, hom_bound,
                            induced_operator, pullback, pullback_characterization)
from .symmetry_core import ActionSample, ConjugationResult, EquivarianceReport, conjugation, equivariance_check

__all__ = ['Kernel', 'PositivityReport', 'check_positive', 'exchange_residual', 'kernel_adjoint',
           'kernel_scale', 'kernel_sum', 'make_kernel', 'Rkhs', 'build_rkhs', 'evaluate', 'inner',
           'section_coordinates', 'HomBound', 'InducedOperator', 'PullbackCharacterization', 'hom_bound',
           'induced_operator', 'pullback', 'pullback_characterization', 'ActionSample',
           'ConjugationResult', 'EquivarianceReport', 'conjugation', 'equivariance_check']
