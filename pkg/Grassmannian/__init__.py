"""
Grassmannian - 重言丛上的万有核
Q_H、对合变体 Q_{H,C}、条件期望与压缩映射
"""

from .grassmann_core import (GrassKernelSpec, adapted_spec, compression_map, conditional_expectation,
                             involutive_kernel, make_spec, tautological_transfer, universal_kernel,
                             validate_involution)

__all__ = ['GrassKernelSpec', 'adapted_spec', 'compression_map', 'conditional_expectation',
           'involutive_kernel', 'make_spec', 'tautological_transfer', 'universal_kernel',
           'validate_involution']
