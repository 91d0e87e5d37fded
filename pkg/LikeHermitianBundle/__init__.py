"""
LikeHermitianBundle - 类 Hermite 向量丛
有限基空间上的丛、配对公理校验以及(反)态射
"""

from .bundle_core import (BaseSet, Bundle, BundleMorphism, BundleReport, apply_morphism, compose,
                          hermitian_bundle, identity_morphism, is_adjointable, is_isometry,
                          make_bundle, make_morphism, quasi_adjoint, validate_bundle)

__all__ = ['BaseSet', 'Bundle', 'BundleMorphism', 'BundleReport', 'apply_morphism', 'compose',
           'hermitian_bundle', 'identity_morphism', 'is_adjointable', 'is_isometry', 'make_bundle',
           'make_morphism', 'quasi_adjoint', 'validate_bundle']
