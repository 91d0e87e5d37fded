"""
Universality - 万有态射与万有性定理的数值验证
Δ_K、传递核 K^R、齐性核 K^π、复化万有性、轨道比较与迹态 GNS 套件
"""

from .universality_core import (PointRank, UniversalMorphism, UniversalityReport, build_universal_morphism,
                                canonical_transfer, invertibility_and_rank, transfer_kernel,
                                transport_operator, verify_universal_hermitian, verify_universal_involutive)
from .homogeneous_core import (HomogeneousBundle, OrbitComparison, SampledHomogeneous, complexified_universality,
                               coset_representatives, finite_group, group_action, homogeneous_bundle,
                               homogeneous_kernel, orbit_compare)
from .tracial_gns_core import TracialGnsReport, tracial_gns_suite

__all__ = ['PointRank', 'UniversalMorphism', 'UniversalityReport', 'build_universal_morphism',
           'canonical_transfer', 'invertibility_and_rank', 'transfer_kernel', 'transport_operator',
           'verify_universal_hermitian', 'verify_universal_involutive', 'HomogeneousBundle',
           'OrbitComparison', 'SampledHomogeneous', 'complexified_universality', 'coset_representatives',
           'finite_group', 'group_action', 'homogeneous_bundle', 'homogeneous_kernel', 'orbit_compare',
           'TracialGnsReport', 'tracial_gns_suite']
