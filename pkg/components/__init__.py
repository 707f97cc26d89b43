"""
Sato Grassmannian Components Module
"""

# Version information
__version__ = '1.0.0'

from .gamma import BiSeries, universal_element, exponential_element, abel_element, factor_unit
from .grassmannian import (
    GrassPoint, normalize, stratum, pluecker, perp, act, residue_pairing,
    monomial_point, vacuum, line_point, stratum_point, random_point,
)
from .tau_ba import (
    tau_expand, tau_direct, ba, ba_adjoint, ba_hat, ba_structure, addition_formula,
    addition_pluecker_check,
)
from .identities import (
    bilinear_residue, moduli_residue, unit_residue, kp_operator, moduli_operator, unit_operator,
    kp_check, moduli_check, unit_condition, kp_scan, moduli_scan, unit_scan, pde_triple, CheckReport,
)
from .krichever import (
    CurveSpec, krichever_map, algebra_check, gaps_and_genus, wgp_check, reconstruct_algebra,
)

# Export what we want to make available
__all__ = [
    'BiSeries',
    'universal_element',
    'exponential_element',
    'abel_element',
    'factor_unit',
    'GrassPoint',
    'normalize',
    'stratum',
    'pluecker',
    'perp',
    'act',
    'residue_pairing',
    'monomial_point',
    'vacuum',
    'line_point',
    'stratum_point',
    'random_point',
    'tau_expand',
    'tau_direct',
    'ba',
    'ba_adjoint',
    'ba_hat',
    'ba_structure',
    'addition_formula',
    'addition_pluecker_check',
    'bilinear_residue',
    'moduli_residue',
    'unit_residue',
    'kp_operator',
    'moduli_operator',
    'unit_operator',
    'kp_check',
    'moduli_check',
    'unit_condition',
    'kp_scan',
    'moduli_scan',
    'unit_scan',
    'pde_triple',
    'CheckReport',
    'CurveSpec',
    'krichever_map',
    'algebra_check',
    'gaps_and_genus',
    'wgp_check',
    'reconstruct_algebra',
]
