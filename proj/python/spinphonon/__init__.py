"""Ground-state toolkit for photon-mediated spin-motion chains."""

from ._spinphonon import (
    classical_critical_coupling,
    classical_minimize,
    dmrg_point,
    ed_ground_energy,
    effective_couplings,
    hplus_magnetization,
    triplet_fractions,
    wannier_coefficients,
    xx_ground_energy,
)

__all__ = [
    "classical_critical_coupling",
    "classical_minimize",
    "dmrg_point",
    "ed_ground_energy",
    "effective_couplings",
    "hplus_magnetization",
    "triplet_fractions",
    "wannier_coefficients",
    "xx_ground_energy",
]
