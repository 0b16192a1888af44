"""Spectral laboratory for the 2D/3D non-resistive MHD system on the torus."""

from .spectral import (
    Field,
    Grid,
    VecField,
    dealias,
    divergence,
    gradient,
    laplacian,
    leray_project,
    perp_curl,
)
from .lp import LPFilterBank, NormReport, besov_norm, build_filter_bank, linf_norm, lp_block, lowpass, sobolev_norm
from .families import BumpSet, FamilyData, FamilyParams, b_high, b_low0, dt_b_high, make_bumps, make_family
from .solver import MhdState, SolveConfig, Stepper, Trajectory, recover_pressure, rhs, solve

__all__ = [
    "Field", "Grid", "VecField", "dealias", "divergence", "gradient",
    "laplacian", "leray_project", "perp_curl",
    "LPFilterBank", "NormReport", "besov_norm", "build_filter_bank",
    "linf_norm", "lp_block", "lowpass", "sobolev_norm",
    "BumpSet", "FamilyData", "FamilyParams", "b_high", "b_low0", "dt_b_high",
    "make_bumps", "make_family",
    "MhdState", "SolveConfig", "Stepper", "Trajectory", "recover_pressure",
    "rhs", "solve",
]

__version__ = "0.1.0"
