"""Certified scattering amplitudes from the L1 violation of approximate eigenstates."""

from .bounds import (BoundUnavailable, StabilityBound, XiEstimate, cross_section_interval,
                     gamma_star, phase_shift_error_bound, pointwise_f_bound,
                     sqrt_cross_section_radius, xi_linf_numerical, xi_linf_transfer_1d)
from .oracles import PhaseShiftResult, numerov_phase_shift, oracle_partial_waves
from .potentials import RadialPotential, RampPlateauPotential, square_well
from .variational import OptimizerConfig, loss, optimize
from .violation import ViolationReport, violation_report
from .wavefield import ScatteringAnsatz, resample_oracle

__all__ = [
    "BoundUnavailable", "OptimizerConfig", "PhaseShiftResult", "RadialPotential",
    "RampPlateauPotential", "ScatteringAnsatz", "StabilityBound", "ViolationReport",
    "XiEstimate", "cross_section_interval", "gamma_star", "loss", "numerov_phase_shift",
    "optimize", "oracle_partial_waves", "phase_shift_error_bound", "pointwise_f_bound",
    "resample_oracle", "sqrt_cross_section_radius", "square_well", "violation_report",
    "xi_linf_numerical", "xi_linf_transfer_1d",
]
