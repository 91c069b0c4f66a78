"""Euler scheme for constant-delay DDEs under inexact information."""

__version__ = "0.1.0"

from .bounds import (EnvelopeSpec, Regime, discrete_gronwall_bound, envelope,
                     fit_envelope_constant, grid_error_envelope)
from .core import DelayGrid, Interpolant, LayeredTrajectory, build_grid, interpolant_eval, sample_to_coarse
from .metrics import ErrorProfile, detect_plateau, error_profile, estimate_order
from .noise import NoiseMode, NoiseSpec, RngStream, perturb_initial, perturbed_eval, sample_step_noise
from .rhs import ProblemId, TestProblem, closed_form_lip, eval_rhs, make_test_problem
from .solver import DivergenceError, SolveRequest, euler_solve, reference_solve

__all__ = [
    "DelayGrid", "DivergenceError", "EnvelopeSpec", "ErrorProfile", "Interpolant", "LayeredTrajectory",
    "NoiseMode", "NoiseSpec", "ProblemId", "Regime", "RngStream", "SolveRequest", "TestProblem",
    "build_grid", "closed_form_lip", "detect_plateau", "discrete_gronwall_bound", "envelope",
    "error_profile", "estimate_order", "euler_solve", "eval_rhs", "fit_envelope_constant",
    "grid_error_envelope", "interpolant_eval", "make_test_problem", "perturb_initial",
    "perturbed_eval", "reference_solve", "sample_step_noise", "sample_to_coarse",
]
