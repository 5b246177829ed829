"""Weighted Fourier-Jacobi expansions, matrix summation methods and
symmetric alpha-stable stochastic integration, with Monte Carlo tools for
studying summability in probability of random Fourier-Jacobi series."""

from .jacobi_core import (
    JacobiParams,
    QuadratureRule,
    WeightParams,
    gauss_jacobi_rule,
    jacobi_eval,
    norm_square,
    orthonormal_eval,
    weight_eval,
)
from .fourier_jacobi import (
    ExpansionCoefficients,
    RandomCoefficients,
    TargetFunction,
    coefficients,
    partial_sum,
    random_coefficient,
    target_from_descriptor,
)
from .stable_process import StableIndex, StablePath, sample_path, sample_sas, stochastic_integral
from .convergence_lab import ExperimentConfig, run_experiment

__version__ = "0.1.0"
