"""Small-lambda spectral asymptotics of the multi-interval finite Hilbert transform."""

from .geometry import ConfigError, IntervalConfig, angles, random_config, symmetric_config, validate_config
from .gfunction import GEvaluator
from .kernels import KernelSet, kappa_of
from .model import ModelSolution, coefficients
from .spectral_matrix import build_sums, cholesky, m_matrix

__all__ = [
    "ConfigError", "IntervalConfig", "angles", "random_config", "symmetric_config", "validate_config",
    "GEvaluator", "KernelSet", "kappa_of", "ModelSolution", "coefficients", "build_sums", "cholesky", "m_matrix",
]
__version__ = "0.1.0"
