"""Forrelation and Fourier Fishing at simulable sizes.

Exact Walsh-Hadamard tools, the uniform / forrelated / secretly-biased
distributions, classical simulations of the quantum query algorithms, the
classical sqrt(N)-query checker, and Monte Carlo checks of near k-wise
independence.
"""
from .boolfourier import (
    BooleanFunction,
    SpectrumVector,
    ff_success,
    forrelation_bruteforce,
    forrelation_value,
    fourier,
    is_good,
    walsh_sums,
    wht,
)
from .distributions import (
    BiasSpec,
    Branch,
    FunctionPair,
    GaussianField,
    Provenance,
    exact_prob_under_D,
    sample_biased_function,
    sample_biased_string,
    sample_forrelated_pair,
    sample_uniform_function,
    sample_uniform_pair,
)
from .errors import ForrelationError
from .rng import RngStream

__version__ = "0.1.0"

__all__ = [
    "BiasSpec", "BooleanFunction", "Branch", "ForrelationError", "FunctionPair", "GaussianField",
    "Provenance", "RngStream", "SpectrumVector", "exact_prob_under_D", "ff_success",
    "forrelation_bruteforce", "forrelation_value", "fourier", "is_good", "sample_biased_function",
    "sample_biased_string", "sample_forrelated_pair", "sample_uniform_function", "sample_uniform_pair",
    "walsh_sums", "wht",
]
