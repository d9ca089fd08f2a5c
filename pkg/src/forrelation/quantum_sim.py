"""Exact simulation of the Fourier Fishing and Fourier Checking query algorithms.

Neither algorithm needs a general state-vector engine.  Preparing
N^-1/2 sum_x f(x)|x> and applying H^n gives amplitudes f^(z)/sqrt(N), so
fishing is sampling z with probability f^(z)^2 / N.  For checking, the
amplitude of |0^n> after the second Hadamard layer is <f^, g>/N, hence the
single-run acceptance probability is p(f, g).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .boolfourier import (
    BooleanFunction,
    _check_tuple,
    fishing_success,
    forrelation_value,
    walsh_sums,
)
from .errors import InvalidArgumentError
from .rng import as_generator

PROMISE_HIGH = 0.05
PROMISE_LOW = 0.01
FC_DECISION_THRESHOLD = 0.03


@dataclass(frozen=True)
class FishingOutcome:
    zs: tuple[int, ...]
    success: bool
    magnitudes: tuple[float, ...]


class PromiseVerdict(enum.Enum):
    FORRELATED = "forrelated"
    UNIFORMISH = "uniformish"
    OUTSIDE_PROMISE = "outside_promise"


def ff_output_distribution(f: BooleanFunction) -> np.ndarray:
    """Measurement distribution Pr[z] = f^(z)^2 / N of one FF-ALG round."""
    s = walsh_sums(f.values)
    return s * s / float(f.N) ** 2


def sample_from_sums(sums: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    """One inverse-CDF draw per row, with Pr[z] proportional to sums[..., z]^2."""
    cdf = np.cumsum(sums * sums, axis=-1)
    u = gen.random(sums.shape[:-1] + (1,)) * cdf[..., -1:]
    z = (cdf <= u).sum(axis=-1)
    return np.minimum(z, sums.shape[-1] - 1)


def ff_run(fs: Sequence[BooleanFunction], rng) -> FishingOutcome:
    """Run FF-ALG once on the tuple and evaluate its output."""
    n = _check_tuple(fs)
    gen = as_generator(rng)
    N = 1 << n
    sums = walsh_sums(np.stack([f.values for f in fs]))
    zs = sample_from_sums(sums, gen)
    chosen = sums[np.arange(n), zs]
    return FishingOutcome(
        zs=tuple(int(z) for z in zs),
        success=bool(fishing_success(chosen, N)),
        magnitudes=tuple(float(abs(c)) / np.sqrt(N) for c in chosen),
    )


def fc_accept_probability(f: BooleanFunction, g: BooleanFunction) -> float:
    """Probability that one run of FC-ALG observes |0^n>, i.e. p(f, g)."""
    return forrelation_value(f, g)


def fc_run(f: BooleanFunction, g: BooleanFunction, repetitions: int, rng) -> bool:
    """Repeat FC-ALG and accept iff the acceptance frequency exceeds 0.03."""
    if repetitions < 1:
        raise InvalidArgumentError("repetitions must be >= 1")
    p = fc_accept_probability(f, g)
    hits = as_generator(rng).binomial(repetitions, p)
    return hits / repetitions > FC_DECISION_THRESHOLD


def classify_promise(f: BooleanFunction, g: BooleanFunction) -> PromiseVerdict:
    p = forrelation_value(f, g)
    if p >= PROMISE_HIGH:
        return PromiseVerdict.FORRELATED
    if p <= PROMISE_LOW:
        return PromiseVerdict.UNIFORMISH
    return PromiseVerdict.OUTSIDE_PROMISE
