"""Samplers and exact probabilities for the function distributions.

U   -- uniform pairs/functions (fair independent signs).
F   -- forrelated pairs f = sgn(v), g = sgn(H v) for Gaussian v.
A[s], B[s] -- each f(x) = +1 with probability 1/2 +- (-1)^(s.x) / (2 sqrt N).
D[s] -- equal mixture of A[s] and B[s]; D is D[s] averaged over s.
U[eps] -- i.i.d. bits, each 1 with probability 1/2 + eps.

Single-object samplers return :class:`BooleanFunction` / :class:`FunctionPair`;
the ``*_batch`` helpers return stacked int8 arrays for Monte Carlo loops.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .boolfourier import MAX_QUBITS, BooleanFunction, dot_sign, wht
from .errors import DegenerateInputError, InvalidArgumentError, InvalidDimensionError
from .rng import as_generator

LOG2 = math.log(2.0)


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise InvalidArgumentError(f"n must be an integer in [1, {MAX_QUBITS}], got {n!r}")


def sgn(a) -> np.ndarray:
    """+1 where a >= 0, -1 elsewhere (so sgn(0) = +1)."""
    return np.where(np.asarray(a) >= 0, 1, -1).astype(np.int8)


class Provenance(enum.Enum):
    UNIFORM = "uniform"
    FORRELATED = "forrelated"


@dataclass(frozen=True, eq=False)
class GaussianField:
    n: int
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=np.float64)
        if v.shape != (1 << self.n,):
            raise InvalidDimensionError(f"field must have length 2**{self.n}")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @property
    def N(self) -> int:
        return 1 << self.n

    def transform(self) -> np.ndarray:
        return wht(self.v)


@dataclass(frozen=True)
class FunctionPair:
    f: BooleanFunction
    g: BooleanFunction
    provenance: Provenance
    field: Optional[GaussianField] = None

    def __post_init__(self):
        if self.f.n != self.g.n:
            raise InvalidDimensionError("f and g must share n")
        if (self.field is not None) != (self.provenance is Provenance.FORRELATED):
            raise InvalidArgumentError("a generating field is present iff the pair is forrelated")

    @property
    def n(self) -> int:
        return self.f.n


# -- uniform and forrelated -------------------------------------------------


def uniform_signs(gen: np.random.Generator, shape) -> np.ndarray:
    return (2 * gen.integers(0, 2, size=shape, dtype=np.int8) - 1).astype(np.int8)


def sample_uniform_function(n: int, rng) -> BooleanFunction:
    _check_n(n)
    return BooleanFunction(uniform_signs(as_generator(rng), 1 << n))


def sample_uniform_pair(n: int, rng) -> FunctionPair:
    _check_n(n)
    gen = as_generator(rng)
    f = BooleanFunction(uniform_signs(gen, 1 << n))
    g = BooleanFunction(uniform_signs(gen, 1 << n))
    return FunctionPair(f, g, Provenance.UNIFORM)


def forrelated_batch(n: int, count: int, gen: np.random.Generator):
    """Draw ``count`` forrelated pairs; returns (v, f, g) stacked along axis 0."""
    v = gen.standard_normal((count, 1 << n))
    return v, sgn(v), sgn(wht(v))


def sample_forrelated_pair(n: int, rng) -> FunctionPair:
    _check_n(n)
    v = as_generator(rng).standard_normal(1 << n)
    field = GaussianField(n, v)
    return FunctionPair(
        BooleanFunction(sgn(v)), BooleanFunction(sgn(field.transform())), Provenance.FORRELATED, field
    )


def overlap_batch(v: np.ndarray) -> np.ndarray:
    """flat(w)^T H flat(H w) for each row of v."""
    N = v.shape[-1]
    f = sgn(v).astype(np.float64)
    hg = wht(sgn(wht(v)))
    return np.einsum("...i,...i->...", f, hg) / N


def forrelation_overlap(field: GaussianField) -> float:
    """Inner product of flat(w) and H flat(Hw), w = v/|v|.

    ``flat(u)`` is the unit vector sgn(u_x)/sqrt(N).  Its square equals
    p(f,g) for the pair generated by ``field``.
    """
    if not np.any(field.v):
        raise DegenerateInputError("the zero vector has no direction")
    return float(overlap_batch(field.v))


# -- secretly biased functions ------------------------------------------------


class Branch(enum.Enum):
    A = "A"
    B = "B"
    D = "D"


@dataclass(frozen=True)
class BiasSpec:
    """Secret string s (integer index or bit string "x_1..x_n") and branch."""

    s: int | str
    branch: Branch = Branch.D

    def index(self, n: int) -> int:
        if isinstance(self.s, str):
            if len(self.s) != n or set(self.s) - {"0", "1"}:
                raise InvalidArgumentError(f"secret {self.s!r} is not an {n}-bit string")
            return sum(1 << i for i, b in enumerate(self.s) if b == "1")
        s = int(self.s)
        if not 0 <= s < (1 << n):
            raise InvalidArgumentError(f"secret {s} does not fit in {n} bits")
        return s


def biased_batch(n: int, s: np.ndarray, plus: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    """Rows drawn from A[s_i] where ``plus[i]`` is true, else from B[s_i]."""
    N = 1 << n
    chi = dot_sign(np.asarray(s)[:, None], np.arange(N)[None, :]).astype(np.float64)
    direction = np.where(np.asarray(plus), 1.0, -1.0)[:, None]
    p_plus = 0.5 + direction * chi / (2.0 * math.sqrt(N))
    return np.where(gen.random(p_plus.shape) < p_plus, 1, -1).astype(np.int8)


def _sample_biased(spec: BiasSpec, n: int, rng) -> tuple[BooleanFunction, Branch]:
    _check_n(n)
    s = spec.index(n)
    gen = as_generator(rng)
    branch = spec.branch
    if branch is Branch.D:
        branch = Branch.A if gen.integers(0, 2) == 0 else Branch.B
    vals = biased_batch(n, np.array([s]), np.array([branch is Branch.A]), gen)[0]
    return BooleanFunction(vals), branch


def sample_biased_function(spec: BiasSpec, n: int, rng) -> BooleanFunction:
    """Draw f from A[s], B[s] or the mixture D[s].

    For the mixture the A/B coin is consumed internally and not returned.
    """
    return _sample_biased(spec, n, rng)[0]


def debug_sample_biased_function(spec: BiasSpec, n: int, rng) -> tuple[BooleanFunction, Branch]:
    """Test-only variant of :func:`sample_biased_function` exposing the mixture coin."""
    return _sample_biased(spec, n, rng)


class Probability(NamedTuple):
    prob: float
    log_prob: float


def exact_log_probs_under_D(f_vals: np.ndarray, s) -> np.ndarray:
    """log Pr_{D[s]}[f] for stacked truth tables and broadcastable secrets."""
    f_vals = np.asarray(f_vals, dtype=np.float64)
    N = f_vals.shape[-1]
    s = np.asarray(s)
    chi = dot_sign(s[..., None], np.arange(N)).astype(np.float64)
    t = chi * f_vals / (2.0 * math.sqrt(N))
    log_a = np.log(0.5 + t).sum(axis=-1)
    log_b = np.log(0.5 - t).sum(axis=-1)
    return np.logaddexp(log_a, log_b) - LOG2


def exact_prob_under_D(f: BooleanFunction, s: int) -> Probability:
    """Exact Pr_{D[s]}[f] as the finite product formula, with its logarithm.

    The plain probability underflows to 0 for n >= 10; use ``log_prob`` there.
    """
    if f.n > 16:
        raise InvalidArgumentError("exact evaluation is limited to n <= 16")
    s = BiasSpec(s).index(f.n)
    lp = float(exact_log_probs_under_D(f.values, s))
    return Probability(math.exp(lp), lp)


def closed_form_limit_log_prob(fhat_s: float, n: int) -> float:
    N = 1 << n
    return float(np.logaddexp(fhat_s, -fhat_s)) - LOG2 - 0.5 - N * LOG2


def closed_form_limit_prob(fhat_s: float, n: int) -> float:
    """Large-N limit (e^f + e^-f) / (2 sqrt(e) 2^N) of Pr_{D[s]}[f], f = f^(s)."""
    return math.exp(closed_form_limit_log_prob(fhat_s, n))


# -- biased bit strings -------------------------------------------------------


def biased_bits(shape, epsilon: float, gen: np.random.Generator) -> np.ndarray:
    return (gen.random(shape) < 0.5 + epsilon).astype(np.uint8)


def sample_biased_string(m: int, epsilon: float, rng) -> np.ndarray:
    """m independent bits (uint8), each 1 with probability 1/2 + epsilon."""
    if not 0.0 <= epsilon <= 0.5:
        raise InvalidArgumentError(f"epsilon must lie in [0, 1/2], got {epsilon}")
    if m < 0:
        raise InvalidArgumentError("m must be non-negative")
    return biased_bits(m, epsilon, as_generator(rng))
