"""Boolean functions on {0,1}^n and their Fourier (Walsh-Hadamard) spectra.

Conventions used throughout the package:

* A point x in {0,1}^n is stored as an integer index in [0, N), N = 2**n.
  Bit 0 (the least significant bit) of the index is input bit x_1, bit 1 is
  x_2, and so on.  ``bits_to_index`` / ``index_to_bits`` convert between the
  integer form and the string "x_1 x_2 ... x_n".
* x . z is the parity of ``x & z``; the character of z is (-1)^(x . z).
* The transform is normalized by 1/sqrt(N), so it is an involution and
  preserves Euclidean norms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, InvalidDimensionError

MAX_QUBITS = 24

#: Thresholds on |f^(z)| used by Fourier Fishing and by the good-tuple promise.
FISH_LOW = 1.0
FISH_HIGH = 2.0
GOOD_LOW_MASS = 0.8
GOOD_HIGH_MASS = 0.26


def log2_exact(length: int) -> int:
    """Return n with 2**n == length, or raise InvalidDimensionError."""
    if length < 1 or length & (length - 1):
        raise InvalidDimensionError(f"length {length} is not a power of two")
    return length.bit_length() - 1


def parity(x):
    """Parity (popcount mod 2) of non-negative integers, elementwise."""
    x = np.asarray(x, dtype=np.int64)
    x = x ^ (x >> 32)
    x = x ^ (x >> 16)
    x = x ^ (x >> 8)
    x = x ^ (x >> 4)
    x = x ^ (x >> 2)
    x = x ^ (x >> 1)
    return x & 1


def character(z: int, n: int) -> np.ndarray:
    """The character x -> (-1)^(x.z) as a length-2**n float vector."""
    return 1.0 - 2.0 * parity(np.arange(1 << n) & z)


def dot_sign(x, z):
    """(-1)^(x.z) elementwise, as int8."""
    return (1 - 2 * parity(np.bitwise_and(x, z))).astype(np.int8)


def bits_to_index(bits: str) -> int:
    """Convert "x_1 x_2 ... x_n" (characters '0'/'1') to an index."""
    if not bits or set(bits) - {"0", "1"}:
        raise InvalidArgumentError(f"not a bit string: {bits!r}")
    return sum(1 << i for i, b in enumerate(bits) if b == "1")


def index_to_bits(index: int, n: int) -> str:
    if not 0 <= index < (1 << n):
        raise InvalidArgumentError(f"index {index} out of range for n={n}")
    return "".join("1" if (index >> i) & 1 else "0" for i in range(n))


def _fwht_inplace(a: np.ndarray) -> None:
    # Unnormalized butterfly along the last axis; `a` must be float64 and C-contiguous.
    N = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < N:
        view = a.reshape(lead + (N // (2 * h), 2, h))
        lo = view[..., 0, :]
        hi = view[..., 1, :]
        tmp = lo.copy()
        lo += hi
        np.subtract(tmp, hi, out=hi)
        h *= 2


def wht(vec) -> np.ndarray:
    """Normalized Walsh-Hadamard transform along the last axis.

    ``out[z] = N**-0.5 * sum_x (-1)**(x.z) * vec[x]``.  Leading axes are
    treated as a batch.  Runs in O(N log N) per vector and returns a new
    float64 array.
    """
    a = np.array(vec, dtype=np.float64, order="C", copy=True)
    if a.ndim == 0:
        raise InvalidDimensionError("wht needs at least one axis")
    log2_exact(a.shape[-1])
    _fwht_inplace(a)
    a *= 1.0 / math.sqrt(a.shape[-1])
    return a


def walsh_sums(vec) -> np.ndarray:
    """Unnormalized transform sum_x (-1)^(x.z) vec[x].  Exact for +-1 inputs."""
    a = np.array(vec, dtype=np.float64, order="C", copy=True)
    log2_exact(a.shape[-1])
    _fwht_inplace(a)
    return a


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """Truth table of f: {0,1}^n -> {-1,+1}."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1:
            raise InvalidDimensionError("truth table must be one-dimensional")
        n = log2_exact(vals.shape[0])
        if n > MAX_QUBITS:
            raise InvalidDimensionError(f"n={n} exceeds the cap of {MAX_QUBITS}")
        if not np.all((vals == 1) | (vals == -1)):
            raise InvalidArgumentError("truth table entries must be -1 or +1")
        vals = vals.astype(np.int8)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, n: int, fn) -> "BooleanFunction":
        return cls(np.array([fn(x) for x in range(1 << n)]))

    @classmethod
    def parity(cls, n: int, z: int) -> "BooleanFunction":
        """The character (-1)^(x.z)."""
        return cls(dot_sign(np.arange(1 << n), z))

    @classmethod
    def constant(cls, n: int, sign: int = 1) -> "BooleanFunction":
        return cls(np.full(1 << n, sign, dtype=np.int8))

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def __len__(self) -> int:
        return self.N

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        return f"BooleanFunction(n={self.n})"


@dataclass(frozen=True, eq=False)
class SpectrumVector:
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.float64)
        if c.shape != (1 << self.n,):
            raise InvalidDimensionError("spectrum length must be 2**n")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self) -> int:
        return 1 << self.n

    def __getitem__(self, z):
        return self.coeffs[z]

    def parseval_error(self) -> float:
        return abs(float(np.dot(self.coeffs, self.coeffs)) - self.N)


def fourier(f: BooleanFunction) -> SpectrumVector:
    """Fourier spectrum f^(z) of a Boolean function."""
    spec = SpectrumVector(f.n, wht(f.values))
    if spec.parseval_error() > 1e-9 * spec.N:
        raise AssertionError("Parseval identity violated")  # unreachable for +-1 tables
    return spec


def _same_n(f: BooleanFunction, g: BooleanFunction) -> None:
    if f.n != g.n:
        raise InvalidDimensionError(f"functions on different n: {f.n} vs {g.n}")


def forrelation_value(f: BooleanFunction, g: BooleanFunction) -> float:
    """p(f,g) = (sum_{x,y} f(x) (-1)^(x.y) g(y))^2 / N^3 via one transform."""
    _same_n(f, g)
    return float(forrelation_batch(f.values, g.values))


def forrelation_batch(f_vals, g_vals) -> np.ndarray:
    """p(f,g) for stacked truth tables of shape (..., N)."""
    f_vals = np.asarray(f_vals)
    g_vals = np.asarray(g_vals)
    if f_vals.shape != g_vals.shape:
        raise InvalidDimensionError("f and g batches differ in shape")
    N = f_vals.shape[-1]
    s = walsh_sums(f_vals)
    ip = np.einsum("...i,...i->...", s, g_vals.astype(np.float64))
    # ip is an exact integer; ip^2 / N^3 <= 1 by Cauchy-Schwarz.
    return np.minimum(ip * ip / float(N) ** 3, 1.0)


def forrelation_bruteforce(f: BooleanFunction, g: BooleanFunction) -> float:
    """O(N^2) evaluation of the defining double sum, for cross-checks."""
    _same_n(f, g)
    N = f.N
    idx = np.arange(N)
    signs = dot_sign(idx[:, None], idx[None, :]).astype(np.float64)
    total = f.values.astype(np.float64) @ signs @ g.values.astype(np.float64)
    return float(total * total / N**3)


def _meets(sums: np.ndarray, threshold: float, N: int) -> np.ndarray:
    # |S/sqrt(N)| >= t  <=>  S^2 >= t^2 N, evaluated on the exact integer sums.
    return sums * sums >= threshold * threshold * N


def good_masses(sums: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-function spectral mass above |f^| >= 1 and >= 2, divided by N.

    ``sums`` holds unnormalized Walsh sums, shape (..., N).  The returned
    arrays have the leading shape; each entry lies in [0, 1].
    """
    N = sums.shape[-1]
    sq = sums * sums / N
    low = np.where(_meets(sums, FISH_LOW, N), sq, 0.0).sum(axis=-1) / N
    high = np.where(_meets(sums, FISH_HIGH, N), sq, 0.0).sum(axis=-1) / N
    return low, high


def _check_tuple(fs: Sequence[BooleanFunction]) -> int:
    n = len(fs)
    if n == 0:
        raise InvalidArgumentError("empty tuple")
    for f in fs:
        if f.n != n:
            raise InvalidArgumentError(
                f"expected {n} functions on {n} bits, got a function on {f.n} bits"
            )
    return n


def is_good_batch(sums: np.ndarray) -> np.ndarray:
    """Good-tuple test for stacked tuples of Walsh sums, shape (..., n, N)."""
    low, high = good_masses(sums)
    # mass/N summed over i >= c*n  <=>  sum_i sum_z f^2 >= c*N*n
    n = sums.shape[-2]
    return (low.sum(axis=-1) >= GOOD_LOW_MASS * n) & (high.sum(axis=-1) >= GOOD_HIGH_MASS * n)


def is_good(fs: Sequence[BooleanFunction]) -> bool:
    """Whether the n-tuple meets the 0.8Nn / 0.26Nn spectral-mass promise."""
    _check_tuple(fs)
    sums = walsh_sums(np.stack([f.values for f in fs]))
    return bool(is_good_batch(sums))


def success_counts_required(n: int) -> tuple[int, int]:
    """Number of indices that must clear |f^|>=1 and |f^|>=2 (ceil rounding)."""
    # ceil(3n/4), ceil(n/4) in exact integer arithmetic
    return (3 * n + 3) // 4, (n + 3) // 4


def fishing_success(chosen_sums: np.ndarray, N: int) -> np.ndarray:
    """Success flag from S_i(z_i) values, shape (..., n)."""
    n = chosen_sums.shape[-1]
    need_low, need_high = success_counts_required(n)
    low = _meets(chosen_sums, FISH_LOW, N).sum(axis=-1)
    high = _meets(chosen_sums, FISH_HIGH, N).sum(axis=-1)
    return (low >= need_low) & (high >= need_high)


def ff_success(zs: Sequence[int], fs: Sequence[BooleanFunction]) -> bool:
    """Whether outputs z_1..z_n solve Fourier Fishing on f_1..f_n."""
    if len(zs) != len(fs):
        raise InvalidArgumentError(f"{len(zs)} outputs for {len(fs)} functions")
    if not fs:
        raise InvalidArgumentError("empty tuple")
    N = fs[0].N
    chosen = []
    for z, f in zip(zs, fs):
        if f.N != N:
            raise InvalidArgumentError("functions differ in n")
        if not 0 <= int(z) < N:
            raise InvalidArgumentError(f"z={z} out of range")
        chosen.append(float(np.dot(f.values.astype(np.float64), character(int(z), f.n))))
    return bool(fishing_success(np.array(chosen), N))
