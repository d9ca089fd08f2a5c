"""Classical strategies: the sampled double-sum Fourier Checking test and the
two "Bob" strategies used in the secretly-biased-coefficient experiments."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .boolfourier import BooleanFunction, parity, walsh_sums
from .distributions import forrelated_batch, uniform_signs
from .errors import InvalidArgumentError
from .quantum_sim import sample_from_sums
from .rng import as_generator

#: K = ceil(a * sqrt(N)) for a in this grid.
K_MULTIPLIERS = (1, 2, 4, 8)
#: Cutoff multipliers c; accept iff |Z| > c K.
C_GRID = tuple(round(0.25 * i, 2) for i in range(1, 33))


@dataclass(frozen=True)
class ClassicalFcParams:
    K: int
    c: float

    def __post_init__(self):
        if self.K < 1 or not self.c > 0:
            raise InvalidArgumentError("need K >= 1 and c > 0")


def _parity_signs(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    return 1.0 - 2.0 * parity(xs[..., :, None] & ys[..., None, :])


def classical_fc_statistic(f: BooleanFunction, g: BooleanFunction, K: int, rng):
    """Draw query sets X, Y of size K and return (X, Y, Z)."""
    if f.n != g.n:
        raise InvalidArgumentError("f and g must share n")
    if not 1 <= K <= f.N:
        raise InvalidArgumentError(f"K={K} must lie in [1, N={f.N}]")
    gen = as_generator(rng)
    xs = gen.choice(f.N, size=K, replace=False)
    ys = gen.choice(f.N, size=K, replace=False)
    z = f.values[xs].astype(np.float64) @ _parity_signs(xs, ys) @ g.values[ys].astype(np.float64)
    return xs, ys, float(z)


def classical_fc(f: BooleanFunction, g: BooleanFunction, params: ClassicalFcParams, rng) -> bool:
    """Accept iff |sum_{i,j} f(x_i) (-1)^(x_i.y_j) g(y_j)| > c K."""
    _, _, z = classical_fc_statistic(f, g, params.K, rng)
    return abs(z) > params.c * params.K


def _sample_without_replacement(gen: np.random.Generator, N: int, K: int, count: int) -> np.ndarray:
    # First K entries of independent random permutations, one row per trial.
    if K * 8 >= N:
        return np.argsort(gen.random((count, N)), axis=1)[:, :K]
    out = np.empty((count, K), dtype=np.int64)
    for i in range(count):
        out[i] = gen.choice(N, size=K, replace=False)
    return out


def statistic_batch(f_vals: np.ndarray, g_vals: np.ndarray, K: int, gen: np.random.Generator) -> np.ndarray:
    """|Z| / K for each row pair, with fresh X, Y per row."""
    count, N = f_vals.shape
    xs = _sample_without_replacement(gen, N, K, count)
    ys = _sample_without_replacement(gen, N, K, count)
    fx = np.take_along_axis(f_vals, xs, axis=1).astype(np.float64)
    gy = np.take_along_axis(g_vals, ys, axis=1).astype(np.float64)
    out = np.empty(count)
    step = max(1, (1 << 22) // (K * K))
    for lo in range(0, count, step):
        hi = min(count, lo + step)
        signs = _parity_signs(xs[lo:hi], ys[lo:hi])
        out[lo:hi] = np.einsum("ti,tij,tj->t", fx[lo:hi], signs, gy[lo:hi])
    return np.abs(out) / K


@dataclass
class CalibrationResult:
    params: ClassicalFcParams
    advantage: float
    accept_forrelated: float
    accept_uniform: float
    trials: int
    #: (K, c) -> (Pr_F[accept], Pr_U[accept]) for every grid cell
    table: dict = field(default_factory=dict)

    def best_advantage_for(self, K: int) -> float:
        return max(pf - pu for (k, _), (pf, pu) in self.table.items() if k == K)


def default_k_grid(n: int) -> list[int]:
    N = 1 << n
    return sorted({min(N, math.ceil(a * math.sqrt(N))) for a in K_MULTIPLIERS})


def calibrate_classical_fc(
    n: int,
    trials: int,
    rng,
    k_grid: Sequence[int] | None = None,
    c_grid: Sequence[float] = C_GRID,
) -> CalibrationResult:
    """Grid-search (K, c) for the largest empirical Pr_F[accept] - Pr_U[accept].

    Each K uses ``trials`` fresh forrelated and uniform pairs; all c values
    are scored on the same statistics.  Ties go to the smaller K, then the
    smaller c.
    """
    if n > 16:
        raise InvalidArgumentError("calibration is limited to n <= 16")
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    gen = as_generator(rng)
    N = 1 << n
    ks = sorted(set(k_grid)) if k_grid is not None else default_k_grid(n)
    cs = np.array(sorted(c_grid), dtype=np.float64)
    table = {}
    best = None
    chunk = max(1, min(trials, (1 << 21) // N))
    for K in ks:
        if not 1 <= K <= N:
            raise InvalidArgumentError(f"K={K} outside [1, N]")
        acc_f = np.zeros(len(cs))
        acc_u = np.zeros(len(cs))
        done = 0
        while done < trials:
            m = min(chunk, trials - done)
            _, ff, gf = forrelated_batch(n, m, gen)
            zf = statistic_batch(ff, gf, K, gen)
            fu = uniform_signs(gen, (m, N))
            gu = uniform_signs(gen, (m, N))
            zu = statistic_batch(fu, gu, K, gen)
            acc_f += (zf[:, None] > cs[None, :]).sum(axis=0)
            acc_u += (zu[:, None] > cs[None, :]).sum(axis=0)
            done += m
        for c, af, au in zip(cs, acc_f / trials, acc_u / trials):
            table[(K, float(c))] = (float(af), float(au))
            adv = af - au
            if best is None or adv > best[0] + 1e-12:
                best = (adv, K, float(c), af, au)
    adv, K, c, af, au = best
    return CalibrationResult(ClassicalFcParams(K, c), float(adv), float(af), float(au), trials, table)


def greedy_bob(f: BooleanFunction) -> int:
    """argmax_z |f^(z)|; ties go to the smallest index z."""
    s = walsh_sums(f.values)
    return int(np.argmax(np.abs(s)))


def quantum_bob(f: BooleanFunction, rng) -> int:
    """One FF-ALG measurement on f."""
    return int(sample_from_sums(walsh_sums(f.values), as_generator(rng)))
