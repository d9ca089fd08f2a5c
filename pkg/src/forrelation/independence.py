"""k-terms over forrelated pairs and the Gaussian affine-subspace ratio.

A k-term fixes the signs of k distinct values among f(x) (F-side) and g(y)
(G-side).  Under the uniform distribution it has probability 2^-k; under the
forrelated distribution the values are signs of jointly Gaussian variables
with covariance matrix

    A = [[I_K, C], [C^T, I_L]],   C[i, j] = (-1)^(x_i . y_j) / sqrt(N),

which also drives the density ratio exp((Delta_S - Delta_T) / 2).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .boolfourier import MAX_QUBITS, dot_sign, parity, wht
from .errors import IllConditionedSystemError, InvalidArgumentError, UnsupportedOrderError
from .rng import as_generator

K_MAX = 64
MIN_MC_TRIALS = 10_000


class Side(enum.Enum):
    F = "f"
    G = "g"


@dataclass(frozen=True)
class Literal:
    side: Side
    point: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidArgumentError("literal sign must be +1 or -1")


@dataclass(frozen=True)
class KTerm:
    n: int
    literals: tuple[Literal, ...]

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))
        if not 1 <= self.n <= MAX_QUBITS:
            raise InvalidArgumentError("n out of range")
        if not 1 <= len(self.literals) <= K_MAX:
            raise InvalidArgumentError(f"a term needs between 1 and {K_MAX} literals")
        keys = {(lit.side, lit.point) for lit in self.literals}
        if len(keys) != len(self.literals):
            raise InvalidArgumentError("duplicate (side, point) in term")
        for lit in self.literals:
            if not 0 <= lit.point < (1 << self.n):
                raise InvalidArgumentError(f"point {lit.point} out of range")

    @property
    def k(self) -> int:
        return len(self.literals)

    def side(self, side: Side) -> list[Literal]:
        return [lit for lit in self.literals if lit.side is side]

    def is_mixed(self) -> bool:
        return bool(self.side(Side.F)) and bool(self.side(Side.G))


def random_term(n: int, k: int, gen: np.random.Generator, *, sides: Sequence[Side] | None = None) -> KTerm:
    """A uniformly random k-term; ``sides`` optionally pins each literal's side."""
    N = 1 << n
    if k > 2 * N:
        raise InvalidArgumentError("k exceeds the number of variables")
    if sides is None:
        chosen = gen.choice(2 * N, size=k, replace=False)
        keys = [(Side.F if var < N else Side.G, int(var % N)) for var in chosen]
    else:
        if len(sides) != k:
            raise InvalidArgumentError("need one side per literal")
        keys = []
        for side in sides:
            used = {p for s_, p in keys if s_ is side}
            if len(used) >= N:
                raise InvalidArgumentError("not enough distinct points on one side")
            while True:
                p = int(gen.integers(0, N))
                if p not in used:
                    break
            keys.append((side, p))
    signs = 1 - 2 * gen.integers(0, 2, size=k)
    lits = [Literal(side, p, int(sg)) for (side, p), sg in zip(keys, signs)]
    return KTerm(n, tuple(lits))


def term_prob_uniform(term: KTerm) -> float:
    return 2.0 ** -term.k


@dataclass(frozen=True)
class RatioEstimate:
    estimate: float
    se: float
    trials: int

    @property
    def probability(self) -> float:
        return self.estimate


def _estimate_from_hits(hits: int, trials: int, k: int) -> RatioEstimate:
    p = hits / trials
    se = math.sqrt(p * (1 - p) / trials)
    scale = 2.0**k
    return RatioEstimate(p * scale, se * scale, trials)


def _term_hits(terms: Sequence[KTerm], f_hat_at, v_at) -> np.ndarray:
    hits = []
    for term in terms:
        ok = None
        for lit in term.literals:
            vals = v_at[lit.point] if lit.side is Side.F else f_hat_at[lit.point]
            sat = (vals >= 0) if lit.sign > 0 else (vals < 0)
            ok = sat if ok is None else (ok & sat)
        hits.append(int(ok.sum()))
    return np.array(hits, dtype=np.int64)


def forrelated_term_hits(terms: Sequence[KTerm], trials: int, gen: np.random.Generator,
                         chunk: int | None = None) -> np.ndarray:
    """Number of forrelated samples (out of ``trials``) satisfying each term.

    Each sample draws the full Gaussian vector v; the needed G-side values
    v^(y) are computed from it exactly (by explicit character sums when few
    points are needed, otherwise by a full transform).
    """
    n = terms[0].n
    if any(t.n != n for t in terms):
        raise InvalidArgumentError("terms must share n")
    N = 1 << n
    f_pts = sorted({lit.point for t in terms for lit in t.literals if lit.side is Side.F})
    g_pts = sorted({lit.point for t in terms for lit in t.literals if lit.side is Side.G})
    use_matmul = len(g_pts) <= 4 * n
    if use_matmul and g_pts:
        chars = dot_sign(np.arange(N)[:, None], np.array(g_pts)[None, :]).astype(np.float64) / math.sqrt(N)
    if chunk is None:
        chunk = max(1, (1 << 22) // N)
    hits = np.zeros(len(terms), dtype=np.int64)
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        v = gen.standard_normal((m, N))
        v_at = {p: v[:, p] for p in f_pts}
        if not g_pts:
            ghat = {}
        elif use_matmul:
            vh = v @ chars
            ghat = {p: vh[:, i] for i, p in enumerate(g_pts)}
        else:
            vh = wht(v)
            ghat = {p: vh[:, p] for p in g_pts}
        hits += _term_hits(terms, ghat, v_at)
        done += m
    return hits


def ratio_estimates(hits, trials: int, terms: Sequence[KTerm]) -> list[RatioEstimate]:
    return [_estimate_from_hits(int(h), trials, t.k) for h, t in zip(hits, terms)]


def terms_prob_forrelated_mc(terms: Sequence[KTerm], trials: int, rng) -> list[RatioEstimate]:
    """Pr_F[C] / 2^-k for several terms, estimated on shared forrelated samples."""
    if trials < MIN_MC_TRIALS:
        raise InvalidArgumentError(f"need at least {MIN_MC_TRIALS} trials")
    if not terms:
        return []
    hits = forrelated_term_hits(terms, trials, as_generator(rng))
    return ratio_estimates(hits, trials, terms)


def term_prob_forrelated_mc(term: KTerm, trials: int, rng) -> RatioEstimate:
    """Monte Carlo estimate of Pr_F[term] / Pr_U[term] with its standard error."""
    return terms_prob_forrelated_mc([term], trials, rng)[0]


def term_prob_forrelated_analytic2(term: KTerm) -> float:
    """Exact Pr_F[term] for terms of order at most two.

    A mixed pair (f(x), g(y)) is a bivariate normal orthant with correlation
    rho = (-1)^(x.y) / sqrt(N): probability 1/4 + s_f s_g arcsin(rho) / (2 pi).
    """
    if term.k > 2:
        raise UnsupportedOrderError("closed form available only for k <= 2")
    if term.k == 1:
        return 0.5
    if not term.is_mixed():
        return 0.25
    (lf,), (lg,) = term.side(Side.F), term.side(Side.G)
    rho = (1 - 2 * int(parity(lf.point & lg.point))) / math.sqrt(1 << term.n)
    return 0.25 + lf.sign * lg.sign * math.asin(rho) / (2 * math.pi)


# -- affine subspace machinery ------------------------------------------------


@dataclass(frozen=True, eq=False)
class CovarianceSystem:
    A: np.ndarray
    w: np.ndarray
    K: int
    L: int


def cross_block(xs, ys, n: int) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    return dot_sign(xs[:, None], ys[None, :]).astype(np.float64) / math.sqrt(1 << n)


def build_covariance_system(xs, ys, a, b, n: int) -> CovarianceSystem:
    """Assemble A u = w for constraints F(x_i) = a_i, F^(y_j) = b_j."""
    xs, ys = list(xs), list(ys)
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    K, L = len(xs), len(ys)
    if len(a) != K or len(b) != L:
        raise InvalidArgumentError("constraint values must match the point lists")
    if K + L < 1:
        raise InvalidArgumentError("need at least one constraint")
    if len(set(xs)) != K or len(set(ys)) != L:
        raise InvalidArgumentError("points must be distinct on each side")
    N = 1 << n
    # Gershgorin radius of A is max(K, L)/sqrt(N); keep it <= 1/2.
    if 2 * max(K, L) > math.sqrt(N):
        raise IllConditionedSystemError(
            f"max(K, L) = {max(K, L)} exceeds sqrt(N)/2 = {math.sqrt(N) / 2:g}"
        )
    A = np.eye(K + L)
    if K and L:
        C = cross_block(xs, ys, n)
        A[:K, K:] = C
        A[K:, :K] = C.T
    return CovarianceSystem(A, np.concatenate([a, b]), K, L)


def subspace_distances(system: CovarianceSystem) -> tuple[float, float]:
    """(Delta_S, Delta_T) with Delta_S = w.w and Delta_T = w.A^-1.w."""
    w = system.w
    try:
        factor = scipy.linalg.cho_factor(system.A, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise IllConditionedSystemError("covariance matrix is not positive definite") from exc
    u = scipy.linalg.cho_solve(factor, w)
    return float(w @ w), float(w @ u)


def gaussian_subspace_ratio(system: CovarianceSystem) -> float:
    """exp((Delta_S - Delta_T) / 2): forrelated vs independent Gaussian measure of S."""
    ds, dt = subspace_distances(system)
    return math.exp((ds - dt) / 2.0)


@dataclass(frozen=True)
class RatioBoundResult:
    n: int
    k: int
    samples: int
    max_deviation: float
    #: max over samples of |ratio - 1| / ((K+L) Delta_S / sqrt(N))
    fitted_constant: float
    min_ratio: float


def _truncated_constraints(gen: np.random.Generator, k: int, limit: float) -> np.ndarray:
    while True:
        w = gen.standard_normal(k)
        if w @ w <= limit:
            return w


def ratio_bound_check(n: int, k: int, samples: int, rng) -> RatioBoundResult:
    """Worst |exp((Delta_S - Delta_T)/2) - 1| over random systems with Delta_S <= k."""
    N = 1 << n
    if k < 1 or k > math.sqrt(N) / 4:
        raise InvalidArgumentError(f"k={k} must lie in [1, sqrt(N)/4]")
    gen = as_generator(rng)
    worst = 0.0
    worst_const = 0.0
    min_ratio = math.inf
    for _ in range(samples):
        K = int(gen.integers(0, k + 1))
        L = k - K
        xs = gen.choice(N, size=K, replace=False)
        ys = gen.choice(N, size=L, replace=False)
        w = _truncated_constraints(gen, k, float(k))
        system = build_covariance_system(xs, ys, w[:K], w[K:], n)
        ratio = gaussian_subspace_ratio(system)
        dev = abs(ratio - 1.0)
        ds = float(w @ w)
        worst = max(worst, dev)
        if ds > 0:
            worst_const = max(worst_const, dev / (k * ds / math.sqrt(N)))
        min_ratio = min(min_ratio, ratio)
    return RatioBoundResult(n, k, samples, worst, worst_const, min_ratio)
