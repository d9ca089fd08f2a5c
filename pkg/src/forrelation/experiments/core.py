"""Named, seeded experiments.  Each returns an :class:`ExperimentReport`."""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from ..boolfourier import (
    BooleanFunction,
    dot_sign,
    parity,
    fishing_success,
    forrelation_batch,
    good_masses,
    is_good_batch,
    walsh_sums,
)
from ..classical_algs import (
    calibrate_classical_fc,
    default_k_grid,
)
from ..distributions import (
    biased_batch,
    biased_bits,
    exact_log_probs_under_D,
    forrelated_batch,
    overlap_batch,
    uniform_signs,
)
from ..errors import InvalidArgumentError, TooLargeError
from ..independence import (
    KTerm,
    Literal,
    Side,
    build_covariance_system,
    gaussian_subspace_ratio,
    random_term,
    ratio_bound_check,
    term_prob_forrelated_analytic2,
    forrelated_term_hits,
    ratio_estimates,
)
from ..quantum_sim import sample_from_sums
from ..rng import as_stream
from .parallel import merge_sum, run_chunks
from .report import ExperimentReport

CHUNK_DOUBLES = 1 << 22
SE_BAND = 3.0
ALICEBOB_BIN = 0.5
ALICEBOB_MIN_EXPECTED_HITS = 10.0


class Solver(str, enum.Enum):
    QUANTUM = "quantum"
    GREEDY = "greedy"


def _binom_se(p: float, t: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / t) if t else float("nan")


def _chunk(per_trial: int, total: int) -> int:
    return max(1, min(total, CHUNK_DOUBLES // per_trial))


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.t0) * 1e3


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidArgumentError(msg)


# -- Gaussian tail constants --------------------------------------------------


def gaussian_tail_mass(t: float) -> float:
    """(2 / sqrt(2 pi)) * integral_t^inf x^2 exp(-x^2/2) dx by adaptive quadrature."""
    val, _ = integrate.quad(lambda x: x * x * math.exp(-x * x / 2), t, math.inf, epsabs=1e-13, epsrel=1e-12)
    return 2.0 * val / math.sqrt(2 * math.pi)


def verify_gaussian_tail_constants() -> ExperimentReport:
    with _Timer() as tm:
        rep = ExperimentReport("gaussian_tail_constants", {"thresholds": [0, 1, 2]}, 0)
        rep.add("tail_mass[t=0]", gaussian_tail_mass(0.0), None, 1.0, 1e-9, "==")
        rep.add("tail_mass[t=1]", gaussian_tail_mass(1.0), None, 0.801, 0.001, "==")
        rep.add("tail_mass[t=2]", gaussian_tail_mass(2.0), None, 0.261, 0.001, "==")
    rep.duration_ms = tm.ms
    return rep


# -- Fourier Fishing -----------------------------------------------------------


def _mostgood_kernel(gen, size, n):
    N = 1 << n
    sums = walsh_sums(uniform_signs(gen, (size, n, N)))
    low, high = good_masses(sums)
    return (int(is_good_batch(sums).sum()), float(low.mean(axis=1).sum()), float(high.mean(axis=1).sum()))


def verify_mostgood(n: int, trials: int, rng, workers: Optional[int] = None) -> ExperimentReport:
    """Fraction of uniformly random n-tuples that are good."""
    _require(8 <= n <= 16, "verify_mostgood needs 8 <= n <= 16")
    _require(trials >= 1, "trials must be >= 1")
    stream = as_stream(rng)
    N = 1 << n
    with _Timer() as tm:
        res = run_chunks(_mostgood_kernel, stream, trials, _chunk(n * N, trials), n, workers=workers)
        good, low, high = merge_sum(res)
        frac = good / trials
        rep = ExperimentReport("mostgood", {"n": n, "trials": trials}, stream.seed)
        primary = n >= 10
        rep.add("good_fraction", frac, _binom_se(frac, trials), 0.99 if primary else 0.95, 0.0, ">=", gating=primary)
        rep.add("mean_mass[|f^|>=1]/N", low / trials, None, 0.801, 0.0, "==", gating=False)
        rep.add("mean_mass[|f^|>=2]/N", high / trials, None, 0.261, 0.0, "==", gating=False)
    rep.duration_ms = tm.ms
    return rep


def _ff_kernel(gen, size, n):
    N = 1 << n
    sums = walsh_sums(uniform_signs(gen, (size, n, N)))
    good = is_good_batch(sums)
    zs = sample_from_sums(sums, gen)
    chosen = np.take_along_axis(sums, zs[..., None], axis=-1)[..., 0]
    ok = fishing_success(chosen, N)
    low_hits = (chosen * chosen >= N).sum()
    high_hits = (chosen * chosen >= 4 * N).sum()
    return (int(ok.sum()), int(good.sum()), int((ok & good).sum()), int(low_hits), int(high_hits))


def verify_ff(n: int, trials: int, rng, workers: Optional[int] = None) -> ExperimentReport:
    """Unconditional success rate of FF-ALG on uniformly random tuples."""
    _require(8 <= n <= 16, "verify_ff needs 8 <= n <= 16")
    _require(trials >= 1, "trials must be >= 1")
    stream = as_stream(rng)
    N = 1 << n
    with _Timer() as tm:
        res = run_chunks(_ff_kernel, stream, trials, _chunk(n * N, trials), n, workers=workers)
        ok, good, ok_good, low_hits, high_hits = merge_sum(res)
        rate = ok / trials
        rep = ExperimentReport("ff_alg", {"n": n, "trials": trials}, stream.seed)
        primary = n >= 10
        rep.add("success_rate", rate, _binom_se(rate, trials), 0.98, 0.0, ">=", gating=primary)
        if good:
            cond = ok_good / good
            rep.add("success_rate|good", cond, _binom_se(cond, good), 0.99, 0.0, ">=", gating=False)
        rep.add("per_index_Pr[|f^(z)|>=1]", low_hits / (trials * n), None, 0.8, 0.0, ">=", gating=False)
        rep.add("per_index_Pr[|f^(z)|>=2]", high_hits / (trials * n), None, 0.26, 0.0, ">=", gating=False)
    rep.duration_ms = tm.ms
    return rep


# -- Fourier Checking ------------------------------------------------------------


def _fc_uniform_kernel(gen, size, n):
    N = 1 << n
    p = forrelation_batch(uniform_signs(gen, (size, N)), uniform_signs(gen, (size, N)))
    return (float(p.sum()), float((p * p).sum()), int((p >= 0.01).sum()))


def _fc_forrelated_kernel(gen, size, n):
    _, f, g = forrelated_batch(n, size, gen)
    p = forrelation_batch(f, g)
    return (float(p.sum()), float((p * p).sum()), int((p >= 0.05).sum()))


def _mean_se(s: float, s2: float, t: int) -> tuple[float, float]:
    mean = s / t
    var = max(s2 / t - mean * mean, 0.0) * t / max(t - 1, 1)
    return mean, math.sqrt(var / t)


def verify_fc(n: int, trials: int, rng, forrelated_trials: Optional[int] = None,
              workers: Optional[int] = None) -> ExperimentReport:
    """E_U[p] and E_F[p], plus the Markov tail bounds."""
    _require(8 <= n <= 16, "verify_fc needs 8 <= n <= 16")
    _require(trials >= 2, "trials must be >= 2")
    stream = as_stream(rng)
    N = 1 << n
    tf = forrelated_trials if forrelated_trials is not None else max(2, trials // 10)
    with _Timer() as tm:
        su, su2, tail_u = merge_sum(run_chunks(_fc_uniform_kernel, stream.child(0), trials,
                                               _chunk(3 * N, trials), n, workers=workers))
        sf, sf2, tail_f = merge_sum(run_chunks(_fc_forrelated_kernel, stream.child(1), tf,
                                               _chunk(4 * N, tf), n, workers=workers))
        mu, seu = _mean_se(su, su2, trials)
        mf, sef = _mean_se(sf, sf2, tf)
        rep = ExperimentReport("fc_alg", {"n": n, "trials": trials, "forrelated_trials": tf}, stream.seed)
        rep.add("E_U[p]", mu, seu, 1.0 / N, SE_BAND * seu, "==")
        rep.add("E_F[p]", mf, sef, 0.07, 0.0, ">")
        pu = tail_u / trials
        pf = tail_f / tf
        rep.add("Pr_U[p>=0.01]", pu, _binom_se(pu, trials), 100.0 / N, 0.0, "<=")
        rep.add("Pr_F[p>=0.05]", pf, _binom_se(pf, tf), 1.0 / 50, 0.0, ">=")
    rep.duration_ms = tm.ms
    return rep


def _overlap_kernel(gen, size, n):
    v, f, g = forrelated_batch(n, size, gen)
    ov = overlap_batch(v)
    p = forrelation_batch(f, g)
    flat_dot = np.abs(v).sum(axis=1) / (math.sqrt(1 << n) * np.linalg.norm(v, axis=1))
    return (int((ov >= math.cos(1.3)).sum()), float(np.max(np.abs(p - ov * ov))), float(flat_dot.sum()))


def verify_overlap(n: int, trials: int, rng, workers: Optional[int] = None) -> ExperimentReport:
    """Discretization overlap of forrelated pairs and its identity with p(f,g)."""
    _require(4 <= n <= 20, "verify_overlap needs 4 <= n <= 20")
    stream = as_stream(rng)
    N = 1 << n
    with _Timer() as tm:
        res = run_chunks(_overlap_kernel, stream, trials, _chunk(5 * N, trials), n, workers=workers)
        above = sum(r[0] for r in res)
        max_err = max(r[1] for r in res)
        flat_dot = sum(r[2] for r in res) / trials
        frac = above / trials
        rep = ExperimentReport("forrelated_overlap", {"n": n, "trials": trials}, stream.seed)
        rep.add("Pr[overlap>=cos(1.3)]", frac, _binom_se(frac, trials), 0.99, 0.0, ">=")
        rep.add("max|p-overlap^2|", max_err, None, 0.0, 1e-9, "==")
        rep.add("mean flat(w).w", flat_dot, None, math.sqrt(2 / math.pi), 0.01, "==")
    rep.duration_ms = tm.ms
    return rep


# -- secretly biased coefficients ---------------------------------------------

N_BETA_BINS = 64


def alicebob_bound(beta: float, N: int) -> float:
    """(e^beta + e^-beta) / (2 sqrt(e) N)."""
    return math.cosh(beta) / (math.sqrt(math.e) * N)


def _bob_choice(sums: np.ndarray, bob: Solver, gen) -> np.ndarray:
    if bob is Solver.GREEDY:
        return np.argmax(np.abs(sums), axis=-1)
    return sample_from_sums(sums, gen)


def _alicebob_kernel(gen, size, n, bob, null):
    N = 1 << n
    s = gen.integers(0, N, size=size)
    if null:
        f = uniform_signs(gen, (size, N))
    else:
        f = biased_batch(n, s, gen.integers(0, 2, size=size) == 1, gen)
    sums = walsh_sums(f)
    z = _bob_choice(sums, Solver(bob), gen)
    beta = np.abs(sums[np.arange(size), z]) / math.sqrt(N)
    bins = np.minimum((beta / ALICEBOB_BIN).astype(np.int64), N_BETA_BINS - 1)
    hit = z == s
    counts = np.bincount(bins, minlength=N_BETA_BINS)
    hits = np.bincount(bins, weights=hit, minlength=N_BETA_BINS)
    return (counts, hits)


def verify_alicebob(n: int, trials: int, bob: Solver | str, rng, *, null: bool = False,
                    workers: Optional[int] = None) -> ExperimentReport:
    """Hit rate Pr[z = s] per realized-beta bin against the lower-edge bound.

    With ``null=True`` f is drawn uniformly (no bias); the hit rate must
    then be 1/N.
    """
    _require(6 <= n <= 12, "verify_alicebob needs 6 <= n <= 12")
    _require(trials >= 1, "trials must be >= 1")
    bob = Solver(bob)
    stream = as_stream(rng)
    N = 1 << n
    with _Timer() as tm:
        res = run_chunks(_alicebob_kernel, stream, trials, _chunk(3 * N, trials), n, bob.value, null,
                         workers=workers)
        counts, hits = merge_sum(res)
        rep = ExperimentReport("alicebob", {"n": n, "trials": trials, "bob": bob.value,
                                            "source": "uniform" if null else "D[s]",
                                            "bin_width": ALICEBOB_BIN}, stream.seed)
        total_hits = float(hits.sum())
        overall = total_hits / trials
        if null:
            se = _binom_se(overall, trials)
            rep.add("hit_rate", overall, se, 1.0 / N, SE_BAND * se, "==")
        else:
            rep.add("hit_rate", overall, _binom_se(overall, trials), alicebob_bound(0.0, N), 0.0, ">=")
            for b in np.nonzero(counts)[0]:
                t = int(counts[b])
                p = float(hits[b]) / t
                lo = b * ALICEBOB_BIN
                bound = alicebob_bound(lo, N)
                se = _binom_se(p, t)
                gating = t * bound >= ALICEBOB_MIN_EXPECTED_HITS
                rep.add(f"hit_rate[beta in [{lo:g},{lo + ALICEBOB_BIN:g}), trials={t}]", p, se, bound,
                        SE_BAND * se, ">=", gating=gating)
    rep.duration_ms = tm.ms
    return rep


def all_truth_tables(n: int) -> np.ndarray:
    N = 1 << n
    idx = np.arange(1 << N, dtype=np.int64)
    return np.where((idx[:, None] >> np.arange(N)) & 1, -1, 1).astype(np.int8)


def variation_distance(n: int) -> tuple[float, float]:
    """Exact ||D - U|| by enumeration, and the total D-probability (should be 1)."""
    if n > 4:
        raise TooLargeError("exact enumeration is limited to n <= 4")
    N = 1 << n
    tables = all_truth_tables(n)
    pd = np.zeros(tables.shape[0])
    for s in range(N):
        pd += np.exp(exact_log_probs_under_D(tables, s))
    pd /= N
    return 0.5 * float(np.abs(pd - 2.0**-N).sum()), float(pd.sum())


def closetounif_bound(n: int) -> float:
    return (math.e - 1) / (2 * math.sqrt(2 * math.e * (1 << n)))


def verify_variation_distance(n: int) -> ExperimentReport:
    _require(n >= 1, "n must be >= 1")
    if n > 4:
        raise TooLargeError("verify_variation_distance needs n <= 4")
    with _Timer() as tm:
        dist, total = variation_distance(n)
        bound = closetounif_bound(n)
        rep = ExperimentReport("variation_distance", {"n": n, "slack": 1.5}, 0)
        rep.add("sum_f Pr_D[f]", total, None, 1.0, 1e-9, "==")
        rep.add("||D-U||", dist, None, bound, 0.5 * bound, "<=", gating=n == 4)
    rep.duration_ms = tm.ms
    return rep


# -- bias detection reduction -------------------------------------------------


@dataclass
class ReductionTrial:
    """One run of the bias-detection reduction with every intermediate kept."""

    R: np.ndarray
    secrets: tuple[int, ...]
    bits: tuple[int, ...]
    k: int  # 0-based index of the function whose output is tested
    functions: tuple[BooleanFunction, ...]
    z_k: int

    @property
    def hit(self) -> bool:
        return self.z_k == self.secrets[self.k]


def reduction_functions(R: np.ndarray, secrets, bits, n: int) -> np.ndarray:
    """f_i(x) = (-1)^(r_{iN+x} + s_i.x + b_i) for i = 0..n-1, stacked (n, N)."""
    N = 1 << n
    r = np.asarray(R[: N * n], dtype=np.int64).reshape(n, N)
    sx = 1 - dot_sign(np.asarray(secrets)[:, None], np.arange(N)[None, :]).astype(np.int64)
    expo = r + sx // 2 + np.asarray(bits, dtype=np.int64)[:, None]
    return np.where(expo % 2 == 0, 1, -1).astype(np.int8)


def reduction_trial(n: int, bias_on: bool, solver: Solver | str, rng) -> ReductionTrial:
    """Materialize one complete reduction trial (all n functions)."""
    from ..rng import as_generator

    gen = as_generator(rng)
    N = 1 << n
    eps = 1 / (2 * math.sqrt(N)) if bias_on else 0.0
    R = biased_bits(N * n, eps, gen)
    secrets = tuple(int(x) for x in gen.integers(0, N, size=n))
    bits = tuple(int(x) for x in gen.integers(0, 2, size=n))
    k = int(gen.integers(0, n))
    fs = reduction_functions(R, secrets, bits, n)
    z = int(_bob_choice(walsh_sums(fs[k])[None, :], Solver(solver), gen)[0])
    return ReductionTrial(R, secrets, bits, k, tuple(BooleanFunction(f) for f in fs), z)


def _reduction_kernel(gen, size, n, eps, solver):
    # The solvers act on each f_i separately, so only block k of R is drawn.
    N = 1 << n
    r = biased_bits((size, N), eps, gen).astype(np.int64)
    s = gen.integers(0, N, size=size)
    b = gen.integers(0, 2, size=size)
    sx = parity(s[:, None] & np.arange(N)[None, :])
    f = np.where((r + sx + b[:, None]) % 2 == 0, 1, -1).astype(np.int8)
    z = _bob_choice(walsh_sums(f), Solver(solver), gen)
    hit = z == s
    blocks = size // N
    occurred = int(hit[: blocks * N].reshape(blocks, N).any(axis=1).sum()) if blocks else 0
    return (int(hit.sum()), occurred, blocks)


def run_bias_reduction(n: int, bias_on: bool, trials: int, solver: Solver | str, rng,
                       workers: Optional[int] = None) -> ExperimentReport:
    """Hit rate Pr[z_k = s_k] of the reduction under U[0] or U[1/(2 sqrt N)].

    Consecutive groups of N trials also form the N-fold occurrence
    experiment: the fraction of groups with at least one hit.
    """
    _require(6 <= n <= 10, "run_bias_reduction needs n in [6, 10]")
    _require(trials >= 1, "trials must be >= 1")
    solver = Solver(solver)
    stream = as_stream(rng)
    N = 1 << n
    eps = 1 / (2 * math.sqrt(N)) if bias_on else 0.0
    chunk = N * max(1, CHUNK_DOUBLES // (3 * N * N))
    with _Timer() as tm:
        res = run_chunks(_reduction_kernel, stream, trials, chunk, n, eps, solver.value, workers=workers)
        hits, occurred, blocks = merge_sum(res)
        rate = hits / trials
        se = _binom_se(rate, trials)
        rep = ExperimentReport("bias_reduction", {"n": n, "trials": trials, "bias_on": bias_on,
                                                  "epsilon": eps, "solver": solver.value}, stream.seed)
        if not bias_on:
            rep.add("hit_rate", rate, se, 1.0 / N, SE_BAND * se, "==")
        elif solver is Solver.QUANTUM:
            rep.add("hit_rate", rate, se, 1.01 / N, -SE_BAND * se, ">=")
        else:
            rep.add("hit_rate", rate, se, 1.017 / N, 0.0, ">=", gating=False)
        rep.add("hit_rate*N", rate * N, se * N, None)
        plug_in = 1 - (1 - rate) ** N
        rep.add("Pr[exists hit in N trials] (plug-in)", plug_in, None, None)
        if blocks:
            occ = occurred / blocks
            occ_se = _binom_se(occ, blocks)
            if bias_on:
                rep.add("Pr[exists hit in N trials]", occ, occ_se, 0.638, SE_BAND * occ_se, ">=",
                        gating=solver is Solver.QUANTUM)
            else:
                rep.add("Pr[exists hit in N trials]", occ, occ_se, 0.633, SE_BAND * occ_se, "<=")
    rep.duration_ms = tm.ms
    return rep


# -- almost k-wise independence -------------------------------------------------


def canonical_mixed_terms(n: int) -> list[KTerm]:
    """The four mixed 2-terms: x.y even/odd times equal/opposite signs."""
    terms = []
    for x, y in ((1, 2), (1, 1)):  # 1&2 = 0 (even), 1&1 = 1 (odd)
        for sg in (1, -1):
            terms.append(KTerm(n, (Literal(Side.F, x, 1), Literal(Side.G, y, sg))))
    return terms


def family_z_threshold(count: int, per_test_band: float = SE_BAND) -> float:
    """Bonferroni-adjusted z for ``count`` simultaneous two-sided checks."""
    from scipy.stats import norm

    alpha = 2 * norm.sf(per_test_band)
    return float(norm.isf(alpha / (2 * count)))


def _term_label(term: KTerm) -> str:
    return " & ".join(f"{lit.side.value}({lit.point})={'+' if lit.sign > 0 else '-'}" for lit in term.literals)


def _terms_kernel(gen, size, terms):
    return forrelated_term_hits(terms, size, gen)


def _mc_ratios(terms, trials, stream, workers):
    N = 1 << terms[0].n
    hits = merge_sum(run_chunks(_terms_kernel, stream, trials, _chunk(2 * N, trials), terms, workers=workers))
    return ratio_estimates(hits, trials, terms)


def verify_orthant_pairs(n: int, trials: int, rng, workers: Optional[int] = None) -> ExperimentReport:
    """Mixed 2-term ratios against the bivariate orthant formula, both parities and sign patterns."""
    _require(2 <= n <= 16, "verify_orthant_pairs needs 2 <= n <= 16")
    _require(trials >= 10_000, "need at least 10^4 trials")
    stream = as_stream(rng)
    terms = canonical_mixed_terms(n)
    with _Timer() as tm:
        ests = _mc_ratios(terms, trials, stream, workers)
        rep = ExperimentReport("orthant_pairs", {"n": n, "trials": trials}, stream.seed)
        for term, est in zip(terms, ests):
            exact = term_prob_forrelated_analytic2(term) * 4
            rep.add(f"ratio[{_term_label(term)}]", est.estimate, est.se, exact, SE_BAND * est.se, "==")
    rep.duration_ms = tm.ms
    return rep


def verify_independence(n: int, k: int, trials: int, rng, terms: int = 100,
                        workers: Optional[int] = None) -> ExperimentReport:
    """Worst |Pr_F[C]/Pr_U[C] - 1| over random k-terms.

    For k <= 2 each estimate is also checked against the orthant formula;
    the band is Bonferroni-adjusted so the family keeps the 3-SE confidence.
    """
    _require(1 <= k <= 8, "verify_independence needs k <= 8")
    _require(n >= 8, "verify_independence needs n >= 8")
    _require(trials >= 10_000, "need at least 10^4 trials")
    stream = as_stream(rng)
    N = 1 << n
    term_gen = stream.child(0).generator()
    term_list = [random_term(n, k, term_gen) for _ in range(terms)]
    with _Timer() as tm:
        ests = _mc_ratios(term_list, trials, stream.child(1), workers)
        devs = [abs(e.estimate - 1.0) for e in ests]
        worst = int(np.argmax(devs))
        rep = ExperimentReport("independence", {"n": n, "k": k, "trials": trials, "terms": terms}, stream.seed)
        rep.add("max|ratio-1|", devs[worst], ests[worst].se, 10.0 * k * k / math.sqrt(N), 0.0, "<=")
        same_side = [e for t, e in zip(term_list, ests) if not t.is_mixed()]
        if same_side:
            z = max(abs(e.estimate - 1.0) / e.se for e in same_side if e.se > 0)
            rep.add("max z same-side vs 1", z, None, family_z_threshold(len(same_side)), 0.0, "<=")
        if k <= 2:
            zs = []
            for t, e in zip(term_list, ests):
                exact = term_prob_forrelated_analytic2(t) * 2.0**k
                zs.append(abs(e.estimate - exact) / e.se if e.se > 0 else 0.0)
            rep.add("max z vs orthant formula", max(zs), None, family_z_threshold(terms), 0.0, "<=")
    rep.duration_ms = tm.ms
    return rep


def verify_ratio_bound(k: int, samples: int, rng, ns=(8, 10, 12, 14), constant: float = 4.0) -> ExperimentReport:
    """Fitted constant of |ratio-1| <= C (K+L) Delta_S / sqrt(N), and its 1/sqrt(N) scaling."""
    stream = as_stream(rng)
    with _Timer() as tm:
        rep = ExperimentReport("ratio_bound", {"k": k, "samples": samples, "ns": list(ns)}, stream.seed)
        system = build_covariance_system([1], [2], [1.0], [1.0], 2)
        rep.add("2x2 ratio (n=2, a=b=1)", gaussian_subspace_ratio(system), None, math.exp(1 / 3), 1e-9, "==")
        results = [ratio_bound_check(n, k, samples, stream.child(i)) for i, n in enumerate(ns)]
        for r in results:
            rep.add(f"fitted_constant[n={r.n}]", r.fitted_constant, None, constant, 0.0, "<=")
            rep.add(f"min_ratio[n={r.n}]", r.min_ratio, None, 0.0, 0.0, ">")
            rep.add(f"max|ratio-1|[n={r.n}]", r.max_deviation, None, None)
        for a, b in zip(results, results[1:]):
            # Quadrupling N should halve the worst deviation, up to a factor of 2 either way.
            shrink = a.max_deviation / b.max_deviation
            rep.add(f"shrink[n={a.n}->{b.n}] lower", shrink, None, 1.0, 0.0, ">=")
            rep.add(f"shrink[n={a.n}->{b.n}] upper", shrink, None, 4.0, 0.0, "<=")
    rep.duration_ms = tm.ms
    return rep


# -- classical Fourier Checking ---------------------------------------------------


def verify_classical_fc(n: int, trials: int, rng, forced_trials: Optional[int] = None) -> ExperimentReport:
    """Calibrate the sampled double-sum checker and probe its dependence on K.

    The K = ceil(N^(1/4)) probe reuses the grid search restricted to that K,
    so its reported advantage is the best any cutoff achieves there.
    """
    _require(4 <= n <= 16, "verify_classical_fc needs 4 <= n <= 16")
    _require(trials >= 100, "need at least 100 trials")
    stream = as_stream(rng)
    N = 1 << n
    forced_trials = forced_trials or 2 * trials
    with _Timer() as tm:
        cal = calibrate_classical_fc(n, trials, stream.child(0))
        small_k = math.ceil(N ** 0.25)
        low = calibrate_classical_fc(n, forced_trials, stream.child(1), k_grid=[small_k])
        rep = ExperimentReport(
            "classical_fc",
            {"n": n, "trials": trials, "forced_trials": forced_trials, "K": cal.params.K, "c": cal.params.c},
            stream.seed,
        )
        # Two-sample difference of proportions.
        se = math.sqrt(_binom_se(cal.accept_forrelated, trials) ** 2 + _binom_se(cal.accept_uniform, trials) ** 2)
        rep.add("calibrated advantage", cal.advantage, se, 0.2, 0.0, ">=")
        rep.add("Pr_U[accept] at calibrated (K, c)", cal.accept_uniform, _binom_se(cal.accept_uniform, trials),
                1 / 3, 0.0, "<=")
        rep.add("Pr_F[accept] at calibrated (K, c)", cal.accept_forrelated,
                _binom_se(cal.accept_forrelated, trials), None)
        rep.add("target advantage 1/3", cal.advantage, se, 1 / 3, 0.0, ">=", gating=False)
        lse = math.sqrt(_binom_se(low.accept_forrelated, forced_trials) ** 2
                        + _binom_se(low.accept_uniform, forced_trials) ** 2)
        rep.add(f"advantage at K={small_k}", low.advantage, lse, 0.05, 0.0, "<=")
        ks = default_k_grid(n)
        best = [cal.best_advantage_for(K) for K in ks]
        for K, adv in zip(ks, best):
            rep.add(f"best advantage at K={K}", adv, None, None)
        for (k0, a0), (k1, a1) in zip(zip(ks, best), zip(ks[1:], best[1:])):
            # Each advantage is a max over cutoffs; 3 SE of a difference at the worst-case p = 1/2.
            slack = SE_BAND * math.sqrt(4 * 0.25 / trials)
            rep.add(f"monotone K={k0}->{k1}", a1 - a0, None, 0.0, slack, ">=")
    rep.duration_ms = tm.ms
    return rep
