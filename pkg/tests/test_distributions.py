import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forrelation.boolfourier import BooleanFunction, forrelation_value, walsh_sums
from forrelation.distributions import (
    BiasSpec,
    Branch,
    FunctionPair,
    GaussianField,
    Provenance,
    biased_batch,
    closed_form_limit_prob,
    debug_sample_biased_function,
    exact_log_probs_under_D,
    exact_prob_under_D,
    forrelated_batch,
    forrelation_overlap,
    sample_biased_function,
    sample_biased_string,
    sample_forrelated_pair,
    sample_uniform_function,
    sample_uniform_pair,
    sgn,
)
from forrelation.errors import DegenerateInputError, InvalidArgumentError
from forrelation.rng import RngStream


def test_sgn_zero_is_plus():
    assert list(sgn([0.0, -0.0, 1e-300, -1e-300])) == [1, 1, 1, -1]


def test_uniform_function_moments():
    gen = np.random.default_rng(10)
    n = 6
    draws = np.stack([sample_uniform_function(n, gen).values for _ in range(20_000)]).astype(float)
    se = 1 / math.sqrt(len(draws))
    assert np.all(np.abs(draws.mean(axis=0)) < 4 * se)
    # each Fourier coefficient has variance 1
    coeffs = walsh_sums(draws) / 8.0
    assert np.mean(coeffs**2) == pytest.approx(1.0, abs=0.02)


def test_uniform_determinism():
    a = sample_uniform_pair(8, RngStream(5))
    b = sample_uniform_pair(8, RngStream(5))
    assert a.f == b.f and a.g == b.g
    assert a.provenance is Provenance.UNIFORM and a.field is None


def test_n_out_of_range():
    with pytest.raises(InvalidArgumentError):
        sample_uniform_function(0, 1)
    with pytest.raises(InvalidArgumentError):
        sample_forrelated_pair(25, 1)


def test_forrelated_marginals_are_uniform():
    _, f, g = forrelated_batch(5, 40_000, np.random.default_rng(11))
    se = 1 / math.sqrt(40_000)
    assert np.all(np.abs(f.mean(axis=0)) < 4.5 * se)
    assert np.all(np.abs(g.mean(axis=0)) < 4.5 * se)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_overlap_squared_equals_forrelation(n, seed):
    pair = sample_forrelated_pair(n, seed)
    ov = forrelation_overlap(pair.field)
    assert -1.0 - 1e-12 <= ov <= 1.0 + 1e-12
    assert abs(ov * ov - forrelation_value(pair.f, pair.g)) <= 1e-9


def test_overlap_degenerate():
    with pytest.raises(DegenerateInputError):
        forrelation_overlap(GaussianField(3, np.zeros(8)))


def test_pair_provenance_consistency():
    pair = sample_forrelated_pair(4, 0)
    with pytest.raises(InvalidArgumentError):
        FunctionPair(pair.f, pair.g, Provenance.UNIFORM, pair.field)
    with pytest.raises(InvalidArgumentError):
        FunctionPair(pair.f, pair.g, Provenance.FORRELATED)


def test_bias_spec_parsing():
    assert BiasSpec("101").index(3) == 0b101
    assert BiasSpec("100").index(3) == 1
    with pytest.raises(InvalidArgumentError):
        BiasSpec("10").index(3)
    with pytest.raises(InvalidArgumentError):
        BiasSpec(8).index(3)
    with pytest.raises(InvalidArgumentError):
        sample_biased_function(BiasSpec("1"), 3, 0)


def test_branch_a_single_entry_probability():
    gen = np.random.default_rng(12)
    vals = biased_batch(1, np.zeros(200_000, dtype=np.int64), np.ones(200_000, bool), gen)
    p = (vals[:, 0] == 1).mean()
    target = 0.5 + 1 / (2 * math.sqrt(2))  # 0.85355
    assert abs(p - target) < 4 * math.sqrt(target * (1 - target) / 200_000)


def test_branch_a_biased_coefficient():
    n, s, T = 8, 37, 20_000
    gen = np.random.default_rng(13)
    vals = biased_batch(n, np.full(T, s), np.ones(T, bool), gen)
    coef = walsh_sums(vals)[:, s] / 16.0
    assert abs(coef.mean() - 1.0) < 3.5 * coef.std() / math.sqrt(T)


def test_mixture_marginals_are_fair():
    gen = np.random.default_rng(14)
    vals = np.stack([sample_biased_function(BiasSpec(5), 4, gen).values for _ in range(20_000)])
    assert np.all(np.abs(vals.mean(axis=0)) < 4.5 / math.sqrt(20_000))


def test_debug_sampler_exposes_branch():
    gen = np.random.default_rng(15)
    branches = {debug_sample_biased_function(BiasSpec(0), 3, gen)[1] for _ in range(50)}
    assert branches == {Branch.A, Branch.B}
    _, br = debug_sample_biased_function(BiasSpec(0, Branch.B), 3, gen)
    assert br is Branch.B


def test_exact_prob_example():
    pr = exact_prob_under_D(BooleanFunction([1, 1]), 0)
    assert pr.prob == pytest.approx(3 / 8, abs=1e-15)
    assert pr.log_prob == pytest.approx(math.log(3 / 8))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exact_prob_normalizes(n):
    N = 1 << n
    tables = np.array(list(itertools.product([1, -1], repeat=N)), dtype=np.int8)
    for s in range(N):
        assert np.exp(exact_log_probs_under_D(tables, s)).sum() == pytest.approx(1.0, abs=1e-12)


def test_exact_prob_rejects_large_n():
    with pytest.raises(InvalidArgumentError):
        exact_prob_under_D(BooleanFunction(np.ones(1 << 17, dtype=np.int8)), 0)


def test_closed_form_values():
    assert closed_form_limit_prob(0.0, 1) == pytest.approx(1 / (math.sqrt(math.e) * 4))
    assert closed_form_limit_prob(math.sqrt(2), 1) == pytest.approx(0.3302837773912517, rel=1e-12)


def test_closed_form_converges_at_n10():
    # exact / limit within 5% for |f^(s)| <= 3
    n, N, s = 10, 1024, 77
    gen = np.random.default_rng(16)
    plus = gen.integers(0, 2, size=400).astype(bool)
    vals = biased_batch(n, np.full(400, s), plus, gen)
    fhat = walsh_sums(vals)[:, s] / 32.0
    keep = np.abs(fhat) <= 3
    exact = exact_log_probs_under_D(vals[keep], s)
    limit = np.logaddexp(fhat[keep], -fhat[keep]) - math.log(2) - 0.5 - N * math.log(2)
    assert keep.sum() > 300
    assert np.max(np.abs(np.exp(exact - limit) - 1)) <= 0.05


def test_closed_form_gap_shrinks_with_n():
    gen = np.random.default_rng(17)
    gaps = []
    for n in (4, 6, 8, 10):
        N, s = 1 << n, 3
        vals = biased_batch(n, np.full(300, s), gen.integers(0, 2, size=300).astype(bool), gen)
        fhat = walsh_sums(vals)[:, s] / math.sqrt(N)
        limit = np.logaddexp(fhat, -fhat) - math.log(2) - 0.5 - N * math.log(2)
        gaps.append(np.mean(np.abs(np.exp(exact_log_probs_under_D(vals, s) - limit) - 1)))
    assert gaps == sorted(gaps, reverse=True)


def test_biased_string():
    bits = sample_biased_string(1_000_000, 0.0, 1)
    assert bits.dtype == np.uint8
    assert abs(bits.mean() - 0.5) < 3 * 0.5 / 1000
    m = sample_biased_string(1_000_000, 0.25, 2).mean()
    assert abs(m - 0.75) < 3 * math.sqrt(0.75 * 0.25 / 1e6)
    assert sample_biased_string(100, 0.5, 3).all()
    with pytest.raises(InvalidArgumentError):
        sample_biased_string(10, 0.6, 0)
    with pytest.raises(InvalidArgumentError):
        sample_biased_string(10, -0.1, 0)
