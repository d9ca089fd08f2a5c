import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forrelation.errors import IllConditionedSystemError, InvalidArgumentError, UnsupportedOrderError
from forrelation.independence import (
    KTerm,
    Literal,
    Side,
    build_covariance_system,
    forrelated_term_hits,
    gaussian_subspace_ratio,
    random_term,
    ratio_bound_check,
    subspace_distances,
    term_prob_forrelated_analytic2,
    term_prob_forrelated_mc,
    terms_prob_forrelated_mc,
    term_prob_uniform,
)
from forrelation.rng import RngStream


def mixed(n, x, y, sf=1, sg=1):
    return KTerm(n, (Literal(Side.F, x, sf), Literal(Side.G, y, sg)))


def test_term_validation():
    with pytest.raises(InvalidArgumentError):
        KTerm(3, (Literal(Side.F, 1, 1), Literal(Side.F, 1, -1)))
    with pytest.raises(InvalidArgumentError):
        KTerm(3, (Literal(Side.G, 8, 1),))
    with pytest.raises(InvalidArgumentError):
        KTerm(3, ())
    with pytest.raises(InvalidArgumentError):
        Literal(Side.F, 0, 0)
    # same point on different sides is allowed
    assert KTerm(3, (Literal(Side.F, 1, 1), Literal(Side.G, 1, 1))).is_mixed()


def test_uniform_probability():
    assert term_prob_uniform(KTerm(4, (Literal(Side.F, 0, 1),))) == 0.5
    t = KTerm(4, tuple(Literal(Side.G, p, 1) for p in range(4)))
    assert term_prob_uniform(t) == 1 / 16


def test_uniform_probability_matches_sampling():
    gen = np.random.default_rng(30)
    t = KTerm(4, (Literal(Side.F, 3, 1), Literal(Side.G, 5, -1), Literal(Side.G, 6, 1)))
    f = gen.choice([-1, 1], size=(1_000_000, 3))
    hit = (f[:, 0] == 1) & (f[:, 1] == -1) & (f[:, 2] == 1)
    assert abs(hit.mean() - 1 / 8) <= 3 * math.sqrt(7 / 64 / 1e6)
    del t


def test_analytic2_examples():
    assert term_prob_forrelated_analytic2(mixed(2, 1, 2)) == pytest.approx(1 / 3)
    rho = 0.5
    assert term_prob_forrelated_analytic2(mixed(2, 1, 2, 1, -1)) == pytest.approx(0.25 - math.asin(rho) / (2 * math.pi))
    assert term_prob_forrelated_analytic2(mixed(2, 1, 1)) == pytest.approx(0.25 - math.asin(rho) / (2 * math.pi))
    assert term_prob_forrelated_analytic2(KTerm(3, (Literal(Side.F, 0, 1),))) == 0.5
    same = KTerm(3, (Literal(Side.G, 0, 1), Literal(Side.G, 5, -1)))
    assert term_prob_forrelated_analytic2(same) == 0.25
    with pytest.raises(UnsupportedOrderError):
        term_prob_forrelated_analytic2(KTerm(3, tuple(Literal(Side.F, p, 1) for p in range(3))))


def test_mixed_ratio_at_n10():
    # 1 + (2/pi) arcsin(1/32)
    est = term_prob_forrelated_mc(mixed(10, 1, 2), 300_000, RngStream(31))
    assert abs(est.estimate - 1.0198976073258772) <= 3 * est.se


@pytest.mark.parametrize("n", [2, 6])
def test_mixed_ratio_matches_formula(n):
    terms = [mixed(n, 1, 2, 1, 1), mixed(n, 1, 2, 1, -1), mixed(n, 1, 1, 1, 1), mixed(n, 1, 1, -1, 1)]
    for t, e in zip(terms, terms_prob_forrelated_mc(terms, 200_000, RngStream(32, n))):
        assert abs(e.estimate - 4 * term_prob_forrelated_analytic2(t)) <= 3 * e.se


def test_same_side_ratio_is_one():
    t = KTerm(10, (Literal(Side.F, 4, 1), Literal(Side.F, 9, -1)))
    e = term_prob_forrelated_mc(t, 200_000, RngStream(33))
    assert abs(e.estimate - 1.0) <= 3 * e.se
    t = KTerm(10, (Literal(Side.G, 4, 1), Literal(Side.G, 9, 1)))
    e = term_prob_forrelated_mc(t, 200_000, RngStream(34))
    assert abs(e.estimate - 1.0) <= 3 * e.se


def test_mc_needs_trials():
    with pytest.raises(InvalidArgumentError):
        term_prob_forrelated_mc(mixed(4, 1, 2), 9_999, 0)


def test_hits_transform_paths_agree():
    # more than 4n G-side points forces the full-transform path
    n = 3
    gen = np.random.default_rng(35)
    many = [KTerm(n, (Literal(Side.G, p, 1), Literal(Side.F, (p + 1) % 8, -1))) for p in range(8)]
    few = many[:2]
    a = forrelated_term_hits(many, 5000, np.random.default_rng(36))
    b = forrelated_term_hits(few, 5000, np.random.default_rng(36))
    assert np.array_equal(a[:2], b)
    del gen


def test_random_term():
    gen = np.random.default_rng(37)
    for _ in range(100):
        t = random_term(5, 6, gen)
        assert t.k == 6
    t = random_term(4, 3, gen, sides=[Side.G, Side.G, Side.F])
    assert [lit.side for lit in t.literals] == [Side.G, Side.G, Side.F]
    with pytest.raises(InvalidArgumentError):
        random_term(1, 5, gen)


def test_covariance_examples():
    s = build_covariance_system([0, 3], [], [1.0, 2.0], [], 4)
    assert np.array_equal(s.A, np.eye(2))
    s = build_covariance_system([1], [2], [1.0], [1.0], 2)
    assert np.array_equal(s.A, [[1, 0.5], [0.5, 1]])
    ds, dt = subspace_distances(s)
    assert ds == pytest.approx(2.0) and dt == pytest.approx(4 / 3)
    assert gaussian_subspace_ratio(s) == pytest.approx(1.3956124250860895, abs=1e-9)


def test_covariance_errors():
    with pytest.raises(IllConditionedSystemError):
        build_covariance_system(range(5), [], np.ones(5), [], 6)
    with pytest.raises(InvalidArgumentError):
        build_covariance_system([1, 1], [], [1, 1], [], 6)
    with pytest.raises(InvalidArgumentError):
        build_covariance_system([], [], [], [], 6)
    with pytest.raises(InvalidArgumentError):
        build_covariance_system([1], [], [1, 2], [], 6)


@settings(max_examples=50, deadline=None)
@given(st.integers(6, 12), st.integers(0, 4), st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_covariance_properties(n, K, L, seed):
    if K + L == 0:
        return
    gen = np.random.default_rng(seed)
    N = 1 << n
    xs = gen.choice(N, size=K, replace=False)
    ys = gen.choice(N, size=L, replace=False)
    w = gen.standard_normal(K + L)
    s = build_covariance_system(xs, ys, w[:K], w[K:], n)
    assert np.array_equal(s.A, s.A.T)
    assert np.all(np.diag(s.A) == 1)
    assert np.all(s.A[:K, :K] == np.eye(K)) and np.all(s.A[K:, K:] == np.eye(L))
    assert np.all(np.abs(s.A[:K, K:]) == 1 / math.sqrt(N))
    eig = np.linalg.eigvalsh(s.A)
    r = (K + L) / math.sqrt(N)
    assert eig.min() >= 1 - r - 1e-12 and eig.max() <= 1 + r + 1e-12
    ratio = gaussian_subspace_ratio(s)
    assert ratio > 0
    # zero constraint values or an empty cross block give ratio 1
    assert gaussian_subspace_ratio(build_covariance_system(xs, ys, np.zeros(K), np.zeros(L), n)) == pytest.approx(1.0)
    if K == 0 or L == 0:
        assert ratio == pytest.approx(1.0)


def test_ratio_bound_check():
    res = ratio_bound_check(10, 2, 300, RngStream(38))
    assert res.fitted_constant <= 4.0
    assert res.min_ratio > 0
    assert res.max_deviation <= 4 * 2 * 2 / 32
    with pytest.raises(InvalidArgumentError):
        ratio_bound_check(6, 3, 10, 0)


def test_ratio_bound_decreases_with_n():
    devs = [ratio_bound_check(n, 2, 300, RngStream(39, n)).max_deviation for n in (8, 10, 12, 14)]
    assert devs == sorted(devs, reverse=True)
