import itertools

import numpy as np
import pytest

from forrelation.boolfourier import BooleanFunction, forrelation_bruteforce, walsh_sums
from forrelation.classical_algs import (
    C_GRID,
    ClassicalFcParams,
    calibrate_classical_fc,
    classical_fc,
    classical_fc_statistic,
    default_k_grid,
    greedy_bob,
    quantum_bob,
    statistic_batch,
)
from forrelation.distributions import sample_uniform_function
from forrelation.errors import InvalidArgumentError
from forrelation.rng import RngStream


def test_params_validation():
    with pytest.raises(InvalidArgumentError):
        ClassicalFcParams(0, 1.0)
    with pytest.raises(InvalidArgumentError):
        ClassicalFcParams(4, 0.0)


def test_full_query_statistic():
    f = BooleanFunction([1, 1, 1, -1])
    xs, ys, z = classical_fc_statistic(f, f, 4, 0)
    assert sorted(xs) == [0, 1, 2, 3] and sorted(ys) == [0, 1, 2, 3]
    assert z == pytest.approx(8.0)
    assert classical_fc(f, f, ClassicalFcParams(4, 1.9), 0)
    assert not classical_fc(f, f, ClassicalFcParams(4, 2.0), 0)


def test_k_larger_than_n_rejected():
    f = BooleanFunction([1, 1, 1, -1])
    with pytest.raises(InvalidArgumentError):
        classical_fc(f, f, ClassicalFcParams(5, 1.0), 0)


def test_full_query_recovers_sign_of_double_sum():
    # K = N, c -> 0+: accept iff p(f, g) > 0, over every pair at n = 2
    tables = list(itertools.product([1, -1], repeat=4))
    params = ClassicalFcParams(4, 1e-9)
    for a in tables:
        for b in tables:
            f, g = BooleanFunction(a), BooleanFunction(b)
            assert classical_fc(f, g, params, 0) == (forrelation_bruteforce(f, g) > 0)


def test_statistic_determinism():
    f = sample_uniform_function(6, 1)
    g = sample_uniform_function(6, 2)
    a = classical_fc_statistic(f, g, 8, RngStream(3))
    b = classical_fc_statistic(f, g, 8, RngStream(3))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]) and a[2] == b[2]


def test_statistic_batch_matches_definition():
    gen = np.random.default_rng(4)
    f = gen.choice([-1, 1], size=(6, 64)).astype(np.int8)
    g = gen.choice([-1, 1], size=(6, 64)).astype(np.int8)
    # large K takes the argsort path, small K the choice path
    for K in (2, 16, 64):
        out = statistic_batch(f, g, K, np.random.default_rng(5))
        assert out.shape == (6,)
        assert np.all(out >= 0) and np.all(out <= K)
    full = statistic_batch(f, g, 64, np.random.default_rng(5))
    for t in range(6):
        expect = abs(float(f[t] @ walsh_sums(g[t]))) / 64
        assert full[t] == pytest.approx(expect)


def test_grids():
    assert default_k_grid(12) == [64, 128, 256, 512]
    assert default_k_grid(2) == [2, 4]
    assert C_GRID[0] == 0.25 and C_GRID[-1] == 8.0 and len(C_GRID) == 32


def test_calibration_small_and_deterministic():
    a = calibrate_classical_fc(6, 300, RngStream(6))
    b = calibrate_classical_fc(6, 300, RngStream(6))
    assert a.params == b.params and a.table == b.table
    pf, pu = a.table[(a.params.K, a.params.c)]
    assert a.advantage == pytest.approx(pf - pu)
    assert a.advantage == max(x - y for x, y in a.table.values())
    assert a.advantage > 0


def test_calibration_tiebreak_prefers_small_k_and_c():
    # at n = 1 every (K, c) with c >= 2 never accepts: advantage 0 everywhere there
    res = calibrate_classical_fc(2, 50, RngStream(7), k_grid=[1, 2], c_grid=[4.0, 8.0])
    assert res.params == ClassicalFcParams(1, 4.0)
    assert res.advantage == 0


def test_calibration_rejects_large_n():
    with pytest.raises(InvalidArgumentError):
        calibrate_classical_fc(17, 10, 0)


def test_greedy_bob():
    assert greedy_bob(BooleanFunction([1, 1])) == 0
    assert greedy_bob(BooleanFunction([1, -1])) == 1
    # all |f^| equal: the smallest index wins
    assert greedy_bob(BooleanFunction([1, 1, 1, -1])) == 0


def test_greedy_bob_coefficient_at_least_one():
    gen = np.random.default_rng(8)
    for _ in range(200):
        f = sample_uniform_function(int(gen.integers(1, 9)), gen)
        z = greedy_bob(f)
        assert abs(walsh_sums(f.values)[z]) / np.sqrt(f.N) >= 1 - 1e-12


def test_quantum_bob():
    assert all(quantum_bob(BooleanFunction([1, 1]), s) == 0 for s in range(20))
    f = BooleanFunction([1, -1, 1, -1])
    assert all(quantum_bob(f, s) == 1 for s in range(20))
