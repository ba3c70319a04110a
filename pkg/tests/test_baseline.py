import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aircomp_relay.baseline import baseline_mse, optimal_rx_scaling, solve_baseline
from aircomp_relay.oracles import grid_search_baseline, inversion_mse

gains = st.lists(st.floats(0.05, 5.0), min_size=1, max_size=8)
noise = st.sampled_from([0.0, 0.5, 1.0, 2.0])


def test_optimal_rx_scaling_single_node():
    a = optimal_rx_scaling([1.0], 10.0, 1.0)
    assert a == pytest.approx(math.sqrt(10) / 11, rel=1e-12)
    # fine 1-D grid on (a sqrt(10) - 1)^2 + a^2
    grid = np.linspace(1e-6, 1.0, 1_000_000)
    f = (grid * math.sqrt(10) - 1) ** 2 + grid**2
    assert grid[np.argmin(f)] == pytest.approx(0.28748, abs=2e-6)


def test_optimal_rx_scaling_noiseless():
    assert optimal_rx_scaling([1.0], 10.0, 0.0) == pytest.approx(1 / math.sqrt(10))


def test_optimal_rx_scaling_homogeneous():
    h = np.array([0.3, 1.1, 2.0])
    a = optimal_rx_scaling(h, 10.0, 0.0)
    assert optimal_rx_scaling(4 * h, 10.0, 0.0) == pytest.approx(a / 4)


def test_optimal_rx_scaling_empty_and_zero():
    assert optimal_rx_scaling([], 10.0, 1.0, lower=0.4) == 0.4
    with pytest.raises(ValueError):
        optimal_rx_scaling([], 10.0, 1.0)
    with pytest.raises(ValueError):
        optimal_rx_scaling([0.0, 0.0], 10.0, 1.0)


def test_baseline_mse_cases():
    h = np.array([0.5, 2.0, 4.0])
    assert baseline_mse(1.0, 1 / h, h, 0.0) == (0.0, 0.0)
    assert baseline_mse(1.0, np.zeros(3), h, 0.0)[0] == 3.0
    with pytest.raises(ValueError):
        baseline_mse(1.0, [1.0], h, 1.0)


def test_baseline_mse_matches_direct_formula():
    rng = np.random.default_rng(3)
    for _ in range(50):
        k = rng.integers(1, 10)
        a = rng.uniform(0.1, 2)
        b = rng.uniform(0, 3, k)
        h = rng.uniform(0.1, 3, k)
        s2 = rng.uniform(0, 2)
        sig, noi = baseline_mse(a, b, h, s2)
        ref = 0.0
        for hk, bk in zip(h, b):
            ref += abs(a * hk * bk - 1) ** 2
        assert sig == pytest.approx(ref, rel=1e-12)
        assert noi == pytest.approx(s2 * abs(a) ** 2, rel=1e-12)


def test_solve_baseline_equal_gains_noiseless():
    sol = solve_baseline([1.0, 1.0], 10.0, 0.0)
    assert sol.mse == 0.0
    assert sol.a == pytest.approx(1 / math.sqrt(10))
    np.testing.assert_allclose(sol.b, [math.sqrt(10)] * 2)
    assert sol.critical_index == 0


def test_solve_baseline_against_fine_grid():
    h = [0.1, 0.5, 1.0]
    sol = solve_baseline(h, 10.0, 1.0)
    upper = 10 / (0.1 * math.sqrt(10))
    grid = np.linspace(upper / 1e6, upper, 1_000_000)
    ref = inversion_mse(grid, h, 10.0, 1.0).min()
    assert sol.mse <= ref + 1e-12
    assert sol.mse == pytest.approx(ref, abs=1e-6)


def test_solve_baseline_full_inversion_feasible():
    sol = solve_baseline([0.4, 1.0, 3.0], 10.0, 0.0)
    assert sol.mse == pytest.approx(0.0, abs=1e-24)
    assert sol.critical_index == 0


def test_solve_baseline_restores_input_order():
    h = np.array([2.0, 0.1, 1.0, 0.3])
    sol = solve_baseline(h, 10.0, 1.0)
    perm = np.array([3, 0, 2, 1])
    sol_p = solve_baseline(h[perm], 10.0, 1.0)
    np.testing.assert_allclose(sol_p.b, sol.b[perm])
    assert sol_p.a == sol.a


def test_solve_baseline_rejects():
    with pytest.raises(ValueError):
        solve_baseline([], 10.0, 1.0)
    with pytest.raises(ValueError):
        solve_baseline([1.0, 0.0], 10.0, 1.0)


@settings(max_examples=300, deadline=None)
@given(gains, noise)
def test_baseline_invariants(h, sigma2):
    h = np.array(h)
    sol = solve_baseline(h, 10.0, sigma2)
    assert (sol.b**2 <= 10.0 + 1e-12).all()
    assert sol.mse_noise == sigma2 * sol.a**2
    inverting = sol.b < math.sqrt(10.0)
    assert (np.abs(sol.a * h[inverting] * sol.b[inverting] - 1) < 1e-12).all()
    # nodes past the critical number (ascending order) hit the target exactly
    order = np.argsort(h, kind="stable")
    tail = order[sol.critical_index:]
    assert (np.abs(sol.a * h[tail] * sol.b[tail] - 1) < 1e-12).all()


@settings(max_examples=150, deadline=None)
@given(gains, noise)
def test_baseline_optimal_vs_grid(h, sigma2):
    sol = solve_baseline(h, 10.0, sigma2)
    _, ref = grid_search_baseline(h, 10.0, sigma2)
    assert sol.mse <= ref + 1e-9


@settings(max_examples=150, deadline=None)
@given(gains, st.floats(0.0, 2.0), st.floats(0.0, 2.0))
def test_baseline_mse_monotone_in_noise(h, s_lo, extra):
    lo = solve_baseline(h, 10.0, s_lo).mse
    hi = solve_baseline(h, 10.0, s_lo + extra).mse
    assert hi >= lo - 1e-12


def test_noiseless_returns_smallest_exact_scaling():
    h = np.array([0.5, 0.9, 4.0])
    sol = solve_baseline(h, 10.0, 0.0)
    assert sol.mse == 0.0
    assert sol.a == pytest.approx(1 / (0.5 * math.sqrt(10)))
