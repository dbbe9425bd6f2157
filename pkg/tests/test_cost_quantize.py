import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowres_precoding.channel import TapChannel, draw_rayleigh
from lowres_precoding.precode import DegenerateInputError, TxAlphabet, cost_g, optimal_alpha, quantize


def naive_cost(x, alpha, taps, u, noise_var):
    L, K, N = taps.shape
    T = u.shape[0]
    total = 0.0
    for t in range(T):
        for k in range(K):
            acc = 0j
            for tau in range(L):
                if t - tau >= 0:
                    for n in range(N):
                        acc += taps[tau, k, n] * x[t - tau, n]
            total += abs(u[t, k] - alpha * acc) ** 2
    return total + alpha**2 * T * K * noise_var


def rand_instance(seed, K=2, N=4, L=2, T=5):
    rng = np.random.default_rng(seed)
    ch = draw_rayleigh(N, K, L, seed=rng)
    u = rng.standard_normal((T, K)) + 1j * rng.standard_normal((T, K))
    x = rng.standard_normal((T, N)) + 1j * rng.standard_normal((T, N))
    return ch, u, x


def test_alphabet_points():
    a = TxAlphabet(4.0, 16, 3)
    assert a.size == 9
    assert a.points[0] == 0
    assert np.allclose(np.abs(a.points[1:]), 0.5)
    assert np.allclose(np.angle(a.points[2]), 2 * np.pi / 8)
    x = a.points[np.random.default_rng(0).integers(a.size, size=(10, 16))]
    assert np.all(np.sum(np.abs(x) ** 2, axis=1) <= 4.0 + 1e-12)
    assert np.isclose(np.sum(np.abs(np.full(16, a.points[3])) ** 2), 4.0)


def test_quantize_examples():
    a = TxAlphabet(1.0, 1, 2)
    assert quantize(np.array([0.0]), a)[0] == 0
    assert quantize(np.array([0.9 + 0.1j]), a)[0] == 1
    # brute-force oracle over the 5 points
    v = 0.9 + 0.1j
    pts = [0, 1, 1j, -1, -1j]
    assert pts[int(np.argmin([abs(v - p) for p in pts]))] == 1


def test_quantize_ties():
    a = TxAlphabet(1.0, 1, 2)
    # |v| = |v - 1| at v = 0.5: zero preferred
    assert quantize(np.array([0.5]), a)[0] == 0
    # equidistant from q=0 and q=1 (angle pi/4, far from origin): lowest q
    assert quantize(np.array([2 * np.exp(1j * np.pi / 4)]), a)[0] == a.points[1]


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31), bits=st.integers(0, 4), n_tx=st.integers(1, 64))
def test_quantize_is_nearest_point_projection(seed, bits, n_tx):
    a = TxAlphabet(1.0, n_tx, bits)
    rng = np.random.default_rng(seed)
    v = (rng.standard_normal(200) + 1j * rng.standard_normal(200)) * a.amplitude
    p = quantize(v, a)
    assert a.contains(p)
    d_best = np.abs(v - p)
    d_all = np.abs(v[:, None] - a.points[None, :])
    assert np.all(d_best <= d_all.min(axis=1) + 1e-15)
    assert np.array_equal(quantize(p, a), p)


def test_cost_alpha_zero():
    ch, u, x = rand_instance(0)
    assert np.isclose(cost_g(x, 0.0, ch, u, 0.3), np.sum(np.abs(u) ** 2), rtol=1e-14)


def test_cost_zero_when_target_reached():
    ch = TapChannel(np.eye(3)[None].astype(complex))
    x = np.random.default_rng(1).standard_normal((4, 3)) + 0j
    assert cost_g(x, 1.0, ch, x.copy(), 0.0) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_cost_matches_naive_loop(seed):
    ch, u, x = rand_instance(seed)
    for alpha, nv in [(0.7, 0.1), (1.3, 0.0)]:
        ref = naive_cost(x, alpha, ch.taps, u, nv)
        assert abs(cost_g(x, alpha, ch, u, nv) - ref) <= 1e-12 * ref


def test_optimal_alpha_exact_fit():
    ch = TapChannel(np.eye(2)[None].astype(complex))
    x = np.array([[1, 1j], [-1, 0.5]], dtype=complex)
    assert np.isclose(optimal_alpha(x, ch, x, 0.0), 1.0, rtol=1e-14)
    nv = 0.2
    e = np.sum(np.abs(x) ** 2)
    assert np.isclose(optimal_alpha(x, ch, x, nv), e / (e + 2 * 2 * nv), rtol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_optimal_alpha_is_local_minimum(seed):
    ch, u, x = rand_instance(seed)
    a = optimal_alpha(x, ch, u, 0.2)
    g = cost_g(x, a, ch, u, 0.2)
    for da in (-0.01, 0.01):
        if a + da >= 0:
            assert g <= cost_g(x, a + da, ch, u, 0.2)


def test_optimal_alpha_clamps_and_degenerate():
    ch = TapChannel(np.eye(1)[None].astype(complex))
    x = np.ones((3, 1), dtype=complex)
    assert optimal_alpha(x, ch, -x, 0.0) == 0.0
    with pytest.raises(DegenerateInputError):
        optimal_alpha(np.zeros((3, 1)), ch, x, 0.0)


@pytest.mark.parametrize("seed", range(3))
def test_alpha_scales_with_target(seed):
    ch, u, x = rand_instance(seed)
    c = 2.5
    assert np.isclose(optimal_alpha(x, ch, c * u, 0.1), c * optimal_alpha(x, ch, u, 0.1), rtol=1e-12)


def test_alpha_argmin_invariant_under_target_scaling():
    rng = np.random.default_rng(0)
    ch = draw_rayleigh(2, 1, 1, seed=rng)
    a = TxAlphabet(1.0, 2, 1)
    u = rng.standard_normal((2, 1)) + 1j * rng.standard_normal((2, 1))

    def optimized_costs(target):
        costs = []
        for combo in itertools.product(range(a.size), repeat=4):
            x = a.points[list(combo)].reshape(2, 2)
            if not np.any(x):
                costs.append(np.sum(np.abs(target) ** 2))
                continue
            costs.append(cost_g(x, optimal_alpha(x, ch, target, 0.1), ch, target, 0.1))
        return np.array(costs)

    base = optimized_costs(u)
    scaled = optimized_costs(3.0 * u)
    assert np.allclose(scaled, 9.0 * base, rtol=1e-12)
    assert np.argmin(scaled) == np.argmin(base)
