import math

import numpy as np
import pytest

from spoofnav.lqr import (
    LinearSystem,
    build_system,
    controllability_rank,
    dare_residual,
    lqr_gain,
    lqr_policy,
    solve_dare,
)

PAPER_KP = np.array([[-0.54, 0.0, -0.87, 0.0], [0.0, -0.54, 0.0, -0.87]])


def test_build_system_block_form():
    sys = build_system(0.3)
    expected_a = np.array(
        [[1, 0, 0.3, 0], [0, 1, 0, 0.3], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float
    )
    expected_b = np.array([[0, 0], [0, 0], [-1, 0], [0, -1]], dtype=float)
    assert np.array_equal(sys.a, expected_a)
    assert np.array_equal(sys.b, expected_b)


def test_build_system_unit_gain():
    sys = build_system(1.0)
    assert np.array_equal(sys.a[:2, 2:], np.eye(2))


def test_b_independent_of_gain():
    assert np.array_equal(build_system(0.3).b, build_system(-7.0).b)


def test_zero_gain_rejected():
    with pytest.raises(ValueError):
        build_system(0.0)


def test_controllability_full_rank():
    assert controllability_rank(build_system(0.3)) == 4
    assert controllability_rank(build_system(-0.7)) == 4


def test_controllability_degenerate_gain():
    # bypass validation: with gain 0, A = I and every block of Co equals B
    sys = LinearSystem(a=np.eye(4), b=build_system(1.0).b, gain=0.0)
    assert controllability_rank(sys) == 2


def test_controllability_random_gains():
    rng = np.random.default_rng(11)
    for _ in range(20):
        gain = rng.uniform(0.05, 5.0) * rng.choice([-1.0, 1.0])
        assert controllability_rank(build_system(gain)) == 4


def test_scalar_dare_trivial():
    p = solve_dare(np.array([[0.0]]), np.array([[1.0]]), np.array([[1.0]]), np.array([[1.0]]))
    assert p[0, 0] == pytest.approx(1.0)


def test_scalar_dare_golden_ratio():
    p = solve_dare(np.array([[1.0]]), np.array([[1.0]]), np.array([[1.0]]), np.array([[1.0]]))
    assert p[0, 0] == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-8)


def test_dare_residual_paper_system():
    sys = build_system(0.3)
    p = solve_dare(sys.a, sys.b, np.eye(4), np.eye(2))
    assert dare_residual(sys.a, sys.b, np.eye(4), np.eye(2), p) < 1e-8
    assert np.allclose(p, p.T, atol=1e-9)


def test_gain_matches_printed_matrix():
    sol = lqr_gain(build_system(0.3), np.eye(4), np.eye(2))
    assert np.max(np.abs(sol.k_p - PAPER_KP)) < 0.005
    assert sol.residual < 1e-8


def test_gain_sparsity_pattern():
    sol = lqr_gain(build_system(0.3), np.eye(4), np.eye(2))
    # planar axes decouple: cross-axis entries vanish
    assert abs(sol.k_p[0, 1]) < 1e-9 and abs(sol.k_p[0, 3]) < 1e-9
    assert abs(sol.k_p[1, 0]) < 1e-9 and abs(sol.k_p[1, 2]) < 1e-9


def test_scalar_gain_closed_form():
    a = np.array([[1.0]])
    p = solve_dare(a, a, a, a)
    k = p / (1 + p)
    assert k[0, 0] == pytest.approx((1 + math.sqrt(5)) / 2 / (1 + (1 + math.sqrt(5)) / 2), abs=1e-8)


def test_gain_ratio_invariance():
    sys = build_system(0.3)
    sol1 = lqr_gain(sys, np.eye(4), np.eye(2))
    sol2 = lqr_gain(sys, 5 * np.eye(4), 5 * np.eye(2))
    assert np.max(np.abs(sol1.k_p - sol2.k_p)) < 1e-9


def test_policy_zero_at_origin():
    sol = lqr_gain(build_system(0.3), np.eye(4), np.eye(2))
    assert np.allclose(lqr_policy(sol, np.zeros(4)), [0.0, 0.0])


def test_policy_paper_state():
    state = np.array([20.0, 30.0, 20.0, 10.0])
    # oracle: product with the 2-d.p. printed gain
    expected = -PAPER_KP @ state
    assert np.allclose(expected, [28.2, 24.9])
    sol = lqr_gain(build_system(0.3), np.eye(4), np.eye(2))
    got = lqr_policy(sol, state)
    assert np.max(np.abs(got - expected)) < 0.005 * np.sum(np.abs(state))


def test_policy_linear():
    sol = lqr_gain(build_system(0.3), np.eye(4), np.eye(2))
    x = np.array([3.0, -1.0, 2.0, 0.5])
    assert np.allclose(lqr_policy(sol, 2 * x), 2 * lqr_policy(sol, x))


def test_lyapunov_decrease():
    sys = build_system(0.3)
    sol = lqr_gain(sys, np.eye(4), np.eye(2))
    closed = sys.a - sys.b @ sol.k_p
    rng = np.random.default_rng(5)
    for _ in range(100):
        x = rng.normal(size=4)
        if np.linalg.norm(x) < 1e-12:
            continue
        v_now = x @ sol.p @ x
        x_next = closed @ x
        assert x_next @ sol.p @ x_next < v_now
