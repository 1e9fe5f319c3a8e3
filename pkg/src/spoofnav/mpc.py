"""Receding-horizon producer: condenses the finite-horizon constrained
regulator into a box QP over the stacked control sequence and solves it
each stage, applying only the first control.

With horizon N the decision vector stacks controls u_k..u_{k+N}; the states
x_{k+1}..x_{k+N+1} they induce are eliminated by forward substitution, each
penalized with Q and each control with R.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lqr import LinearSystem
from .qpsolver import BoxQp, QpResult, solve_box_qp


@dataclass(frozen=True)
class MpcParams:
    sys: LinearSystem
    q: np.ndarray  # 4x4 SPD
    r: np.ndarray  # 2x2 SPD
    horizon: int  # N >= 0; N+1 controls are optimized
    theta_min: np.ndarray  # per-axis lower bound on controls
    theta_max: np.ndarray
    qp_tol: float = 1e-8


def _prediction_matrices(params: MpcParams):
    """Stacked maps x_pred = s_x @ x0 + s_u @ z over N+1 future states."""
    a, b = params.sys.a, params.sys.b
    n_steps = params.horizon + 1
    nx, nu = b.shape
    powers = [np.eye(nx)]
    for _ in range(n_steps):
        powers.append(a @ powers[-1])
    s_x = np.vstack([powers[i + 1] for i in range(n_steps)])
    s_u = np.zeros((n_steps * nx, n_steps * nu))
    for i in range(n_steps):
        for j in range(i + 1):
            s_u[i * nx:(i + 1) * nx, j * nu:(j + 1) * nu] = powers[i - j] @ b
    return s_x, s_u


def condense_copt(params: MpcParams, current) -> BoxQp:
    """Condensed QP: 0.5 z'Hz + g'z with H = S_u' Q_bar S_u + R_bar and
    g = S_u' Q_bar S_x x0, box bounds replicated per stage.
    """
    x0 = np.asarray(current, dtype=float)
    s_x, s_u = _prediction_matrices(params)
    n_steps = params.horizon + 1
    q_bar = np.kron(np.eye(n_steps), params.q)
    r_bar = np.kron(np.eye(n_steps), params.r)
    h = s_u.T @ q_bar @ s_u + r_bar
    h = 0.5 * (h + h.T)
    g = s_u.T @ q_bar @ (s_x @ x0)
    return BoxQp(
        h=h,
        g=g,
        lower=np.tile(np.asarray(params.theta_min, dtype=float), n_steps),
        upper=np.tile(np.asarray(params.theta_max, dtype=float), n_steps),
    )


def stage_cost_sum(params: MpcParams, current, z) -> float:
    """Simulated objective for a stacked control sequence; oracle for the
    condensed quadratic form (up to the state-independent constant)."""
    x = np.asarray(current, dtype=float)
    z = np.asarray(z, dtype=float)
    nu = params.sys.b.shape[1]
    total = 0.0
    for i in range(params.horizon + 1):
        u = z[i * nu:(i + 1) * nu]
        x = params.sys.a @ x + params.sys.b @ u
        total += 0.5 * (x @ params.q @ x + u @ params.r @ u)
    return total


def condensed_constant(params: MpcParams, current) -> float:
    """State-only term dropped by the condensed form."""
    x0 = np.asarray(current, dtype=float)
    s_x, _ = _prediction_matrices(params)
    q_bar = np.kron(np.eye(params.horizon + 1), params.q)
    free = s_x @ x0
    return float(0.5 * free @ q_bar @ free)


def solve_copt(params: MpcParams, current) -> np.ndarray:
    """Optimal control sequence, shape (N+1, 2); every row lies in the box."""
    problem = condense_copt(params, current)
    result: QpResult = solve_box_qp(problem, tol=params.qp_tol)
    return result.x_star.reshape(params.horizon + 1, -1)


def mpc_policy(params: MpcParams, current) -> np.ndarray:
    """First control of the receding-horizon plan."""
    return solve_copt(params, current)[0]
