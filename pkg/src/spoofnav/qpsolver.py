"""Box-constrained strictly convex quadratic programming.

Minimizes 0.5 x'Hx + g'x subject to lower <= x <= upper using accelerated
projected gradient with a Gershgorin step size and momentum restarts that
keep the objective monotonically non-increasing. Bounds may be +-inf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class BoxQp:
    h: np.ndarray  # n x n SPD
    g: np.ndarray  # n
    lower: np.ndarray  # n, -inf allowed
    upper: np.ndarray  # n, +inf allowed


@dataclass(frozen=True)
class QpResult:
    x_star: np.ndarray
    kkt_residual: float
    iterations: int


def _objective(problem: BoxQp, x: np.ndarray) -> float:
    return float(0.5 * x @ problem.h @ x + problem.g @ x)


def kkt_residual(problem: BoxQp, x) -> float:
    """Max projected-gradient violation over coordinates.

    Interior coordinates contribute |grad_i|; coordinates at a bound only
    contribute when the gradient points into the feasible interval.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < problem.lower) or np.any(x > problem.upper):
        raise ValueError("point is infeasible")
    grad = problem.h @ x + problem.g
    at_lower = x <= problem.lower
    at_upper = x >= problem.upper
    viol = np.abs(grad)
    viol[at_lower] = np.maximum(0.0, -grad[at_lower])
    viol[at_upper] = np.maximum(0.0, grad[at_upper])
    # a coordinate pinched by equal bounds is always stationary
    viol[at_lower & at_upper] = 0.0
    return float(np.max(viol)) if viol.size else 0.0


def _polish(problem: BoxQp, x: np.ndarray) -> np.ndarray:
    """Active-set refinement: pin coordinates whose gradient pushes outward at
    a bound, solve the reduced linear system exactly on the rest."""
    grad = problem.h @ x + problem.g
    pin_lower = (x <= problem.lower) & (grad > 0.0)
    pin_upper = (x >= problem.upper) & (grad < 0.0)
    free = ~(pin_lower | pin_upper)
    refined = x.copy()
    refined[pin_lower] = problem.lower[pin_lower]
    refined[pin_upper] = problem.upper[pin_upper]
    if free.any():
        fixed = ~free
        rhs = -(problem.g[free] + problem.h[np.ix_(free, fixed)] @ refined[fixed])
        refined[free] = np.linalg.solve(problem.h[np.ix_(free, free)], rhs)
    return np.clip(refined, problem.lower, problem.upper)


def solve_box_qp(problem: BoxQp, tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER) -> QpResult:
    h = np.asarray(problem.h, dtype=float)
    g = np.asarray(problem.g, dtype=float)
    lower = np.asarray(problem.lower, dtype=float)
    upper = np.asarray(problem.upper, dtype=float)
    if np.any(lower > upper):
        raise ValueError("lower bound exceeds upper bound")
    if np.any(np.diag(h) <= 0.0):
        raise ValueError("Hessian is not positive definite")
    problem = BoxQp(h=h, g=g, lower=lower, upper=upper)

    lipschitz = float(np.max(np.sum(np.abs(h), axis=1)))  # Gershgorin bound
    step = 1.0 / lipschitz

    x = np.clip(np.zeros_like(g), lower, upper)
    y = x.copy()
    t = 1.0
    value = _objective(problem, x)
    for iteration in range(1, max_iter + 1):
        candidate = np.clip(y - step * (h @ y + g), lower, upper)
        cand_value = _objective(problem, candidate)
        if cand_value > value:
            # restart momentum; a plain projected-gradient step from x never increases
            candidate = np.clip(x - step * (h @ x + g), lower, upper)
            cand_value = _objective(problem, candidate)
            t = 1.0
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = candidate + ((t - 1.0) / t_next) * (candidate - x)
        x, value, t = candidate, cand_value, t_next
        residual = kkt_residual(problem, x)
        if residual < tol:
            refined = _polish(problem, x)
            refined_residual = kkt_residual(problem, refined)
            if refined_residual <= residual and _objective(problem, refined) <= value + 1e-12:
                x, residual = refined, refined_residual
            return QpResult(x_star=x, kkt_residual=residual, iterations=iteration)
    raise RuntimeError(f"box QP did not reach tolerance {tol} in {max_iter} iterations")
