"""Reformulated linear dynamics of the spoofing loop, controllability check,
discrete Riccati solver, and the optimal producer gain.

The extended state stacks (position_x, position_y, error_x, error_y), where
error = receiver_goal - estimate. With receiver gain K_r the dynamics are

    x_{k+1} = [[I, K_r I], [0, I]] x_k + [[0], [-I]] u_k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DARE_RESIDUAL_TOL = 1e-8
RANK_PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class LinearSystem:
    a: np.ndarray  # 4x4
    b: np.ndarray  # 4x2
    gain: float  # receiver gain baked into a


@dataclass(frozen=True)
class LqrSolution:
    p: np.ndarray  # 4x4 SPD Riccati solution
    k_p: np.ndarray  # 2x4 feedback gain
    residual: float


def build_system(gain: float) -> LinearSystem:
    if gain == 0.0:
        raise ValueError("receiver gain must be nonzero")
    eye2 = np.eye(2)
    a = np.block([[eye2, gain * eye2], [np.zeros((2, 2)), eye2]])
    b = np.vstack([np.zeros((2, 2)), -eye2])
    return LinearSystem(a=a, b=b, gain=gain)


def _rank_by_elimination(m: np.ndarray, pivot_tol: float = RANK_PIVOT_TOL) -> int:
    """Row-echelon rank with partial pivoting and an absolute pivot threshold."""
    work = np.array(m, dtype=float)
    rows, cols = work.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivot_row = rank + int(np.argmax(np.abs(work[rank:, col])))
        pivot = work[pivot_row, col]
        if abs(pivot) <= pivot_tol:
            continue
        work[[rank, pivot_row]] = work[[pivot_row, rank]]
        work[rank + 1:] -= np.outer(work[rank + 1:, col] / pivot, work[rank])
        rank += 1
    return rank


def controllability_rank(sys: LinearSystem) -> int:
    """Rank of (B | AB | A^2 B | A^3 B)."""
    blocks = []
    m = sys.b
    for _ in range(4):
        blocks.append(m)
        m = sys.a @ m
    return _rank_by_elimination(np.hstack(blocks))


def dare_residual(a, b, q, r, p) -> float:
    inner = p - p @ b @ np.linalg.solve(r + b.T @ p @ b, b.T @ p)
    return float(np.max(np.abs(p - q - a.T @ inner @ a)))


def solve_dare(a, b, q, r, tol: float = 1e-12, max_iter: int = 1_000_000) -> np.ndarray:
    """Fixed-point iteration P <- Q + A^T (P - P B (R + B^T P B)^-1 B^T P) A
    from P = Q, stopping when successive iterates differ by less than `tol`
    in max-abs norm.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    p = q.copy()
    for _ in range(max_iter):
        gram = r + b.T @ p @ b
        p_next = q + a.T @ (p - p @ b @ np.linalg.solve(gram, b.T @ p)) @ a
        p_next = 0.5 * (p_next + p_next.T)
        if np.max(np.abs(p_next - p)) < tol:
            return p_next
        p = p_next
    raise RuntimeError(f"Riccati iteration did not converge within {max_iter} iterations")


def lqr_gain(sys: LinearSystem, q, r) -> LqrSolution:
    """Optimal feedback gain K_p = (B^T P B + R)^-1 B^T P A."""
    if controllability_rank(sys) != sys.a.shape[0]:
        raise ValueError("system is not controllable; cannot solve the regulator problem")
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    p = solve_dare(sys.a, sys.b, q, r)
    k_p = np.linalg.solve(sys.b.T @ p @ sys.b + r, sys.b.T @ p @ sys.a)
    return LqrSolution(p=p, k_p=k_p, residual=dare_residual(sys.a, sys.b, q, r, p))


def lqr_policy(solution: LqrSolution, state) -> np.ndarray:
    """u = -K_p x on the stacked (position, error) state."""
    return -solution.k_p @ np.asarray(state, dtype=float)
