"""Receiver-side estimate updates and the proportional goal-seeking policy."""

from __future__ import annotations

import numpy as np

from .scenario import TowerArray
from .signal_model import trilaterate

BOX_BOUNDARY_TOL = 1e-9  # keeps estimates on an active bound plausible


def itf_simple(prev, observation, towers: TowerArray):
    """Memoryless update: the estimate is whatever the observation trilaterates to."""
    return trilaterate(towers, observation)


def itf_advanced(prev, observation, towers: TowerArray, theta_min, theta_max):
    """Motion-model-aware update: trilateration intersected with the box of
    displacements the receiver believes possible from its previous estimate.
    An empty state is absorbing.
    """
    if prev is None:
        return None
    point = trilaterate(towers, observation)
    if point is None:
        return None
    prev = np.asarray(prev, dtype=float)
    lo = prev + np.asarray(theta_min, dtype=float) - BOX_BOUNDARY_TOL
    hi = prev + np.asarray(theta_max, dtype=float) + BOX_BOUNDARY_TOL
    if np.all(point >= lo) and np.all(point <= hi):
        return point
    return None


def receiver_policy(istate, goal, gain: float) -> np.ndarray:
    """Proportional step toward the goal: u = K_r * (goal - estimate)."""
    if istate is None:
        raise ValueError("receiver policy is undefined on an empty estimate")
    return gain * (np.asarray(goal, dtype=float) - np.asarray(istate, dtype=float))
