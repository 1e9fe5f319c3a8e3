"""Tower signal physics: intensity measurement, circle radii, trilateration,
and the producer's intensity-synthesis map.

A receiver estimate ("I-state") is represented as either a planar numpy array
(a singleton estimate) or None (the empty, implausible state).
"""

from __future__ import annotations

import math

import numpy as np

from .scenario import TowerArray

TRILATERATION_TOL = 1e-6  # circle-consistency residual, length units


def measure_intensities(towers: TowerArray, true_position, source_intensities) -> np.ndarray:
    """Signal intensity at `true_position` for each tower: s / (1 + d^2)."""
    pos = np.asarray(true_position, dtype=float)
    s = np.asarray(source_intensities, dtype=float)
    if np.any(s <= 0.0):
        raise ValueError("source intensities must be positive")
    d2 = np.sum((towers.position_matrix() - pos) ** 2, axis=1)
    return s / (1.0 + d2)


def perceived_radius(s_c_i: float, r_i: float):
    """Distance a calibrated receiver infers from measured intensity r_i.

    Returns None when the measurement is inconsistent with the calibrated
    model (r_i > s_c) or carries no finite radius (r_i = 0).
    """
    if s_c_i <= 0.0:
        raise ValueError("calibration intensity must be positive")
    if r_i <= 0.0 or r_i > s_c_i:
        return None
    return math.sqrt(s_c_i / r_i - 1.0)


def trilaterate(towers: TowerArray, observation, tol: float = TRILATERATION_TOL):
    """Invert the calibrated sensor map: the common point of the three
    intensity circles, or None if the circles are inconsistent.

    Subtracting the circle equations pairwise gives two linear equations in
    the candidate point; the candidate is accepted only if all three circle
    residuals are below `tol`.
    """
    obs = np.asarray(observation, dtype=float)
    radii = [perceived_radius(towers.calibration[i], obs[i]) for i in range(3)]
    if any(d is None for d in radii):
        return None
    pts = towers.position_matrix()
    # (x - t_i)^2 - (x - t_0)^2 = d_i^2 - d_0^2  ->  linear in x
    a = 2.0 * (pts[1:] - pts[0])
    norms = np.sum(pts**2, axis=1)
    b = np.array(
        [
            radii[0] ** 2 - radii[i] ** 2 + norms[i] - norms[0]
            for i in (1, 2)
        ]
    )
    try:
        candidate = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return None
    dists = np.linalg.norm(pts - candidate, axis=1)
    if np.all(np.abs(dists - np.asarray(radii)) < tol):
        return candidate
    return None


def synthesize_intensities(towers: TowerArray, true_position, target_estimate) -> np.ndarray:
    """Source intensities that make a receiver at `true_position` trilaterate
    to `target_estimate`: s_c * (1 + d_true^2) / (1 + d_target^2).
    """
    pos = np.asarray(true_position, dtype=float)
    target = np.asarray(target_estimate, dtype=float)
    s_c = np.asarray(towers.calibration, dtype=float)
    pts = towers.position_matrix()
    d2_true = np.sum((pts - pos) ** 2, axis=1)
    d2_target = np.sum((pts - target) ** 2, axis=1)
    return s_c * (1.0 + d2_true) / (1.0 + d2_target)
