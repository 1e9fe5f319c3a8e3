"""Scenario configuration: towers, receiver/producer specs, validation, JSON I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

COLLINEARITY_REL_TOL = 1e-9


class ScenarioError(ValueError):
    """Raised when a scenario fails validation. `code` identifies the first failed check."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _point(value) -> np.ndarray:
    p = np.asarray(value, dtype=float)
    if p.shape != (2,):
        raise ScenarioError("bad_point", f"expected a planar point, got shape {p.shape}")
    return p


@dataclass(frozen=True)
class TowerArray:
    """Three fixed towers with their calibration intensities."""

    positions: tuple  # three planar points
    calibration: tuple  # three positive reals

    def position(self, i: int) -> np.ndarray:
        return np.asarray(self.positions[i], dtype=float)

    def position_matrix(self) -> np.ndarray:
        return np.array([self.positions[i] for i in range(3)], dtype=float)


@dataclass(frozen=True)
class ReceiverSpec:
    goal: tuple  # planar point
    gain: float
    variant: str = "simple"  # "simple" | "advanced"
    theta_min: tuple = (-1.0, -1.0)
    theta_max: tuple = (1.0, 1.0)


@dataclass(frozen=True)
class ProducerSpec:
    goal: tuple  # planar point
    q: tuple  # 4x4 weight matrix, nested tuples
    r: tuple  # 2x2 weight matrix
    mode: str = "lqr"  # "lqr" | "mpc"
    horizon: int = 10

    def q_matrix(self) -> np.ndarray:
        return np.asarray(self.q, dtype=float)

    def r_matrix(self) -> np.ndarray:
        return np.asarray(self.r, dtype=float)


@dataclass(frozen=True)
class Scenario:
    towers: TowerArray
    receiver: ReceiverSpec
    producer: ProducerSpec
    initial_position: tuple
    initial_estimate: tuple
    termination_epsilon: float = 0.005
    max_stages: int = 10_000


def _is_spd(m: np.ndarray) -> bool:
    if not np.allclose(m, m.T, atol=1e-12):
        return False
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return False
    return True


def validate_scenario(scenario: Scenario) -> Scenario:
    """Check every invariant; return the scenario unchanged if all hold.

    Checks run in a fixed order, so a broken scenario always reports the
    same primary error code.
    """
    towers = scenario.towers
    if len(towers.positions) != 3 or len(towers.calibration) != 3:
        raise ScenarioError("bad_tower_count", "exactly three towers are required")
    pts = towers.position_matrix()
    for s in towers.calibration:
        if not (float(s) > 0.0):
            raise ScenarioError(
                "nonpositive_calibration", f"calibration intensity {s} must be positive"
            )
    # general position: pairwise distinct and not collinear
    scale = max(1.0, float(np.max(np.abs(pts))))
    for i in range(3):
        for j in range(i + 1, 3):
            if np.linalg.norm(pts[i] - pts[j]) <= COLLINEARITY_REL_TOL * scale:
                raise ScenarioError("collinear_towers", f"towers {i} and {j} coincide")
    u, v = pts[1] - pts[0], pts[2] - pts[0]
    cross = u[0] * v[1] - u[1] * v[0]
    if abs(cross) <= COLLINEARITY_REL_TOL * scale**2:
        raise ScenarioError("collinear_towers", "tower positions are collinear")

    rec = scenario.receiver
    if rec.gain == 0.0:
        raise ScenarioError("zero_gain", "receiver gain must be nonzero")
    if rec.variant not in ("simple", "advanced"):
        raise ScenarioError("bad_variant", f"unknown receiver variant {rec.variant!r}")
    if rec.variant == "advanced":
        lo = np.asarray(rec.theta_min, dtype=float)
        hi = np.asarray(rec.theta_max, dtype=float)
        if lo.shape != (2,) or hi.shape != (2,):
            raise ScenarioError("bad_theta", "theta bounds must be per-axis pairs")
        if not (np.all(lo < 0.0) and np.all(hi > 0.0)):
            raise ScenarioError(
                "theta_excludes_zero", "the motion box must strictly contain the zero action"
            )

    prod = scenario.producer
    q = prod.q_matrix()
    r = prod.r_matrix()
    if q.shape != (4, 4) or not _is_spd(q):
        raise ScenarioError("q_not_pd", "Q must be 4x4 symmetric positive-definite")
    if r.shape != (2, 2) or not _is_spd(r):
        raise ScenarioError("r_not_pd", "R must be 2x2 symmetric positive-definite")
    if prod.mode not in ("lqr", "mpc"):
        raise ScenarioError("bad_mode", f"unknown producer mode {prod.mode!r}")
    if prod.mode == "mpc" and prod.horizon < 1:
        raise ScenarioError("bad_horizon", "MPC horizon must be a positive integer")

    _point(scenario.initial_position)
    _point(scenario.initial_estimate)
    _point(rec.goal)
    _point(prod.goal)
    if not (scenario.termination_epsilon > 0.0):
        raise ScenarioError("bad_epsilon", "termination epsilon must be positive")
    if scenario.max_stages < 1:
        raise ScenarioError("bad_max_stages", "max_stages must be at least 1")
    return scenario


def default_scenario(mode: str = "lqr") -> Scenario:
    """The reference configuration: three towers at (-5,-5), (50,10), (20,60),
    receiver goal (40,40), producer goal (0,0), K_r = 0.3, Q = I, R = I,
    start at (20,30) with a truthful initial estimate.
    """
    variant = "simple" if mode == "lqr" else "advanced"
    return Scenario(
        towers=TowerArray(
            positions=((-5.0, -5.0), (50.0, 10.0), (20.0, 60.0)),
            calibration=(1.0, 1.0, 1.0),
        ),
        receiver=ReceiverSpec(
            goal=(40.0, 40.0),
            gain=0.3,
            variant=variant,
            theta_min=(-1.0, -1.0),
            theta_max=(1.0, 1.0),
        ),
        producer=ProducerSpec(
            goal=(0.0, 0.0),
            q=tuple(tuple(row) for row in np.eye(4)),
            r=tuple(tuple(row) for row in np.eye(2)),
            mode=mode,
            horizon=10,
        ),
        initial_position=(20.0, 30.0),
        initial_estimate=(20.0, 30.0),
        termination_epsilon=0.005,
        max_stages=10_000,
    )


def _weight_matrix(value, n: int) -> tuple:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 1 and arr.shape == (n,):
        arr = np.diag(arr)
    if arr.shape != (n, n):
        raise ScenarioError("bad_weight", f"weight must be a length-{n} diagonal or {n}x{n} matrix")
    return tuple(tuple(row) for row in arr)


def scenario_from_dict(cfg: dict) -> Scenario:
    """Build a Scenario from the documented JSON layout (see README)."""
    try:
        towers = TowerArray(
            positions=tuple(tuple(float(c) for c in t["position"]) for t in cfg["towers"]),
            calibration=tuple(float(t["calibration"]) for t in cfg["towers"]),
        )
        rcfg = cfg["receiver"]
        receiver = ReceiverSpec(
            goal=tuple(float(c) for c in rcfg["goal"]),
            gain=float(rcfg["gain"]),
            variant=rcfg.get("variant", "simple"),
            theta_min=tuple(float(c) for c in rcfg.get("theta_min", (-1.0, -1.0))),
            theta_max=tuple(float(c) for c in rcfg.get("theta_max", (1.0, 1.0))),
        )
        pcfg = cfg["producer"]
        producer = ProducerSpec(
            goal=tuple(float(c) for c in pcfg["goal"]),
            q=_weight_matrix(pcfg["q_diag_or_matrix"], 4),
            r=_weight_matrix(pcfg["r_diag_or_matrix"], 2),
            mode=pcfg.get("mode", "lqr"),
            horizon=int(pcfg.get("horizon", 10)),
        )
        icfg = cfg["initial"]
        tcfg = cfg.get("termination", {})
        return Scenario(
            towers=towers,
            receiver=receiver,
            producer=producer,
            initial_position=tuple(float(c) for c in icfg["position"]),
            initial_estimate=tuple(float(c) for c in icfg["estimate"]),
            termination_epsilon=float(tcfg.get("epsilon", 0.005)),
            max_stages=int(tcfg.get("max_stages", 10_000)),
        )
    except (KeyError, TypeError) as exc:
        raise ScenarioError("bad_schema", f"malformed scenario configuration: {exc}") from exc


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "towers": [
            {"position": list(scenario.towers.positions[i]),
             "calibration": scenario.towers.calibration[i]}
            for i in range(3)
        ],
        "receiver": {
            "goal": list(scenario.receiver.goal),
            "gain": scenario.receiver.gain,
            "variant": scenario.receiver.variant,
            "theta_min": list(scenario.receiver.theta_min),
            "theta_max": list(scenario.receiver.theta_max),
        },
        "producer": {
            "goal": list(scenario.producer.goal),
            "q_diag_or_matrix": [list(row) for row in scenario.producer.q],
            "r_diag_or_matrix": [list(row) for row in scenario.producer.r],
            "mode": scenario.producer.mode,
            "horizon": scenario.producer.horizon,
        },
        "initial": {
            "position": list(scenario.initial_position),
            "estimate": list(scenario.initial_estimate),
        },
        "termination": {
            "epsilon": scenario.termination_epsilon,
            "max_stages": scenario.max_stages,
        },
    }


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return validate_scenario(scenario_from_dict(json.load(fh)))


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w") as fh:
        json.dump(scenario_to_dict(scenario), fh, indent=2)
        fh.write("\n")
