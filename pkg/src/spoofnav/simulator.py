"""Closed-loop orchestration: the producer steers the receiver's estimate by
commanding tower intensities while the receiver walks toward its own goal,
with per-stage plausibility and illusion auditing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lqr as lqr_mod
from . import mpc as mpc_mod
from .receiver import itf_advanced, itf_simple, receiver_policy
from .scenario import Scenario
from .signal_model import measure_intensities, synthesize_intensities

ILLUSION_TOL = 1e-6  # estimate/truth gap below this counts as truthful
LOOP_IDENTITY_TOL = 1e-6


class ClosedLoopError(RuntimeError):
    """The synthesize/measure/trilaterate loop failed to close."""


@dataclass(frozen=True)
class UniverseState:
    position: np.ndarray  # true receiver position
    intensities: np.ndarray  # tower source intensities, positive

    def __post_init__(self):
        if np.any(np.asarray(self.intensities) <= 0.0):
            raise ValueError("tower intensities must be positive")


@dataclass
class StageRecord:
    stage: int
    omega_r: np.ndarray  # true position at this stage
    iota: np.ndarray | None  # estimate (None = implausible)
    e: np.ndarray  # goal - estimate (zeros when iota is None)
    u_r: np.ndarray  # receiver action applied this stage
    u_p: np.ndarray  # producer estimate-shift applied this stage
    intensities: np.ndarray  # tower intensities in effect at this stage
    observation: np.ndarray  # measurement at omega_r under these intensities
    plausible: bool
    illusion: bool


@dataclass
class TrajectoryLog:
    records: list = field(default_factory=list)
    terminated_at: int | None = None
    termination_reason: str = "max-stages"


def step_universe(state: UniverseState, u_r, new_intensities) -> UniverseState:
    """Advance the world one stage: receiver displaces, producer's commanded
    intensities take effect."""
    return UniverseState(
        position=np.asarray(state.position, dtype=float) + np.asarray(u_r, dtype=float),
        intensities=np.asarray(new_intensities, dtype=float),
    )


def audit_stage(iota, omega_r, tolerance: float = ILLUSION_TOL):
    """(plausible, illusion) flags: plausible iff the estimate exists,
    illusion iff it exists but differs from the true position."""
    if tolerance <= 0.0:
        raise ValueError("audit tolerance must be positive")
    plausible = iota is not None
    illusion = plausible and bool(
        np.linalg.norm(np.asarray(iota, dtype=float) - np.asarray(omega_r, dtype=float))
        > tolerance
    )
    return plausible, illusion


def _make_producer(scenario: Scenario):
    sys = lqr_mod.build_system(scenario.receiver.gain)
    q = scenario.producer.q_matrix()
    r = scenario.producer.r_matrix()
    if scenario.producer.mode == "lqr":
        solution = lqr_mod.lqr_gain(sys, q, r)
        return lambda x: lqr_mod.lqr_policy(solution, x), solution
    params = mpc_mod.MpcParams(
        sys=sys,
        q=q,
        r=r,
        horizon=scenario.producer.horizon,
        theta_min=np.asarray(scenario.receiver.theta_min, dtype=float),
        theta_max=np.asarray(scenario.receiver.theta_max, dtype=float),
    )
    return lambda x: mpc_mod.mpc_policy(params, x), None


def run_closed_loop(scenario: Scenario, audit_tolerance: float = ILLUSION_TOL) -> TrajectoryLog:
    """Simulate until the receiver believes it reached its goal, the estimate
    collapses to the empty set, or the stage budget runs out.

    Each stage: the producer reads the full state, picks an estimate shift
    (LQR or receding-horizon QP), predicts the receiver's proportional step,
    and commands tower intensities so that the receiver's next trilateration
    lands exactly on the shifted estimate.
    """
    if scenario.producer.mode == "mpc" and scenario.receiver.variant != "advanced":
        raise ValueError("the constrained producer requires the advanced receiver variant")
    if scenario.producer.mode == "lqr" and scenario.receiver.variant != "simple":
        raise ValueError("the unconstrained producer requires the simple receiver variant")

    policy, _ = _make_producer(scenario)
    towers = scenario.towers
    receiver_goal = np.asarray(scenario.receiver.goal, dtype=float)
    producer_goal = np.asarray(scenario.producer.goal, dtype=float)
    gain = scenario.receiver.gain

    state = UniverseState(
        position=np.asarray(scenario.initial_position, dtype=float),
        intensities=np.asarray(towers.calibration, dtype=float),
    )
    iota = np.asarray(scenario.initial_estimate, dtype=float)
    log = TrajectoryLog()

    for stage in range(1, scenario.max_stages + 1):
        observation = measure_intensities(towers, state.position, state.intensities)
        plausible, illusion = audit_stage(iota, state.position, audit_tolerance)
        record = StageRecord(
            stage=stage,
            omega_r=state.position,
            iota=iota,
            e=(receiver_goal - iota) if iota is not None else np.zeros(2),
            u_r=np.zeros(2),
            u_p=np.zeros(2),
            intensities=state.intensities,
            observation=observation,
            plausible=plausible,
            illusion=illusion,
        )
        log.records.append(record)

        if iota is None:
            log.terminated_at = stage
            log.termination_reason = "implausible-istate"
            return log
        if np.linalg.norm(record.e) < scenario.termination_epsilon:
            log.terminated_at = stage
            log.termination_reason = "goal-reached"
            return log

        extended = np.concatenate([state.position - producer_goal, record.e])
        u_p = policy(extended)
        u_r = receiver_policy(iota, receiver_goal, gain)
        target_estimate = iota + u_p
        predicted_position = state.position + u_r  # producer knows the receiver policy
        new_intensities = synthesize_intensities(towers, predicted_position, target_estimate)

        record.u_p = u_p
        record.u_r = u_r

        state = step_universe(state, u_r, new_intensities)
        next_obs = measure_intensities(towers, state.position, state.intensities)
        if scenario.receiver.variant == "simple":
            iota = itf_simple(iota, next_obs, towers)
        else:
            iota = itf_advanced(
                iota, next_obs, towers, scenario.receiver.theta_min, scenario.receiver.theta_max
            )
        if iota is not None and np.linalg.norm(iota - target_estimate) > LOOP_IDENTITY_TOL:
            raise ClosedLoopError(
                f"estimate {iota} strayed from the commanded target {target_estimate}"
            )

    log.terminated_at = None
    log.termination_reason = "max-stages"
    return log
