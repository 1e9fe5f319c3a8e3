"""Toolkit for steering a trilaterating receiver by spoofing tower signal
intensities: signal model, LQR and receding-horizon producers, closed-loop
simulator, and trajectory reporting."""

from .scenario import (
    ProducerSpec,
    ReceiverSpec,
    Scenario,
    ScenarioError,
    TowerArray,
    default_scenario,
    load_scenario,
    save_scenario,
    validate_scenario,
)
from .simulator import TrajectoryLog, run_closed_loop

__all__ = [
    "ProducerSpec",
    "ReceiverSpec",
    "Scenario",
    "ScenarioError",
    "TowerArray",
    "TrajectoryLog",
    "default_scenario",
    "load_scenario",
    "run_closed_loop",
    "save_scenario",
    "validate_scenario",
]
