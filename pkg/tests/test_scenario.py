import numpy as np
import pytest

from spoofnav.scenario import (
    ProducerSpec,
    ReceiverSpec,
    Scenario,
    ScenarioError,
    TowerArray,
    default_scenario,
    load_scenario,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
    validate_scenario,
)

import dataclasses


def test_default_scenario_is_valid():
    sc = default_scenario()
    assert validate_scenario(sc) == sc


def test_default_scenario_values():
    sc = default_scenario()
    assert sc.receiver.goal == (40.0, 40.0)
    assert sc.producer.goal == (0.0, 0.0)
    assert sc.receiver.gain == 0.3
    assert sc.termination_epsilon == 0.005
    assert sc.producer.horizon == 10
    assert sc.towers.positions == ((-5.0, -5.0), (50.0, 10.0), (20.0, 60.0))
    assert sc.towers.calibration == (1.0, 1.0, 1.0)
    assert sc.initial_position == (20.0, 30.0)
    assert sc.initial_estimate == (20.0, 30.0)


def test_default_mpc_scenario():
    sc = default_scenario("mpc")
    assert sc.producer.mode == "mpc"
    assert sc.receiver.variant == "advanced"
    assert sc.receiver.theta_min == (-1.0, -1.0)
    assert sc.receiver.theta_max == (1.0, 1.0)


def test_validation_idempotent():
    sc = validate_scenario(default_scenario())
    assert validate_scenario(sc) == sc


def _with_towers(positions, calibration=(1.0, 1.0, 1.0)):
    sc = default_scenario()
    return dataclasses.replace(
        sc, towers=TowerArray(positions=positions, calibration=calibration)
    )


def test_collinear_towers_rejected():
    sc = _with_towers(((0.0, 0.0), (1.0, 1.0), (2.0, 2.0)))
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(sc)
    assert exc.value.code == "collinear_towers"


def test_duplicate_towers_rejected():
    sc = _with_towers(((1.0, 1.0), (1.0, 1.0), (2.0, 5.0)))
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(sc)
    assert exc.value.code == "collinear_towers"


def test_nonpositive_calibration_rejected():
    sc = _with_towers(((-5.0, -5.0), (50.0, 10.0), (20.0, 60.0)), (1.0, 0.0, 1.0))
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(sc)
    assert exc.value.code == "nonpositive_calibration"


def test_zero_gain_rejected():
    sc = default_scenario()
    sc = dataclasses.replace(sc, receiver=dataclasses.replace(sc.receiver, gain=0.0))
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(sc)
    assert exc.value.code == "zero_gain"


def test_non_pd_q_rejected():
    sc = default_scenario()
    bad_q = tuple(tuple(row) for row in -np.eye(4))
    sc = dataclasses.replace(sc, producer=dataclasses.replace(sc.producer, q=bad_q))
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(sc)
    assert exc.value.code == "q_not_pd"


def test_non_pd_r_rejected():
    sc = default_scenario()
    bad_r = ((1.0, 2.0), (2.0, 1.0))  # indefinite
    sc = dataclasses.replace(sc, producer=dataclasses.replace(sc.producer, r=bad_r))
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(sc)
    assert exc.value.code == "r_not_pd"


def test_theta_box_must_contain_zero():
    sc = default_scenario("mpc")
    sc = dataclasses.replace(
        sc, receiver=dataclasses.replace(sc.receiver, theta_min=(0.5, -1.0))
    )
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(sc)
    assert exc.value.code == "theta_excludes_zero"


def test_nonpositive_epsilon_rejected():
    sc = dataclasses.replace(default_scenario(), termination_epsilon=0.0)
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(sc)
    assert exc.value.code == "bad_epsilon"


def test_json_round_trip(tmp_path):
    sc = default_scenario("mpc")
    path = tmp_path / "scenario.json"
    save_scenario(sc, path)
    loaded = load_scenario(path)
    assert loaded == sc


def test_diagonal_weight_shorthand():
    cfg = scenario_to_dict(default_scenario())
    cfg["producer"]["q_diag_or_matrix"] = [2.0, 2.0, 1.0, 1.0]
    cfg["producer"]["r_diag_or_matrix"] = [3.0, 3.0]
    sc = validate_scenario(scenario_from_dict(cfg))
    assert np.allclose(sc.producer.q_matrix(), np.diag([2.0, 2.0, 1.0, 1.0]))
    assert np.allclose(sc.producer.r_matrix(), 3.0 * np.eye(2))


def test_malformed_config_rejected():
    with pytest.raises(ScenarioError) as exc:
        scenario_from_dict({"towers": []})
    assert exc.value.code in ("bad_schema", "bad_tower_count")
