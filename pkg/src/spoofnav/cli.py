"""Command-line interface: run simulations, print the producer gain, and
emit the default scenario file.

Exit codes: 0 success, 1 validation/I-O failure, 2 solver failure or a run
that ends with an implausible estimate.
"""

from __future__ import annotations

import dataclasses
import sys
from pathlib import Path

import click
import numpy as np

from . import report
from .lqr import build_system, lqr_gain
from .scenario import ScenarioError, default_scenario, load_scenario, save_scenario
from .simulator import run_closed_loop


@click.group()
def main():
    """Localization-illusion simulator: an adversarial producer spoofs tower
    signal intensities to steer a trilaterating receiver."""


@main.command("run")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(), help="Scenario JSON file.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Output directory.")
@click.option("--mode", type=click.Choice(["lqr", "mpc"]), default=None,
              help="Override the producer mode from the scenario file.")
def cmd_run(scenario_path, out_dir, mode):
    """Simulate the closed loop; write trajectory.csv, trajectory.svg, actions.svg."""
    scenario = _load(scenario_path)
    if mode is not None and mode != scenario.producer.mode:
        variant = "simple" if mode == "lqr" else "advanced"
        scenario = dataclasses.replace(
            scenario,
            producer=dataclasses.replace(scenario.producer, mode=mode),
            receiver=dataclasses.replace(scenario.receiver, variant=variant),
        )
    try:
        log = run_closed_loop(scenario)
    except (RuntimeError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "trajectory.csv"
    traj_svg = out / "trajectory.svg"
    act_svg = out / "actions.svg"
    report.write_csv(log, csv_path)
    report.plot_trajectories(
        log, scenario.towers, scenario.receiver.goal, scenario.producer.goal, traj_svg
    )
    report.plot_actions(log, act_svg)

    final = log.records[-1]
    iota = "empty" if final.iota is None else f"({final.iota[0]:.6f}, {final.iota[1]:.6f})"
    click.echo(
        f"terminated at stage {final.stage} ({log.termination_reason}); "
        f"final estimate {iota}; "
        f"final position ({final.omega_r[0]:.6f}, {final.omega_r[1]:.6f})"
    )
    click.echo(f"wrote {csv_path}, {traj_svg}, {act_svg}")
    if log.termination_reason == "implausible-istate":
        sys.exit(2)


@main.command("gain")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(), help="Scenario JSON file.")
def cmd_gain(scenario_path):
    """Print the optimal producer feedback gain for the scenario."""
    scenario = _load(scenario_path)
    solution = lqr_gain(
        build_system(scenario.receiver.gain),
        scenario.producer.q_matrix(),
        scenario.producer.r_matrix(),
    )
    click.echo("K_p (full precision):")
    for row in solution.k_p:
        click.echo("  [" + ", ".join(format(v, ".12g") for v in row) + "]")
    click.echo("K_p (rounded to 2 decimals):")
    for row in np.round(solution.k_p, 2):
        click.echo("  [" + ", ".join(f"{v:g}" for v in row) + "]")


@main.command("default")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Where to write the scenario JSON.")
@click.option("--mode", type=click.Choice(["lqr", "mpc"]), default="lqr")
def cmd_default(out_path, mode):
    """Write the reference scenario to a file."""
    try:
        save_scenario(default_scenario(mode), out_path)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"wrote {out_path}")


def _load(path):
    try:
        return load_scenario(path)
    except (OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
