"""Trajectory reporting: CSV serialization and SVG figures."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .simulator import TrajectoryLog

CSV_HEADER = (
    "stage,omega_r_x,omega_r_y,iota_x,iota_y,e_x,e_y,u_r_x,u_r_y,u_p_x,u_p_y,"
    "s1,s2,s3,r1,r2,r3,plausible,illusion"
)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_csv(log: TrajectoryLog, path) -> None:
    """One row per stage, floats at 12 significant digits; an empty estimate
    leaves the iota columns blank."""
    lines = [CSV_HEADER]
    for rec in log.records:
        iota = ["", ""] if rec.iota is None else [_fmt(rec.iota[0]), _fmt(rec.iota[1])]
        fields = [
            str(rec.stage),
            _fmt(rec.omega_r[0]), _fmt(rec.omega_r[1]),
            iota[0], iota[1],
            _fmt(rec.e[0]), _fmt(rec.e[1]),
            _fmt(rec.u_r[0]), _fmt(rec.u_r[1]),
            _fmt(rec.u_p[0]), _fmt(rec.u_p[1]),
            _fmt(rec.intensities[0]), _fmt(rec.intensities[1]), _fmt(rec.intensities[2]),
            _fmt(rec.observation[0]), _fmt(rec.observation[1]), _fmt(rec.observation[2]),
            "1" if rec.plausible else "0",
            "1" if rec.illusion else "0",
        ]
        lines.append(",".join(fields))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def plot_trajectories(log: TrajectoryLog, towers, receiver_goal, producer_goal, path) -> None:
    """True position and estimate paths overlaid with towers and goals."""
    pos = np.array([rec.omega_r for rec in log.records])
    est = np.array([rec.iota for rec in log.records if rec.iota is not None])
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(pos[:, 0], pos[:, 1], "-", color="tab:blue", label=r"true position $\omega^r_k$")
    if len(est):
        ax.plot(est[:, 0], est[:, 1], "-", color="tab:orange", label=r"estimate $\iota^r_k$")
    pts = towers.position_matrix()
    ax.plot(pts[:, 0], pts[:, 1], "^", color="k", markersize=9, label="towers")
    ax.plot(*receiver_goal, "*", color="tab:orange", markersize=12, label="receiver goal")
    ax.plot(*producer_goal, "*", color="tab:blue", markersize=12, label="producer goal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_actions(log: TrajectoryLog, path) -> None:
    """Producer action components per stage."""
    stages = [rec.stage for rec in log.records]
    u = np.array([rec.u_p for rec in log.records])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(stages, u[:, 0], label=r"$u^p_{k,1}$")
    ax.plot(stages, u[:, 1], label=r"$u^p_{k,2}$")
    ax.set_xlabel("stage $k$")
    ax.set_ylabel("producer action")
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
