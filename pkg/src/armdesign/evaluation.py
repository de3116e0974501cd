"""Bi-objective design scoring against a target set, with per-target diagnostics.

The position objective sums end-effector errors over targets; the torque
objective sums gravity-compensation torque norms, scaled by alpha to a
comparable magnitude. Every target is solved independently from the zero
posture, so the score is order-independent and deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import GravityModel, IKConfig, solve_ik
from .pareto import ObjectiveValues
from .space import DesignParams

DEFAULT_ALPHA = 40.0


@dataclass(frozen=True)
class TargetSet:
    """Named list of operation points (m) the arm should reach."""

    name: str
    points: tuple[tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if len(self.points) < 1:
            raise ValueError("a target set needs at least one point")
        if not all(np.isfinite(p).all() for p in map(np.asarray, self.points)):
            raise ValueError("target points must be finite")

    def arrays(self) -> list[np.ndarray]:
        return [np.asarray(p, dtype=float) for p in self.points]


@dataclass(frozen=True)
class TargetOutcome:
    """IK result and per-target objective terms for a single operation point."""

    target: tuple[float, float, float]
    reached: tuple[float, float, float]
    torque: tuple[float, ...]
    e_pos: float
    e_torque: float
    residual: float
    converged: bool
    iterations: int


@dataclass(frozen=True)
class EvaluationReport:
    params: DesignParams
    objectives: ObjectiveValues
    per_target: tuple[TargetOutcome, ...]


def evaluate(
    params: DesignParams,
    targets: TargetSet,
    gravity: GravityModel = GravityModel(),
    ik_cfg: IKConfig = IKConfig(),
    alpha: float = DEFAULT_ALPHA,
) -> EvaluationReport:
    """Score a design: e_pos = sum of IK residuals, e_torque = alpha * sum of torque norms."""
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    outcomes = []
    for point in targets.arrays():
        sol = solve_ik(params, point, gravity=gravity, ik_cfg=ik_cfg)
        outcomes.append(
            TargetOutcome(
                target=tuple(float(v) for v in point),
                reached=tuple(float(v) for v in sol.reached),
                torque=tuple(float(v) for v in sol.torque),
                e_pos=sol.residual,
                e_torque=alpha * float(np.linalg.norm(sol.torque)),
                residual=sol.residual,
                converged=sol.converged,
                iterations=sol.iterations,
            )
        )
    objectives = ObjectiveValues(
        e_pos=float(sum(o.e_pos for o in outcomes)),
        e_torque=float(sum(o.e_torque for o in outcomes)),
    )
    return EvaluationReport(params=params, objectives=objectives, per_target=tuple(outcomes))
