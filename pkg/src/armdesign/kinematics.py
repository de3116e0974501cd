"""Serial-chain kinematics: FK, position Jacobian, gravity torque, damped-least-squares IK.

Conventions: joint j rotates about its local axis (roll = x, pitch = y, yaw = z)
and is followed by a link of length L_j along the rotated local +z. With all
angles zero the chain is a vertical line above the base origin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .space import JOINT_ANGLE_LIMIT, DesignParams


@dataclass(frozen=True)
class GravityModel:
    """Uniform-rod link masses under gravity along -z."""

    g: float = 9.81
    linear_density: float = 1.0  # kg/m
    com_fraction: float = 0.5  # COM position along each link

    def __post_init__(self) -> None:
        if self.linear_density <= 0:
            raise ValueError("linear_density must be > 0")
        if not 0.0 <= self.com_fraction <= 1.0:
            raise ValueError("com_fraction must be in [0, 1]")


@dataclass(frozen=True)
class IKConfig:
    damping: float = 0.05  # lambda in the DLS update
    step_clamp: float = 0.2  # rad, per-iteration |dq| limit
    max_iters: int = 300
    tol: float = 1e-4  # m, position tolerance
    stall_patience: int = 12  # iterations without improvement before a restart
    give_up: int = 200  # iterations without meaningful progress before stopping


@dataclass(frozen=True)
class IKSolution:
    q: np.ndarray  # joint angles, rad
    reached: np.ndarray  # end-effector position at q, m
    torque: np.ndarray  # gravity-compensation torque at q, N*m
    residual: float  # |reached - target|, m
    converged: bool
    iterations: int


@dataclass(frozen=True)
class ChainState:
    """One FK pass: world-frame joint positions, rotation axes, link COMs, EE."""

    joint_positions: np.ndarray  # (D, 3)
    joint_axes: np.ndarray  # (D, 3), world axis of each joint
    link_coms: np.ndarray  # (D, 3), world COM of each link
    ee: np.ndarray  # (3,)


def _check_q(params: DesignParams, q) -> np.ndarray:
    q = np.asarray(q, dtype=float).ravel()
    if q.size != params.n_joints:
        raise ValueError(f"joint vector length {q.size} does not match D = {params.n_joints}")
    return q


def _fill_rotation(out: np.ndarray, code: int, angle: float) -> None:
    c, s = np.cos(angle), np.sin(angle)
    if code == 0:  # roll, about x
        out[0, 0] = 1.0; out[0, 1] = 0.0; out[0, 2] = 0.0
        out[1, 0] = 0.0; out[1, 1] = c;   out[1, 2] = -s
        out[2, 0] = 0.0; out[2, 1] = s;   out[2, 2] = c
    elif code == 1:  # pitch, about y
        out[0, 0] = c;   out[0, 1] = 0.0; out[0, 2] = s
        out[1, 0] = 0.0; out[1, 1] = 1.0; out[1, 2] = 0.0
        out[2, 0] = -s;  out[2, 1] = 0.0; out[2, 2] = c
    else:  # yaw, about z
        out[0, 0] = c;   out[0, 1] = -s;  out[0, 2] = 0.0
        out[1, 0] = s;   out[1, 1] = c;   out[1, 2] = 0.0
        out[2, 0] = 0.0; out[2, 1] = 0.0; out[2, 2] = 1.0


def _fk_pass(origin, codes, lengths, q, com_fraction=None):
    """Frame propagation; returns (joint_positions, joint_axes, ee[, coms])."""
    d = len(codes)
    positions = np.empty((d, 3))
    axes = np.empty((d, 3))
    coms = np.empty((d, 3)) if com_fraction is not None else None
    rot = np.eye(3)
    rj = np.empty((3, 3))
    pos = origin.copy()
    for j in range(d):
        positions[j] = pos
        axes[j] = rot[:, codes[j]]  # local unit axis e_code in world frame
        _fill_rotation(rj, codes[j], q[j])
        rot = rot @ rj
        step = lengths[j] * rot[:, 2]
        if coms is not None:
            coms[j] = pos + com_fraction * step
        pos = pos + step
    if coms is not None:
        return positions, axes, pos, coms
    return positions, axes, pos


def chain_state(params: DesignParams, q, com_fraction: float = 0.5) -> ChainState:
    """Propagate frames along the chain at joint angles q."""
    q = _check_q(params, q)
    codes = tuple(jt.value for jt in params.joints)
    positions, axes, ee, coms = _fk_pass(
        params.origin_array(), codes, params.lengths_array(), q, com_fraction
    )
    return ChainState(joint_positions=positions, joint_axes=axes, link_coms=coms, ee=ee)


def forward_kinematics(params: DesignParams, q) -> np.ndarray:
    """End-effector position (m) at joint angles q."""
    q = _check_q(params, q)
    codes = tuple(jt.value for jt in params.joints)
    return _fk_pass(params.origin_array(), codes, params.lengths_array(), q)[2]


def _cross_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[:, 0] = a[:, 1] * b[:, 2] - a[:, 2] * b[:, 1]
    out[:, 1] = a[:, 2] * b[:, 0] - a[:, 0] * b[:, 2]
    out[:, 2] = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    return out


def position_jacobian(params: DesignParams, q) -> np.ndarray:
    """3xD position Jacobian; column j = axis_j x (p_ee - p_j)."""
    state = chain_state(params, q)
    return _cross_rows(state.joint_axes, state.ee - state.joint_positions).T


def potential_energy(params: DesignParams, q, gravity: GravityModel = GravityModel()) -> float:
    """Gravitational potential energy of the link masses at posture q (J)."""
    state = chain_state(params, q, com_fraction=gravity.com_fraction)
    masses = gravity.linear_density * params.lengths_array()
    return float(np.sum(masses * gravity.g * state.link_coms[:, 2]))


def gravity_torque(params: DesignParams, q, gravity: GravityModel = GravityModel()) -> np.ndarray:
    """Static joint torques holding the arm against gravity: dU/dq (N*m).

    Joint j only moves the COMs of links j..D, each contributing its weight
    times the z-component of axis_j x (com_i - p_j).
    """
    state = chain_state(params, q, com_fraction=gravity.com_fraction)
    masses = gravity.linear_density * params.lengths_array()
    d = params.n_joints
    torque = np.empty(d)
    for j in range(d):
        lever = _cross_rows(
            np.broadcast_to(state.joint_axes[j], (d - j, 3)),
            state.link_coms[j:] - state.joint_positions[j],
        )
        torque[j] = np.sum(masses[j:] * gravity.g * lever[:, 2])
    return torque


def _solve3(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Solve the 3x3 system a @ x = v by cofactor expansion."""
    a00, a01, a02 = a[0]
    a10, a11, a12 = a[1]
    a20, a21, a22 = a[2]
    c00 = a11 * a22 - a12 * a21
    c01 = a12 * a20 - a10 * a22
    c02 = a10 * a21 - a11 * a20
    det = a00 * c00 + a01 * c01 + a02 * c02
    c10 = a02 * a21 - a01 * a22
    c11 = a00 * a22 - a02 * a20
    c12 = a01 * a20 - a00 * a21
    c20 = a01 * a12 - a02 * a11
    c21 = a02 * a10 - a00 * a12
    c22 = a00 * a11 - a01 * a10
    return np.array(
        [
            (c00 * v[0] + c10 * v[1] + c20 * v[2]) / det,
            (c01 * v[0] + c11 * v[1] + c21 * v[2]) / det,
            (c02 * v[0] + c12 * v[1] + c22 * v[2]) / det,
        ]
    )


def solve_ik(
    params: DesignParams,
    target,
    gravity: GravityModel = GravityModel(),
    ik_cfg: IKConfig = IKConfig(),
) -> IKSolution:
    """Damped-least-squares IK from the zero posture, tracking the best iterate.

    Joints pinned against a limit get their Jacobian column masked so the rest
    of the chain keeps moving; a stretch of iterations without improvement
    triggers a restart from a fresh posture (drawn from a fixed-seed generator,
    so the solver stays a pure function of its inputs); and iteration stops
    early once the residual is within tolerance of the reachability lower
    bound |target - origin| - sum(L) or nothing meaningful has been gained for
    ik_cfg.give_up steps. Unreachable targets are not an error: the best
    posture found is returned with converged=False so the position-error
    objective stays defined.
    """
    target = np.asarray(target, dtype=float).ravel()
    if target.size != 3:
        raise ValueError(f"target must be a 3-vector, got length {target.size}")
    d = params.n_joints
    origin = params.origin_array()
    codes = tuple(jt.value for jt in params.joints)
    lengths = params.lengths_array()
    lam_sq = ik_cfg.damping**2
    meaningful = 0.1 * ik_cfg.tol
    clamp = ik_cfg.step_clamp
    # no posture can get closer than this (triangle inequality on link lengths)
    offset = target - origin
    residual_floor = max(0.0, float(np.sqrt(offset @ offset)) - float(lengths.sum()))
    stop_at = residual_floor + ik_cfg.tol
    restart_rng = np.random.default_rng(0x5EED)

    q = np.zeros(d)
    positions, axes, ee = _fk_pass(origin, codes, lengths, q)
    err = target - ee
    best_q = q
    best_residual = float(np.sqrt(err @ err))
    iterations = 0
    since_improve = 0  # resets on any new best (drives restarts)
    since_progress = 0  # resets only on clear gains (drives give-up)

    while (
        best_residual > stop_at
        and iterations < ik_cfg.max_iters
        and since_progress < ik_cfg.give_up
    ):
        jac = _cross_rows(axes, ee - positions).T
        a = jac @ jac.T
        a[0, 0] += lam_sq; a[1, 1] += lam_sq; a[2, 2] += lam_sq
        dq = jac.T @ _solve3(a, err)
        pinned = ((q >= JOINT_ANGLE_LIMIT) & (dq > 0)) | ((q <= -JOINT_ANGLE_LIMIT) & (dq < 0))
        if pinned.any():
            jac_free = jac.copy()
            jac_free[:, pinned] = 0.0
            a = jac_free @ jac_free.T
            a[0, 0] += lam_sq; a[1, 1] += lam_sq; a[2, 2] += lam_sq
            dq = jac_free.T @ _solve3(a, err)
        np.minimum(dq, clamp, out=dq)
        np.maximum(dq, -clamp, out=dq)
        q_next = np.clip(q + dq, -JOINT_ANGLE_LIMIT, JOINT_ANGLE_LIMIT)
        if since_improve >= ik_cfg.stall_patience or (q_next == q).all():
            q_next = restart_rng.uniform(-JOINT_ANGLE_LIMIT, JOINT_ANGLE_LIMIT, size=d)
            since_improve = 0
        q = q_next
        iterations += 1
        positions, axes, ee = _fk_pass(origin, codes, lengths, q)
        err = target - ee
        residual = float(np.sqrt(err @ err))
        gain = best_residual - residual
        if gain > 0.0:
            best_residual = residual
            best_q = q
            since_improve = 0
        else:
            since_improve += 1
        since_progress = 0 if gain > meaningful else since_progress + 1

    converged = best_residual <= ik_cfg.tol

    reached = forward_kinematics(params, best_q)
    return IKSolution(
        q=best_q,
        reached=reached,
        torque=gravity_torque(params, best_q, gravity),
        residual=float(np.linalg.norm(reached - target)),
        converged=converged,
        iterations=iterations,
    )
