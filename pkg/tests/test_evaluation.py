from __future__ import annotations

import numpy as np
import pytest

from armdesign.evaluation import TargetSet, evaluate
from armdesign.kinematics import forward_kinematics, solve_ik
from armdesign.space import SpaceConfig, make_params, random_sample


def test_zero_pose_targets_are_a_fixed_point():
    p = make_params((0, 0, 0), "YPRP", [0.1, 0.1, 0.1, 0.1])
    ee = tuple(forward_kinematics(p, np.zeros(4)))
    report = evaluate(p, TargetSet("zero", (ee, ee, ee)))
    assert report.objectives.e_pos == 0.0
    assert report.objectives.e_torque == 0.0
    assert all(o.iterations == 0 for o in report.per_target)


def test_alpha_scales_torque_only():
    rng = np.random.default_rng(0)
    p = random_sample(rng, SpaceConfig(n_joints=4))
    targets = TargetSet("t", ((0.3, 0.1, 0.4), (-0.2, 0.2, 0.5)))
    r1 = evaluate(p, targets, alpha=40.0)
    r2 = evaluate(p, targets, alpha=80.0)
    assert r2.objectives.e_pos == r1.objectives.e_pos
    assert r2.objectives.e_torque == pytest.approx(2.0 * r1.objectives.e_torque, rel=1e-12)


def test_single_target_matches_direct_ik():
    rng = np.random.default_rng(1)
    p = random_sample(rng, SpaceConfig(n_joints=4))
    target = (0.25, -0.1, 0.35)
    alpha = 40.0
    report = evaluate(p, TargetSet("one", (target,)), alpha=alpha)
    sol = solve_ik(p, np.array(target))
    assert report.objectives.e_pos == sol.residual
    assert report.objectives.e_torque == pytest.approx(alpha * np.linalg.norm(sol.torque), rel=1e-12)
    outcome = report.per_target[0]
    np.testing.assert_allclose(outcome.reached, sol.reached)
    np.testing.assert_allclose(outcome.torque, sol.torque)


def test_totals_are_sums_of_per_target_terms():
    rng = np.random.default_rng(2)
    p = random_sample(rng, SpaceConfig(n_joints=4))
    targets = TargetSet("t", ((0.3, 0.1, 0.4), (-0.2, 0.2, 0.5), (0.0, -0.3, 0.3)))
    report = evaluate(p, targets)
    assert report.objectives.e_pos == pytest.approx(sum(o.e_pos for o in report.per_target), abs=0)
    assert report.objectives.e_torque == pytest.approx(
        sum(o.e_torque for o in report.per_target), abs=0
    )


def test_evaluate_is_deterministic():
    rng = np.random.default_rng(3)
    p = random_sample(rng, SpaceConfig(n_joints=4))
    targets = TargetSet("t", ((0.3, 0.1, 0.4), (-0.2, 0.2, 0.5)))
    assert evaluate(p, targets) == evaluate(p, targets)


def test_target_permutation_leaves_totals_unchanged():
    rng = np.random.default_rng(4)
    p = random_sample(rng, SpaceConfig(n_joints=4))
    pts = ((0.3, 0.1, 0.4), (-0.2, 0.2, 0.5), (0.1, 0.0, 0.6))
    fwd = evaluate(p, TargetSet("t", pts))
    rev = evaluate(p, TargetSet("t", pts[::-1]))
    assert fwd.objectives.e_pos == pytest.approx(rev.objectives.e_pos, rel=1e-12)
    assert fwd.objectives.e_torque == pytest.approx(rev.objectives.e_torque, rel=1e-12)
    # per-target order follows input order
    assert [o.target for o in rev.per_target] == [o.target for o in fwd.per_target][::-1]


def test_empty_or_bad_inputs_rejected():
    with pytest.raises(ValueError):
        TargetSet("bad", ())
    with pytest.raises(ValueError):
        TargetSet("bad", ((0.0, float("nan"), 0.0),))
    p = make_params((0, 0, 0), "YPRP", [0.1] * 4)
    with pytest.raises(ValueError):
        evaluate(p, TargetSet("t", ((0.1, 0.1, 0.1),)), alpha=0.0)
