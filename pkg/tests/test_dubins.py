"""Dubins car models, body-frame matrix, and the control stack layers."""

import numpy as np
import pytest

from liemux import (
    BracketCommand,
    GainSet,
    Pose,
    SimConfig,
    body_matrix,
    cardinal_controller,
    desired_pose_rate,
    dubins1_dynamics,
    dubins1_fields,
    dubins2_dynamics,
    lie_bracket,
    lissajous_reference,
    mux_init,
    mux_output,
    pose_controller_1,
    pose_controller_2,
    simulate,
    velocity_loop,
)
from liemux.dubins import DubinsState1, DubinsState2


class TestFields:
    def test_drive_field_at_origin(self):
        f, _ = dubins1_fields()
        np.testing.assert_array_equal(f([0.0, 0.0, 0.0]), [1.0, 0.0, 0.0])

    def test_turn_field_is_constant(self):
        _, g = dubins1_fields()
        for x3 in (0.0, 1.0, -2.5):
            np.testing.assert_array_equal(g([5.0, -3.0, x3]), [0.0, 0.0, 1.0])

    def test_bracket_at_zero_heading(self):
        f, g = dubins1_fields()
        np.testing.assert_allclose(lie_bracket(f, g, [0.0, 0.0, 0.0]), [0.0, -1.0, 0.0], atol=1e-12)

    def test_bracket_is_unit_lateral_everywhere(self):
        f, g = dubins1_fields()
        for x3 in np.linspace(-np.pi, np.pi, 25):
            br = lie_bracket(f, g, [0.0, 0.0, x3])
            assert np.linalg.norm(br) == pytest.approx(1.0, abs=1e-12)
            assert br @ np.array([np.cos(x3), np.sin(x3), 0.0]) == pytest.approx(0.0, abs=1e-12)

    def test_analytic_jacobians_match_declared_structure(self):
        f, g = dubins1_fields()
        jf = f.jacobian(np.array([0.0, 0.0, 0.3]))
        expected = np.zeros((3, 3))
        expected[:, 2] = [-np.sin(0.3), np.cos(0.3), 0.0]
        np.testing.assert_allclose(jf, expected, atol=0)
        np.testing.assert_array_equal(g.jacobian(np.zeros(3)), np.zeros((3, 3)))


class TestBodyMatrix:
    def test_value_at_zero_heading(self):
        np.testing.assert_allclose(
            body_matrix(0.0), [[1, 0, 0], [0, 0, -1], [0, 1, 0]], atol=1e-15
        )

    @pytest.mark.parametrize("x3", [0.0, 1.0, np.pi / 2, 2.7])
    def test_orthonormal_columns(self, x3):
        a = body_matrix(x3)
        np.testing.assert_allclose(a @ a.T, np.eye(3), atol=1e-15)

    def test_determinant_is_one(self):
        for x3 in (0.0, 0.9, -2.0):
            assert np.linalg.det(body_matrix(x3)) == pytest.approx(1.0, abs=1e-12)

    def test_columns_are_drive_turn_lateral(self):
        f, g = dubins1_fields()
        x = np.array([0.0, 0.0, 0.8])
        a = body_matrix(0.8)
        np.testing.assert_allclose(a[:, 0], f(x), atol=1e-15)
        np.testing.assert_allclose(a[:, 1], g(x), atol=1e-15)
        np.testing.assert_allclose(a[:, 2], lie_bracket(f, g, x), atol=1e-12)


class TestCardinalController:
    def test_forward_at_zero_heading(self):
        cmd = cardinal_controller([0.0, 0.0, 0.0], [1.0, 0.0, 0.0])
        assert cmd.as_tuple() == pytest.approx((1.0, 0.0, 0.0))

    def test_east_at_quarter_turn_is_pure_lateral(self):
        cmd = cardinal_controller([0.0, 0.0, np.pi / 2], [1.0, 0.0, 0.0])
        assert cmd.as_tuple() == pytest.approx((0.0, 0.0, 1.0), abs=1e-15)

    def test_pure_rotation_any_heading(self):
        for x3 in (0.0, 1.3, -2.2):
            cmd = cardinal_controller([0.0, 0.0, x3], [0.0, 0.0, 1.0])
            assert cmd.as_tuple() == pytest.approx((0.0, 1.0, 0.0), abs=1e-15)

    def test_realizes_desired_rate_through_body_matrix(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            x3 = rng.uniform(-np.pi, np.pi)
            xdot_d = rng.uniform(-1, 1, 3)
            cmd = cardinal_controller([0.0, 0.0, x3], xdot_d)
            np.testing.assert_allclose(body_matrix(x3) @ cmd.as_tuple(), xdot_d, atol=1e-14)


class TestPoseController1:
    GAINS = GainSet(k_pose1=1.0)

    def test_zero_error_zero_feedforward_is_idle(self):
        cmd = pose_controller_1([0.2, -0.1, 0.5], Pose(0.2, -0.1, 0.5), np.zeros(3), self.GAINS)
        assert cmd.as_tuple() == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)

    def test_unit_position_error_drives_forward(self):
        cmd = pose_controller_1([0.0, 0.0, 0.0], Pose(1.0, 0.0, 0.0), np.zeros(3), self.GAINS)
        assert cmd.as_tuple() == pytest.approx((1.0, 0.0, 0.0), abs=1e-15)

    def test_heading_error_wraps_into_short_turn(self):
        cmd = pose_controller_1([0.0, 0.0, 0.0], Pose(0.0, 0.0, 3 * np.pi / 2), np.zeros(3), self.GAINS)
        assert cmd.a2 == pytest.approx(-np.pi / 2, abs=1e-12)
        assert cmd.a1 == pytest.approx(0.0, abs=1e-15)
        assert cmd.a3 == pytest.approx(0.0, abs=1e-15)

    def test_equilibrium_is_fixed_point_of_closed_loop(self):
        from liemux import mux_advance, mux_refresh

        target = Pose(0.3, -0.2, 0.7)
        x0 = target.as_array()
        delta, dt = 0.1, 0.01

        def controller(t, x, ctx):
            cmd = pose_controller_1(x, target, np.zeros(3), self.GAINS)
            ctx = mux_init(cmd, delta) if ctx is None else mux_refresh(ctx, cmd)
            return np.array(mux_output(ctx)), mux_advance(ctx, dt, cmd)

        traj = simulate(dubins1_dynamics, controller, x0, SimConfig(dt=dt, t_end=2.0))
        assert np.linalg.norm(traj.states[-1] - x0) < 1e-12


class TestSecondOrderModel:
    def test_rest_is_equilibrium(self):
        np.testing.assert_array_equal(dubins2_dynamics(np.zeros(5), np.zeros(2)), np.zeros(5))

    def test_coasting_forward(self):
        out = dubins2_dynamics(np.array([0.0, 0.0, 0.0, 2.0, 0.0]), np.zeros(2))
        np.testing.assert_allclose(out, [2.0, 0.0, 0.0, 0.0, 0.0], atol=1e-15)

    def test_general_point(self):
        out = dubins2_dynamics(np.array([0.0, 0.0, np.pi / 2, 1.0, 0.5]), np.array([1.0, -1.0]))
        np.testing.assert_allclose(out, [0.0, 1.0, 0.5, 1.0, -1.0], atol=1e-15)


class TestVelocityLoop:
    def test_matched_velocities_give_zero_input(self):
        x = np.array([0.0, 0.0, 0.0, 1.0, -0.5])
        np.testing.assert_allclose(velocity_loop(x, [1.0, -0.5], GainSet()), np.zeros(2), atol=0)

    def test_proportional_law(self):
        x = np.zeros(5)
        np.testing.assert_allclose(
            velocity_loop(x, [1.0, 0.0], GainSet(k_vel=10.0)), [10.0, 0.0], atol=0
        )

    def test_step_response_time_constant(self):
        # One time constant 1/k_vel after a set-point step, the velocities
        # reach 1 - 1/e of it.  dt must be tiny because the held input turns
        # the exact exponential into (1 - k dt)^n.
        gains = GainSet(k_vel=20.0)
        v_d = np.array([1.0, 0.5])

        def controller(t, x, ctx):
            return velocity_loop(x, v_d, gains), ctx

        traj = simulate(
            dubins2_dynamics, controller, np.zeros(5), SimConfig(dt=1e-5, t_end=0.05)
        )
        expected = v_d * (1.0 - np.exp(-1.0))
        np.testing.assert_allclose(traj.states[-1, 3:5], expected, atol=2e-4)


class TestPoseController2:
    def test_full_equilibrium_gives_zero_input(self):
        gains = GainSet()
        target = Pose(1.0, 2.0, 0.5)
        x = np.array([1.0, 2.0, 0.5, 0.0, 0.0])
        mux = mux_init(BracketCommand(0.0, 0.0, 0.0), delta=0.1)
        u, _ = pose_controller_2(x, target, np.zeros(3), gains, mux, dt=0.01)
        np.testing.assert_allclose(u, np.zeros(2), atol=1e-15)

    def test_pure_heading_error_commands_rotation_only(self):
        gains = GainSet(k_pose2=0.3)
        x = np.array([1.0, 2.0, 0.0, 0.0, 0.0])
        target = Pose(1.0, 2.0, 0.4)
        a = cardinal_controller(x, desired_pose_rate(x[:3], target, np.zeros(3), gains.k_pose2))
        assert a.a1 == pytest.approx(0.0, abs=1e-15)
        assert a.a3 == pytest.approx(0.0, abs=1e-15)
        assert a.a2 == pytest.approx(0.3 * 0.4)
        # No bracket demand, so the velocity set-point never oscillates.
        mux = mux_init(a, delta=0.1)
        from dataclasses import replace

        for leg in range(4):
            out = mux_output(replace(mux, leg=leg))
            assert out == pytest.approx((0.0, a.a2))

    def test_initial_lissajous_command(self):
        gains = GainSet(k_pose2=0.3)
        p, pdot = lissajous_reference(0.0)
        x = np.zeros(5)
        a = cardinal_controller(x, desired_pose_rate(x[:3], p, pdot, gains.k_pose2))
        assert a.as_tuple() == pytest.approx((0.05, 0.0, -0.1), abs=1e-15)


class TestLissajousReference:
    def test_start_point_and_rate(self):
        p, pdot = lissajous_reference(0.0)
        assert p.as_array() == pytest.approx((0.0, 0.0, 0.0))
        np.testing.assert_allclose(pdot, [0.05, 0.1, 0.0], atol=1e-15)

    def test_quarter_period_point(self):
        p, _ = lissajous_reference(50 * np.pi)
        np.testing.assert_allclose(p.as_array(), [5.0, 0.0, 0.0], atol=1e-12)

    def test_heading_always_east(self):
        for t in np.linspace(0.0, 800.0, 50):
            p, pdot = lissajous_reference(t)
            assert p.theta == 0.0
            assert pdot[2] == 0.0

    def test_rate_is_derivative(self):
        h = 1e-6
        for t in (10.0, 123.4, 500.0):
            p_plus, _ = lissajous_reference(t + h)
            p_minus, _ = lissajous_reference(t - h)
            fd = (p_plus.as_array() - p_minus.as_array()) / (2 * h)
            _, pdot = lissajous_reference(t)
            np.testing.assert_allclose(fd, pdot, atol=1e-8)


class TestRotationOnlyInvariant:
    def test_spin_command_causes_no_translation(self):
        from liemux import execute_scenario
        from liemux.scenarios import Scenario

        s = Scenario(
            name="pure-rotation",
            model="dubins1",
            controller="cardinal",
            sim=SimConfig(dt=0.01, t_end=10.0),
            delta=0.1,
            x0=(0.0, 0.0, 1.0),
            command=(0.0, 0.0, 0.5),
        )
        traj, summary = execute_scenario(s)
        assert summary["position_displacement_norm"] < 1e-9
        assert traj.states[-1, 2] == pytest.approx(1.0 + 0.5 * 10.0, abs=1e-9)


class TestCascadeConsistency:
    def test_second_order_approaches_first_order_as_cascade_tightens(self):
        # Same outer pose loop on both plants at matched cycle times;
        # tightening the inner gain and the cycle together shrinks the gap
        # between the position paths.
        from liemux import execute_scenario
        from liemux.scenarios import ReferenceSpec, Scenario

        target = (1.0, 0.5, 0.0)
        sim = SimConfig(dt=0.01, t_end=8.0)
        gaps = []
        for k_vel, delta in ((10.0, 0.2), (20.0, 0.1), (40.0, 0.05)):
            first = Scenario(
                name="first-order",
                model="dubins1",
                controller="pose1",
                sim=sim,
                delta=delta,
                x0=(0.0, 0.0, 0.0),
                reference=ReferenceSpec("constant", target),
                gains=GainSet(k_pose1=0.3),
            )
            traj1, _ = execute_scenario(first)
            second = Scenario(
                name="second-order",
                model="dubins2",
                controller="pose2",
                sim=sim,
                delta=delta,
                x0=(0.0, 0.0, 0.0, 0.0, 0.0),
                reference=ReferenceSpec("constant", target),
                gains=GainSet(k_vel=k_vel, k_pose2=0.3),
            )
            traj2, _ = execute_scenario(second)
            gaps.append(float(np.abs(traj2.states[:, :2] - traj1.states[:, :2]).max()))
        assert gaps[2] < gaps[1] < gaps[0]


class TestStateRecords:
    def test_round_trip_conversion(self):
        s1 = DubinsState1(1.0, -2.0, 0.5)
        np.testing.assert_array_equal(DubinsState1.from_array(s1.as_array()).as_array(), s1.as_array())
        s2 = DubinsState2(1.0, -2.0, 0.5, 0.1, -0.2)
        np.testing.assert_array_equal(DubinsState2.from_array(s2.as_array()).as_array(), s2.as_array())

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            DubinsState1(np.nan, 0.0, 0.0)
        with pytest.raises(ValueError):
            Pose(0.0, np.inf, 0.0)
        with pytest.raises(ValueError):
            GainSet(k_vel=-1.0)
