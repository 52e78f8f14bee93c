"""Classical-path closed forms against independent numerical oracles."""
import numpy as np
import pytest
from scipy.integrate import quad, solve_ivp

from qdice import (
    CausticError,
    DeltaXMode,
    ModelConfig,
    OscillatorKind,
    TrajectorySpec,
    case_from_label,
    delta_q_time_derivative,
    delta_q_trajectory,
    free_trajectory,
    free_trajectory_derivative,
    source_convolution,
)
from qdice.trajectories import delta_x_history, mode_functions

HARM, INV = OscillatorKind.HARMONIC, OscillatorKind.INVERTED
KINDS = (HARM, INV)


def _sfun(kind):
    return np.sin if kind is HARM else np.sinh


class TestFreeTrajectory:
    @pytest.mark.parametrize("kind", KINDS)
    def test_boundary_exactness(self, kind, rng):
        for _ in range(20):
            freq, t = rng.uniform(0.2, 2.0), rng.uniform(0.3, 2.5)
            x0, xf = rng.normal(size=2)
            assert free_trajectory(kind, freq, t, x0, xf, 0.0) == pytest.approx(x0, abs=1e-14)
            assert free_trajectory(kind, freq, t, x0, xf, t) == pytest.approx(xf, abs=1e-14)

    def test_quarter_period_value(self):
        # harmonic, w t = pi/2, x0=1, xf=0, s=t/2 -> sin(pi/4)
        t = np.pi / 2
        val = free_trajectory(HARM, 1.0, t, 1.0, 0.0, t / 2)
        assert val == pytest.approx(np.sin(np.pi / 4), rel=1e-14)

    def test_caustic_rejected(self):
        with pytest.raises(CausticError):
            free_trajectory(HARM, 1.0, np.pi, 1.0, 0.0, 1.0)

    def test_inverted_has_no_caustic_at_pi(self):
        free_trajectory(INV, 1.0, np.pi, 1.0, 0.0, 1.0)

    def test_zero_endpoints_zero_solution(self):
        assert free_trajectory(INV, 1.3, 2.0, 0.0, 0.0, 0.7) == 0.0

    def test_satisfies_equation_of_motion(self, rng):
        # x'' = -+ w^2 x by centered finite differences
        for kind, sign in ((HARM, -1.0), (INV, +1.0)):
            freq, t, x0, xf = 0.9, 2.0, 0.7, -0.4
            s = rng.uniform(0.1, 1.9, size=12)
            h = 1e-4
            xp = free_trajectory(kind, freq, t, x0, xf, s + h)
            x = free_trajectory(kind, freq, t, x0, xf, s)
            xm = free_trajectory(kind, freq, t, x0, xf, s - h)
            acc = (xp - 2 * x + xm) / h**2
            np.testing.assert_allclose(acc, sign * freq**2 * x, rtol=1e-5, atol=1e-7)

    def test_small_frequency_limit_matches_linear_interpolation(self):
        # both kinds approach (x0 (t-s) + xf s)/t as freq*t -> 0
        t, x0, xf = 1.0, 0.3, -0.8
        freq = 1e-4
        s = np.linspace(0.0, t, 11)
        lin = x0 * (t - s) / t + xf * s / t
        for kind in KINDS:
            vals = free_trajectory(kind, freq, t, x0, xf, s)
            np.testing.assert_allclose(vals, lin, atol=1e-6)

    def test_mode_functions_normalization(self):
        u0, uf = mode_functions(INV, 1.1, 2.0, np.array([0.0, 2.0]))
        np.testing.assert_allclose(u0, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(uf, [0.0, 1.0], atol=1e-15)


class TestFreeTrajectoryDerivative:
    def test_zero_solution(self):
        assert free_trajectory_derivative(INV, 1.3, 2.0, 0.0, 0.0, 1.1) == 0.0

    def test_boundary_slope_quarter_period(self):
        # harmonic, w t = pi/2, x0=1, xf=0, s=0 -> -w cos(w t)/sin(w t) = 0
        val = free_trajectory_derivative(HARM, 1.0, np.pi / 2, 1.0, 0.0, 0.0)
        assert val == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("kind", KINDS)
    def test_matches_finite_differences(self, kind, rng):
        freq, t, x0, xf = 1.4, 1.7, 0.5, 1.2
        h = 1e-5
        for s in rng.uniform(2 * h, t - 2 * h, size=10):
            fd = (
                free_trajectory(kind, freq, t, x0, xf, s + h)
                - free_trajectory(kind, freq, t, x0, xf, s - h)
            ) / (2 * h)
            an = free_trajectory_derivative(kind, freq, t, x0, xf, s)
            assert an == pytest.approx(fd, rel=1e-8, abs=1e-10)


class TestSourceConvolution:
    def test_zero_source(self):
        conv_s, conv_t = source_convolution(INV, 1.3, HARM, 1.0, 2.0, 0.0, 0.0, 1.0)
        assert conv_s == 0.0 and conv_t == 0.0

    def test_linearity(self):
        args = (INV, 1.3, HARM, 1.0, 2.0)
        one = source_convolution(*args, 0.4, -0.7, 1.2)
        two = source_convolution(*args, 0.8, -1.4, 1.2)
        assert two[0] == pytest.approx(2 * one[0], rel=1e-13)
        assert two[1] == pytest.approx(2 * one[1], rel=1e-13)

    def test_against_adaptive_quadrature(self, rng):
        # closed form vs scipy.integrate.quad on random draws, all 4 kind pairs
        for _ in range(40):
            kind_a, kind_b = rng.choice(KINDS, 2)
            om, ob = rng.uniform(0.3, 2.0, 2)
            t = rng.uniform(0.5, 2.5)
            if kind_a is HARM:
                t = min(t, 0.9 * np.pi / om)  # stay clear of the caustic
            s = rng.uniform(0.1, 1.0) * t
            dx0, dxf = rng.normal(size=2)
            sa, sb = _sfun(kind_a), _sfun(kind_b)

            def dx(u):
                return (dx0 * sa(om * (t - u)) + dxf * sa(om * u)) / sa(om * t)

            ref_s = quad(lambda u: dx(u) * sb(ob * (s - u)), 0, s, epsabs=1e-13, epsrel=1e-13)[0]
            ref_t = quad(lambda u: dx(u) * sb(ob * (t - u)), 0, t, epsabs=1e-13, epsrel=1e-13)[0]
            conv_s, conv_t = source_convolution(kind_b, ob, kind_a, om, t, dx0, dxf, s)
            assert conv_s == pytest.approx(ref_s, rel=1e-10, abs=1e-12)
            assert conv_t == pytest.approx(ref_t, rel=1e-10, abs=1e-12)

    def test_resonant_frequencies_exact(self):
        # omega == omega_b in the same-kind product: stable closed form,
        # continuous against a detuned neighbour
        at = source_convolution(HARM, 1.0, HARM, 1.0, 2.0, 1.0, 0.5, 1.3)
        near = source_convolution(HARM, 1.0 + 1e-9, HARM, 1.0, 2.0, 1.0, 0.5, 1.3)
        assert at[0] == pytest.approx(near[0], rel=1e-7)
        ref = quad(
            lambda u: (np.sin(2.0 - u) + 0.5 * np.sin(u)) / np.sin(2.0) * np.sin(1.3 - u),
            0,
            1.3,
            epsabs=1e-14,
        )[0]
        assert at[0] == pytest.approx(ref, rel=1e-12)


def _shooting_reference(cfg, traj, t, s_eval):
    """Forced boundary-value problem via two IVPs (independent oracle)."""
    kind_a, kind_b = cfg.case.a_kind, cfg.case.b_kind
    om, ob, lam, mb = cfg.omega, cfg.omega_b, cfg.lam, cfg.m_b
    sign = 1.0 if kind_b is INV else -1.0

    def dx(u):
        return delta_x_history(kind_a, om, traj, t, u)

    def rhs(u, y):
        return [y[1], sign * ob**2 * y[0] + lam / mb * dx(u)]

    sol_p = solve_ivp(rhs, (0, t), [traj.dq0, 0.0], rtol=1e-12, atol=1e-14, dense_output=True)

    def rhs_h(u, y):
        return [y[1], sign * ob**2 * y[0]]

    sol_h = solve_ivp(rhs_h, (0, t), [0.0, 1.0], rtol=1e-12, atol=1e-14, dense_output=True)
    alpha = (traj.dqf - sol_p.sol(t)[0]) / sol_h.sol(t)[0]
    return sol_p.sol(s_eval)[0] + alpha * sol_h.sol(s_eval)[0]


class TestDeltaQTrajectory:
    def test_unforced_zero_endpoints_vanish(self):
        cfg = ModelConfig(case=case_from_label("a"), lam=0.0)
        traj = TrajectorySpec(dx0=1.0, dxf=1.0)
        for s in (0.0, 0.5, 1.7, 2.0):
            dq, dq_ds = delta_q_trajectory(cfg, traj, 2.0, s)
            assert dq == 0.0 and dq_ds == 0.0

    def test_initial_difference_endpoint(self):
        cfg = ModelConfig(case=case_from_label("a"))
        traj = TrajectorySpec(dx0=1.0, dxf=1.0, dq0=0.3)
        dq, _ = delta_q_trajectory(cfg, traj, 2.0, 0.0)
        assert dq == pytest.approx(0.3, abs=1e-14)

    def test_final_difference_endpoint(self):
        cfg = ModelConfig(case=case_from_label("c"), omega_b=0.8)
        traj = TrajectorySpec(dx0=1.0, dxf=0.4, dqf=-0.2, delta_x_mode=DeltaXMode.PINNED)
        dq, _ = delta_q_trajectory(cfg, traj, 2.0, 2.0)
        assert dq == pytest.approx(-0.2, abs=1e-14)

    @pytest.mark.parametrize("label", "abcd")
    def test_against_shooting_oracle(self, label, rng):
        for mode in (DeltaXMode.PINNED, DeltaXMode.BALLISTIC):
            cfg = ModelConfig(case=case_from_label(label), omega=1.0, omega_b=1.3, lam=0.1)
            traj = TrajectorySpec(
                dx0=1.0, dxf=1.0, dq0=rng.normal() * 0.2, dqf=rng.normal() * 0.2,
                delta_x_mode=mode,
            )
            t = 2.0
            s = np.sort(rng.uniform(0.0, t, size=5))
            ref = _shooting_reference(cfg, traj, t, s)
            got = delta_q_trajectory(cfg, traj, t, s)[0]
            np.testing.assert_allclose(got, ref, rtol=1e-8, atol=1e-9)

    def test_case_a_spec_point(self):
        # case (a), omega = omega_b = 1, lam = 0.1, pinned dx0 = dxf = 1
        cfg = ModelConfig(case=case_from_label("a"), omega=1.0, omega_b=1.0, lam=0.1)
        traj = TrajectorySpec(dx0=1.0, dxf=1.0, delta_x_mode=DeltaXMode.PINNED)
        ref = _shooting_reference(cfg, traj, 2.0, np.asarray([1.0]))[0]
        got = delta_q_trajectory(cfg, traj, 2.0, 1.0)[0]
        assert got == pytest.approx(ref, abs=1e-8)

    @pytest.mark.parametrize("label", "abcd")
    def test_equation_of_motion_residual(self, label):
        cfg = ModelConfig(case=case_from_label(label), omega=0.9, omega_b=1.2, lam=0.3)
        traj = TrajectorySpec(dx0=1.3, dxf=0.6, dq0=0.1, dqf=-0.3, delta_x_mode=DeltaXMode.PINNED)
        t, h = 2.0, 5e-4
        s = np.linspace(0.05, t - 0.05, 25)
        q = delta_q_trajectory(cfg, traj, t, s)[0]
        qp = delta_q_trajectory(cfg, traj, t, s + h)[0]
        qm = delta_q_trajectory(cfg, traj, t, s - h)[0]
        acc = (qp - 2 * q + qm) / h**2
        sign = 1.0 if cfg.case.b_kind is INV else -1.0
        forcing = cfg.lam / cfg.m_b * delta_x_history(cfg.case.a_kind, cfg.omega, traj, t, s)
        residual = acc - sign * cfg.omega_b**2 * q - forcing
        assert np.max(np.abs(residual)) < 1e-6

    def test_joint_linearity(self):
        cfg = ModelConfig(case=case_from_label("b"), omega=1.1, omega_b=0.7)
        base = dict(delta_x_mode=DeltaXMode.PINNED)
        t1 = TrajectorySpec(dx0=0.5, dxf=-0.2, dq0=0.1, dqf=0.3, **base)
        t2 = TrajectorySpec(dx0=-1.0, dxf=0.8, dq0=-0.4, dqf=0.2, **base)
        t12 = TrajectorySpec(
            dx0=t1.dx0 + t2.dx0, dxf=t1.dxf + t2.dxf,
            dq0=t1.dq0 + t2.dq0, dqf=t1.dqf + t2.dqf, **base,
        )
        s = np.linspace(0.0, 2.0, 9)
        q1 = delta_q_trajectory(cfg, t1, 2.0, s)[0]
        q2 = delta_q_trajectory(cfg, t2, 2.0, s)[0]
        q12 = delta_q_trajectory(cfg, t12, 2.0, s)[0]
        np.testing.assert_allclose(q12, q1 + q2, rtol=1e-12, atol=1e-13)

    def test_derivative_matches_finite_differences(self, rng):
        cfg = ModelConfig(case=case_from_label("d"), omega=1.0, omega_b=0.6, lam=0.2)
        traj = TrajectorySpec(dx0=2.0, dxf=2.0)
        t, h = 2.4, 1e-6
        for s in rng.uniform(0.1, t - 0.1, size=6):
            fd = (
                delta_q_trajectory(cfg, traj, t, s + h)[0]
                - delta_q_trajectory(cfg, traj, t, s - h)[0]
            ) / (2 * h)
            assert delta_q_trajectory(cfg, traj, t, s)[1] == pytest.approx(fd, rel=1e-7, abs=1e-9)


class TestDeltaQTimeDerivative:
    @pytest.mark.parametrize("label", "abcd")
    @pytest.mark.parametrize(
        "mode", (DeltaXMode.BALLISTIC, DeltaXMode.PINNED, DeltaXMode.CONSTANT)
    )
    def test_matches_finite_differences(self, label, mode):
        cfg = ModelConfig(case=case_from_label(label), omega=1.0, omega_b=0.45, lam=0.15)
        traj = TrajectorySpec(dx0=1.7, dxf=0.9, dq0=0.12, dqf=-0.2, delta_x_mode=mode)
        t, s, h = 2.1, 0.8, 1e-6
        fd = (
            delta_q_trajectory(cfg, traj, t + h, s)[0]
            - delta_q_trajectory(cfg, traj, t - h, s)[0]
        ) / (2 * h)
        an = delta_q_time_derivative(cfg, traj, t, s)
        assert an == pytest.approx(fd, rel=1e-5, abs=1e-9)


class TestDeltaXHistory:
    def test_ballistic_growth_tracks_kind(self):
        traj = TrajectorySpec(dx0=2.0)
        s = np.linspace(0, 3, 7)
        np.testing.assert_allclose(
            delta_x_history(INV, 1.0, traj, 3.0, s), 2.0 * np.cosh(s), rtol=1e-15
        )
        np.testing.assert_allclose(
            delta_x_history(HARM, 1.0, traj, 3.0, s), 2.0 * np.cos(s), rtol=1e-15, atol=1e-15
        )

    def test_constant_mode(self):
        traj = TrajectorySpec(dx0=1.4, delta_x_mode=DeltaXMode.CONSTANT)
        assert delta_x_history(INV, 1.0, traj, 3.0, 2.0) == 1.4

    def test_pinned_hits_both_endpoints(self):
        traj = TrajectorySpec(dx0=0.7, dxf=-0.3, delta_x_mode=DeltaXMode.PINNED)
        assert delta_x_history(HARM, 1.0, traj, 2.0, 0.0) == pytest.approx(0.7, abs=1e-14)
        assert delta_x_history(HARM, 1.0, traj, 2.0, 2.0) == pytest.approx(-0.3, abs=1e-14)

    def test_pinned_caustic_guarded(self):
        traj = TrajectorySpec(dx0=1.0, dxf=1.0, delta_x_mode=DeltaXMode.PINNED)
        with pytest.raises(CausticError):
            delta_x_history(HARM, 1.0, traj, np.pi, 1.0)
