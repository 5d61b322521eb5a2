import math

import numpy as np
import pytest

import delaydesign as dd
from delaydesign.simulate import (
    Constant,
    Exponential,
    Polynomial,
    Trigonometric,
    eval_initial,
    initial_from_dict,
    initial_to_dict,
)

Q_ODE = dd.Quasipolynomial(1, 0, [1.0], [0.0], 1.0)  # y' = -y


class TestInitialConditions:
    def test_constant(self):
        assert eval_initial(Constant(1.0), -0.05, 0) == 1.0
        assert eval_initial(Constant(3.5), -0.4, 1) == 0.0
        assert eval_initial(Constant(3.5), 0.0, 7) == 0.0

    def test_trigonometric_derivative(self):
        # d/dt A sin(wt + phi) = A w cos(wt + phi)
        assert eval_initial(Trigonometric(1.0, 2.0, 0.0), 0.0, 1) == pytest.approx(2.0)

    def test_polynomial_second_derivative(self):
        assert eval_initial(Polynomial((1.0, 2.0, 3.0)), -1.0, 2) == pytest.approx(6.0)

    def test_polynomial_value_and_high_order(self):
        p = Polynomial((1.0, 2.0, 3.0))
        assert eval_initial(p, -1.0, 0) == pytest.approx(1.0 - 2.0 + 3.0)
        assert eval_initial(p, -0.5, 3) == 0.0

    def test_exponential(self):
        ic = Exponential(2.0, -1.5)
        for k in range(4):
            want = 2.0 * (-1.5) ** k * math.exp(-1.5 * -0.3)
            assert eval_initial(ic, -0.3, k) == pytest.approx(want, rel=1e-14)

    def test_vectorized_time(self):
        t = np.array([-0.2, -0.1, 0.0])
        out = eval_initial(Trigonometric(1.0, 3.0, 0.1), t, 0)
        np.testing.assert_allclose(out, np.sin(3.0 * t + 0.1))

    def test_validation(self):
        with pytest.raises(dd.InvalidInput):
            Constant(math.nan)
        with pytest.raises(dd.InvalidInput):
            Polynomial(())
        with pytest.raises(dd.InvalidInput):
            Exponential(1.0, math.inf)

    @pytest.mark.parametrize(
        "ic",
        [
            Constant(2.0),
            Polynomial((1.0, -2.0, 0.5)),
            Exponential(1.0, -1.0),
            Trigonometric(1.0, 2.0 * math.pi, 0.5),
        ],
    )
    def test_dict_round_trip(self, ic):
        assert initial_from_dict(initial_to_dict(ic)) == ic

    def test_from_dict_shape_errors(self):
        with pytest.raises(dd.InvalidInput):
            initial_from_dict({})
        with pytest.raises(dd.InvalidInput):
            initial_from_dict({"constant": 1.0, "exponential": {}})
        with pytest.raises(dd.InvalidInput):
            initial_from_dict({"mystery": 1.0})


class TestEulerIntegration:
    def test_pure_ode_matches_exponential(self):
        traj = dd.simulate(Q_ODE, Constant(1.0), 1.0, 1000)
        i = int(np.argmin(np.abs(traj.t - 1.0)))
        assert traj.y[i] == pytest.approx(math.exp(-1.0), abs=1e-3)

    def test_first_order_convergence(self):
        errs = []
        for steps in (250, 500, 1000):
            traj = dd.simulate(Q_ODE, Constant(1.0), 2.0, steps)
            mask = traj.t >= 0.0
            errs.append(np.abs(traj.y[mask] - np.exp(-traj.t[mask])).max())
        assert errs[0] / errs[1] == pytest.approx(2.0, abs=0.2)
        assert errs[1] / errs[2] == pytest.approx(2.0, abs=0.2)

    def test_undamped_oscillator_bounded_drift(self):
        q = dd.Quasipolynomial(2, 0, [(2.0 * math.pi) ** 2, 0.0], [0.0], 1.0)
        ic = Trigonometric(1.0, 2.0 * math.pi, math.pi / 2.0)  # cos(2 pi t)
        traj = dd.simulate(q, ic, 1.0, 4000)
        i = int(np.argmin(np.abs(traj.t - 1.0)))
        assert traj.y[i] == pytest.approx(math.cos(2.0 * math.pi), abs=2e-2)

    def test_designed_feedback_decays(self, oscillator_q):
        traj = dd.simulate(oscillator_q, Constant(1.0), 5.0, 1000)
        y0 = traj.y[int(np.argmin(np.abs(traj.t)))]
        y5 = traj.y[-1]
        assert abs(y5) < abs(y0)
        # envelope decays: compare windowed maxima over successive seconds
        peaks = [
            np.abs(traj.y[(traj.t >= lo) & (traj.t < lo + 1.0)]).max()
            for lo in (0.0, 1.0, 2.0, 3.0, 4.0)
        ]
        assert all(a > b for a, b in zip(peaks, peaks[1:]))

    def test_decay_rate_matches_dominant_root(self, oscillator_q):
        traj = dd.simulate(oscillator_q, Constant(1.0), 5.0, 1000)
        mask = (traj.t >= 2.0) & (traj.t <= 5.0) & (np.abs(traj.y) > 0.0)
        rate = np.polyfit(traj.t[mask], np.log(np.abs(traj.y[mask])), 1)[0]
        assert rate == pytest.approx(-2.8592099477959732, rel=0.25)

    def test_initial_segment_exact(self):
        ic = Trigonometric(1.0, 2.0, 0.3)
        q = dd.Quasipolynomial(2, 0, [4.0, 0.2], [1.0], 0.7)
        traj = dd.simulate(q, ic, 1.0, 200)
        mask = traj.t <= 0.0
        np.testing.assert_array_equal(
            traj.y[mask], eval_initial(ic, traj.t[mask], 0)
        )

    def test_zero_dynamics_constant(self):
        q = dd.Quasipolynomial(1, 0, [0.0], [0.0], 1.0)
        traj = dd.simulate(q, Constant(2.5), 3.0, 100)
        np.testing.assert_array_equal(traj.y, np.full_like(traj.t, 2.5))

    def test_neutral_case_tracks_analytic_solution(self):
        # y' + a0 y + b1 y'(t-1) + b0 y(t-1) = 0 with y = e^{-t}:
        # a0 = 1 - (b0 - b1) e ... choose b1=0.3, b0=0.5, a0 = 1 - 0.2 e
        b1, b0 = 0.3, 0.5
        a0 = 1.0 - (b0 - b1) * math.e
        q = dd.Quasipolynomial(1, 1, [a0], [b0, b1], 1.0)
        assert q.kind == "neutral"
        errs = []
        for steps in (400, 800):
            traj = dd.simulate(q, Exponential(1.0, -1.0), 2.0, steps)
            mask = traj.t >= 0.0
            errs.append(np.abs(traj.y[mask] - np.exp(-traj.t[mask])).max())
        assert errs[0] / errs[1] == pytest.approx(2.0, abs=0.2)

    def test_delay_only_recurrence(self):
        # n = 0: 1 + b0 e^{-s tau} acts as y(t) = -b0 y(t - tau)
        q = dd.Quasipolynomial(0, 0, [], [0.5], 1.0)
        traj = dd.simulate(q, Constant(1.0), 3.0, 50)
        # piecewise constant: y = (-0.5)^(k+1) on (k, k+1]
        for tt, want in ((0.0, 1.0), (0.9, -0.5), (1.2, 0.25), (2.9, -0.125)):
            i = int(np.argmin(np.abs(traj.t - tt)))
            assert traj.y[i] == pytest.approx(want)

    def test_blow_up_reports_time(self):
        q = dd.Quasipolynomial(1, 0, [-3.0], [0.0], 1.0)  # y' = 3y
        with pytest.raises(dd.BlowUp) as info:
            dd.simulate(q, Constant(1.0), 500.0, 100)
        assert info.value.time is not None
        assert 0.0 < info.value.time < 500.0

    def test_grid_contract(self):
        traj = dd.simulate(Q_ODE, Constant(1.0), 1.0, 50)
        assert traj.t[0] == -1.0
        assert traj.h == pytest.approx(1.0 / 50.0)
        assert traj.t[-1] >= 1.0 - traj.h
        assert traj.t.shape == traj.y.shape
        steps = np.diff(traj.t)
        np.testing.assert_allclose(steps, traj.h, rtol=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(dd.InvalidInput):
            dd.simulate(Q_ODE, Constant(1.0), -1.0, 100)
        with pytest.raises(dd.InvalidInput):
            dd.simulate(Q_ODE, Constant(1.0), 1.0, 9)
        with pytest.raises(dd.InvalidInput):
            dd.simulate(Q_ODE, Constant(1.0), 1.0, 100.5)


class TestTrajectoryTransport:
    def test_to_dict(self):
        traj = dd.simulate(Q_ODE, Constant(1.0), 1.0, 20)
        d = traj.to_dict()
        assert set(d) == {"t", "y", "h"}
        assert len(d["t"]) == len(d["y"]) == traj.t.size

    def test_decimation_cap(self):
        traj = dd.simulate(Q_ODE, Constant(1.0), 200.0, 1000)
        assert traj.t.size > 100_000
        slim = traj.decimated(100_000)
        assert slim.t.size <= 100_000
        assert slim.h == traj.h
        assert slim.t[0] == traj.t[0]
        assert slim.t[-1] == traj.t[-1]  # last sample always kept
        # decimated samples are a subset of the computed ones
        assert np.isin(slim.t, traj.t).all()

    def test_decimation_noop_when_short(self):
        traj = dd.simulate(Q_ODE, Constant(1.0), 1.0, 20)
        slim = traj.decimated(100_000)
        np.testing.assert_array_equal(slim.t, traj.t)
        np.testing.assert_array_equal(slim.y, traj.y)
