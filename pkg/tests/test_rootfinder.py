import math

import numpy as np
import pytest

import delaydesign as dd

# s - 1 + e^{-s}: double zero at the origin
Q_DOUBLE = dd.Quasipolynomial(1, 0, [-1.0], [1.0], 1.0)
# s^2 - 2s + 2 - 2 e^{-s}: triple zero at the origin
Q_TRIPLE = dd.Quasipolynomial(2, 0, [2.0, -2.0], [-2.0], 1.0)
UNIT_BOX = dd.ComplexRectangle(-1.0, 1.0, -1.0, 1.0)


def _poly_quasi(coeffs_desc):
    """Monic polynomial (descending coefficients) as a delay-free instance."""
    c = np.asarray(coeffs_desc, dtype=float)
    assert c[0] == 1.0
    n = c.size - 1
    return dd.Quasipolynomial(n, 0, tuple(c[::-1][:n]), (0.0,), 1.0)


class TestCounting:
    def test_double_root(self):
        assert dd.count_roots(Q_DOUBLE, UNIT_BOX) == 2

    def test_triple_root(self):
        assert dd.count_roots(Q_TRIPLE, UNIT_BOX) == 3

    def test_empty_window(self):
        assert dd.count_roots(Q_DOUBLE, dd.ComplexRectangle(2.0, 4.0, -1.0, 1.0)) == 0

    def test_wide_window_splits_into_strips(self):
        q = dd.Quasipolynomial(2, 0, [39.478, 0.0], [-33.813], 0.12)
        # width 1000 >> 20/tau: counted as a sum over vertical strips
        c = dd.count_roots(q, dd.ComplexRectangle(-500.0, 500.0, -2.0, 2.0))
        assert c == 3  # double near -2.859 plus a simple root near -24.5

    def test_winding_value_near_integer(self):
        raw = dd.winding_integral(Q_TRIPLE, UNIT_BOX)
        assert abs(raw - 3.0) < 1e-3

    def test_winding_refines_under_fixed_panels(self):
        coarse = dd.winding_integral(Q_TRIPLE, UNIT_BOX, panels=8)
        fine = dd.winding_integral(Q_TRIPLE, UNIT_BOX, panels=16)
        assert abs(fine - 3.0) <= abs(coarse - 3.0) + 1e-9
        assert abs(fine - 3.0) < 1e-6

    def test_input_validation(self):
        with pytest.raises(dd.InvalidInput):
            dd.count_roots("nope", UNIT_BOX)
        with pytest.raises(dd.InvalidInput):
            dd.count_roots(Q_DOUBLE, (0.0, 1.0, 0.0, 1.0))


class TestMultiplicityCertification:
    def test_double(self):
        rs = dd.find_roots(Q_DOUBLE, UNIT_BOX)
        assert len(rs.roots) == 1
        (r,) = rs.roots
        assert abs(r.location) < 1e-8
        assert r.multiplicity == 2
        assert rs.winding_count == 2

    def test_triple(self):
        rs = dd.find_roots(Q_TRIPLE, UNIT_BOX)
        assert len(rs.roots) == 1
        (r,) = rs.roots
        assert abs(r.location) < 1e-8
        assert r.multiplicity == 3
        assert rs.winding_count == 3

    def test_residuals_are_small(self):
        rs = dd.find_roots(Q_TRIPLE, UNIT_BOX)
        for r in rs.roots:
            assert r.residual <= 1e-8 * dd.scale(Q_TRIPLE, r.location)


class TestPolynomialAgreement:
    def test_fixed_cubic(self):
        q = _poly_quasi([1.0, -6.0, 11.0, -6.0])  # roots 1, 2, 3
        rs = dd.find_roots(q, dd.ComplexRectangle(0.5, 3.5, -1.0, 1.0))
        locs = sorted(r.location.real for r in rs.roots)
        np.testing.assert_allclose(locs, [1.0, 2.0, 3.0], atol=1e-8)
        assert all(r.multiplicity == 1 for r in rs.roots)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_random_quartics_match_companion_matrix(self, seed):
        rng = np.random.default_rng(seed)
        coeffs = np.concatenate([[1.0], rng.uniform(-2.0, 2.0, 4)])
        ref = np.roots(coeffs)
        if min(
            abs(a - b) for i, a in enumerate(ref) for b in ref[i + 1 :]
        ) < 1e-3:
            pytest.skip("clustered sample")
        q = _poly_quasi(coeffs)
        lim = float(np.abs(ref).max()) + 1.0
        rs = dd.find_roots(q, dd.ComplexRectangle(-lim, lim, -lim, lim))
        got = sorted(
            (r.location for r in rs.roots), key=lambda z: (z.real, z.imag)
        )
        want = sorted(map(complex, ref), key=lambda z: (z.real, z.imag))
        assert len(got) == len(want)
        for g, w in zip(got, want):
            assert abs(g - w) < 1e-8 * (1.0 + abs(w))


class TestDesignedSpectra:
    def test_two_placed_roots(self):
        r = dd.solve_generic_crrid(1, 0, 1.0, [-1.0, -2.0])
        rs = dd.find_roots(
            r.quasipolynomial, dd.ComplexRectangle(-2.5, 0.0, -1.0, 1.0)
        )
        locs = sorted(x.location.real for x in rs.roots)
        np.testing.assert_allclose(locs, [-2.0, -1.0], atol=1e-8)
        assert [x.multiplicity for x in rs.roots] == [1, 1]
        assert max(abs(x.location.imag) for x in rs.roots) < 1e-10

    def test_tight_pair_resolved_as_simple_roots(self):
        sep = 1e-6
        r = dd.solve_generic_crrid(1, 0, 1.0, [-1.0, -1.0 - sep])
        rs = dd.find_roots(
            r.quasipolynomial, dd.ComplexRectangle(-2.0, 0.0, -0.5, 0.5)
        )
        locs = sorted(x.location.real for x in rs.roots)
        assert [x.multiplicity for x in rs.roots] == [1, 1]
        np.testing.assert_allclose(locs, [-1.0 - sep, -1.0], atol=1e-9)

    def test_conjugate_symmetry(self, oscillator_q):
        rs = dd.find_roots(
            oscillator_q, dd.ComplexRectangle(-50.0, -40.0, -75.0, 75.0)
        )
        ups = sorted(
            (r.location for r in rs.roots if r.location.imag > 0),
            key=lambda z: z.imag,
        )
        downs = sorted(
            (r.location.conjugate() for r in rs.roots if r.location.imag < 0),
            key=lambda z: z.imag,
        )
        assert len(ups) == len(downs) > 0
        for u, v in zip(ups, downs):
            assert abs(u - v) <= 1e-7 * (1.0 + abs(u))

    def test_window_abscissa(self, oscillator_roots_small):
        rs = oscillator_roots_small
        assert rs.window_abscissa == max(r.location.real for r in rs.roots)

    def test_to_dict_layout(self, oscillator_roots_small):
        d = oscillator_roots_small.to_dict()
        assert set(d) == {"rectangle", "roots", "winding_count", "window_abscissa"}
        assert all(len(row) == 4 for row in d["roots"])


class TestBoundaryHandling:
    def test_count_raises_when_root_hugs_contour(self):
        with pytest.raises(dd.ContourTooClose):
            dd.count_roots(Q_DOUBLE, dd.ComplexRectangle(0.0, 1.0, -0.7, 1.0))

    def test_find_retries_with_shifted_window(self):
        # zero exactly on the left edge of a large window: the first attempt
        # cannot be certified, the shifted retry can, and the returned record
        # carries the window actually searched.
        rect = dd.ComplexRectangle(0.0, 60.0, -30.0, 30.0)
        rs = dd.find_roots(Q_DOUBLE, rect)
        assert rs.rectangle.x_min > 0.0
        assert rs.roots == ()

    def test_find_gives_up_after_retries(self):
        with pytest.raises(dd.RootOnBoundary):
            dd.find_roots(Q_DOUBLE, dd.ComplexRectangle(0.0, 1.0, -1.0, 1.0))


class TestDominance:
    def test_isolated_root_margin_infinite(self, oscillator_roots_small):
        rep = dd.certify_dominance(oscillator_roots_small, -2.8592099477959732)
        assert rep.dominant is True
        assert math.isinf(rep.margin)

    def test_margin_between_roots(self):
        r = dd.solve_generic_crrid(1, 0, 1.0, [-1.0, -2.0])
        rs = dd.find_roots(
            r.quasipolynomial, dd.ComplexRectangle(-2.5, 0.0, -1.0, 1.0)
        )
        rep = dd.certify_dominance(rs, -1.0)
        assert rep.dominant is True
        assert rep.margin == pytest.approx(1.0, abs=1e-8)

    def test_not_dominant_reports_negative_margin(self):
        r = dd.solve_generic_crrid(1, 0, 1.0, [-1.0, -2.0])
        rs = dd.find_roots(
            r.quasipolynomial, dd.ComplexRectangle(-2.5, 0.0, -1.0, 1.0)
        )
        rep = dd.certify_dominance(rs, -2.0)
        assert rep.dominant is False
        assert rep.margin == pytest.approx(-1.0, abs=1e-8)

    def test_missing_root_rejected(self, oscillator_roots_small):
        with pytest.raises(dd.AssignedRootMissing):
            dd.certify_dominance(oscillator_roots_small, -0.5)

    def test_report_to_dict(self, oscillator_roots_small):
        d = dd.certify_dominance(oscillator_roots_small, -2.8592099477959732).to_dict()
        assert d["dominant"] is True and math.isinf(d["margin"])


class TestSensitivity:
    RECT = dd.ComplexRectangle(-3.86, -1.86, -1.0, 1.0)

    def test_delay_free_spectrum_is_delay_independent(self):
        # b == 0: roots of s^2 + 3s + 2 do not move with tau
        q = dd.Quasipolynomial(2, 0, [2.0, 3.0], [0.0], 1.0)
        sweep = dd.sensitivity_sweep(
            q, 0.05, 2, dd.ComplexRectangle(-3.0, 0.0, -1.0, 1.0)
        )
        assert sorted(sweep.per_k) == [-2, -1, 0, 1, 2]
        base = sorted(r.location.real for r in sweep.per_k[0].roots)
        np.testing.assert_allclose(base, [-2.0, -1.0], atol=1e-10)
        for k in (-2, -1, 1, 2):
            locs = sorted(r.location.real for r in sweep.per_k[k].roots)
            np.testing.assert_allclose(locs, base, atol=1e-9)

    def test_nominal_entry_reused(self, oscillator_q):
        sweep = dd.sensitivity_sweep(oscillator_q, 1e-3, 1, self.RECT)
        nominal = dd.find_roots(oscillator_q, self.RECT)
        assert sweep.per_k[0].to_dict() == nominal.to_dict()

    def test_double_root_splits(self, oscillator_q):
        sweep = dd.sensitivity_sweep(oscillator_q, 1e-3, 1, self.RECT)
        assert [r.multiplicity for r in sweep.per_k[0].roots] == [2]
        longer = sweep.per_k[1].roots
        shorter = sweep.per_k[-1].roots
        # longer delay: the pair splits along the real axis
        assert len(longer) == 2
        assert all(r.multiplicity == 1 and abs(r.location.imag) < 1e-9 for r in longer)
        # shorter delay: it leaves the axis as a conjugate pair
        assert len(shorter) == 2
        assert all(r.multiplicity == 1 for r in shorter)
        assert sorted(r.location.imag for r in shorter)[1] > 0.01

    def test_simple_root_moves_linearly(self, oscillator_q):
        rect = dd.ComplexRectangle(-36.0, -14.0, -1.0, 1.0)
        base = dd.find_roots(oscillator_q, rect).roots[0].location
        disp = {}
        for eps in (1e-2, 1e-3, 1e-4):
            sweep = dd.sensitivity_sweep(oscillator_q, eps, 1, rect)
            moved = sweep.per_k[1].roots[0].location
            disp[eps] = abs(moved - base)
        assert disp[1e-2] / disp[1e-3] == pytest.approx(10.0, rel=0.15)
        assert disp[1e-3] / disp[1e-4] == pytest.approx(10.0, rel=0.15)

    def test_rejects_nonpositive_perturbed_delay(self, oscillator_q):
        with pytest.raises(dd.InvalidPerturbation):
            dd.sensitivity_sweep(oscillator_q, 0.05, 3, self.RECT)  # 0.12 - 0.15 < 0

    def test_parameter_validation(self, oscillator_q):
        with pytest.raises(dd.InvalidInput):
            dd.sensitivity_sweep(oscillator_q, -1e-3, 1, self.RECT)
        with pytest.raises(dd.InvalidInput):
            dd.sensitivity_sweep(oscillator_q, 1e-3, 0, self.RECT)
        with pytest.raises(dd.InvalidInput):
            dd.sensitivity_sweep(oscillator_q, 1e-3, 1.5, self.RECT)

    def test_to_dict_keys_are_sorted_strings(self, oscillator_q):
        d = dd.sensitivity_sweep(oscillator_q, 1e-3, 1, self.RECT).to_dict()
        assert list(d["per_k"]) == ["-1", "0", "1"]
        assert d["epsilon"] == 1e-3 and d["K"] == 1


def test_workers_do_not_change_results(oscillator_q):
    rect = dd.ComplexRectangle(-80.0, 1.0, -80.0, 80.0)
    serial = dd.find_roots(oscillator_q, rect)
    threaded = dd.find_roots(oscillator_q, rect, workers=4)
    assert serial.to_dict() == threaded.to_dict()
