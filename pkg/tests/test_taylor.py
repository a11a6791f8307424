from __future__ import annotations

import numpy as np
import pytest

from crwedge import taylor as ty


def geometric_series(n=50):
    return ty.TaylorSeries(0.0, np.ones(n + 1))


class TestCoeffsFromOracle:
    def test_geometric(self):
        s = ty.coeffs_from_oracle(lambda z: 1 / (1 - z), 0.0, 0.5, 8, 256)
        assert np.max(np.abs(s.coeffs - 1.0)) < 1e-10

    def test_constant(self):
        s = ty.coeffs_from_oracle(lambda z: 2.5 - 1j + 0 * z, 0.0, 0.5, 6, 64)
        assert abs(s.coeffs[0] - (2.5 - 1j)) < 1e-12
        assert np.max(np.abs(s.coeffs[1:])) < 1e-12

    def test_simple_pole_closed_form(self):
        # 1/(2-z) = sum 2^{-nu-1} z^nu
        s = ty.coeffs_from_oracle(lambda z: 1 / (2 - z), 0.0, 1.0, 12, 256)
        want = 0.5 ** (np.arange(13) + 1)
        assert np.max(np.abs(s.coeffs - want)) < 1e-9

    def test_quadrature_count_guard(self):
        with pytest.raises(ValueError):
            ty.coeffs_from_oracle(lambda z: z, 0.0, 1.0, 32, 64)

    def test_failure_carries_point(self):
        def bad(z):
            if np.iscomplexobj(z) and np.ndim(z):
                raise RuntimeError("no vector eval")
            if abs(z - 0.5) < 0.2:
                raise RuntimeError("hole")
            return 1.0

        with pytest.raises(ty.ExtractionError) as err:
            ty.coeffs_from_oracle(bad, 0.0, 0.5, 4, 64)
        assert err.value.point is not None

    def test_nonfinite_rejected(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            with pytest.raises(ty.ExtractionError):
                ty.coeffs_from_oracle(lambda z: 1.0 / (z - 0.5), 0.0, 0.5, 4, 64)

    def test_noise_floor_truncation(self):
        s = ty.coeffs_from_oracle(lambda z: 1 / (2 - z), 0.0, 1.0, 100, 512,
                                  noise_floor=1e-13)
        # modes decay like 2^-nu on the unit circle: cut near 43
        assert 35 <= s.order <= 50


class TestEvaluate:
    def test_geometric_at_half(self):
        v, tail = ty.evaluate(geometric_series(), 0.5)
        assert abs(v - (2.0 - 0.5**50 / 0.5)) < 1e-12
        assert abs(v - 2.0) < 1e-12

    def test_center(self):
        s = ty.TaylorSeries(1 + 1j, np.array([3.0, 2.0, 1.0]))
        v, tail = ty.evaluate(s, 1 + 1j)
        assert v == 3.0 and tail == 0.0

    def test_pole_closed_form(self):
        s = ty.coeffs_from_oracle(lambda z: 1 / (2 - z), 0.0, 1.0, 40, 256)
        z = 1 + 0.5j
        v, tail = ty.evaluate(s, z)
        assert abs(v - 1 / (2 - z)) < 1e-8

    def test_tail_bound_is_upper_bound(self):
        s = ty.coeffs_from_oracle(lambda z: 1 / (2 - z), 0.0, 1.0, 30, 256)
        r = 0.8 * ty.radius_root_test(s)
        for phi in np.linspace(0, 2 * np.pi, 8, endpoint=False):
            z = r * np.exp(1j * phi)
            v, tail = ty.evaluate(s, z)
            assert abs(v - 1 / (2 - z)) <= tail + 1e-14

    def test_divergence_error(self):
        s = ty.coeffs_from_oracle(lambda z: 1 / (1 - z), 0.0, 0.7, 24, 128)
        with pytest.raises(ty.DivergenceError):
            ty.evaluate(s, 1.2)


class TestRecenter:
    def test_identity_shift(self):
        s = geometric_series(20)
        r = ty.recenter(s, 0.0)
        assert np.array_equal(r.coeffs, s.coeffs)

    def test_geometric_shift_closed_form(self):
        # 1/(1-z) around 1/2 has coefficients 2^{mu+1}; the truncated shift
        # matches to 1e-8 while the missing tail is below that level
        # (mu <= 8 for N=60; the error is O(1) by mu = N/2, see the ledger).
        s = geometric_series(60)
        r = ty.recenter(s, 0.5)
        mu = np.arange(61)
        want = 2.0 ** (mu + 1)
        rel = np.abs(r.coeffs - want) / want
        assert np.max(rel[:9]) < 1e-8
        assert np.max(rel[:13]) < 1e-5

    def test_round_trip(self):
        s = ty.coeffs_from_oracle(lambda z: 1 / (1 - z), 0.0, 0.7, 60, 512)
        back = ty.recenter(ty.recenter(s, 0.2), 0.0)
        assert np.max(np.abs(back.coeffs[:31] - s.coeffs[:31])) < 1e-7

    def test_out_of_radius(self):
        s = geometric_series(30)  # root-test radius 1
        with pytest.raises(ty.OutOfRadiusError):
            ty.recenter(s, 1.1)

    def test_polynomial_any_shift(self):
        # stored as a truncated series with a zero tail window
        s = ty.TaylorSeries(0.0, np.array([1.0, -2.0, 0.0, 3.0] + [0.0] * 36))
        r = ty.recenter(s, 5.0)
        z = 1.7
        direct = np.polyval(s.coeffs[::-1], z)
        shifted = np.polyval(r.coeffs[::-1], z - 5.0)
        assert abs(direct - shifted) < 1e-9

    def test_two_step_consistency(self):
        s = geometric_series(60)
        one = ty.recenter(s, 0.4)
        two = ty.recenter(ty.recenter(s, 0.15), 0.4)
        n = 30
        scale = np.abs(one.coeffs[:n]) + 1.0
        assert np.max(np.abs(one.coeffs[:n] - two.coeffs[:n]) / scale) < 1e-6


class TestPhiSequence:
    def test_power_field(self):
        # a_nu(z1) = z1^nu gives phi_nu = log|z1| for every nu
        grid = np.array([0.5, 0.25 + 0.25j, -0.8])
        series = [
            ty.TaylorSeries(0.0, z ** np.arange(11)) for z in grid
        ]
        seq = ty.phi_sequence(grid, series, (1, 10))
        for i in range(10):
            assert np.allclose(seq.values[i], np.log(np.abs(grid)), atol=1e-12)

    def test_no_z1_dependence(self):
        grid = np.array([0.1, 0.2])
        coeffs = 0.5 ** (np.arange(41) + 1)
        series = [ty.TaylorSeries(0.0, coeffs)] * 2
        seq = ty.phi_sequence(grid, series, (1, 40))
        # phi_nu = -(nu+1)/nu log 2 -> -log 2
        assert abs(seq.values[-1, 0] - (-np.log(2) * 41 / 40)) < 1e-12

    def test_zero_sentinel(self):
        grid = np.array([0.3])
        series = [ty.TaylorSeries(0.0, np.array([1.0, 0.0, 2.0]))]
        seq = ty.phi_sequence(grid, series, (1, 2))
        assert seq.values[0, 0] == ty.NEG_INF
        assert np.isfinite(seq.values[1, 0])

    def test_csv_export(self):
        grid = np.array([0.5])
        seq = ty.phi_sequence(grid, [geometric_series(8)], (1, 4))
        text = seq.to_csv()
        assert text.splitlines()[0] == "nu,z1_re,z1_im,phi"
        assert len(text.splitlines()) == 5


class TestRadiusRootTest:
    def test_geometric_rate(self):
        r = 1.7
        s = ty.TaylorSeries(0.0, r ** -np.arange(101.0))
        est = ty.radius_root_test(s, 0.25)
        assert abs(est - r) / r < 0.02

    def test_polynomial_flag(self):
        s = ty.TaylorSeries(0.0, np.array([1.0, 2.0] + [0.0] * 50))
        assert ty.radius_root_test(s) == float("inf")

    def test_known_radius(self):
        s = ty.TaylorSeries(0.0, 0.5 ** (np.arange(101.0) + 1))
        est = ty.radius_root_test(s, 0.25)
        assert abs(est - 2.0) / 2.0 < 0.02

    def test_window_guard(self):
        s = ty.TaylorSeries(0.0, np.ones(8))
        with pytest.raises(ValueError):
            ty.radius_root_test(s, 0.25)


def test_subharmonic_mean_value_surrogate():
    # phi_nu of coefficient fields of an oracle holomorphic in z1 satisfies
    # the discrete sub-mean-value inequality on circles
    def field(z1):
        return ty.coeffs_from_oracle(lambda z2: 1 / (3 - z1 - z2), 0.0, 0.8, 24, 128)

    z0 = 0.1 + 0.05j
    rho = 0.15
    circle = z0 + rho * np.exp(2j * np.pi * np.arange(16) / 16)
    s0 = field(z0)
    ring = [field(z) for z in circle]
    for nu in (5, 10, 20):
        phi0 = np.log(abs(s0.coeffs[nu])) / nu
        mean = np.mean([np.log(abs(s.coeffs[nu])) / nu for s in ring])
        assert phi0 <= mean + 1e-3


def test_series_json_roundtrip():
    s = ty.TaylorSeries(0.3 - 0.1j, np.array([1 + 2j, 0.5, -0.25j]), 1.5)
    doc = s.to_json()
    back = ty.TaylorSeries.from_json(doc)
    assert back.center == s.center
    assert np.array_equal(back.coeffs, s.coeffs)
    assert back.declared_radius == 1.5
