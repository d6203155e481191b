import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twpasim.circuit import ModeSet, ResonatorParams, current_to_amplitude, default_line
from twpasim.cme import (
    ModeAmplitudes,
    analytic_evolution,
    classical_couplings,
    cme_rhs,
    gain_analytic,
    gain_sweep,
    integrate_cme,
    pump_solution,
    signal_gain_at,
    to_lab_frame,
)
from twpasim.errors import DivergenceError, ValidityWarning
from twpasim.ode import rk4

from conftest import OMEGA_P, OMEGA_S

GHZ = 2 * math.pi * 1e9


@pytest.fixture(scope="module")
def setup(line):
    modes = ModeSet.build(OMEGA_P, OMEGA_S, line)
    cc = classical_couplings(line, modes)
    A_p0 = current_to_amplitude(0.5 * line.I_c, OMEGA_P, modes.p.z_c)
    A_s0 = current_to_amplitude(1e-6 * line.I_c, OMEGA_S, modes.s.z_c)
    return modes, cc, A_p0, A_s0


class TestCouplings:
    def test_oracle_values(self, setup, oracle):
        _, cc, _, _ = setup
        for name in ("Xi_p", "Xi_s", "Xi_i", "X_p", "X_s", "X_i"):
            assert math.isclose(getattr(cc, name), oracle["cl_" + name], rel_tol=1e-12), name
        assert math.isclose(cc.delta_k, oracle["cl_delta_k"], rel_tol=1e-9)

    def test_ratios(self, setup):
        modes, cc, _, _ = setup
        k = {n: modes[n].k.real for n in "psi"}
        w = {n: modes[n].omega for n in "psi"}
        # common prefactor cancels in ratios
        assert math.isclose(cc.Xi_s / cc.Xi_p, 2 * k["s"] ** 3 * w["p"] ** 2 / (k["p"] ** 3 * w["s"] ** 2), rel_tol=1e-13)
        assert math.isclose(cc.X_s / cc.Xi_s, k["i"] * (k["s"] + cc.delta_k) / (2 * k["s"] ** 2), rel_tol=1e-12)

    def test_degenerate_symmetry(self, line):
        modes = ModeSet.build(OMEGA_P, OMEGA_P, line)
        cc = classical_couplings(line, modes)
        assert cc.delta_k == 0
        assert cc.Xi_s == cc.Xi_i == 2 * cc.Xi_p
        assert cc.X_s == cc.X_i == cc.X_p

    def test_signal_idler_swap(self, line):
        a = classical_couplings(line, ModeSet.build(OMEGA_P, OMEGA_S, line))
        b = classical_couplings(line, ModeSet.build(OMEGA_P, 2 * OMEGA_P - OMEGA_S, line))
        assert math.isclose(a.Xi_s, b.Xi_i, rel_tol=1e-12)
        assert math.isclose(a.X_s, b.X_i, rel_tol=1e-12)
        assert math.isclose(a.delta_k, b.delta_k, rel_tol=1e-9)

    def test_resonator_couplings_are_complex_typed(self, line, res):
        cc = classical_couplings(line, ModeSet.build(OMEGA_P, 4 * GHZ, line, res))
        assert isinstance(cc.X_s, complex)
        assert abs(cc.X_s.imag) <= 1e-12 * abs(cc.X_s)

    def test_far_detuned_resonator_approaches_bare_line(self, line):
        # a tiny coupling capacitor makes the loaded line indistinguishable from the bare one
        weak = ResonatorParams(C_c=1e-22, L_r=100e-12, C_r=7.036e-12)
        bare = classical_couplings(line, ModeSet.build(OMEGA_P, OMEGA_S, line))
        loaded = classical_couplings(line, ModeSet.build(OMEGA_P, OMEGA_S, line, weak))
        for name in ("Xi_p", "X_s", "X_i"):
            assert abs(getattr(loaded, name) - getattr(bare, name)) <= 1e-6 * abs(getattr(bare, name))


class TestClosedForm:
    def test_pump_phase(self, line, setup, oracle):
        _, cc, A_p0, _ = setup
        A = pump_solution(A_p0, cc.Xi_p, line.length)
        assert math.isclose(abs(A), abs(A_p0), rel_tol=1e-15)
        assert math.isclose(np.angle(A) % (2 * math.pi), oracle["pump_phase_lT"] % (2 * math.pi), rel_tol=1e-9)

    def test_zero_length_is_identity(self, setup):
        _, cc, A_p0, A_s0 = setup
        assert gain_analytic(A_s0, 0.0, A_p0, cc, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_no_pump_no_gain(self, line, setup):
        _, cc, _, A_s0 = setup
        assert gain_analytic(A_s0, 0.0, 0.0, cc, line.length) == pytest.approx(1.0, abs=1e-12)

    def test_zero_signal_raises(self, setup, line):
        _, cc, A_p0, _ = setup
        with pytest.raises(ZeroDivisionError):
            gain_analytic(0.0, 0.0, A_p0, cc, line.length)

    def test_phase_matched_limit(self, setup, line):
        # with Delta K forced to zero the gain is cosh^2(g l)
        _, cc, A_p0, A_s0 = setup
        import dataclasses
        pump_sq = abs(A_p0) ** 2
        matched = dataclasses.replace(cc, delta_k=-cc.delta_xi * pump_sq)
        g = math.sqrt(cc.X_s * cc.X_i) * pump_sq
        assert math.isclose(gain_analytic(A_s0, 0.0, A_p0, matched, line.length),
                            math.cosh(g * line.length) ** 2, rel_tol=1e-12)

    def test_sinhc_branch_continuity(self, setup, line):
        # Delta K chosen so that g is exactly zero: gain is 1 + (X_s |A|^2 l)^2 style polynomial growth
        _, cc, A_p0, A_s0 = setup
        import dataclasses
        pump_sq = abs(A_p0) ** 2
        dK = 2 * math.sqrt(cc.X_s * cc.X_i) * pump_sq
        c0 = dataclasses.replace(cc, delta_k=dK - cc.delta_xi * pump_sq)
        assert abs(c0.g(pump_sq)) < 1e-9 * dK
        G0 = gain_analytic(A_s0, 0.0, A_p0, c0, line.length)
        c1 = dataclasses.replace(c0, delta_k=c0.delta_k * (1 + 1e-7))
        G1 = gain_analytic(A_s0, 0.0, A_p0, c1, line.length)
        assert math.isclose(G0, G1, rel_tol=1e-5)
        x = dK * line.length / 2
        assert math.isclose(G0, 1 + x * x, rel_tol=1e-6)

    def test_idler_seeded_interference(self, setup, line):
        # the three-term formula agrees with the evolved amplitudes for a seeded idler
        _, cc, A_p0, A_s0 = setup
        A_i0 = 0.7 * A_s0 * np.exp(0.3j)
        A_s, _ = analytic_evolution(A_s0, A_i0, A_p0, cc, line.length)
        assert math.isclose(abs(A_s) ** 2 / abs(A_s0) ** 2, gain_analytic(A_s0, A_i0, A_p0, cc, line.length),
                            rel_tol=1e-12)

    def test_idler_generated_from_vacuum(self, setup, line):
        _, cc, A_p0, A_s0 = setup
        A_s, A_i = analytic_evolution(A_s0, 0.0, A_p0, cc, line.length)
        # Manley-Rowe: photon-number difference is conserved
        lhs = abs(A_s) ** 2 / cc.X_s - abs(A_i) ** 2 / cc.X_i
        assert math.isclose(lhs, abs(A_s0) ** 2 / cc.X_s, rel_tol=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(min_value=-math.pi, max_value=math.pi))
    def test_input_phase_invariance(self, phi):
        line = default_line()
        modes = ModeSet.build(OMEGA_P, OMEGA_S, line)
        cc = classical_couplings(line, modes)
        A_p0 = current_to_amplitude(0.5 * line.I_c, OMEGA_P, modes.p.z_c)
        A_s0 = current_to_amplitude(1e-6 * line.I_c, OMEGA_S, modes.s.z_c)
        g0 = gain_analytic(A_s0, 0.0, A_p0, cc, line.length)
        assert math.isclose(gain_analytic(A_s0 * np.exp(1j * phi), 0.0, A_p0, cc, line.length), g0, rel_tol=1e-12)


class TestIntegration:
    def test_matches_closed_form(self, setup, line):
        _, cc, A_p0, A_s0 = setup
        traj = integrate_cme(ModeAmplitudes(A_p0, A_s0, 0.0), cc, line.length, 40000)
        assert math.isclose(traj.signal_gain(), gain_analytic(A_s0, 0.0, A_p0, cc, line.length), rel_tol=1e-8)
        A_s, A_i = to_lab_frame(*analytic_evolution(A_s0, 0.0, A_p0, cc, line.length), A_p0, cc, line.length)
        assert abs(traj.A_s[-1] - A_s) <= 1e-7 * abs(A_s)
        assert abs(traj.A_i[-1] - A_i) <= 1e-7 * abs(A_i)

    def test_rk4_fourth_order(self, setup, line):
        _, cc, A_p0, A_s0 = setup
        s0 = ModeAmplitudes(A_p0, A_s0, 0.0)
        ref = integrate_cme(s0, cc, line.length, 32000).A_s[-1]
        errs = [abs(integrate_cme(s0, cc, line.length, n).A_s[-1] - ref) for n in (500, 1000, 2000)]
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert min(orders) >= 3.9

    def test_trajectory_shape_and_endpoints(self, setup, line):
        _, cc, A_p0, A_s0 = setup
        traj = integrate_cme(ModeAmplitudes(A_p0, A_s0, 0.0), cc, line.length, 100)
        assert len(traj) == 101 and traj.z[0] == 0 and traj.z[-1] == line.length
        first = traj[0]
        assert first.A_s == A_s0 and first.A_i == 0
        assert len(list(traj)) == 101

    @pytest.mark.parametrize("frac", [1e-6, 0.1])
    def test_manley_rowe(self, setup, line, frac):
        modes, cc, A_p0, _ = setup
        A_s0 = current_to_amplitude(frac * 0.5 * line.I_c, OMEGA_S, modes.s.z_c)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ValidityWarning)
            traj = integrate_cme(ModeAmplitudes(A_p0, A_s0, 0.0), cc, line.length, 40000)
        inv1 = abs(traj.A_p) ** 2 / (2 * cc.X_p) + abs(traj.A_s) ** 2 / cc.X_s
        inv2 = abs(traj.A_s) ** 2 / cc.X_s - abs(traj.A_i) ** 2 / cc.X_i
        assert np.max(abs(inv1 - inv1[0])) / abs(inv1[0]) < 1e-8
        assert np.max(abs(inv2 - inv2[0])) / abs(inv2[0]) < 1e-8

    def test_pump_depletes_with_strong_signal(self, setup, line):
        modes, cc, A_p0, _ = setup
        A_s0 = current_to_amplitude(0.05 * line.I_c, OMEGA_S, modes.s.z_c)
        traj = integrate_cme(ModeAmplitudes(A_p0, A_s0, 0.0), cc, line.length, 20000)
        assert abs(traj.A_p[-1]) < 0.99 * abs(A_p0)
        assert traj.signal_gain() < gain_analytic(A_s0, 0.0, A_p0, cc, line.length)

    def test_zero_fields_stay_zero(self, setup, line):
        _, cc, _, _ = setup
        traj = integrate_cme(ModeAmplitudes(0.0, 0.0, 0.0), cc, line.length, 10)
        assert not np.any(traj.amplitudes)

    def test_rhs_values(self, setup):
        _, cc, A_p0, A_s0 = setup
        dp, ds, di = cme_rhs(ModeAmplitudes(A_p0, A_s0, 0.0), cc)
        assert dp == pytest.approx(1j * cc.Xi_p * abs(A_p0) ** 2 * A_p0, rel=1e-14)
        assert ds == pytest.approx(1j * cc.Xi_s * abs(A_p0) ** 2 * A_s0, rel=1e-14)
        # the idler is seeded by pump^2 times the conjugate signal
        assert di == pytest.approx(1j * cc.X_i * A_p0**2 * np.conj(A_s0), rel=1e-14)

    def test_large_amplitude_warns_and_diverges(self, setup, line):
        _, cc, A_p0, _ = setup
        with pytest.raises(DivergenceError), warnings.catch_warnings():
            warnings.simplefilter("ignore")
            integrate_cme(ModeAmplitudes(1e-3, 1e-3, 1e-3), cc, line.length, 50)

    def test_signal_above_pump_warns(self, setup, line):
        _, cc, A_p0, _ = setup
        with pytest.warns(ValidityWarning):
            integrate_cme(ModeAmplitudes(A_p0, 2 * A_p0, 0.0), cc, 1e-6, 5)

    def test_rk4_rejects_zero_steps(self):
        with pytest.raises(ValueError):
            rk4(lambda z, y: y, (1.0,), 0.0, 1.0, 0)

    def test_rk4_exponential(self):
        _, y = rk4(lambda z, y: (1j * y[0],), (1.0,), 0.0, 1.0, 200)
        assert abs(y[-1, 0] - np.exp(1j)) < 1e-10


class TestSweep:
    def test_nan_for_stop_band_points(self, line, res):
        grid = np.array([4.0, res.omega_pole / GHZ * (1 + 1e-4), 8.0]) * GHZ
        table = gain_sweep(grid, line, OMEGA_P, 0.5 * line.I_c, res)
        assert np.isnan(table.gain_pm[1]) and table.n_failed_pm >= 1
        assert np.all(np.isfinite(table.gain_nopm))
        assert np.isfinite(table.gain_pm[0]) and np.isfinite(table.gain_pm[2])

    def test_without_resonator_pm_column_is_nan(self, line):
        table = gain_sweep(np.array([4.0, 5.0]) * GHZ, line, OMEGA_P, 0.5 * line.I_c)
        assert np.all(np.isnan(table.gain_pm)) and table.n_failed_pm == 0

    def test_sorted_output(self, line):
        table = gain_sweep(np.array([7.0, 4.0, 5.0]) * GHZ, line, OMEGA_P, 0.5 * line.I_c)
        assert np.all(np.diff(table.omega_s) > 0)

    def test_gain_at_reference(self, line):
        G = signal_gain_at(OMEGA_S, line, OMEGA_P, 0.5 * line.I_c)
        assert 1 < G < 10

    def test_phase_matching_raises_gain(self, line, res):
        grid = np.linspace(3, 9, 121) * GHZ
        table = gain_sweep(grid, line, OMEGA_P, 0.5 * line.I_c, res)
        assert np.nanmax(table.gain_pm) > 10 * np.nanmax(table.gain_nopm)

    def test_csv(self, line, tmp_path):
        from twpasim.output import read_csv
        table = gain_sweep(np.array([4.0, 5.0]) * GHZ, line, OMEGA_P, 0.5 * line.I_c)
        table.to_csv(tmp_path / "g.csv")
        header, data = read_csv(tmp_path / "g.csv")
        assert header == ["omega_s_hz", "gain_nopm_db", "gain_pm_db"]
        assert data[0, 0] == pytest.approx(4e9)
        assert data[1, 1] == pytest.approx(10 * math.log10(table.gain_nopm[1]), rel=1e-11)
