"""Classical coupled-mode theory of degenerate-pump four-wave mixing.

Mode amplitudes are complex flux amplitudes ``A_n(z)`` of the travelling
waves ``Re{A_n(z) exp(i(k_n z - omega_n t))}``.  Coupling constants are in
rad m^-1 Wb^-2.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import output
from .circuit import (
    MODE_NAMES,
    LineParams,
    ModeSet,
    ResonatorParams,
    current_to_amplitude,
    effective_impedance,
)
from .errors import TWPAError, ValidityWarning
from .ode import rk4

#: Below this |g z| the ratio sinh(g z)/g is taken from its Taylor series.
SINHC_SERIES_LIMIT = 1e-6


@dataclass(frozen=True)
class ClassicalCouplings:
    """Self/cross-modulation (``Xi_n``) and mixing (``X_n``) constants.

    Values are real floats for a bare line and complex with resonators.
    """

    Xi_p: complex
    Xi_s: complex
    Xi_i: complex
    X_p: complex
    X_s: complex
    X_i: complex
    delta_k: complex

    @property
    def delta_xi(self):
        """2 Xi_p - Xi_s - Xi_i."""
        return 2 * self.Xi_p - self.Xi_s - self.Xi_i

    def delta_K(self, pump_sq: float):
        """Total phase mismatch Delta k + Delta Xi |A_p0|^2 [rad/m]."""
        return self.delta_k + self.delta_xi * pump_sq

    def g(self, pump_sq: float) -> complex:
        """Spatial gain coefficient sqrt(X_s X_i^* |A_p0|^4 - (Delta K/2)^2), complex."""
        dK = self.delta_K(pump_sq)
        return cmath.sqrt(self.X_s * np.conj(self.X_i) * pump_sq**2 - (dK / 2) ** 2)


def classical_couplings(line: LineParams, modes: ModeSet) -> ClassicalCouplings:
    """Coupling constants for ``modes`` on ``line``.

    A bare line uses ``1/C_g`` in the common prefactor.  When the modes
    were built with a resonator, ``1/C_g`` is replaced by
    ``i omega_n Z_eff(omega_n)`` for each mode, so the constants become
    complex-typed.

    Raises
    ------
    StopBandError
        If any of the three modes lies in a stop band.
    """
    modes.check_pass_band()
    res = modes.resonator
    if res is None:
        k = {n: modes[n].k.real for n in MODE_NAMES}
    else:
        k = {n: modes[n].k for n in MODE_NAMES}
    dk = 2 * k["p"] - k["s"] - k["i"]
    eps = {"p": 1, "s": -1, "i": -1}
    xi, x = {}, {}
    for n in MODE_NAMES:
        w = modes[n].omega
        if res is None:
            inv_c = 1.0 / line.C_g
        else:
            inv_c = 1j * w * effective_impedance(w, line, res)
        pre = line.a**4 * k["p"] ** 2 * inv_c / (16 * line.I_c**2 * line.L_J0**3 * w**2)
        xi[n] = pre * k[n] ** 3 * (1 if n == "p" else 2)
        x[n] = pre * k["s"] * k["i"] * (k[n] - eps[n] * dk)
    return ClassicalCouplings(
        Xi_p=xi["p"], Xi_s=xi["s"], Xi_i=xi["i"],
        X_p=x["p"], X_s=x["s"], X_i=x["i"],
        delta_k=dk,
    )


def pump_solution(A_p0, Xi_p, z):
    """Undepleted pump |A_p0| exp(i Xi_p |A_p0|^2 z), taking the input phase as zero."""
    amp = abs(A_p0)
    return amp * np.exp(1j * Xi_p * amp**2 * z)


def _sinhc(g: complex, z: float) -> complex:
    """sinh(g z) / g, finite at g = 0."""
    x = g * z
    if abs(x) < SINHC_SERIES_LIMIT:
        return z * (1 + x * x / 6)
    return cmath.sinh(x) / g


def _evolve_one(a0, b0, X, X_other, dK, pump_sq, z):
    g = cmath.sqrt(X * np.conj(X_other) * pump_sq**2 - (dK / 2) ** 2)
    sh = _sinhc(g, z)
    ch = cmath.cosh(g * z)
    val = a0 * (ch - 0.5j * dK * sh) + 1j * X * pump_sq * np.conj(b0) * sh
    return val * cmath.exp(0.5j * dK * z)


def analytic_evolution(A_s0, A_i0, A_p0, cc: ClassicalCouplings, z: float):
    """Closed-form signal and idler amplitudes at ``z`` for an undepleted pump.

    Amplitudes are returned in the frame co-rotating with the cross-phase
    modulation, ``A_n -> A_n exp(i Xi_n |A_p0|^2 z)``; use :func:`to_lab_frame`
    to undo it.  The idler uses the mirrored coefficient ``X_i X_s^*``, which
    equals the signal's for lossless (real) constants.
    """
    pump_sq = abs(A_p0) ** 2
    dK = cc.delta_K(pump_sq)
    A_s = _evolve_one(A_s0, A_i0, cc.X_s, cc.X_i, dK, pump_sq, z)
    A_i = _evolve_one(A_i0, A_s0, cc.X_i, cc.X_s, dK, pump_sq, z)
    return A_s, A_i


def to_lab_frame(A_s, A_i, A_p0, cc: ClassicalCouplings, z: float):
    """Map co-rotating amplitudes back to the frame of the coupled-mode equations."""
    pump_sq = abs(A_p0) ** 2
    return (A_s * cmath.exp(1j * cc.Xi_s * pump_sq * z),
            A_i * cmath.exp(1j * cc.Xi_i * pump_sq * z))


def gain_analytic(A_s0, A_i0, A_p0, cc: ClassicalCouplings, l_T: float) -> float:
    """Signal power gain |A_s(l_T)/A_s0|^2 with an undepleted pump.

    Sum of the direct term, the idler-seeded term and the signal-idler
    interference term (which vanishes for ``A_i0 = 0``).
    """
    if A_s0 == 0:
        raise ZeroDivisionError("signal gain is undefined for zero input signal")
    pump_sq = abs(A_p0) ** 2
    dK = cc.delta_K(pump_sq)
    g = cc.g(pump_sq)
    sh = _sinhc(g, l_T)
    direct = cmath.cosh(g * l_T) - 0.5j * dK * sh
    s0_sq = abs(A_s0) ** 2
    term1 = abs(direct) ** 2
    term2 = abs(A_i0) ** 2 / s0_sq * abs(cc.X_s * pump_sq * sh) ** 2
    # conj(sinh(g l)/g) == sinh(g* l)/g*
    cross = -1j * A_s0 * A_i0 * direct * np.conj(cc.X_s) * pump_sq * np.conj(sh)
    term3 = (cross + np.conj(cross)) / s0_sq
    return float((term1 + term2 + term3).real)


@dataclass(frozen=True)
class ModeAmplitudes:
    A_p: complex
    A_s: complex
    A_i: complex
    z: float = 0.0

    def as_tuple(self):
        return (complex(self.A_p), complex(self.A_s), complex(self.A_i))


def _rhs(z, y, cc):
    A_p, A_s, A_i = y
    pp = (A_p * A_p.conjugate()).real
    ph = cmath.exp(1j * cc.delta_k * z)
    # pump interaction term carries exp(-i dk z) so that A_p*^2 A_s A_i stays phase matched
    dp = 1j * cc.Xi_p * pp * A_p + 2j * cc.X_p * A_p.conjugate() * A_s * A_i / ph
    p2 = A_p * A_p
    ds = 1j * cc.Xi_s * pp * A_s + 1j * cc.X_s * p2 * A_i.conjugate() * ph
    di = 1j * cc.Xi_i * pp * A_i + 1j * cc.X_i * p2 * A_s.conjugate() * ph
    return (dp, ds, di)


def cme_rhs(state: ModeAmplitudes, cc: ClassicalCouplings):
    """Right-hand side d(A_p, A_s, A_i)/dz of the full coupled-mode equations."""
    return _rhs(state.z, state.as_tuple(), _as_complex(cc))


def _as_complex(cc):
    # plain Python complex keeps the RK4 inner loop free of numpy scalar overhead
    return ClassicalCouplings(*(complex(v) for v in (
        cc.Xi_p, cc.Xi_s, cc.Xi_i, cc.X_p, cc.X_s, cc.X_i, cc.delta_k)))


class Trajectory:
    """Sampled solution of a three-mode propagation problem.

    Iterating yields :class:`ModeAmplitudes`; the raw arrays are ``z`` and
    ``amplitudes`` (columns p, s, i).
    """

    def __init__(self, z, amplitudes):
        self.z = np.asarray(z, dtype=float)
        self.amplitudes = np.asarray(amplitudes, dtype=complex)

    def __len__(self):
        return len(self.z)

    def __getitem__(self, idx) -> ModeAmplitudes:
        a = self.amplitudes[idx]
        return ModeAmplitudes(A_p=a[0], A_s=a[1], A_i=a[2], z=float(self.z[idx]))

    def __iter__(self) -> Iterator[ModeAmplitudes]:
        for n in range(len(self)):
            yield self[n]

    @property
    def A_p(self):
        return self.amplitudes[:, 0]

    @property
    def A_s(self):
        return self.amplitudes[:, 1]

    @property
    def A_i(self):
        return self.amplitudes[:, 2]

    def signal_gain(self) -> float:
        """|A_s(end)|^2 / |A_s(0)|^2."""
        return float(abs(self.A_s[-1]) ** 2 / abs(self.A_s[0]) ** 2)

    def to_csv(self, path, every: int = 1):
        rows = [
            (z, a[0].real, a[0].imag, a[1].real, a[1].imag, a[2].real, a[2].imag)
            for z, a in zip(self.z[::every], self.amplitudes[::every])
        ]
        output.write_csv(path, ["z_m", "re_a_p", "im_a_p", "re_a_s", "im_a_s", "re_a_i", "im_a_i"], rows)


def integrate_cme(state0: ModeAmplitudes, cc: ClassicalCouplings, l_T: float,
                  n_steps: int = 40000) -> Trajectory:
    """Integrate the full (depleting) coupled-mode equations with fixed-step RK4.

    The trajectory holds ``n_steps + 1`` samples including both ends.
    """
    c = _as_complex(cc)
    z, y = rk4(lambda z, y: _rhs(z, y, c), state0.as_tuple(), state0.z, state0.z + l_T, n_steps)
    traj = Trajectory(z, y)
    if np.any(np.maximum(abs(traj.A_s), abs(traj.A_i)) > abs(traj.A_p)):
        warnings.warn("signal or idler amplitude exceeds the pump along the line",
                      ValidityWarning, stacklevel=2)
    return traj


@dataclass
class SweepTable:
    """Signal gain versus signal frequency, without and with phase matching."""

    omega_s: np.ndarray
    gain_nopm: np.ndarray
    gain_pm: np.ndarray
    n_failed_nopm: int = 0
    n_failed_pm: int = 0

    def __len__(self):
        return len(self.omega_s)

    def to_csv(self, path):
        output.write_csv(
            path,
            ["omega_s_hz", "gain_nopm_db", "gain_pm_db"],
            zip(self.omega_s / (2 * math.pi), output.to_db(self.gain_nopm), output.to_db(self.gain_pm)),
        )


def signal_gain_at(omega_s: float, line: LineParams, omega_p: float, I_p: float,
                   res: Optional[ResonatorParams] = None, I_s: Optional[float] = None) -> float:
    """Undepleted-pump signal gain at one signal frequency (idler starts empty).

    The pump and signal currents are converted to flux amplitudes with the
    characteristic impedance of their own mode.
    """
    modes = ModeSet.build(omega_p, omega_s, line, res)
    cc = classical_couplings(line, modes)
    if I_s is None:
        I_s = 1e-6 * line.I_c
    A_p0 = current_to_amplitude(I_p, omega_p, modes.p.z_c)
    A_s0 = current_to_amplitude(I_s, omega_s, modes.s.z_c)
    return gain_analytic(A_s0, 0.0, A_p0, cc, line.length)


def _gain_column(omega_s, line, omega_p, I_p, res, I_s):
    gains = np.full(len(omega_s), np.nan)
    failed = 0
    for n, ws in enumerate(omega_s):
        try:
            gains[n] = signal_gain_at(ws, line, omega_p, I_p, res, I_s)
        except (TWPAError, ZeroDivisionError, OverflowError):
            failed += 1
    return gains, failed


def gain_sweep(omega_s, line: LineParams, omega_p: float, I_p: float,
               res: Optional[ResonatorParams] = None, I_s: Optional[float] = None) -> SweepTable:
    """Gain over a grid of signal frequencies for the bare and the resonator-loaded line.

    Points where a mode falls in a stop band, on a pole or beyond the cutoff
    are reported as NaN and counted in the table.  Without ``res`` the
    phase-matched column is all NaN (and not counted as failures).
    """
    omega_s = np.sort(np.atleast_1d(np.asarray(omega_s, dtype=float)))
    nopm, f0 = _gain_column(omega_s, line, omega_p, I_p, None, I_s)
    if res is None:
        pm, f1 = np.full(len(omega_s), np.nan), 0
    else:
        pm, f1 = _gain_column(omega_s, line, omega_p, I_p, res, I_s)
    return SweepTable(omega_s=omega_s, gain_nopm=nopm, gain_pm=pm, n_failed_nopm=f0, n_failed_pm=f1)
