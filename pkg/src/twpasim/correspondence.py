"""Classicalised spatial Heisenberg equations and their comparison with coupled-mode theory.

Converting the Heisenberg equations of the classical-pump Hamiltonian from
time to space (``-omega_n d/dt = k_n d/dz``) and replacing operators by flux
amplitudes gives coupled-mode equations with constants ``Xi^q_n`` and
``X^q_n``.  They differ from the classical ``Xi_n``, ``X_n`` by the
dispersion corrections ``(1 + Lambda_xi)``, ``(1 + Lambda_chi)`` and by the
absence of the ``Delta k / k`` term in the mixing constant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import output
from .circuit import MODE_NAMES, LineParams, ModeSet, ResonatorParams, current_to_amplitude, effective_impedance
from .cme import ClassicalCouplings, ModeAmplitudes, Trajectory, classical_couplings, gain_analytic
from .errors import TWPAError
from .ode import rk4
from .quantum import ClassicalPumpCouplings, classical_pump_couplings, lambda_chi, lambda_xi


@dataclass(frozen=True)
class ClassicalisedCouplings:
    """Constants of the classicalised spatial equations (units as ClassicalCouplings).

    ``k_p``, ``k_s``, ``k_i`` are kept because the lab-frame equations
    include the linear propagation term.
    """

    Xi_p: complex
    Xi_s: complex
    Xi_i: complex
    X_s: complex
    X_i: complex
    k_p: complex
    k_s: complex
    k_i: complex

    @property
    def delta_k(self):
        return 2 * self.k_p - self.k_s - self.k_i

    @property
    def delta_xi(self):
        return 2 * self.Xi_p - self.Xi_s - self.Xi_i

    def as_classical(self) -> ClassicalCouplings:
        """Same constants in the co-rotating coupled-mode form (no pump back-action)."""
        return ClassicalCouplings(Xi_p=self.Xi_p, Xi_s=self.Xi_s, Xi_i=self.Xi_i,
                                  X_p=0.0, X_s=self.X_s, X_i=self.X_i, delta_k=self.delta_k)


def _wavenumbers(modes: ModeSet):
    if modes.resonator is None:
        return {n: modes[n].k.real for n in MODE_NAMES}
    return {n: modes[n].k for n in MODE_NAMES}


def _dispersion_factor(modes: ModeSet, l_q: Optional[float]):
    """First-order finite-mismatch factor (1 - i dk l_q / 2); 1 when ``l_q`` is None."""
    if l_q is None:
        return 1.0
    k = _wavenumbers(modes)
    return 1 - 0.5j * (2 * k["p"] - k["s"] - k["i"]) * l_q


def classicalised_from_pump_couplings(cpc: ClassicalPumpCouplings, modes: ModeSet,
                                      dispersion_l_q: Optional[float] = None) -> ClassicalisedCouplings:
    """Map primed temporal constants onto spatial ones via ``delta omega_n -> k_n delta omega_n / omega_n``.

    ``dispersion_l_q`` enables the first-order ``(1 - i dk l_q/2)`` correction
    of the mixing constant.  It depends on the unphysical quantisation length
    and is off by default.
    """
    k = _wavenumbers(modes)
    w = {n: modes[n].omega for n in MODE_NAMES}
    xi = {"p": cpc.xi_p, "s": cpc.xi_s, "i": cpc.xi_i}
    # the pump equation carries 2 xi'_p, signal and idler a single xi'_n
    Xi = {n: (2 if n == "p" else 1) * k[n] * xi[n] / w[n] for n in MODE_NAMES}
    chi = cpc.chi * _dispersion_factor(modes, dispersion_l_q)
    X_s = k["s"] * chi / w["s"] * math.sqrt(w["i"] / w["s"])
    X_i = k["i"] * chi / w["i"] * math.sqrt(w["s"] / w["i"])
    return ClassicalisedCouplings(Xi_p=Xi["p"], Xi_s=Xi["s"], Xi_i=Xi["i"], X_s=X_s, X_i=X_i,
                                  k_p=k["p"], k_s=k["s"], k_i=k["i"])


def classicalised_explicit(line: LineParams, modes: ModeSet,
                           dispersion_l_q: Optional[float] = None) -> ClassicalisedCouplings:
    """Closed-form constants written in line parameters (same prefactor as the classical ones).

    With resonators each mode uses its own ``1/C_eff(omega_n)``.  On a bare
    line this agrees with :func:`classicalised_from_pump_couplings`; with
    resonators the two differ in the mixing constants by
    ``sqrt(C_eff(omega_i)/C_eff(omega_s))`` (and its inverse).
    """
    modes.check_pass_band()
    k = _wavenumbers(modes)
    lam = {n: modes[n].lam for n in MODE_NAMES}
    lchi = lambda_chi(line, modes)
    Xi, X = {}, {}
    for n in MODE_NAMES:
        w = modes[n].omega
        if modes.resonator is None:
            inv_c = 1.0 / line.C_g
        else:
            inv_c = 1j * w * effective_impedance(w, line, modes.resonator)
        pre = line.a**4 * k["p"] ** 2 * inv_c / (16 * line.I_c**2 * line.L_J0**3 * w**2)
        Xi[n] = pre * k[n] ** 3 * (1 if n == "p" else 2) * (1 + lambda_xi(lam["p"], lam[n]))
        X[n] = pre * k["s"] * k["i"] * k[n] * (1 + lchi)
    fac = _dispersion_factor(modes, dispersion_l_q)
    return ClassicalisedCouplings(Xi_p=Xi["p"], Xi_s=Xi["s"], Xi_i=Xi["i"],
                                  X_s=X["s"] * fac, X_i=X["i"] * fac,
                                  k_p=k["p"], k_s=k["s"], k_i=k["i"])


def classicalised_couplings(line: LineParams, modes: ModeSet, route: str = "explicit",
                            dispersion_l_q: Optional[float] = None) -> ClassicalisedCouplings:
    """Classicalised constants by ``route`` in {"explicit", "pump"}."""
    if route == "explicit":
        return classicalised_explicit(line, modes, dispersion_l_q)
    if route == "pump":
        return classicalised_from_pump_couplings(classical_pump_couplings(line, modes), modes, dispersion_l_q)
    raise ValueError(f"unknown route {route!r}")


def temporal_to_spatial_mismatch(cpc: ClassicalPumpCouplings, modes: ModeSet, pump_sq: float):
    """Nonlinear spatial mismatch obtained from Delta Omega term by term.

    Each frequency shift of ``Delta Omega = (4 xi'_p - xi'_s - xi'_i)|A|^2``
    is converted with ``delta omega_n -> k_n delta omega_n / omega_n``;
    the result equals ``(2 Xi^q_p - Xi^q_s - Xi^q_i)|A|^2``.
    """
    k = _wavenumbers(modes)
    w = {n: modes[n].omega for n in MODE_NAMES}
    return (4 * cpc.xi_p * k["p"] / w["p"] - cpc.xi_s * k["s"] / w["s"] - cpc.xi_i * k["i"] / w["i"]) * pump_sq


def _rhs(z, y, q):
    A_p, A_s, A_i = y
    pp = (A_p * A_p.conjugate()).real
    p2 = A_p * A_p
    return (
        1j * (q.k_p + q.Xi_p * pp) * A_p,
        1j * (q.k_s + q.Xi_s * pp) * A_s + 1j * q.X_s * p2 * A_i.conjugate(),
        1j * (q.k_i + q.Xi_i * pp) * A_i + 1j * q.X_i * p2 * A_s.conjugate(),
    )


def integrate_heisenberg(state0: ModeAmplitudes, cqc: ClassicalisedCouplings, l_T: float,
                         n_steps: int = 40000) -> Trajectory:
    """RK4 integration of the lab-frame classicalised equations.

    Amplitudes include the ``exp(i k_n z)`` carrier, so the step must resolve
    ``k_n l_T`` radians of phase.
    """
    q = ClassicalisedCouplings(*(complex(v) for v in (
        cqc.Xi_p, cqc.Xi_s, cqc.Xi_i, cqc.X_s, cqc.X_i, cqc.k_p, cqc.k_s, cqc.k_i)))
    z, y = rk4(lambda z, y: _rhs(z, y, q), state0.as_tuple(), state0.z, state0.z + l_T, n_steps)
    return Trajectory(z, y)


@dataclass
class ComparisonTable:
    """Classical and classicalised gain on a common signal grid."""

    omega_s: np.ndarray
    gain_classical: np.ndarray
    gain_classicalised: np.ndarray

    @property
    def delta_db(self):
        return output.to_db(self.gain_classicalised) - output.to_db(self.gain_classical)

    @property
    def max_abs_delta_db(self) -> float:
        d = np.abs(self.delta_db)
        return float(np.nanmax(d)) if np.any(np.isfinite(d)) else float("nan")

    @property
    def n_failed(self) -> int:
        return int(np.sum(~np.isfinite(self.delta_db)))

    def to_csv(self, path):
        output.write_csv(
            path,
            ["omega_s_hz", "gain_classical_db", "gain_classicalised_db", "delta_db"],
            zip(self.omega_s / (2 * math.pi), output.to_db(self.gain_classical),
                output.to_db(self.gain_classicalised), self.delta_db),
        )


def compare_gain(omega_s, line: LineParams, omega_p: float, I_p: float,
                 res: Optional[ResonatorParams] = None, I_s: Optional[float] = None,
                 route: str = "explicit") -> ComparisonTable:
    """Undepleted-pump signal gain from both theories over ``omega_s``.

    Rows where either evaluation fails (stop band, pole, cutoff) hold NaN.
    """
    omega_s = np.sort(np.atleast_1d(np.asarray(omega_s, dtype=float)))
    gc = np.full(len(omega_s), np.nan)
    gq = np.full(len(omega_s), np.nan)
    if I_s is None:
        I_s = 1e-6 * line.I_c
    for n, ws in enumerate(omega_s):
        try:
            modes = ModeSet.build(omega_p, ws, line, res)
            cc = classical_couplings(line, modes)
            cq = classicalised_couplings(line, modes, route).as_classical()
            A_p0 = current_to_amplitude(I_p, omega_p, modes.p.z_c)
            A_s0 = current_to_amplitude(I_s, ws, modes.s.z_c)
            gc[n] = gain_analytic(A_s0, 0.0, A_p0, cc, line.length)
            gq[n] = gain_analytic(A_s0, 0.0, A_p0, cq, line.length)
        except (TWPAError, ZeroDivisionError, OverflowError):
            gc[n] = gq[n] = np.nan
    return ComparisonTable(omega_s=omega_s, gain_classical=gc, gain_classicalised=gq)
