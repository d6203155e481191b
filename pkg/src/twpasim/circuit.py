"""Linear and dispersive properties of a Josephson-junction transmission line.

All quantities are SI: angular frequencies in rad/s, inductances in H,
capacitances in F, lengths in m and fluxes in Wb.  The line is a chain of
``n_cells`` unit cells of length ``a``; each cell holds a junction (linear
inductance ``L_J0`` shunted by ``C_J``) in series and a capacitance ``C_g``
to ground.  Optionally each cell also carries a phase-matching resonator,
an ``L_r``/``C_r`` tank coupled to the line through ``C_c`` and placed in
parallel with ``C_g``.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

from scipy.constants import e, hbar

from .errors import (
    DomainError,
    LongWavelengthWarning,
    SingularityError,
    StopBandError,
    ValidityWarning,
)

#: Reduced flux quantum hbar / 2e [Wb].
PHI0 = hbar / (2 * e)

#: Relative distance to a pole below which evaluation is refused.
POLE_RTOL = 1e-6

FLUX_RATIO_LIMIT = 1.2
CURRENT_RATIO_LIMIT = 0.78
DEPLETION_RATIO = 0.1


@dataclass(frozen=True)
class LineParams:
    """Unit-cell parameters of the junction-embedded line.

    Use :meth:`build` to give either ``L_J0`` or ``I_c``; the other one
    follows from ``L_J0 * I_c = PHI0``.  ``C_J = 0`` is accepted and means
    a dispersionless line.
    """

    a: float
    L_J0: float
    C_J: float
    C_g: float
    I_c: float
    n_cells: int

    def __post_init__(self):
        for name in ("a", "L_J0", "C_g", "I_c"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        if not (self.C_J >= 0 and math.isfinite(self.C_J)):
            raise DomainError(f"C_J must be finite and >= 0, got {self.C_J!r}")
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise DomainError(f"n_cells must be a positive integer, got {self.n_cells!r}")
        if abs(self.L_J0 * self.I_c / PHI0 - 1) > 1e-9:
            raise DomainError(
                "L_J0 and I_c are inconsistent: L_J0*I_c must equal the reduced "
                f"flux quantum {PHI0:.6e} Wb (got {self.L_J0 * self.I_c:.6e})"
            )

    @classmethod
    def build(cls, *, a, C_J, C_g, n_cells, L_J0=None, I_c=None) -> "LineParams":
        """Construct from exactly one of ``L_J0`` or ``I_c``."""
        if (L_J0 is None) == (I_c is None):
            raise DomainError("give exactly one of L_J0 or I_c")
        if L_J0 is None:
            if not I_c > 0:
                raise DomainError(f"I_c must be > 0, got {I_c!r}")
            L_J0 = PHI0 / I_c
        else:
            if not L_J0 > 0:
                raise DomainError(f"L_J0 must be > 0, got {L_J0!r}")
            I_c = PHI0 / L_J0
        return cls(a=float(a), L_J0=float(L_J0), C_J=float(C_J), C_g=float(C_g),
                   I_c=float(I_c), n_cells=int(n_cells))

    def replace(self, **changes) -> "LineParams":
        """Copy with some fields changed; changing ``L_J0`` or ``I_c`` rederives the other."""
        if "L_J0" in changes and "I_c" in changes:
            raise DomainError("give at most one of L_J0 or I_c")
        if "L_J0" in changes:
            changes["I_c"] = PHI0 / changes["L_J0"]
        elif "I_c" in changes:
            changes["L_J0"] = PHI0 / changes["I_c"]
        return dataclasses.replace(self, **changes)

    @property
    def length(self) -> float:
        """Total line length ``n_cells * a`` [m]."""
        return self.n_cells * self.a

    @property
    def cutoff(self) -> float:
        """Junction plasma frequency 1/sqrt(L_J0 C_J) [rad/s]; inf when C_J = 0."""
        if self.C_J == 0:
            return math.inf
        return 1.0 / math.sqrt(self.L_J0 * self.C_J)

    @property
    def inductance_per_length(self) -> float:
        return self.L_J0 / self.a

    @property
    def capacitance_per_length(self) -> float:
        return self.C_g / self.a


@dataclass(frozen=True)
class ResonatorParams:
    """Phase-matching resonator attached to every unit cell."""

    C_c: float
    L_r: float
    C_r: float

    def __post_init__(self):
        for name in ("C_c", "L_r", "C_r"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")

    @property
    def omega_r(self) -> float:
        """Bare tank resonance 1/sqrt(L_r C_r) [rad/s]."""
        return 1.0 / math.sqrt(self.L_r * self.C_r)

    @property
    def omega_pole(self) -> float:
        """Series resonance of the C_c + tank branch, 1/sqrt(L_r (C_r + C_c)).

        The branch impedance vanishes here, so the shunt admittance and the
        wavenumber diverge.
        """
        return 1.0 / math.sqrt(self.L_r * (self.C_r + self.C_c))


def default_line() -> LineParams:
    """2000 cells of 10 um, L_J0 = 100 pH, C_J = 329 fF, C_g = 39 fF."""
    return LineParams.build(a=10e-6, L_J0=100e-12, C_J=329e-15, C_g=39e-15, n_cells=2000)


def default_resonator() -> ResonatorParams:
    """C_c = 10 fF, L_r = 100 pH, C_r = 7.036 pF (resonance near 6.000 GHz)."""
    return ResonatorParams(C_c=10e-15, L_r=100e-12, C_r=7.036e-12)


def _check_omega(omega):
    if not (omega > 0 and math.isfinite(omega)):
        raise DomainError(f"angular frequency must be finite and > 0, got {omega!r}")


def lambda_factor(omega: float, line: LineParams) -> float:
    """Dispersion factor 1 / (1 - L_J0 C_J omega^2) of the shunted junction."""
    if not (omega >= 0 and math.isfinite(omega)):
        raise DomainError(f"angular frequency must be finite and >= 0, got {omega!r}")
    x = line.L_J0 * line.C_J * omega**2
    if x >= 1:
        raise DomainError(
            f"omega/2pi = {omega / (2 * math.pi):.6e} Hz is at or above the junction "
            f"cutoff {line.cutoff / (2 * math.pi):.6e} Hz"
        )
    return 1.0 / (1.0 - x)


def _guard_pole(omega, res):
    pole = res.omega_pole
    if abs(omega / pole - 1) < POLE_RTOL:
        raise SingularityError(
            f"omega/2pi = {omega / (2 * math.pi):.9e} Hz is on the resonator-branch pole "
            f"at {pole / (2 * math.pi):.9e} Hz",
            pole_omega=pole,
        )


def effective_capacitance(omega: float, line: LineParams,
                          res: Optional[ResonatorParams] = None) -> float:
    """Shunt capacitance per cell seen by a wave at ``omega`` [F].

    Equal to ``C_g`` without resonator.  With a resonator this is
    ``1 / (i omega Z_eff)``, which is real for a lossless cell and negative
    inside the stop band just above :attr:`ResonatorParams.omega_pole`.
    """
    _check_omega(omega)
    if res is None:
        return line.C_g
    _guard_pole(omega, res)
    w2 = omega**2
    # C_c in series with the L_r || C_r tank, expressed as a frequency-dependent capacitance
    branch = res.C_c * (1 - res.L_r * res.C_r * w2) / (1 - res.L_r * (res.C_r + res.C_c) * w2)
    return line.C_g + branch


def effective_impedance(omega: float, line: LineParams,
                        res: Optional[ResonatorParams] = None) -> complex:
    """Shunt impedance per cell: ``C_g`` in parallel with the resonator branch [Ohm].

    Without a resonator this is ``1/(i omega C_g)``.  With one, the branch
    impedance is ``(1 - L_r (C_r + C_c) omega^2) / (i omega C_c (1 - L_r C_r omega^2))``
    and the two are combined in parallel.  The result is purely imaginary.

    Raises
    ------
    SingularityError
        Within ``POLE_RTOL`` of the branch pole, where the result vanishes
        and the wavenumber diverges.
    """
    c_eff = effective_capacitance(omega, line, res)
    if c_eff == 0:
        raise SingularityError(
            f"effective impedance diverges at omega/2pi = {omega / (2 * math.pi):.9e} Hz",
            pole_omega=omega,
        )
    return 1.0 / (1j * omega * c_eff)


def in_stop_band(omega: float, line: LineParams, res: Optional[ResonatorParams] = None) -> bool:
    """True where the effective shunt capacitance is negative (evanescent wave)."""
    return effective_capacitance(omega, line, res) < 0


def wavenumber(omega: float, line: LineParams, res: Optional[ResonatorParams] = None) -> complex:
    """Wavenumber omega sqrt(L_J0 Lambda C_eff) / a [rad/m].

    Real and positive in the pass band.  In a stop band the square root is
    taken on the principal branch, giving a purely imaginary value with
    positive imaginary part; check :func:`in_stop_band` to tell the cases
    apart.
    """
    lam = lambda_factor(omega, line)
    c_eff = effective_capacitance(omega, line, res)
    k = omega * (line.L_J0 * lam * c_eff + 0j) ** 0.5 / line.a
    if abs(k) * line.a >= 1:
        warnings.warn(
            f"k*a = {abs(k) * line.a:.3g} >= 1 at omega/2pi = {omega / (2 * math.pi):.4e} Hz; "
            "the continuum (long-wavelength) description is not accurate",
            LongWavelengthWarning,
            stacklevel=2,
        )
    return k


def char_impedance(omega: float, line: LineParams, res: Optional[ResonatorParams] = None) -> complex:
    """Characteristic impedance sqrt(L_J0 Lambda / C_eff) [Ohm]."""
    lam = lambda_factor(omega, line)
    c_eff = effective_capacitance(omega, line, res)
    return (line.L_J0 * lam / c_eff + 0j) ** 0.5


def phase_velocity(omega: float, line: LineParams, res: Optional[ResonatorParams] = None) -> float:
    """Phase velocity omega / |Re k| [m/s]; undefined inside a stop band."""
    if in_stop_band(omega, line, res):
        raise StopBandError(
            f"no phase velocity in the stop band (omega/2pi = {omega / (2 * math.pi):.6e} Hz)"
        )
    k = wavenumber(omega, line, res)
    return omega / abs(k.real)


def current_to_amplitude(current, omega, z_c):
    """Flux amplitude of a travelling wave carrying ``current``: ``-I Z_c / omega``."""
    _check_omega(omega)
    return -current * z_c / omega


def amplitude_to_current(amplitude, omega, z_c):
    """Inverse of :func:`current_to_amplitude`."""
    _check_omega(omega)
    return -amplitude * omega / z_c


@dataclass(frozen=True)
class ModeRecord:
    """Linear properties of one mode."""

    omega: float
    k: complex
    lam: float
    z_c: complex
    c_eff: float
    v_ph: float
    stop_band: bool

    @classmethod
    def compute(cls, omega, line, res=None) -> "ModeRecord":
        k = wavenumber(omega, line, res)
        c_eff = effective_capacitance(omega, line, res)
        stop = c_eff < 0
        return cls(
            omega=omega,
            k=k,
            lam=lambda_factor(omega, line),
            z_c=char_impedance(omega, line, res),
            c_eff=c_eff,
            v_ph=math.nan if stop else omega / abs(k.real),
            stop_band=stop,
        )


MODE_NAMES = ("p", "s", "i")


@dataclass(frozen=True)
class ModeSet:
    """Pump, signal and idler of degenerate-pump four-wave mixing.

    The idler frequency is fixed by energy conservation, ``2 omega_p - omega_s``.
    """

    omega_p: float
    omega_s: float
    omega_i: float
    p: ModeRecord = field(repr=False)
    s: ModeRecord = field(repr=False)
    i: ModeRecord = field(repr=False)
    resonator: Optional[ResonatorParams] = None

    @classmethod
    def build(cls, omega_p: float, omega_s: float, line: LineParams,
              res: Optional[ResonatorParams] = None) -> "ModeSet":
        omega_i = 2 * omega_p - omega_s
        for name, w in zip(MODE_NAMES, (omega_p, omega_s, omega_i)):
            if not (w > 0 and math.isfinite(w)):
                raise DomainError(f"omega_{name} must be > 0, got {w!r}")
            if w >= line.cutoff:
                raise DomainError(
                    f"omega_{name}/2pi = {w / (2 * math.pi):.6e} Hz is above the junction cutoff"
                )
        return cls(
            omega_p=omega_p,
            omega_s=omega_s,
            omega_i=omega_i,
            p=ModeRecord.compute(omega_p, line, res),
            s=ModeRecord.compute(omega_s, line, res),
            i=ModeRecord.compute(omega_i, line, res),
            resonator=res,
        )

    def __getitem__(self, name: str) -> ModeRecord:
        if name not in MODE_NAMES:
            raise KeyError(name)
        return getattr(self, name)

    @property
    def delta_k(self) -> complex:
        """Linear phase mismatch 2 k_p - k_s - k_i."""
        return 2 * self.p.k - self.s.k - self.i.k

    def check_pass_band(self):
        """Raise :class:`StopBandError` naming the first mode inside a stop band."""
        for name in MODE_NAMES:
            rec = self[name]
            if rec.stop_band:
                raise StopBandError(
                    f"{name} mode at {rec.omega / (2 * math.pi):.6e} Hz lies in a stop band",
                    mode=name,
                )


@dataclass
class ValidityReport:
    flux_ratio: float
    current_ratio: float
    taylor_ok: bool
    undepleted_ok: bool
    messages: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.taylor_ok and self.undepleted_ok

    def warn(self):
        for msg in self.messages:
            warnings.warn(msg, ValidityWarning, stacklevel=2)


def validity_check(I_p: float, I_s: float, line: LineParams, modes: ModeSet) -> ValidityReport:
    """Check the operating point against the weak-nonlinearity and undepleted-pump limits.

    The junction flux swing is estimated as ``k_p a |A_p0|``.  The
    fourth-order expansion of the junction energy is trusted while that
    swing stays below 1.2 flux quanta (reduced) and the pump current below
    0.78 I_c; both limits are enforced.  The pump counts as undepleted while
    ``I_s < I_p / 10``.
    """
    if I_p < 0 or I_s < 0:
        raise DomainError("currents must be non-negative")
    amp = abs(current_to_amplitude(I_p, modes.omega_p, modes.p.z_c))
    flux_ratio = abs(modes.p.k) * line.a * amp / PHI0
    current_ratio = I_p / line.I_c
    messages = []
    flux_ok = flux_ratio < FLUX_RATIO_LIMIT
    current_ok = current_ratio < CURRENT_RATIO_LIMIT
    if not flux_ok:
        messages.append(
            f"junction flux swing {flux_ratio:.3f} phi0 >= {FLUX_RATIO_LIMIT}: "
            "higher-order junction nonlinearity is not negligible"
        )
    if not current_ok:
        messages.append(
            f"pump current {current_ratio:.3f} I_c >= {CURRENT_RATIO_LIMIT} I_c: "
            "higher-order junction nonlinearity is not negligible"
        )
    undepleted_ok = I_s < DEPLETION_RATIO * I_p
    if not undepleted_ok:
        messages.append(
            f"signal current {I_s:.3e} A >= I_p/10 = {DEPLETION_RATIO * I_p:.3e} A: "
            "pump depletion matters, use the full coupled-mode integrator"
        )
    return ValidityReport(
        flux_ratio=flux_ratio,
        current_ratio=current_ratio,
        taylor_ok=flux_ok and current_ok,
        undepleted_ok=undepleted_ok,
        messages=messages,
    )
