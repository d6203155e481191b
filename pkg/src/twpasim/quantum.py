"""Quantum coupling constants, quantum gain and output photon statistics.

Three-mode reduction (pump p, signal s, idler i with ``omega_i = 2 omega_p -
omega_s``) of the Josephson transmission-line Hamiltonian.  Full couplings
``xi_nm``, ``chi`` are frequencies [rad/s] that scale as ``1/l_q`` with the
quantisation length ``l_q``; replacing the pump operator by a classical flux
amplitude gives the primed constants [rad s^-1 Wb^-2], which do not depend
on ``l_q``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.constants import hbar
from scipy.special import gammaln, logsumexp, xlogy

from . import output
from .circuit import MODE_NAMES, LineParams, ModeSet, effective_capacitance
from .errors import DomainError, StopBandError, TruncationError

#: Default acceptable probability mass beyond the truncation.
TAIL_TOL = 1e-9
#: Bound on the neglected contribution to the mean photon number, relative to the mean.
MEAN_TAIL_TOL = 1e-12
#: Largest photon number a distribution may be extended to.
N_MAX_CAP = 8192
#: Above this amplification the closed forms are evaluated entirely in log space.
LOG_SPACE_KAPPA = 20.0
#: Probabilities below this are written as zero in heatmap tables.
HEATMAP_CLAMP = 1e-6

_PAIRS = ("pp", "ps", "pi", "ss", "si", "ii")


def lambda_xi(lam_n: float, lam_m: float) -> float:
    """Dispersion correction (2/3)(Lambda_n/Lambda_m + Lambda_m/Lambda_n - 2) >= 0."""
    return 2.0 / 3.0 * (lam_n / lam_m + lam_m / lam_n - 2.0)


def lambda_chi(line: LineParams, modes: ModeSet) -> float:
    """Dispersion correction of the four-wave mixing constant."""
    wp, ws, wi = modes.omega_p, modes.omega_s, modes.omega_i
    lp, ls, li = modes.p.lam, modes.s.lam, modes.i.lam
    bracket = (wp * ws * (-2 * lp + 5 * ls - 3 * li)
               + wp * wi * (-2 * lp - 3 * ls + 5 * li)
               + ws * wi * (4 * lp - 2 * ls - 2 * li))
    return line.L_J0 * line.C_J / 6.0 * bracket


@dataclass(frozen=True)
class QuantumCouplings:
    """Full three-mode couplings for quantisation length ``l_q``.

    ``xi`` maps an ordered pair name (``"ps"``, ``"si"``, ...) to
    ``xi_nm`` [rad/s]; lookups are symmetric, so ``xi_pair("s", "p")``
    equals ``xi_pair("p", "s")``.
    """

    xi: dict
    chi: float
    l_q: float
    lambda_xi: dict
    lambda_chi: float

    def xi_pair(self, n: str, m: str) -> float:
        key = n + m if n + m in self.xi else m + n
        return self.xi[key]

    def xi_reduced(self, n: str) -> float:
        """Pump-mode constant with the single-sum factor (4 - 3 delta_pn)."""
        base = self.xi_pair("p", n) / (1 if n == "p" else 2)
        return base * (1 if n == "p" else 4)


def _check_modes(modes: ModeSet):
    try:
        modes.check_pass_band()
    except StopBandError as exc:
        raise StopBandError(f"quantum couplings need propagating modes: {exc}", mode=exc.mode) from exc


def quantum_couplings_full(line: LineParams, modes: ModeSet, l_q: Optional[float] = None) -> QuantumCouplings:
    """Operator-level self/cross-modulation and mixing constants.

    Parameters
    ----------
    l_q : float, optional
        Quantisation length [m]; defaults to the line length.
    """
    if l_q is None:
        l_q = line.length
    if not l_q > 0:
        raise DomainError(f"quantisation length must be positive, got {l_q}")
    _check_modes(modes)
    L = line.inductance_per_length
    lw = {n: modes[n].lam * modes[n].omega for n in MODE_NAMES}
    lam = {n: modes[n].lam for n in MODE_NAMES}
    xi, lxi = {}, {}
    for pair in _PAIRS:
        n, m = pair
        lxi[pair] = lambda_xi(lam[n], lam[m])
        mult = 1 if n == m else 2
        xi[pair] = hbar * lw[n] * lw[m] * mult * (1 + lxi[pair]) / (16 * line.I_c**2 * L * l_q)
    lchi = lambda_chi(line, modes)
    chi = hbar * lw["p"] * math.sqrt(lw["s"] * lw["i"]) * (1 + lchi) / (8 * line.I_c**2 * L * l_q)
    return QuantumCouplings(xi=xi, chi=chi, l_q=l_q, lambda_xi=lxi, lambda_chi=lchi)


def pump_capacitance_per_length(line: LineParams, modes: ModeSet):
    """Capacitance per unit length seen by the pump (effective value with resonators)."""
    return effective_capacitance(modes.omega_p, line, modes.resonator) / line.a


def pump_photon_scale(line: LineParams, modes: ModeSet, l_q: float):
    """|a_p|^2 / |A_p|^2 = omega_p C l_q / (2 hbar) for the operator-to-amplitude map."""
    return modes.omega_p * pump_capacitance_per_length(line, modes) * l_q / (2 * hbar)


def operator_to_amplitude(a_p, line: LineParams, modes: ModeSet, l_q: float):
    """Classical flux amplitude matching the pump operator eigenvalue ``a_p``."""
    return 1j * a_p / np.sqrt(pump_photon_scale(line, modes, l_q))


def amplitude_to_operator(A_p, line: LineParams, modes: ModeSet, l_q: float):
    return -1j * np.sqrt(pump_photon_scale(line, modes, l_q)) * A_p


@dataclass(frozen=True)
class ClassicalPumpCouplings:
    """Signal/idler constants with the pump treated as a classical amplitude.

    Amplitude-dependent quantities (``delta_omega``, ``g_t``, ``kappa``)
    are methods taking ``|A_p0|^2`` in Wb^2.
    """

    xi_p: complex
    xi_s: complex
    xi_i: complex
    chi: complex

    def delta_omega(self, pump_sq: float):
        """(4 xi'_p - xi'_s - xi'_i) |A_p0|^2 [rad/s]."""
        return (4 * self.xi_p - self.xi_s - self.xi_i) * pump_sq

    def g_t(self, pump_sq: float) -> complex:
        dw = self.delta_omega(pump_sq)
        return cmath.sqrt(abs(self.chi) ** 2 * pump_sq**2 - (dw / 2) ** 2)

    def rate(self, pump_sq: float):
        """chi' |A_p0|^2, the two-mode squeezing rate [rad/s]."""
        return self.chi * pump_sq

    def kappa(self, pump_sq: float, t: float):
        return self.chi * pump_sq * t


def classical_pump_couplings(line: LineParams, modes: ModeSet) -> ClassicalPumpCouplings:
    """Primed constants from their closed forms in ``k_p`` (no ``l_q`` involved).

    With resonators ``k_p`` is the loaded wavenumber.
    """
    _check_modes(modes)
    L = line.inductance_per_length
    kp2 = modes.p.k**2 if modes.resonator is not None else modes.p.k.real**2
    lam_p = modes.p.lam
    vals = {}
    for n in MODE_NAMES:
        lam_n = modes[n].lam
        mult = 1 if n == "p" else 4
        vals[n] = kp2 * lam_n * modes[n].omega * mult * (1 + lambda_xi(lam_p, lam_n)) / (32 * line.I_c**2 * L**2)
    lchi = lambda_chi(line, modes)
    chi = kp2 * math.sqrt(modes.s.lam * modes.omega_s * modes.i.lam * modes.omega_i) * (1 + lchi) / (
        16 * line.I_c**2 * L**2)
    return ClassicalPumpCouplings(xi_p=vals["p"], xi_s=vals["s"], xi_i=vals["i"], chi=chi)


def classical_pump_couplings_from_full(qc: QuantumCouplings, line: LineParams,
                                       modes: ModeSet) -> ClassicalPumpCouplings:
    """Primed constants obtained by substituting the pump amplitude map into ``qc``.

    Agrees with :func:`classical_pump_couplings` for any ``qc.l_q``.
    """
    scale = pump_photon_scale(line, modes, qc.l_q)
    return ClassicalPumpCouplings(
        xi_p=qc.xi_reduced("p") * scale,
        xi_s=qc.xi_reduced("s") * scale,
        xi_i=qc.xi_reduced("i") * scale,
        chi=qc.chi * scale,
    )


def delta_omega_and_gt(cpc: ClassicalPumpCouplings, pump_sq: float):
    """Return ``(Delta Omega, g_t)`` for pump intensity ``|A_p0|^2``."""
    return cpc.delta_omega(pump_sq), cpc.g_t(pump_sq)


def _sinhc(g, t):
    x = g * t
    if abs(x) < 1e-6:
        return t * (1 + x * x / 6)
    return cmath.sinh(x) / g


def gain_quantum(n_s0: float, n_i0: float, corr_si: complex, cpc: ClassicalPumpCouplings,
                 pump_sq: float, t_T: float) -> float:
    """Signal photon-number gain <n_s(t_T)> / <n_s(0)>.

    The idler term carries ``<n_i0> + 1`` (amplified vacuum), and
    ``corr_si = <a_s a_i>`` at the input drives the interference term.
    """
    if n_s0 <= 0:
        raise ZeroDivisionError("quantum gain is undefined for an empty signal mode")
    dw, g = delta_omega_and_gt(cpc, pump_sq)
    sh = _sinhc(g, t_T)
    direct = cmath.cosh(g * t_T) + 0.5j * dw * sh
    coup = cpc.chi * pump_sq * sh
    term1 = abs(direct) ** 2
    term2 = (n_i0 + 1) / n_s0 * abs(coup) ** 2
    cross = -1j * corr_si * direct * np.conj(coup)
    term3 = 2 * cross.real / n_s0
    return float(term1 + term2 + term3)


def transit_time(l_T: float, modes: ModeSet) -> float:
    """Time l_T k_s / omega_s the signal spends on a line of length ``l_T``."""
    if modes.s.stop_band:
        raise StopBandError("signal mode lies in a stop band; transit time undefined", mode="s")
    return l_T * modes.s.k.real / modes.omega_s


def _log_tanh_cosh(kappa: float):
    """(log tanh kappa, log cosh kappa), accurate for large kappa."""
    e = math.exp(-2 * kappa)
    log_cosh = kappa + math.log1p(e) - math.log(2)
    if kappa == 0:
        return -math.inf, 0.0
    if kappa > LOG_SPACE_KAPPA:
        return math.log1p(-e) - math.log1p(e), log_cosh
    return math.log(math.tanh(kappa)), log_cosh


@dataclass
class PhotonDistribution:
    """Signal photon-number probabilities ``probabilities[N]`` for N = 0..n_max."""

    probabilities: np.ndarray
    kappa: float
    input_kind: str
    alpha: complex = 0.0

    @property
    def n_max(self) -> int:
        return len(self.probabilities) - 1

    @property
    def total(self) -> float:
        return math.fsum(self.probabilities)

    @property
    def tail(self) -> float:
        """Probability mass missing from the truncated vector."""
        return max(0.0, 1.0 - self.total)

    def mean(self) -> float:
        return math.fsum(np.arange(len(self.probabilities)) * self.probabilities)

    def to_csv(self, path):
        output.write_csv(path, ["N", "probability"], zip(range(len(self.probabilities)), self.probabilities))


def _fock_log_probs(kappa, n):
    lt, lc = _log_tanh_cosh(kappa)
    N = np.arange(n + 1, dtype=float)
    with np.errstate(divide="ignore"):
        logp = np.log(N) - 4 * lc
    if kappa == 0:
        logp = np.where(N == 1, 0.0, -np.inf)
    else:
        logp = logp + 2 * (N - 1) * lt
    return logp


def _coherent_log_probs(alpha, kappa, n, block=256):
    lt, lc = _log_tanh_cosh(kappa)
    a2 = abs(alpha) ** 2
    logp = np.empty(n + 1)
    for start in range(0, n + 1, block):
        N = np.arange(start, min(start + block, n + 1), dtype=float)[:, None]
        k = np.arange(int(N[-1, 0]) + 1, dtype=float)[None, :]
        m = N - k
        valid = m >= 0
        mm = np.where(valid, m, 0.0)
        terms = (xlogy(k, a2) - 2 * (1 + k) * lc
                 + gammaln(N + 1) - gammaln(k + 1) - gammaln(mm + 1) - gammaln(k + 1))
        if kappa == 0:
            terms = np.where(mm == 0, terms, -np.inf)
        else:
            terms = terms + 2 * mm * lt
        terms = np.where(valid, terms, -np.inf)
        logp[start: start + len(N)] = logsumexp(terms, axis=1) - a2
    return logp


def _grow(log_probs, n_max, tail_tol):
    """Double the truncation until the mass tail is below ``tail_tol`` and the mean is converged."""
    n = max(int(n_max), 1)
    while True:
        p = np.exp(log_probs(n))
        tail = 1.0 - math.fsum(p)
        mean = max(1.0, float(np.dot(np.arange(n + 1), p)))
        if tail < tail_tol and n * max(tail, 0.0) < MEAN_TAIL_TOL * mean:
            return p
        if n >= N_MAX_CAP:
            raise TruncationError(
                f"photon distribution needs more than {N_MAX_CAP} levels (tail {tail:.3e})")
        n = min(2 * n, N_MAX_CAP)


def fock_output_distribution(kappa: float, n_max: int = 32, tail_tol: float = TAIL_TOL) -> PhotonDistribution:
    """Signal statistics after amplifying a single signal photon with the idler in vacuum.

    ``n_max`` is a starting truncation; it is doubled until the neglected
    probability (and its contribution to the mean) is below ``tail_tol``.
    """
    if kappa < 0:
        raise DomainError(f"amplification kappa must be non-negative, got {kappa}")
    p = _grow(lambda n: _fock_log_probs(kappa, n), n_max, tail_tol)
    return PhotonDistribution(p, kappa, "fock")


def coherent_output_distribution(alpha: complex, kappa: float, n_max: int = 32,
                                 tail_tol: float = TAIL_TOL) -> PhotonDistribution:
    """Signal statistics for a coherent signal ``alpha`` and idler vacuum."""
    if kappa < 0:
        raise DomainError(f"amplification kappa must be non-negative, got {kappa}")
    p = _grow(lambda n: _coherent_log_probs(alpha, kappa, n), max(n_max, int(4 * abs(alpha) ** 2)), tail_tol)
    return PhotonDistribution(p, kappa, "coherent", alpha)


def fock_mean(kappa: float) -> float:
    return math.cosh(kappa) ** 2 + math.sinh(kappa) ** 2


def coherent_mean(alpha: complex, kappa: float) -> float:
    return abs(alpha) ** 2 * math.cosh(kappa) ** 2 + math.sinh(kappa) ** 2


@dataclass
class Heatmap:
    """Output statistics over a grid of amplifications (rows N = 0..n_max per kappa)."""

    kappa: np.ndarray
    gain: np.ndarray
    probabilities: np.ndarray  # shape (len(kappa), n_max + 1), clamped
    mean: np.ndarray

    def to_csv(self, path):
        gain_db = output.to_db(self.gain)
        rows = []
        for j, k in enumerate(self.kappa):
            for N, p in enumerate(self.probabilities[j]):
                rows.append((float(k), float(gain_db[j]), N, float(p)))
        output.write_csv(path, ["kappa", "gain_db", "N", "probability"], rows)


def distribution_heatmap(input_kind: str, kappa_grid, n_max: int, alpha: complex = 1.0) -> Heatmap:
    """Tabulate output distributions for ``input_kind`` in {"fock", "coherent"}.

    Probabilities below ``HEATMAP_CLAMP`` are set to zero.  The gain column
    is the mean output photon number divided by the input mean.
    """
    kappa_grid = np.asarray(kappa_grid, dtype=float)
    if np.any(np.diff(kappa_grid) <= 0):
        raise DomainError("kappa grid must be strictly ascending")
    if input_kind not in ("fock", "coherent"):
        raise DomainError(f"unknown input kind {input_kind!r}")
    probs = np.zeros((len(kappa_grid), n_max + 1))
    means, gains = np.empty(len(kappa_grid)), np.empty(len(kappa_grid))
    for j, k in enumerate(kappa_grid):
        if input_kind == "fock":
            d = fock_output_distribution(k)
            n_in = 1.0
        else:
            d = coherent_output_distribution(alpha, k)
            n_in = abs(alpha) ** 2
        p = d.probabilities[: n_max + 1]
        probs[j, : len(p)] = np.where(p < HEATMAP_CLAMP, 0.0, p)
        means[j] = d.mean()
        gains[j] = means[j] / n_in
    return Heatmap(kappa=kappa_grid, gain=gains, probabilities=probs, mean=means)
