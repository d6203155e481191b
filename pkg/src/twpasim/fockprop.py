"""Truncated two-mode Fock-space evolution under a classical-pump squeezing Hamiltonian.

The interaction-picture Hamiltonian is
``H = -hbar r (a_s^+ a_i^+ exp(-i dW t) + h.c.)`` with rate ``r = chi' |A_p|^2``
and phase mismatch ``dW``.  Photons are created and destroyed in pairs, so
every diagonal ``n_s - n_i = d`` of the coefficient array evolves
independently as a one-dimensional chain; the propagator works on those
chains and only materialises the dense ``(n_s, n_i)`` array at its ends.

Quadratures follow ``X = (a + a^+)/sqrt(2)``, ``P = (a - a^+)/(i sqrt(2))``,
so the vacuum variance is 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from .errors import DomainError, TruncationError
from .quantum import PhotonDistribution

#: Number of Taylor terms used for each sub-step exponential.
TAYLOR_TERMS = 12
#: Upper bound on ||G dt|| for one Taylor sub-step.
STEP_NORM = 0.1
#: Occupancy allowed in the outermost level of a returned state.
GUARD = 1e-6
#: Occupancy allowed at the end of the internal working chains; much smaller than
#: GUARD so that coefficients inside the returned block are unaffected by truncation.
CHAIN_TOL = 1e-13
COHERENT_TAIL = 1e-12


def default_dims(kappa: float) -> int:
    """Starting dimension per mode for an amplification ``kappa``."""
    if kappa <= 1:
        return 32
    if kappa <= 2:
        return 128
    raise DomainError(f"no default truncation for kappa = {kappa} > 2; pass dims explicitly")


@dataclass(frozen=True)
class TwoModeState:
    """Pure signal/idler state ``sum c[n_s, n_i] |n_s>|n_i>`` at interaction-picture time ``time``.

    ``leakage`` records the probability that evolution carried outside
    ``dims``; ``norm() + leakage`` stays 1.
    """

    coeffs: np.ndarray
    time: float = 0.0
    leakage: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 2 or min(c.shape) < 2:
            raise DomainError(f"state needs a 2-D coefficient array with dims >= 2, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @property
    def dims(self):
        return self.coeffs.shape

    @classmethod
    def fock(cls, n_s: int, n_i: int, dims=(32, 32)) -> "TwoModeState":
        c = np.zeros(dims, dtype=complex)
        c[n_s, n_i] = 1.0
        return cls(c)

    @classmethod
    def coherent(cls, alpha: complex, n_i: int = 0, dims=None) -> "TwoModeState":
        """Coherent signal ``alpha`` times idler Fock state ``n_i``, cut at a Poisson tail of 1e-12."""
        mu = abs(alpha) ** 2
        n_top = int(poisson.isf(COHERENT_TAIL, mu)) + 1 if mu > 0 else 0
        if dims is None:
            dims = (max(n_top + 1, 2), max(n_i + 1, 2))
        n = np.arange(min(n_top + 1, dims[0]))
        amp = np.zeros(dims[0], dtype=complex)
        log_mag = -mu / 2 + n * math.log(abs(alpha) if mu > 0 else 1.0) - 0.5 * np.array([math.lgamma(k + 1) for k in n])
        amp[: len(n)] = np.exp(log_mag) * np.exp(1j * np.angle(alpha) * n) if mu > 0 else (n == 0)
        c = np.zeros(dims, dtype=complex)
        c[:, n_i] = amp
        return cls(c)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def edge_occupancy(self) -> float:
        """Probability in the highest signal row plus the highest idler column."""
        p = np.abs(self.coeffs) ** 2
        return float(p[-1, :].sum() + p[:, -1].sum() - p[-1, -1])

    def block(self, ds: int, di: int) -> np.ndarray:
        """Leading ``ds x di`` coefficients, zero-padded if the state is smaller."""
        out = np.zeros((ds, di), dtype=complex)
        a, b = min(ds, self.dims[0]), min(di, self.dims[1])
        out[:a, :b] = self.coeffs[:a, :b]
        return out

    def signal_marginal(self) -> PhotonDistribution:
        p = np.sum(np.abs(self.coeffs) ** 2, axis=1)
        return PhotonDistribution(p, float("nan"), "state")

    def idler_marginal(self) -> PhotonDistribution:
        p = np.sum(np.abs(self.coeffs) ** 2, axis=0)
        return PhotonDistribution(p, float("nan"), "state")


class _Chains:
    """Coefficients regrouped by diagonal ``d = n_s - n_i``.

    ``c[k, j]`` is the amplitude of ``|j + max(d,0), j + max(-d,0)>`` for
    ``d = offsets[k]``; the pair-creation matrix element from ``j`` to
    ``j + 1`` is ``w[k, j] = sqrt((j + 1)(j + 1 + |d|))``.
    """

    def __init__(self, offsets, length):
        self.offsets = np.asarray(offsets, dtype=int)
        self.length = int(length)
        j = np.arange(self.length - 1)
        self.w = np.sqrt((j + 1)[None, :] * (j + 1 + np.abs(self.offsets)[:, None]))
        self.c = np.zeros((len(self.offsets), self.length), dtype=complex)

    @classmethod
    def from_dense(cls, coeffs, length):
        ds, di = coeffs.shape
        nz = np.argwhere(coeffs != 0)
        if len(nz) == 0:
            offsets = [0]
        else:
            d = nz[:, 0] - nz[:, 1]
            offsets = list(range(int(d.min()), int(d.max()) + 1))
        ch = cls(offsets, length)
        for k, d in enumerate(ch.offsets):
            diag = np.diagonal(coeffs, offset=-d)
            m = min(len(diag), length)
            ch.c[k, :m] = diag[:m]
        return ch

    def to_dense(self, ds, di):
        out = np.zeros((ds, di), dtype=complex)
        for k, d in enumerate(self.offsets):
            j = np.arange(self.length)
            ns, ni = j + max(d, 0), j + max(-d, 0)
            keep = (ns < ds) & (ni < di)
            out[ns[keep], ni[keep]] = self.c[k, keep]
        return out

    def raise_pair(self, c):
        out = np.zeros_like(c)
        out[:, 1:] = self.w * c[:, :-1]
        return out

    def lower_pair(self, c):
        out = np.zeros_like(c)
        out[:, :-1] = self.w * c[:, 1:]
        return out

    def top_occupancy(self) -> float:
        return float(np.sum(np.abs(self.c[:, -1]) ** 2))

    def bound(self) -> float:
        """Upper bound on the operator norm of a^+a^+ (and a a) on the chains."""
        return float(self.w.max()) if self.w.size else 0.0


def _chain_length_estimate(state: TwoModeState, kappa: float) -> int:
    """Chain length at which a tanh^2(kappa) geometric tail falls below CHAIN_TOL."""
    nz = np.argwhere(state.coeffs != 0)
    support = int(nz.max()) + 1 if len(nz) else 1
    t2 = math.tanh(abs(kappa)) ** 2
    need = support + 1
    if 0 < t2 < 1:
        need += math.log(CHAIN_TOL) / math.log(t2)
    elif t2 >= 1:
        need = float("inf")
    n = 16
    while n < min(need, 1 << 20):
        n *= 2
    return n


def _taylor_step(ch: _Chains, c, rate, phase, dt):
    """c <- exp(i rate dt (e^{-i phase} a^+a^+ + e^{i phase} a a)) c, sub-stepped."""
    norm = 2 * abs(rate) * ch.bound() * abs(dt)
    n_sub = max(1, math.ceil(norm / STEP_NORM))
    h = dt / n_sub
    wu = (1j * rate * h * np.exp(-1j * phase)) * ch.w
    wd = (1j * rate * h * np.exp(1j * phase)) * ch.w
    inv = [1.0 / m for m in range(1, TAYLOR_TERMS + 1)]
    term = np.empty_like(c)
    for _ in range(n_sub):
        acc = c.copy()
        prev = c
        for f in inv:
            up = wu * prev[:, :-1]
            down = wd * prev[:, 1:]
            term[:, 0] = down[:, 0]
            term[:, 1:-1] = up[:, :-1] + down[:, 1:]
            term[:, -1] = up[:, -1]
            term *= f
            acc += term
            prev = term.copy()
        c = acc
    return c


def _output_dims(state0: TwoModeState, ch: _Chains, max_dim: int):
    """Smallest doubling of the input dims whose edge occupancy is below GUARD."""
    ds, di = state0.dims
    while True:
        dense = ch.to_dense(ds, di)
        p = np.abs(dense) ** 2
        edge = p[-1, :].sum() + p[:, -1].sum() - p[-1, -1]
        if edge < GUARD:
            return dense
        if max(ds, di) >= max_dim:
            return dense
        ds, di = min(2 * ds, max_dim), min(2 * di, max_dim)


def _finish(state0, ch, t_end, max_dim, leakage_tol):
    dense = _output_dims(state0, ch, max_dim)
    leakage = max(0.0, state0.norm() - float(np.sum(np.abs(dense) ** 2)))
    if leakage > leakage_tol:
        raise TruncationError(
            f"truncation leakage {leakage:.3e} exceeds {leakage_tol:.1e}; increase max_dim (now {max_dim})")
    return TwoModeState(dense, t_end, state0.leakage + leakage)


def propagate(state0: TwoModeState, rate: float, delta_omega: float, t: float, n_steps: int = 200,
              max_dim: int = 4096, leakage_tol: float = 1e-4) -> TwoModeState:
    """Evolve ``state0`` for a time ``t`` under the co-rotating squeezing Hamiltonian.

    Each of the ``n_steps`` steps freezes the mismatch phase at the step
    midpoint (second order in the step), and the resulting exponential is
    applied with a 12-term Taylor series over sub-steps of norm < 0.1.
    For ``delta_omega = 0`` the result does not depend on ``n_steps``.

    The working space is sized a priori from ``kappa = rate t`` and doubled
    until the outermost chain level holds less than 1e-13; the returned
    state starts from ``state0.dims`` and is doubled until its edge
    occupancy is below 1e-6.

    Raises
    ------
    TruncationError
        If probability lost to the truncation exceeds ``leakage_tol``.
    """
    n_steps = int(n_steps)
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps}")
    length = max(_chain_length_estimate(state0, rate * t), 2 * max(state0.dims))
    t0 = state0.time
    dt = t / n_steps
    while True:
        ch = _Chains.from_dense(state0.coeffs, length)
        c = ch.c
        if rate != 0 and t != 0:
            for k in range(n_steps):
                phase = delta_omega * (t0 + (k + 0.5) * dt)
                c = _taylor_step(ch, c, rate, phase, dt)
        ch.c = c
        done = ch.top_occupancy() < CHAIN_TOL or length >= max_dim
        if done:
            dense = _output_dims(state0, ch, max_dim)
            # the chains must reach well past the returned block, where the
            # reflection off the truncation boundary is still felt
            if 2 * max(dense.shape) <= length or length >= max_dim:
                break
        length *= 2
    return _finish(state0, ch, t0 + t, max_dim, leakage_tol)


def _series(apply, c, coef, max_terms):
    """sum_m (coef^m / m!) apply^m c, stopping once terms are negligible."""
    acc = c.copy()
    term = c
    for m in range(1, max_terms + 1):
        term = coef * apply(term) / m
        acc += term
        if not np.any(np.abs(term) > 1e-18 * max(1.0, np.abs(acc).max())):
            break
    return acc


def squeeze_factored(state0: TwoModeState, kappa: float, max_dim: int = 4096,
                     leakage_tol: float = 1e-4) -> TwoModeState:
    """Apply the exact zero-mismatch propagator in normally ordered factored form.

    ``exp(i tanh(k) a^+a^+) exp(-ln cosh(k) (1 + n_s + n_i)) exp(i tanh(k) a a)``,
    each factor evaluated by repeated ladder-operator action.
    """
    tau = math.tanh(kappa)
    log_c = math.log(math.cosh(kappa))
    length = _chain_length_estimate(state0, kappa)
    while True:
        ch = _Chains.from_dense(state0.coeffs, length)
        c = _series(ch.lower_pair, ch.c, 1j * tau, length)
        j = np.arange(length)[None, :]
        n_tot = 2 * j + np.abs(ch.offsets)[:, None]
        c = c * np.exp(-log_c * (1 + n_tot))
        c = _series(ch.raise_pair, c, 1j * tau, length)
        ch.c = c
        if ch.top_occupancy() < CHAIN_TOL or length >= max_dim:
            break
        length *= 2
    return _finish(state0, ch, state0.time, max_dim, leakage_tol)


def moments(state: TwoModeState) -> dict:
    """Photon-number and quadrature moments of a (normalised) state.

    Returns keys ``n_s``, ``n_i``, ``var_n_s``, ``a_s_a_i`` (complex
    ``<a_s a_i>``), ``var_x_s`` and ``var_p_s``.
    """
    c = state.coeffs
    p = np.abs(c) ** 2
    ns = np.arange(c.shape[0])[:, None]
    ni = np.arange(c.shape[1])[None, :]
    n_s = float(np.sum(ns * p))
    n_i = float(np.sum(ni * p))
    var_n = float(np.sum(ns**2 * p)) - n_s**2
    ss = np.sqrt(np.arange(c.shape[0]))
    si = np.sqrt(np.arange(c.shape[1]))
    # <a_s a_i> = sum conj(c[n-1, m-1]) sqrt(n m) c[n, m]
    asai = complex(np.sum(np.conj(c[:-1, :-1]) * (ss[1:, None] * si[None, 1:]) * c[1:, 1:]))
    a = complex(np.sum(np.conj(c[:-1, :]) * ss[1:, None] * c[1:, :]))
    a2 = complex(np.sum(np.conj(c[:-2, :]) * (ss[2:] * ss[1:-1])[:, None] * c[2:, :])) if c.shape[0] > 2 else 0j
    var_x = a2.real + n_s + 0.5 - 2 * a.real**2
    var_p = -a2.real + n_s + 0.5 - 2 * a.imag**2
    return {"n_s": n_s, "n_i": n_i, "var_n_s": var_n, "a_s_a_i": asai, "var_x_s": var_x, "var_p_s": var_p}
