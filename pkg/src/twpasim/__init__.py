"""Josephson travelling-wave parametric amplifier modelling.

Modules
-------
circuit
    Line and resonator parameters, dispersion, impedance, validity limits.
cme
    Classical coupled-mode constants, closed-form gain and RK4 integration.
quantum
    Quantum coupling constants, quantum gain and output photon statistics.
fockprop
    Truncated two-mode Fock-space propagation.
correspondence
    Classicalised spatial Heisenberg equations and comparison with ``cme``.
cli
    ``twpa-sim`` command-line driver.
"""

from .circuit import (
    PHI0,
    LineParams,
    ModeSet,
    ResonatorParams,
    ValidityReport,
    char_impedance,
    default_line,
    default_resonator,
    effective_capacitance,
    effective_impedance,
    lambda_factor,
    phase_velocity,
    validity_check,
    wavenumber,
)
from .cme import (
    ClassicalCouplings,
    ModeAmplitudes,
    analytic_evolution,
    classical_couplings,
    gain_analytic,
    gain_sweep,
    integrate_cme,
)
from .correspondence import ClassicalisedCouplings, classicalised_couplings, compare_gain, integrate_heisenberg
from .errors import (
    ConfigError,
    DivergenceError,
    DomainError,
    SingularityError,
    StopBandError,
    TruncationError,
    TWPAError,
    ValidityWarning,
)
from .fockprop import TwoModeState, moments, propagate, squeeze_factored
from .quantum import (
    ClassicalPumpCouplings,
    PhotonDistribution,
    QuantumCouplings,
    classical_pump_couplings,
    coherent_output_distribution,
    fock_output_distribution,
    gain_quantum,
    quantum_couplings_full,
    transit_time,
)

__version__ = "0.1.0"
