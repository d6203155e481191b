"""Photon statistics of the amplified signal, from closed forms and from Fock-space propagation."""

# %%
import math

import numpy as np

from twpasim import TwoModeState, coherent_output_distribution, fock_output_distribution, moments, propagate
from twpasim.fockprop import squeeze_factored

# %% A single input photon spreads over many numbers, with the mean growing as cosh^2 + sinh^2.
for kappa in (0.5, 1.0, 2.0):
    d = fock_output_distribution(kappa)
    top = np.argsort(d.probabilities)[::-1][:3]
    print(f"kappa {kappa}: mean {d.mean():8.3f}, most likely N = {', '.join(map(str, top))}")

# %% A coherent input keeps a Poisson-like bump that broadens as it is amplified.
for kappa in (0.0, 0.5, 1.0):
    d = coherent_output_distribution(2.0, kappa)
    N = np.arange(d.n_max + 1)
    var = float(np.dot(N**2, d.probabilities)) - d.mean() ** 2
    print(f"alpha 2, kappa {kappa}: mean {d.mean():7.3f}, Fano factor {var / d.mean():.3f}")

# %% The propagator and the normally ordered factorisation give the same state when matched.
s0 = TwoModeState.fock(1, 0)
a = propagate(s0, 1.0, 0.0, 1.0)
b = squeeze_factored(s0, 1.0)
print(f"max coefficient difference {np.abs(a.block(64, 64) - b.block(64, 64)).max():.1e}")

# %% A frequency mismatch throttles the growth.
for dw in (0.0, 1.0, 2.0, 4.0):
    n_s = moments(propagate(s0, 1.5, dw, 1.0))["n_s"]
    print(f"Delta Omega t = {dw}: <n_s> = {n_s:.4f}")
