"""Comparing classical coupled-mode gain with the classicalised quantum equations."""

# %%
import math

import numpy as np

from twpasim import compare_gain, default_line, default_resonator
from twpasim.output import to_db

GHZ = 2 * math.pi * 1e9
line, res = default_line(), default_resonator()
grid = np.linspace(3, 9, 601) * GHZ
w_p, I_p = 5.97 * GHZ, 0.5 * line.I_c

# %% Without resonators the two descriptions differ by a fraction of a dB.
t = compare_gain(grid, line, w_p, I_p)
print(f"bare line: max |delta| {t.max_abs_delta_db:.3f} dB")

# %% With resonators the gain is an order of magnitude larger and so is the difference.
t = compare_gain(grid, line, w_p, I_p, res)
g = to_db(t.gain_classical)
peak = int(np.nanargmax(g))
print(f"loaded line: peak gain {g[peak]:.2f} dB, delta there {t.delta_db[peak]:+.3f} dB")

# %% The gap is a dispersion effect: it closes as the junction capacitance goes to zero.
for c in (329e-15, 100e-15, 10e-15, 0.0):
    d = compare_gain(grid, line.replace(C_J=c), w_p, I_p).max_abs_delta_db
    print(f"C_J = {c * 1e15:5.0f} fF: max |delta| {d:.2e} dB")
