"""Coupled-mode gain: the closed form, the full integration and a frequency sweep."""

# %%
import math
from pathlib import Path

import numpy as np

from twpasim import (
    ModeAmplitudes,
    ModeSet,
    classical_couplings,
    default_line,
    default_resonator,
    gain_analytic,
    gain_sweep,
    integrate_cme,
)
from twpasim.circuit import current_to_amplitude
from twpasim.output import to_db, write_svg_lines

OUT = Path(__file__).with_name("out")
GHZ = 2 * math.pi * 1e9
line, res = default_line(), default_resonator()
w_p, w_s = 5.97 * GHZ, 5.0 * GHZ

# %% Single operating point: pump at half the critical current, a weak signal, no idler.
modes = ModeSet.build(w_p, w_s, line)
cc = classical_couplings(line, modes)
A_p = current_to_amplitude(0.5 * line.I_c, w_p, modes.p.z_c)
A_s = current_to_amplitude(1e-6 * line.I_c, w_s, modes.s.z_c)
G_cf = gain_analytic(A_s, 0.0, A_p, cc, line.length)
traj = integrate_cme(ModeAmplitudes(A_p, A_s, 0.0), cc, line.length)
print(f"closed form {to_db(G_cf):.4f} dB, RK4 {to_db(traj.signal_gain()):.4f} dB")

# %% Raising the signal to a tenth of the pump starts to drain it.
A_big = current_to_amplitude(0.05 * line.I_c, w_s, modes.s.z_c)
strong = integrate_cme(ModeAmplitudes(A_p, A_big, 0.0), cc, line.length)
print(f"strong signal: gain {to_db(strong.signal_gain()):.3f} dB, "
      f"pump power left {abs(strong.A_p[-1]) ** 2 / abs(A_p) ** 2:.3f}")

# %% Sweep the signal across 3-9 GHz with and without the phase-matching resonators.
table = gain_sweep(np.linspace(3, 9, 601) * GHZ, line, w_p, 0.5 * line.I_c, res)
f = table.omega_s / GHZ
print(f"peak gain bare {np.nanmax(to_db(table.gain_nopm)):.2f} dB, "
      f"loaded {np.nanmax(to_db(table.gain_pm)):.2f} dB ({table.n_failed_pm} points in a stop band)")
OUT.mkdir(exist_ok=True)
write_svg_lines(OUT / "gain.svg", f, {"bare": to_db(table.gain_nopm), "loaded": to_db(table.gain_pm)},
                xlabel="f_s [GHz]", ylabel="gain [dB]")
