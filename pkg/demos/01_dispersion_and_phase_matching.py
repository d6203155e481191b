"""Dispersion of the junction line and what a resonator does to it.

Run with ``python demos/01_dispersion_and_phase_matching.py``; an SVG plot
lands in ``demos/out``.
"""

# %%
import math
from pathlib import Path

import numpy as np

from twpasim import ModeSet, default_line, default_resonator, wavenumber
from twpasim.circuit import in_stop_band
from twpasim.errors import SingularityError
from twpasim.output import write_svg_lines

OUT = Path(__file__).with_name("out")
GHZ = 2 * math.pi * 1e9

line = default_line()
res = default_resonator()
print(f"cell {line.a * 1e6:.0f} um, L_J0 {line.L_J0 * 1e12:.0f} pH, I_c {line.I_c * 1e6:.3f} uA")
print(f"junction plasma cutoff {line.cutoff / GHZ:.2f} GHz, resonator {res.omega_r / GHZ:.4f} GHz")

# %% The bare line bends away from the light line as the cutoff nears.
f = np.linspace(0.5, 12, 400)
k_bare = np.array([wavenumber(w, line).real for w in f * GHZ])
k_light = f * GHZ * math.sqrt(line.L_J0 * line.C_g) / line.a


def loaded(w):
    try:
        k = wavenumber(w, line, res)
    except SingularityError:
        return math.nan
    return math.nan if in_stop_band(w, line, res) else k.real


k_pm = np.array([loaded(w) for w in f * GHZ])
OUT.mkdir(exist_ok=True)
write_svg_lines(OUT / "dispersion.svg", f, {"k - k_linear, bare": k_bare - k_light, "k - k_linear, loaded": k_pm - k_light},
                xlabel="f [GHz]", ylabel="rad/m")

# %% Four-wave mixing wants 2 k_p = k_s + k_i.  On the bare line the mismatch is negative;
# the resonator bends the pump wavenumber upwards just below its pole.
for label, r in (("bare", None), ("loaded", res)):
    m = ModeSet.build(2 * math.pi * 5.97e9, 2 * math.pi * 5.0e9, line, r)
    print(f"{label:>6}: delta k = {m.delta_k.real:+9.3f} rad/m over {line.length * 1e3:.0f} mm "
          f"-> {m.delta_k.real * line.length:+.3f} rad")
