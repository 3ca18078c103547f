"""
Specific heat from two exact representations
============================================

The specific heat follows either from a sum over Matsubara frequencies or
from a frequency integral over the change of the bath oscillator density
weighted by the oscillator specific heat.  Both are evaluated here, along
with a finite-difference derivative of the partition function.
"""

import numpy as np

from dissipath import (
    BathSpec,
    specific_heat,
    specific_heat_lnz_oracle,
    specific_heat_matsubara,
    specific_heat_spectral,
    sum_rule_check,
)
from dissipath.svgplot import LinePlot

spec = BathSpec(gamma=3.0, s=1.0, p=2)

# %%
# Three routes to the same number.
for T in (0.1, 1.0, 10.0):
    m = specific_heat_matsubara(spec, T).value
    sp = specific_heat_spectral(spec, T).value
    lz = specific_heat_lnz_oracle(spec, T).value
    print(f"T={T:5g}  matsubara={m:.12f}  spectral={sp:.12f}  lnZ={lz:.12f}")

# %%
# The integral of the oscillator density change is (2 - s)/2 below s=2 and
# zero above, which fixes the zero-temperature value (s - 1)/2.
for s in (0.5, 1.0, 3.0):
    print("sum rule residual, s =", s, sum_rule_check(BathSpec(3.0, s, 2)))

# %%
# Strong damping makes C(T) negative at low temperature for s=1, weak
# damping does not.
Ts = np.logspace(-4, 2, 120)
plot = LinePlot(title="C(T), s=1, p=2", xlabel="T", ylabel="C", logx=True, legend="lower right")
for g in (0.3, 3.0):
    bath = BathSpec(g, 1.0, 2)
    plot.add(f"gamma={g:g}", Ts, [specific_heat(bath, T).value for T in Ts],
             style="dashed" if g < 1 else "solid")
plot.save("specific_heat_ohmic.svg")
print("wrote specific_heat_ohmic.svg")
