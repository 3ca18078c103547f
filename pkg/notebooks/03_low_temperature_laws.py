"""
Low-temperature laws and the anomaly
====================================

Below the cutoff the specific heat follows power laws whose prefactor is
proportional to the renormalized mass ``M + dM``.  When ``dM/M < -1`` the
prefactor is negative and C decreases with rising temperature.
"""

import math

from dissipath import (
    BathSpec,
    critical_gamma,
    low_freq_expansion,
    specific_heat,
    specific_heat_low_T,
)

# %%
# Critical damping at which M + dM vanishes.
for s in (0.5, 1.0, 1.5):
    print(f"s={s}: gamma_c = {critical_gamma(s, 2):.6f}")

# %%
# Exact values against the leading law at T = 1e-4.
T = 1e-4
for g, s in ((3.0, 0.5), (0.3, 1.0), (3.0, 1.0), (3.0, 3.0)):
    spec = BathSpec(g, s, 2)
    exact = specific_heat(spec, T).value
    law = specific_heat_low_T(spec, T)
    print(f"gamma={g:3g} s={s:3g}  exact={exact:+.9f}  law={law.value:+.9f}  ({law.regime.value})")

# %%
# At the critical damping the leading power changes from T^(2-s) to T^(4-s).
spec = BathSpec(critical_gamma(0.5, 2), 0.5, 2)
for T in (1e-3, 1e-2):
    dev = specific_heat(spec, T).value + 0.25
    print(f"T={T:g}: C - (s-1)/2 = {dev:.3e}")

# %%
# The s=2 bath approaches 1/2 only logarithmically.
spec = BathSpec(3.0, 2.0, 2)
for T in (1e-3, 1e-6):
    print(f"T={T:g}: C = {specific_heat(spec, T).value:.6f}, "
          f"1/2 + 1/(2 ln T) = {0.5 + 1 / (2 * math.log(T)):.6f}")
print("dM/M for s=3:", low_freq_expansion(BathSpec(3.0, 3.0, 2)).dm_over_m)
