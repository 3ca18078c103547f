"""
The damping kernel of a power-law bath
======================================

The bath is described by ``J(w) = M gamma w^s / (1 + w^2)^p``.  Its
Laplace-transformed memory kernel ``gamma_hat(z)`` has a terminating
closed form, which we compare here against direct quadrature of its
defining frequency integral.
"""

import numpy as np

from dissipath import BathSpec, kernel, kernel_quadrature, low_freq_expansion, spectral_density

# %%
# A strongly damped Ohmic bath with a p=2 cutoff.  For s=1, p=2 the kernel
# is the rational function gamma (z + 2) / (2 (1 + z)^2).
spec = BathSpec(gamma=3.0, s=1.0, p=2)
for z in (0.01, 0.1, 1.0, 10.0):
    closed = kernel(spec, z).value
    quad = kernel_quadrature(spec, z)
    print(f"z={z:6g}  closed={closed:.15f}  quadrature={quad:.15f}")

# %%
# On the imaginary axis the real part is fixed by the spectral density,
# Re gamma_hat(-i w) = J(w) / (M w).
omega = 0.7
v = kernel(spec, -1j * omega).value
print("Re kernel:", v.real, " J/(M w):", spectral_density(spec, omega) / omega)

# %%
# Small-z behaviour: a fractional power, then a linear term whose
# coefficient is the relative mass shift dM/M.
for s in (0.5, 1.0, 1.5, 3.0):
    lf = low_freq_expansion(BathSpec(1.0, s, 2))
    print(f"s={s:3g}  frac coefficient={lf.frac_coeff!s:>22}  dM/M={lf.dm_over_m:.6f}")

# %%
# At s=2 the two leading terms merge into z ln z; a nearby s gives nearly
# the same kernel.
z = np.array([1e-3, 1e-2])
for s in (2.0, 2.0 + 1e-5):
    print(s, [kernel(BathSpec(3.0, s, 2), x).value for x in z])
