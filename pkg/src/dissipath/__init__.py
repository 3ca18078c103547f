"""Thermodynamics of a damped free quantum particle in a power-law bath.

The bath has spectral density ``J(w) = M gamma w^s / (1 + w^2)^p`` (frequencies
in units of the cutoff).  The main entry points are :class:`BathSpec`,
:func:`kernel` for the Laplace-transformed damping kernel and
:func:`specific_heat` for ``C(T)`` in units of ``k_B``.
"""

__version__ = "0.1.0"

from .bath import (
    BathSpec,
    KernelValue,
    LowFreqExpansion,
    bath_mass,
    critical_gamma,
    kernel,
    kernel_quadrature,
    large_z_coefficient,
    low_freq_expansion,
    mass_renormalization_continuation,
    spectral_density,
)
from .errors import (
    CancellationError,
    DissipathError,
    DomainError,
    QuadratureError,
    SeriesError,
    SingularInputError,
    ValidityError,
)
from .thermo import (
    HeatCapacityResult,
    Method,
    Regime,
    ValidityConfig,
    XiSample,
    c_ho,
    log_partition,
    specific_heat,
    specific_heat_high_T,
    specific_heat_lnz_oracle,
    specific_heat_low_T,
    specific_heat_matsubara,
    specific_heat_spectral,
    sum_rule_check,
    xi,
)
