"""Integer factoring with a simulated Young's N-slit interferometer.

At the resonance wavelengths ``lambda_n = a**2 * n / R`` the self-image
spikes of an N-slit grating all have the same height exactly when the odd
integer ``n`` divides ``N``.  The package simulates the spike heights in the
point-slit limit and for finite slits, measures their RMS variation and turns
the zeros of that variation into a factorization.
"""

from slitfactor.analytic import (
    Model,
    SpikeSeries,
    delta_amplitude,
    delta_spike_series,
    factored_amplitude,
    periodic_kernel,
    phase_factor_f,
    phase_factor_f_reduced,
    sigma_brute,
)
from slitfactor.fresnel import (
    FresnelPair,
    detuning_curve,
    fresnel_cs,
    kirchhoff_field,
    kirchhoff_spike_series,
    pattern_samples,
    slit_averaged_series,
)
from slitfactor.grating import (
    GratingConfig,
    ReducedProblem,
    Resonance,
    dimensionless_view,
    reduce_even,
    resonance_wavelength,
    spike_position,
)
from slitfactor.stats import (
    FactorReport,
    ScanCurve,
    SlitWidthCurve,
    VariationStats,
    collapse_check,
    detect_divisors,
    factorize,
    scan,
    slit_width_sweep,
    trial_division,
    variation,
)

__version__ = "0.1.0"
