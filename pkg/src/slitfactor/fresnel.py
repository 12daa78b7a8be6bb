"""Finite-slit Fresnel/Kirchhoff model of the grating.

Each slit of width ``fill`` (in units of the period) contributes the chirp
integral ``int exp(i pi (xi - chi)**2 / n_eff) d xi`` over its aperture.  With
``u = (xi - chi) * sqrt(2 / n_eff)`` that integral is

    sqrt(n_eff / 2) * [E(u_hi) - E(u_lo)],    E(u) = C(u) + i S(u),

so the whole pattern reduces to evaluations of the Fresnel integrals.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from slitfactor.analytic import (
    Model,
    SpikeSeries,
    _check_odd,
    _window_sums,
    delta_spike_series,
    slit_indices,
    spike_offsets,
)

SERIES_LIMIT = 1.6
ASYMPTOTIC_LIMIT = 6.0
#: Evaluation points of the composite Simpson rule used for slit averages.
SLIT_AVERAGE_POINTS = 65

_SPLITTER = 134217729.0  # 2**27 + 1


class FresnelPair(NamedTuple):
    C: float
    S: float


class PatternSample(NamedTuple):
    chi: float
    intensity: float


def _half_pi_square_phase(x: np.ndarray):
    """``cos`` and ``sin`` of ``pi x**2 / 2`` with ``x**2`` reduced mod 4 first.

    ``x**2`` is formed as an exact hi + lo pair (Dekker) so the reduction
    loses nothing for large ``x``.
    """
    hi = x * x
    c = _SPLITTER * x
    xh = c - (c - x)
    xl = x - xh
    lo = ((xh * xh - hi) + 2 * xh * xl) + xl * xl
    reduced = np.fmod(hi, 4.0) + lo
    arg = 0.5 * np.pi * reduced
    return np.cos(arg), np.sin(arg)


def _series(x: np.ndarray) -> np.ndarray:
    # C + iS = sum_k (i pi x^2 / 2)^k / k! * x / (2k + 1)
    z = 0.5j * np.pi * x * x
    term = np.ones_like(z)
    total = x / 1.0 + 0j
    for k in range(1, 60):
        term = term * z / k
        total = total + term * x / (2 * k + 1)
    return total


def _continued_fraction(x: np.ndarray) -> np.ndarray:
    # Lentz evaluation of the complex erfc continued fraction, as in Numerical Recipes `frenel`
    tiny = 1e-300
    b = 1.0 - 1j * np.pi * x * x
    cc = np.full_like(b, 1.0 / tiny)
    h = d = 1.0 / b
    odd = -1
    for _ in range(2000):
        odd += 2
        a = -odd * (odd + 1)
        b = b + 4.0
        d = 1.0 / (a * d + b)
        cc = b + a / cc
        step = cc * d
        h = h * step
        if np.all(np.abs(step - 1.0) < 4e-16):
            break
    else:  # pragma: no cover - convergence is fast for x > 1.5
        raise RuntimeError("Fresnel continued fraction failed to converge")
    h = h * (x - 1j * x)
    cos_, sin_ = _half_pi_square_phase(x)
    return (0.5 + 0.5j) * (1.0 - (cos_ + 1j * sin_) * h)


def _asymptotic(x: np.ndarray) -> np.ndarray:
    y = np.pi * x * x
    inv = 1.0 / (y * y)
    f_sum = np.ones_like(x)
    g_sum = np.ones_like(x)
    f_term = np.ones_like(x)
    g_term = np.ones_like(x)
    for m in range(1, 16):
        f_term = -f_term * (4 * m - 3) * (4 * m - 1) * inv
        g_term = -g_term * (4 * m - 1) * (4 * m + 1) * inv
        f_sum = f_sum + f_term
        g_sum = g_sum + g_term
    f = f_sum / (np.pi * x)
    g = g_sum / (np.pi * y * x)
    cos_, sin_ = _half_pi_square_phase(x)
    return (0.5 + f * sin_ - g * cos_) + 1j * (0.5 - f * cos_ - g * sin_)


def fresnel_e(t) -> np.ndarray:
    """Complex Fresnel integral ``C(t) + i S(t)``, vectorized."""
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("Fresnel integrals need finite arguments")
    x = np.abs(t)
    out = np.empty(x.shape, dtype=complex)
    small = x <= SERIES_LIMIT
    large = x > ASYMPTOTIC_LIMIT
    middle = ~small & ~large
    if small.any():
        out[small] = _series(x[small])
    if middle.any():
        out[middle] = _continued_fraction(x[middle])
    if large.any():
        out[large] = _asymptotic(x[large])
    # odd symmetry applied by sign flip, so E(-t) == -E(t) bit for bit
    return np.where(t < 0, -out, out)


def fresnel_cs(t) -> FresnelPair:
    """Fresnel integrals ``C(t) = int_0^t cos(pi u^2/2) du`` and ``S(t)``.

    Power series for ``|t| <= 1.6``, the complex continued fraction up to
    ``|t| = 6`` and the auxiliary-function asymptotic expansion beyond.
    Accepts scalars (returns floats) or arrays.
    """
    e = fresnel_e(t)
    if e.ndim == 0:
        return FresnelPair(float(e.real), float(e.imag))
    return FresnelPair(e.real, e.imag)


def _slit_integral(offset_hi, offset_lo, n_eff: float) -> np.ndarray:
    """``int_{offset_lo}^{offset_hi} exp(i pi d**2 / n_eff) dd`` via the Fresnel integrals."""
    scale = math.sqrt(2.0 / n_eff)
    return (fresnel_e(np.asarray(offset_hi) * scale) - fresnel_e(np.asarray(offset_lo) * scale)) / scale


def _check_fill(fill: float):
    if not 0 < fill < 1:
        raise ValueError(f"fill ratio must lie in (0, 1), got {fill}")


def _check_n_eff(n_eff: float):
    if not (math.isfinite(n_eff) and n_eff > 0):
        raise ValueError(f"effective order must be positive, got {n_eff}")


def kirchhoff_field(N: int, n_eff: float, fill: float, chi):
    """Complex field of ``N`` slits of width ``fill`` at screen positions ``chi``.

    Args:
        N: Odd slit count.
        n_eff: ``n * (1 + detuning)``.
        fill: Slit width over period, strictly between 0 and 1.
        chi: Screen coordinate(s) in units of the period.

    Returns:
        Complex amplitude, same shape as ``chi``.  Slit contributions are
        summed in ascending slit order.
    """
    N = _check_odd("N", N)
    _check_fill(fill)
    _check_n_eff(n_eff)
    chi = np.asarray(chi, dtype=float)
    d = slit_indices(N) - chi[..., None]
    out = _slit_integral(d + fill / 2, d - fill / 2, n_eff).sum(axis=-1)
    return out[()] if out.ndim == 0 else out


def _spike_fields(N: int, n_eff: float, fill: float, shifts) -> np.ndarray:
    """Fields at ``chi = l + 1/2 + shift`` for every spike ``l`` and each shift.

    Returns an array of shape ``(len(shifts), (N-1)/2)``.
    """
    shifts = np.asarray(shifts, dtype=float)[:, None]
    centers = spike_offsets(N) - 0.5 - shifts
    if fill == 0:
        table = np.exp(1j * np.pi * centers * centers / n_eff)
    else:
        table = _slit_integral(centers + fill / 2, centers - fill / 2, n_eff)
    return _window_sums(table, N)


def _intensity(field: np.ndarray) -> np.ndarray:
    return field.real**2 + field.imag**2


def kirchhoff_spike_series(N: int, n: int, detuning: float = 0.0, fill: float = 0.0) -> SpikeSeries:
    """Finite-slit peak intensities ``|field(l + 1/2)|**2`` for ``l = 1 .. (N-1)/2``.

    ``fill = 0`` with no detuning falls back to the exact point-slit series.
    """
    N = _check_odd("N", N, minimum=3)
    n = _check_odd("n", n)
    if fill == 0 and detuning == 0:
        return delta_spike_series(N, n)
    if fill != 0:
        _check_fill(fill)
    n_eff = n * (1 + detuning)
    _check_n_eff(n_eff)
    values = _intensity(_spike_fields(N, n_eff, fill, [0.0])[0])
    model = Model.DELTA if fill == 0 else Model.FRESNEL
    return SpikeSeries(n=n, N=N, model=model, values=values)


def simpson_weights(points: int) -> np.ndarray:
    """Composite Simpson weights normalized to average over the interval."""
    if points < 3 or points % 2 == 0:
        raise ValueError("Simpson's rule needs an odd number of points >= 3")
    w = np.ones(points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / (3.0 * (points - 1))


def slit_averaged_series(N: int, n: int, fill: float, detuning: float = 0.0) -> SpikeSeries:
    """Intensity averaged over one slit width around each spike.

    ``(1/fill) * int_{-fill/2}^{fill/2} I(l + 1/2 + xi) d xi`` by composite
    Simpson on 65 equally spaced points.
    """
    N = _check_odd("N", N, minimum=3)
    n = _check_odd("n", n)
    _check_fill(fill)
    n_eff = n * (1 + detuning)
    _check_n_eff(n_eff)
    shifts = np.linspace(-fill / 2, fill / 2, SLIT_AVERAGE_POINTS)
    intens = _intensity(_spike_fields(N, n_eff, fill, shifts))
    values = simpson_weights(SLIT_AVERAGE_POINTS) @ intens
    return SpikeSeries(n=n, N=N, model=Model.FRESNEL_SLIT_AVERAGED, values=values)


def pattern_samples(
    N: int,
    n: int,
    detuning: float = 0.0,
    fill: float = 0.0,
    window: tuple[float, float] = (-8.0, 8.0),
    samples_per_period: int = 201,
) -> list[PatternSample]:
    """Intensity on a uniform grid ``chi_min + i / samples_per_period`` across ``window``.

    Meant for drawing the pattern; statistics use the spike series instead.
    """
    N = _check_odd("N", N)
    n = _check_odd("n", n)
    lo, hi = window
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"invalid window {window!r}: need finite chi_min < chi_max")
    if int(samples_per_period) != samples_per_period or samples_per_period < 2:
        raise ValueError(f"samples per period must be an integer >= 2, got {samples_per_period}")
    n_eff = n * (1 + detuning)
    _check_n_eff(n_eff)
    count = int(math.floor((hi - lo) * samples_per_period + 1e-9)) + 1
    chi = lo + np.arange(count) / samples_per_period
    if fill == 0:
        d = chi[:, None] - slit_indices(N)
        field = np.exp(1j * np.pi * d * d / n_eff).sum(axis=-1)
    else:
        field = kirchhoff_field(N, n_eff, fill, chi)
    return [PatternSample(float(c), float(i)) for c, i in zip(chi, _intensity(field))]


def detuning_curve(N: int, n: int, fill: float, detune_max: float, steps: int) -> list[tuple[float, float]]:
    """Mean spike intensity against fractional detuning on ``[-detune_max, detune_max]``.

    ``steps`` must be odd so the grid contains ``detuning = 0`` exactly.
    """
    if not detune_max > 0:
        raise ValueError(f"maximum detuning must be positive, got {detune_max}")
    if int(steps) != steps or steps < 3 or steps % 2 == 0:
        raise ValueError(f"detuning steps must be an odd integer >= 3, got {steps}")
    center = (steps - 1) // 2
    curve = []
    for i in range(steps):
        delta = detune_max * (i - center) / center
        series = kirchhoff_spike_series(N, n, detuning=delta, fill=fill)
        curve.append((delta, float(np.mean(series.values))))
    return curve
