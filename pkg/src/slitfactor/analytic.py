"""Point-slit model of the N-slit interferometer.

With infinitesimal slits the amplitude on the screen at ``chi = x / a`` is a
plain sum of quadratic-phase phasors, one per slit::

    psi(chi) = sum_{q=(1-N)/2}^{(N-1)/2} exp(i pi (chi - q)**2 / n)

No normalization constant is applied, so at a spike of a divisor ``n`` the
intensity is exactly ``N**2 / n``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

#: Distance from an integer below which the Dirichlet kernel returns its limit.
KERNEL_SINGULARITY_TOL = 1e-9


class Model(str, enum.Enum):
    DELTA = "delta"
    FRESNEL = "fresnel"
    FRESNEL_SLIT_AVERAGED = "fresnel_slit_averaged"


@dataclass(frozen=True)
class SpikeSeries:
    """Peak intensities ``values[l - 1]`` for spikes ``l = 1 .. (N-1)/2``."""

    n: int
    N: int
    model: Model
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != ((self.N - 1) // 2,):
            raise ValueError(
                f"expected {(self.N - 1) // 2} spike values for N={self.N}, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("spike intensities must be finite and non-negative")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "model", Model(self.model))

    @property
    def spikes(self) -> np.ndarray:
        """Spike indices ``l`` matching ``values``."""
        return np.arange(1, len(self.values) + 1)


def _check_odd(name: str, value: int, minimum: int = 1) -> int:
    if int(value) != value or value < minimum or value % 2 == 0:
        raise ValueError(f"{name} must be an odd integer >= {minimum}, got {value}")
    return int(value)


def slit_indices(N: int) -> np.ndarray:
    """Slit centers ``q = (1-N)/2 .. (N-1)/2`` in units of the period."""
    half = (N - 1) // 2
    return np.arange(-half, half + 1)


def periodic_kernel(r: int, v):
    """Dirichlet kernel ``sin(pi r v) / sin(pi v)`` for odd ``r``.

    At integer ``v`` the removable singularity is filled with its limit ``r``.
    Accepts scalars or arrays.
    """
    r = _check_odd("r", r)
    v = np.asarray(v, dtype=float)
    near = np.abs(v - np.round(v)) < KERNEL_SINGULARITY_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(near, float(r), np.sin(np.pi * r * v) / np.sin(np.pi * v))
    return out[()] if out.ndim == 0 else out


def delta_amplitude(N: int, n: int, chi):
    """Complex screen amplitude of ``N`` point slits at resonance order ``n``.

    Evaluates the full N-slit phasor sum, which is valid whether or not ``n``
    divides ``N``.  ``chi`` may be a scalar or an array of screen positions in
    units of the period.
    """
    N = _check_odd("N", N)
    n = _check_odd("n", n)
    chi = np.asarray(chi, dtype=float)
    q = slit_indices(N)
    d = chi[..., None] - q
    out = np.exp(1j * np.pi * d * d / n).sum(axis=-1)
    return out[()] if out.ndim == 0 else out


def factored_amplitude(N: int, n: int, chi):
    """Amplitude in the factored form ``P_r(chi - 1/2) * (sum over one n-slit group)``.

    Only defined when ``n`` divides ``N``; agrees with :func:`delta_amplitude`
    at every ``chi`` in that case.
    """
    N = _check_odd("N", N)
    n = _check_odd("n", n)
    if N % n:
        raise ValueError(f"factored amplitude needs n | N, got n={n}, N={N}")
    chi = np.asarray(chi, dtype=float)
    d = chi[..., None] - slit_indices(n)
    group = np.exp(1j * np.pi * d * d / n).sum(axis=-1)
    out = periodic_kernel(N // n, chi - 0.5) * group
    return out[()] if np.ndim(out) == 0 else out


def phase_factor_f(l: int, n: int, p: int, q: int) -> complex:
    """``exp{(i pi/n) [(l + 1/2 - q)**2 - (l + 1/2 - p)**2]}``."""
    n = _check_odd("n", n)
    arg = (l + 0.5 - q) ** 2 - (l + 0.5 - p) ** 2
    return complex(np.exp(1j * np.pi * arg / n))


def phase_factor_f_reduced(l: int, n: int, p: int, q: int) -> complex:
    """Same phase factor written as ``exp[(i pi/n) (q - p)(q + p - 2l - 1)]``."""
    n = _check_odd("n", n)
    return complex(np.exp(1j * np.pi * ((q - p) * (q + p - 2 * l - 1)) / n))


def sigma_brute(l, n: int):
    """Double sum of the phase factor over ``p, q`` in ``[(1-n)/2, (n-1)/2]``.

    For odd ``n`` the result is ``n`` for every ``l``.  ``l`` may be an
    integer array; terms are accumulated p-major, then q.
    """
    n = _check_odd("n", n)
    l = np.asarray(l)
    idx = slit_indices(n)
    p, q = idx[:, None], idx[None, :]
    # integer exponent (q - p)(q + p - 2l - 1) keeps the phase exact before scaling
    k = (q - p)[None] * (q + p - 2 * l[..., None, None] - 1)
    terms = np.exp(1j * np.pi * (k % (2 * n)) / n)
    out = terms.reshape(*terms.shape[:-2], -1).sum(axis=-1)
    return out[()] if out.ndim == 0 else out


def _window_sums(table: np.ndarray, N: int) -> np.ndarray:
    """Sum ``table[k]`` over each slit window ``k = q - l``, for ``l = 1 .. (N-1)/2``.

    ``table`` holds the per-slit contribution as a function of ``k`` for
    ``k = -(N-1) .. (N-3)/2``; every spike sees the same function of ``k``,
    only the window of ``k`` values it sums over moves.
    """
    L = (N - 1) // 2
    if table.shape[-1] != N + L - 1:
        raise ValueError("table length does not match slit count")
    prefix = np.concatenate([np.zeros(table.shape[:-1] + (1,), table.dtype), np.cumsum(table, axis=-1)], axis=-1)
    l = np.arange(1, L + 1)
    lo = L - l
    hi = N - 1 + L - l
    return prefix[..., hi + 1] - prefix[..., lo]


def spike_offsets(N: int) -> np.ndarray:
    """Values of ``k = q - l`` needed by :func:`_window_sums` for ``N`` slits."""
    L = (N - 1) // 2
    half = (N - 1) // 2
    return np.arange(-half - L, half)


def delta_spike_series(N: int, n: int) -> SpikeSeries:
    """Point-slit peak intensities at ``chi = l + 1/2`` for ``l = 1 .. (N-1)/2``.

    The phase at a spike is ``pi m**2 / (4n)`` with ``m = 2(l - q) + 1`` an
    integer, so ``m**2`` is reduced modulo ``8n`` in exact integer arithmetic
    before any rounding happens.
    """
    N = _check_odd("N", N, minimum=3)
    n = _check_odd("n", n)
    k = spike_offsets(N)
    m = 1 - 2 * k
    phasors = np.exp(1j * np.pi * ((m * m) % (8 * n)) / (4 * n))
    amp = _window_sums(phasors, N)
    return SpikeSeries(n=n, N=N, model=Model.DELTA, values=amp.real**2 + amp.imag**2)
