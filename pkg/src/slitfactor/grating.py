"""Physical setup of the grating and the resonance-wavelength schedule.

All simulation code works in units of the grating period ``a``.  Since
``lambda_n * R = a**2 * n`` the Fresnel phase ``pi (xi - x)**2 / (lambda R)``
becomes ``pi (chi' - chi)**2 / n`` once lengths are divided by ``a``, so the
SI values below only exist at the API boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

#: Period and screen distance used for every simulation in the original study.
DEFAULT_PERIOD = 0.01
DEFAULT_SCREEN_DISTANCE = 10.0


@dataclass(frozen=True)
class GratingConfig:
    """An N-slit grating and the screen it illuminates.

    Attributes:
        slit_count: Number of slits ``N``; odd and at least 3.
        period: Slit period ``a`` in meters.
        slit_width: Slit width ``s`` in meters; ``0`` selects point slits.
        screen_distance: Grating-to-screen distance ``R`` in meters.
    """

    slit_count: int
    period: float = DEFAULT_PERIOD
    slit_width: float = 0.0
    screen_distance: float = DEFAULT_SCREEN_DISTANCE

    def __post_init__(self):
        if int(self.slit_count) != self.slit_count or self.slit_count < 3:
            raise ValueError(f"slit count must be an integer >= 3, got {self.slit_count}")
        if self.slit_count % 2 == 0:
            raise ValueError(
                f"slit count must be odd, got {self.slit_count}; reduce even inputs first"
            )
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period}")
        if not self.screen_distance > 0:
            raise ValueError(f"screen distance must be positive, got {self.screen_distance}")
        if not 0 <= self.slit_width < self.period:
            raise ValueError(
                f"slit width must satisfy 0 <= s < a, got s={self.slit_width}, a={self.period}"
            )

    @property
    def fill_ratio(self) -> float:
        return self.slit_width / self.period


@dataclass(frozen=True)
class Resonance:
    """An odd resonance order with its on-resonance wavelength.

    ``detuning`` is the fractional offset of the actual illumination from
    ``wavelength``: the grating is lit at ``wavelength * (1 + detuning)``.
    """

    order: int
    wavelength: float
    detuning: float = 0.0

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1 or self.order % 2 == 0:
            raise ValueError(f"resonance order must be odd and >= 1, got {self.order}")
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if not 1 + self.detuning > 0:
            raise ValueError(f"detuning must exceed -1, got {self.detuning}")

    @property
    def detuned_wavelength(self) -> float:
        return self.wavelength * (1 + self.detuning)


@dataclass(frozen=True)
class ReducedProblem:
    """``original == 2**powers_of_two * odd_core`` with ``odd_core`` odd."""

    original: int
    powers_of_two: int
    odd_core: int


def reduce_even(N: int) -> ReducedProblem:
    """Strip every factor of two from ``N``.

    >>> reduce_even(56)
    ReducedProblem(original=56, powers_of_two=3, odd_core=7)
    """
    N = int(N)
    if N < 1:
        raise ValueError(f"cannot reduce {N}: input must be a positive integer")
    core, twos = N, 0
    while core % 2 == 0:
        core //= 2
        twos += 1
    return ReducedProblem(original=N, powers_of_two=twos, odd_core=core)


def resonance_wavelength(cfg: GratingConfig, n: int, detuning: float = 0.0) -> Resonance:
    """Wavelength ``a**2 * n / R`` at which order ``n`` self-images form."""
    if int(n) != n or n < 1 or n % 2 == 0:
        raise ValueError(f"resonance order must be odd and >= 1, got {n}")
    n = int(n)
    return Resonance(order=n, wavelength=cfg.period**2 * n / cfg.screen_distance, detuning=detuning)


def spike_position(cfg: GratingConfig, l: int) -> float:
    """Screen coordinate ``l*a + a/2`` of the l'th self-image spike, in meters."""
    return l * cfg.period + cfg.period / 2


def dimensionless_view(cfg: GratingConfig, res: Resonance) -> tuple[float, float]:
    """Reduce a setup to ``(n_effective, fill)``, the only inputs the models need.

    ``n_effective = n * (1 + detuning)`` is built from the order rather than
    from ``wavelength * R / a**2`` so that configs differing only in ``a`` and
    ``R`` map to bit-identical numbers.
    """
    return res.order * (1 + res.detuning), cfg.fill_ratio
