"""Spike statistics, wavelength scans, slit-width sweeps and factorization."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from slitfactor.analytic import Model, SpikeSeries, _check_odd, delta_spike_series
from slitfactor.fresnel import kirchhoff_spike_series, slit_averaged_series
from slitfactor.grating import reduce_even

DELTA_THRESHOLD = 1e-9
FRESNEL_THRESHOLD = 1e-4
FRESNEL_MAX_FILL = 1e-3
#: Default Fresnel fill is this over N: keeps divisor variation ~1e-6, far under FRESNEL_THRESHOLD.
FRESNEL_FILL_SCALE = 0.01


@dataclass(frozen=True)
class VariationStats:
    mean: float
    rms: float
    peak_count: int


@dataclass(frozen=True)
class ScanCurve:
    """RMS spike variation for every scanned odd resonance order of one grating."""

    N: int
    model: Model
    fill: float
    points: tuple[tuple[int, float], ...]

    @property
    def orders(self) -> np.ndarray:
        return np.array([n for n, _ in self.points], dtype=int)

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([s for _, s in self.points], dtype=float)


@dataclass(frozen=True)
class SlitWidthCurve:
    """Slit-averaged variation against fill ratio for one factor pair ``{n, N}``.

    ``points`` starts at ``fill = 0`` with the point-slit value as the limit.
    """

    N: int
    n: int
    points: tuple[tuple[float, float], ...]

    @property
    def label(self) -> str:
        return f"{{{self.n},{self.N}}}"

    @property
    def rescaled_points(self) -> tuple[tuple[float, float], ...]:
        """Points with the abscissa replaced by ``N s / (n a)``."""
        return tuple((fill * self.N / self.n, sigma) for fill, sigma in self.points)


@dataclass(frozen=True)
class CollapseReport:
    crossings: tuple[tuple[str, float | None], ...]
    level: float

    @property
    def present(self) -> list[float]:
        return [x for _, x in self.crossings if x is not None]

    @property
    def spread(self) -> float | None:
        """Ratio of the largest to the smallest crossing, ``None`` if fewer than two."""
        xs = self.present
        if len(xs) < 2:
            return None
        return max(xs) / min(xs)


@dataclass(frozen=True)
class FactorReport:
    input: int
    divisors: tuple[int, ...]
    sigma_table: tuple[tuple[int, float], ...]
    threshold: float
    oracle_agrees: bool
    model: Model


def variation(series: SpikeSeries | Sequence[float]) -> VariationStats:
    """Mean spike height and RMS relative deviation from it.

    ``sigma = sqrt(mean((1 - I_l / mean(I))**2))`` over all spikes.

    Raises:
        ValueError: if there are no spikes or the mean intensity is zero.
    """
    values = np.asarray(series.values if isinstance(series, SpikeSeries) else series, dtype=float)
    if values.size == 0:
        raise ValueError("cannot compute the variation of an empty spike series")
    mean = float(values.mean())
    if not mean > 0:
        raise ValueError("mean spike intensity is zero; relative variation is undefined")
    rms = float(np.sqrt(np.mean((1.0 - values / mean) ** 2)))
    return VariationStats(mean=mean, rms=rms, peak_count=values.size)


def default_threads() -> int:
    return os.cpu_count() or 1


def _parallel_map(fn: Callable, items: Iterable, threads: int | None) -> list:
    items = list(items)
    threads = default_threads() if threads is None else int(threads)
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def default_fill(model: Model | str, N: int) -> float:
    """Fill ratio used when none is given: zero for point slits, else ``min(0.01/N, 1e-3)``.

    Finite slits spoil the uniformity of divisor spikes roughly as
    ``(fill * N / n)**2``; at ``fill = 1e-3`` the pair ``{3, 141}`` already sits
    above the Fresnel detection threshold.
    """
    if Model(model) is Model.DELTA:
        return 0.0
    return min(FRESNEL_FILL_SCALE / N, FRESNEL_MAX_FILL)


def default_threshold(model: Model | str) -> float:
    return DELTA_THRESHOLD if Model(model) is Model.DELTA else FRESNEL_THRESHOLD


def spike_series(N: int, n: int, model: Model | str = Model.DELTA, fill: float = 0.0, detuning: float = 0.0):
    model = Model(model)
    if model is Model.DELTA:
        if fill != 0:
            raise ValueError("the delta model has zero slit width; use the fresnel model for fill > 0")
        return kirchhoff_spike_series(N, n, detuning=detuning)
    if model is Model.FRESNEL:
        return kirchhoff_spike_series(N, n, detuning=detuning, fill=fill)
    return slit_averaged_series(N, n, fill, detuning=detuning)


def scan(
    N: int,
    model: Model | str = Model.DELTA,
    fill: float | None = None,
    detuning: float = 0.0,
    threads: int | None = None,
) -> ScanCurve:
    """Scan every odd resonance order ``n`` in ``[3, N-2]`` and record the spike variation.

    Orders are evaluated in parallel; each one is computed independently, so
    the result does not depend on ``threads``.
    """
    N = _check_odd("N", N, minimum=3)
    model = Model(model)
    fill = default_fill(model, N) if fill is None else float(fill)
    if model is not Model.DELTA and not 0 < fill < 1:
        raise ValueError(f"fill ratio must lie in (0, 1) for the {model.value} model, got {fill}")

    def point(n):
        return n, variation(spike_series(N, n, model, fill, detuning)).rms

    return ScanCurve(N=N, model=model, fill=fill, points=tuple(_parallel_map(point, range(3, N - 1, 2), threads)))


def detect_divisors(curve: ScanCurve, threshold: float) -> set[int]:
    """Orders whose spike variation is at or below ``threshold``."""
    if not threshold > 0:
        raise ValueError(f"detection threshold must be positive, got {threshold}")
    return {n for n, sigma in curve.points if sigma <= threshold}


def trial_division(N: int) -> list[int]:
    """Prime factors of ``N`` in ascending order, with multiplicity."""
    if N < 1:
        raise ValueError(f"cannot factor {N}")
    factors = []
    p = 2
    while p * p <= N:
        while N % p == 0:
            factors.append(p)
            N //= p
        p += 1 if p == 2 else 2
    if N > 1:
        factors.append(N)
    return factors


def factorize(
    N: int,
    threshold: float | None = None,
    model: Model | str = Model.DELTA,
    fill: float | None = None,
    threads: int | None = None,
) -> FactorReport:
    """Factor ``N`` by repeated interferometric scans of the odd part.

    Factors of two are stripped arithmetically.  Each round scans the
    remaining odd core, divides out the smallest detected divisor (which is
    prime, since every smaller divisor would have been detected too) and
    repeats until nothing is detected.  The result is checked against trial
    division.

    Raises:
        ValueError: for ``N < 1`` or a non-positive threshold.
        RuntimeError: if the scan reports an order that does not divide the core.
    """
    model = Model(model)
    threshold = default_threshold(model) if threshold is None else float(threshold)
    if not threshold > 0:
        raise ValueError(f"detection threshold must be positive, got {threshold}")
    reduced = reduce_even(N)
    divisors = [2] * reduced.powers_of_two
    core = reduced.odd_core
    table: tuple[tuple[int, float], ...] | None = None
    while core > 1:
        curve = scan(core, model=model, fill=fill, threads=threads)
        if table is None:
            table = curve.points
        found = detect_divisors(curve, threshold)
        bad = sorted(n for n in found if core % n)
        if bad:
            raise RuntimeError(
                f"scan of N={core} flagged orders {bad} that do not divide it; "
                f"threshold {threshold:g} is too loose for the {model.value} model"
            )
        if not found:
            divisors.append(core)
            break
        p = min(found)
        divisors.append(p)
        core //= p
    divisors.sort()
    return FactorReport(
        input=reduced.original,
        divisors=tuple(divisors),
        sigma_table=table or (),
        threshold=threshold,
        oracle_agrees=divisors == trial_division(reduced.original),
        model=model,
    )


def slit_width_sweep(
    N: int,
    n: int,
    fill_max: float = 0.15,
    steps: int = 30,
    threads: int | None = None,
) -> SlitWidthCurve:
    """Slit-averaged variation on the grid ``fill = fill_max * k / steps``, ``k = 0 .. steps``.

    The ``fill = 0`` point is the point-slit variation, the limit of the
    slit-averaged one.
    """
    N = _check_odd("N", N, minimum=3)
    n = _check_odd("n", n)
    if N % n:
        raise ValueError(f"slit-width sweeps are defined for factor pairs; {n} does not divide {N}")
    if not 0 < fill_max <= 0.5:
        raise ValueError(f"fill_max must lie in (0, 0.5], got {fill_max}")
    if int(steps) != steps or steps < 2:
        raise ValueError(f"steps must be an integer >= 2, got {steps}")
    fills = [fill_max * k / steps for k in range(1, steps + 1)]
    sigmas = _parallel_map(lambda f: variation(slit_averaged_series(N, n, f)).rms, fills, threads)
    limit = variation(delta_spike_series(N, n)).rms
    return SlitWidthCurve(N=N, n=n, points=((0.0, limit),) + tuple(zip(fills, sigmas)))


def collapse_check(curves: Sequence[SlitWidthCurve], level: float) -> CollapseReport:
    """Rescaled abscissa ``N s / (n a)`` where each curve first rises above ``level``.

    Crossings are linearly interpolated between grid points; a curve that
    never exceeds ``level`` is reported with ``None``.
    """
    if len(curves) < 2:
        raise ValueError("collapse check needs at least two curves")
    if not level > 0:
        raise ValueError(f"level must be positive, got {level}")
    crossings = []
    for curve in curves:
        pts = curve.rescaled_points
        hit = None
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if y0 <= level < y1:
                hit = x0 + (level - y0) * (x1 - x0) / (y1 - y0)
                break
        if hit is None and pts and pts[0][1] > level:
            hit = pts[0][0]
        crossings.append((curve.label, hit))
    return CollapseReport(crossings=tuple(crossings), level=level)


#: The ten factor pairs {n, N} of the five two-prime gratings.
FACTOR_PAIRS = ((5, 55), (11, 55), (5, 95), (19, 95), (7, 119), (17, 119), (3, 141), (47, 141), (11, 143), (13, 143))
#: The seven gratings of the original numerical study.
STUDY_CASES = (55, 95, 119, 141, 143, 139, 105)
