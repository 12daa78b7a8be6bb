"""Command line entry point: ``slitfactor {pattern,scan,sweep,factor,calibrate}``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass

from slitfactor import io
from slitfactor.analytic import Model
from slitfactor.fresnel import detuning_curve, pattern_samples
from slitfactor.grating import (
    DEFAULT_PERIOD,
    DEFAULT_SCREEN_DISTANCE,
    GratingConfig,
    dimensionless_view,
    resonance_wavelength,
)
from slitfactor.stats import default_threads, factorize, scan, slit_width_sweep

log = logging.getLogger("slitfactor")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3
EXIT_IO = 4

COMMANDS = ("pattern", "scan", "sweep", "factor", "calibrate")


class ConfigError(ValueError):
    """A run configuration that fails validation before any computation."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    N: int
    n: int | None = None
    model: str = "delta"
    fill: float | None = None
    window: tuple[float, float] = (-8.0, 8.0)
    samples_per_period: int = 201
    threshold: float | None = None
    detune_max: float = 1e-3
    steps: int | None = None
    threads: int | None = None
    out: str | None = None
    json: bool = False
    period: float = DEFAULT_PERIOD
    distance: float = DEFAULT_SCREEN_DISTANCE


def _parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI, got {text!r}") from None
    return lo, hi


def _grating(cfg: RunConfig, fill: float) -> GratingConfig:
    try:
        return GratingConfig(cfg.N, period=cfg.period, slit_width=fill * cfg.period, screen_distance=cfg.distance)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _order(cfg: RunConfig, grating: GratingConfig):
    if cfg.n is None:
        raise ConfigError(f"{cfg.command} needs a resonance order --n")
    try:
        return resonance_wavelength(grating, cfg.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def validate(cfg: RunConfig) -> None:
    """Reject a configuration before any work is done.

    Raises:
        ConfigError: describing the first violated precondition.
    """
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}; expected one of {', '.join(COMMANDS)}")
    if cfg.model not in (m.value for m in Model):
        raise ConfigError(f"unknown model {cfg.model!r}")
    if cfg.threads is not None and cfg.threads < 1:
        raise ConfigError(f"--threads must be >= 1, got {cfg.threads}")
    if cfg.threshold is not None and not cfg.threshold > 0:
        raise ConfigError(f"--threshold must be positive, got {cfg.threshold}")
    if cfg.fill is not None and not 0 <= cfg.fill < 1:
        raise ConfigError(f"--fill must lie in [0, 1), got {cfg.fill}")
    if cfg.command == "factor":
        if cfg.N < 1:
            raise ConfigError(f"--N must be a positive integer, got {cfg.N}")
        if cfg.model != "delta" and cfg.fill == 0:
            raise ConfigError(f"the {cfg.model} model needs --fill > 0")
        return
    grating = _grating(cfg, cfg.fill or 0.0)
    if cfg.command == "pattern":
        _order(cfg, grating)
        lo, hi = cfg.window
        if not lo < hi:
            raise ConfigError(f"--window needs LO < HI, got {lo}:{hi}")
        if cfg.samples_per_period < 2:
            raise ConfigError(f"--spp must be >= 2, got {cfg.samples_per_period}")
    elif cfg.command == "scan":
        if cfg.model != "delta" and cfg.fill == 0:
            raise ConfigError(f"the {cfg.model} model needs --fill > 0")
        if cfg.model == "delta" and cfg.fill:
            raise ConfigError("the delta model has point slits; drop --fill or use --model fresnel")
    elif cfg.command == "sweep":
        _order(cfg, grating)
        if cfg.N % cfg.n:
            raise ConfigError(f"sweep needs a factor pair: {cfg.n} does not divide {cfg.N}")
        fill_max = 0.15 if cfg.fill is None else cfg.fill
        if not 0 < fill_max <= 0.5:
            raise ConfigError(f"--fill (the sweep's maximum) must lie in (0, 0.5], got {fill_max}")
        if cfg.steps is not None and cfg.steps < 2:
            raise ConfigError(f"--steps must be >= 2, got {cfg.steps}")
    elif cfg.command == "calibrate":
        _order(cfg, grating)
        if not cfg.detune_max > 0:
            raise ConfigError(f"--detune-max must be positive, got {cfg.detune_max}")
        steps = 101 if cfg.steps is None else cfg.steps
        if steps < 3 or steps % 2 == 0:
            raise ConfigError(f"--steps must be odd and >= 3 for calibrate, got {steps}")


def run(cfg: RunConfig) -> int:
    """Validate ``cfg``, compute and write the requested output; return the exit status."""
    try:
        validate(cfg)
    except ConfigError as exc:
        print(f"slitfactor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _dispatch(cfg)
    except OSError as exc:
        print(f"slitfactor: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    except RuntimeError as exc:
        print(f"slitfactor: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


def _dispatch(cfg: RunConfig) -> int:
    if cfg.command == "factor":
        report = factorize(cfg.N, threshold=cfg.threshold, model=cfg.model, fill=cfg.fill, threads=cfg.threads)
        if cfg.json:
            io.emit_factor_report(report, cfg.out)
        else:
            text = " x ".join(map(str, report.divisors)) or "1"
            line = f"{report.input} = {text}  (oracle {'agrees' if report.oracle_agrees else 'DISAGREES'})\n"
            with io.open_output(cfg.out) as fh:
                fh.write(line)
        if not report.oracle_agrees:
            print("slitfactor: interferometric factors disagree with trial division", file=sys.stderr)
            return EXIT_INCONSISTENT
        return EXIT_OK

    if cfg.command == "scan":
        curve = scan(cfg.N, model=cfg.model, fill=cfg.fill, threads=cfg.threads)
        io.emit_csv(cfg.out, io.SCAN_COLUMNS, curve.points)
        return EXIT_OK

    fill = cfg.fill or 0.0
    grating = _grating(cfg, fill)
    res = _order(cfg, grating)
    _, fill_ratio = dimensionless_view(grating, res)
    log.info("N=%d n=%d lambda=%.6g m fill=%g", cfg.N, cfg.n, res.wavelength, fill_ratio)

    if cfg.command == "pattern":
        samples = pattern_samples(
            cfg.N, cfg.n, detuning=res.detuning, fill=fill_ratio,
            window=cfg.window, samples_per_period=cfg.samples_per_period,
        )
        io.emit_csv(cfg.out, io.PATTERN_COLUMNS, samples)
    elif cfg.command == "sweep":
        fill_max = 0.15 if cfg.fill is None else cfg.fill
        curve = slit_width_sweep(cfg.N, cfg.n, fill_max=fill_max, steps=cfg.steps or 30, threads=cfg.threads)
        rows = [(f, x, s) for (f, s), (x, _) in zip(curve.points, curve.rescaled_points)]
        io.emit_csv(cfg.out, io.SWEEP_COLUMNS, rows)
    elif cfg.command == "calibrate":
        curve = detuning_curve(cfg.N, cfg.n, fill_ratio, cfg.detune_max, cfg.steps or 101)
        io.emit_csv(cfg.out, io.CALIBRATE_COLUMNS, curve)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slitfactor",
        description="Factor integers with a simulated Young's N-slit interferometer.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, required=True, help="number of slits (integer to factor)")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--threads", type=int, default=None, help=f"worker threads (default: {default_threads()})")
    common.add_argument("--period", type=float, default=DEFAULT_PERIOD, help="slit period a in meters")
    common.add_argument("--distance", type=float, default=DEFAULT_SCREEN_DISTANCE, help="screen distance R in meters")
    models = [m.value for m in Model]

    p = sub.add_parser("pattern", parents=[common], help="intensity across the screen (CSV chi,intensity)")
    p.add_argument("--n", type=int, required=True, help="odd resonance order")
    p.add_argument("--fill", type=float, default=0.0, help="slit width over period (0 = point slits)")
    p.add_argument("--window", type=_parse_window, default=(-8.0, 8.0), help="screen window LO:HI in periods")
    p.add_argument("--spp", dest="samples_per_period", type=int, default=201, help="samples per period")

    p = sub.add_parser("scan", parents=[common], help="RMS spike variation over odd n (CSV n,sigma)")
    p.add_argument("--model", choices=models, default="delta")
    p.add_argument("--fill", type=float, default=None, help="slit width over period for finite-slit models")

    p = sub.add_parser("sweep", parents=[common], help="slit-averaged variation against fill (CSV fill,rescaled,sigma_s)")
    p.add_argument("--n", type=int, required=True, help="odd divisor of N")
    p.add_argument("--fill", type=float, default=None, help="largest fill ratio of the sweep (default 0.15)")
    p.add_argument("--steps", type=int, default=None, help="grid intervals (default 30)")

    p = sub.add_parser("factor", parents=[common], help="factor N and check against trial division")
    p.add_argument("--model", choices=models, default="delta")
    p.add_argument("--fill", type=float, default=None, help="slit width over period for finite-slit models")
    p.add_argument("--threshold", type=float, default=None, help="detection threshold on sigma")
    p.add_argument("--json", action="store_true", help="emit the full JSON report")

    p = sub.add_parser("calibrate", parents=[common], help="mean spike intensity against detuning (CSV delta,mean_intensity)")
    p.add_argument("--n", type=int, required=True, help="odd resonance order")
    p.add_argument("--fill", type=float, default=1e-3, help="slit width over period")
    p.add_argument("--detune-max", type=float, default=1e-3, help="largest fractional detuning")
    p.add_argument("--steps", type=int, default=None, help="odd number of detuning samples (default 101)")
    return parser


def _glue_negative_window(argv: list[str]) -> list[str]:
    # argparse would read "-8:8" as an option; fold it into "--window=-8:8"
    out = []
    it = iter(argv)
    for arg in it:
        if arg == "--window":
            value = next(it, None)
            out.append(arg if value is None else f"--window={value}")
        else:
            out.append(arg)
    return out


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(args).items() if k in fields})


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_window(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
