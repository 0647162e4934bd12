"""Monte-Carlo benchmark harness: spiking efficiency and RMSE per scheme.

A benchmark sweeps ``schemes x durations``; every (duration, sample) cell
draws a fresh signal from the configured family using a seed derived as
``mix_seed(master, case_index, sample_index)``, so any single run can be
reproduced in isolation and every scheme sees identical signals.  Reports
are deterministic: the same config yields byte-identical exports regardless
of worker count or scheduling.
"""

from __future__ import annotations

import hashlib
import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import codec
from .errors import BenchError, EmptyGrid, SpikeCodecError
from .formats import (
    FORMAT_VERSION,
    FormatError,
    check_version_kind,
    dump_config,
    format_float,
    parse_config,
    parse_components,
)
from .rate import make_fir_filter
from .signals import SignalSpec, generate, mix_seed, rmse, spiking_efficiency
from .types import CodecParams, FIRFilter, Scheme, Signal

__all__ = [
    "BenchConfig",
    "BenchCell",
    "BenchReport",
    "default_bench_config",
    "bench_config_to_text",
    "bench_config_from_text",
    "run_benchmark",
    "report_to_csv",
    "report_to_markdown",
    "tune_params",
]


@dataclass(frozen=True)
class BenchConfig:
    """Signal family, cases, and per-scheme codec parameters.

    ``signal`` serves as the family template: its duration and seed are
    replaced per case / per sample.
    """

    signal: SignalSpec
    schemes: tuple[Scheme, ...]
    durations: tuple[float, ...]
    samples_per_case: int
    seed: int
    params: dict[Scheme, CodecParams]

    def __post_init__(self):
        object.__setattr__(
            self, "schemes", tuple(Scheme(s) for s in self.schemes)
        )
        object.__setattr__(
            self, "durations", tuple(float(d) for d in self.durations)
        )
        if len(self.schemes) == 0 or len(self.durations) == 0:
            raise ValueError("schemes and durations must be non-empty")
        if self.samples_per_case < 1:
            raise ValueError("samples_per_case must be >= 1")
        for scheme in self.schemes:
            if scheme not in self.params:
                raise ValueError(f"missing params for scheme {scheme.value}")


@dataclass(frozen=True)
class BenchCell:
    """Aggregates for one (scheme, duration) case."""

    efficiency_mean: float
    efficiency_sd: float
    rmse_mean: float
    rmse_sd: float
    samples: int


@dataclass(frozen=True)
class BenchReport:
    config_hash: str
    seed: int
    cells: dict[tuple[Scheme, float], BenchCell]
    wall_time: float  # informational only; excluded from exports


# Calibrated defaults: sum of 1/2/5 Hz sines spanning ~5.8 peak to trough at
# 100 Hz with sigma=0.1 noise, and per-scheme parameters placed so the
# efficiency/RMSE profiles sit inside the documented acceptance bands.
_DEFAULT_COMPONENTS = ((1.0, 2.2, 0.0), (2.0, 0.9, 0.0), (5.0, 0.32, 0.0))
_DEFAULT_FILTER = ("gaussian", 11, 1.2)


def default_bench_config(
    samples_per_case: int = 1000,
    durations: tuple[float, ...] = (1.0, 5.0, 15.0, 50.0, 100.0),
    seed: int = 411,
) -> BenchConfig:
    """The shipped six-scheme benchmark configuration."""
    fir = make_fir_filter(*_DEFAULT_FILTER)
    signal = SignalSpec(
        components=_DEFAULT_COMPONENTS,
        noise_std=0.1,
        duration=1.0,
        sample_rate=100.0,
        seed=0,
    )
    params = {
        Scheme.TBR: CodecParams(Scheme.TBR, factor=0.5),
        Scheme.MW: CodecParams(Scheme.MW, threshold=0.1, window=3),
        Scheme.SF: CodecParams(Scheme.SF, threshold=0.4),
        Scheme.BSA: CodecParams(Scheme.BSA, threshold=0.88, filter=fir),
        Scheme.HSA: CodecParams(Scheme.HSA, filter=fir),
        Scheme.THSA: CodecParams(Scheme.THSA, threshold=0.85, filter=fir),
    }
    return BenchConfig(
        signal=signal,
        schemes=(Scheme.TBR, Scheme.MW, Scheme.SF, Scheme.BSA, Scheme.HSA, Scheme.THSA),
        durations=durations,
        samples_per_case=samples_per_case,
        seed=seed,
        params=params,
    )


# ---------------------------------------------------------------------------
# config (de)serialization


def bench_config_to_text(config: BenchConfig) -> str:
    pairs = [
        ("format_version", str(FORMAT_VERSION)),
        ("kind", "bench"),
        (
            "components",
            "; ".join(
                f"{format_float(f)}:{format_float(a)}:{format_float(p)}"
                for f, a, p in config.signal.components
            ),
        ),
        ("noise_std", format_float(config.signal.noise_std)),
        ("sample_rate", format_float(config.signal.sample_rate)),
        ("schemes", ", ".join(s.value for s in config.schemes)),
        ("durations", ", ".join(format_float(d) for d in config.durations)),
        ("samples_per_case", str(config.samples_per_case)),
        ("seed", str(config.seed)),
    ]
    for scheme in config.schemes:
        p = config.params[scheme]
        prefix = f"params.{scheme.value}"
        if p.factor is not None:
            pairs.append((f"{prefix}.factor", format_float(p.factor)))
        if p.threshold is not None:
            pairs.append((f"{prefix}.threshold", format_float(p.threshold)))
        if p.window is not None:
            pairs.append((f"{prefix}.window", str(int(p.window))))
        if p.filter is not None:
            pairs.append(
                (
                    f"{prefix}.filter",
                    ", ".join(format_float(c) for c in p.filter.coefficients),
                )
            )
        if p.m is not None:
            pairs.append((f"{prefix}.m", str(int(p.m))))
        if p.n is not None:
            pairs.append((f"{prefix}.n", str(int(p.n))))
        if p.distribution is not None:
            pairs.append(
                (
                    f"{prefix}.distribution",
                    ", ".join(format_float(v) for v in p.distribution),
                )
            )
    return dump_config(pairs, header="spikecodec benchmark config")


def _parse_scheme_params(scheme: Scheme, raw: dict[str, str]) -> CodecParams:
    def floats(key: str) -> tuple[float, ...]:
        try:
            return tuple(float(v) for v in raw[key].split(",") if v.strip())
        except ValueError as exc:
            raise FormatError(f"params.{scheme.value}.{key}: {exc}") from None

    fir = None
    if "filter" in raw:
        fir = FIRFilter(floats("filter"))
    elif "filter_kind" in raw:
        try:
            fir = make_fir_filter(
                raw["filter_kind"],
                int(raw.get("filter_length", "0")),
                float(raw.get("filter_scale", "nan")),
            )
        except (ValueError, SpikeCodecError) as exc:
            raise FormatError(f"params.{scheme.value}: {exc}") from None
    try:
        return CodecParams(
            scheme=scheme,
            factor=float(raw["factor"]) if "factor" in raw else None,
            threshold=float(raw["threshold"]) if "threshold" in raw else None,
            window=int(raw["window"]) if "window" in raw else None,
            filter=fir,
            m=int(raw["m"]) if "m" in raw else None,
            n=int(raw["n"]) if "n" in raw else None,
            distribution=floats("distribution") if "distribution" in raw else None,
        )
    except ValueError as exc:
        raise FormatError(f"params.{scheme.value}: {exc}") from None


def bench_config_from_text(text: str) -> BenchConfig:
    pairs = parse_config(text)
    check_version_kind(pairs, "bench")
    try:
        schemes = tuple(
            Scheme(tok.strip()) for tok in pairs.get("schemes", "").split(",") if tok.strip()
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    try:
        durations = tuple(
            float(tok) for tok in pairs.get("durations", "").split(",") if tok.strip()
        )
        samples_per_case = int(pairs.get("samples_per_case", "0"))
        seed = int(pairs.get("seed", "0"))
        noise = float(pairs.get("noise_std", "nan"))
        sample_rate = float(pairs.get("sample_rate", "nan"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    components = parse_components(pairs.get("components", ""))
    params: dict[Scheme, CodecParams] = {}
    for scheme in schemes:
        prefix = f"params.{scheme.value}."
        raw = {
            key[len(prefix) :]: value
            for key, value in pairs.items()
            if key.startswith(prefix)
        }
        if not raw:
            raise FormatError(f"missing params.{scheme.value}.* entries")
        params[scheme] = _parse_scheme_params(scheme, raw)
    try:
        signal = SignalSpec(components, noise, 1.0, sample_rate, 0)
        return BenchConfig(signal, schemes, durations, samples_per_case, seed, params)
    except (ValueError, SpikeCodecError) as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# running


def _run_one(
    config: BenchConfig, scheme: Scheme, case_idx: int, duration: float, k: int
) -> tuple[float, float]:
    spec = config.signal.with_case(duration, mix_seed(config.seed, case_idx, k))
    signal = generate(spec)
    try:
        channel = codec.encode(signal, config.params[scheme])[0]
        eff = spiking_efficiency(channel.spikes)
        recon = codec.decode(channel.spikes, channel.params)
        return eff, rmse(recon, signal)
    except SpikeCodecError as exc:
        raise BenchError(
            f"{scheme.value} duration={duration}s sample={k}: {exc}"
        ) from exc


def run_benchmark(config: BenchConfig, workers: int = 1) -> BenchReport:
    """Run the sweep; results are invariant to ``workers`` and scheduling."""
    started = time.perf_counter()
    n = config.samples_per_case
    eff = {
        (s, d): np.empty(n) for s in config.schemes for d in config.durations
    }
    err = {key: np.empty(n) for key in eff}
    tasks = [
        (scheme, case_idx, duration, k)
        for scheme in config.schemes
        for case_idx, duration in enumerate(config.durations)
        for k in range(n)
    ]

    def work(task):
        scheme, case_idx, duration, k = task
        e, r = _run_one(config, scheme, case_idx, duration, k)
        eff[(scheme, duration)][k] = e
        err[(scheme, duration)][k] = r

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, tasks))
    else:
        for task in tasks:
            work(task)

    def sd(values: np.ndarray) -> float:
        return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0

    cells = {
        key: BenchCell(
            efficiency_mean=float(np.mean(eff[key])),
            efficiency_sd=sd(eff[key]),
            rmse_mean=float(np.mean(err[key])),
            rmse_sd=sd(err[key]),
            samples=n,
        )
        for key in eff
    }
    config_hash = hashlib.sha256(bench_config_to_text(config).encode()).hexdigest()
    return BenchReport(
        config_hash=config_hash,
        seed=config.seed,
        cells=cells,
        wall_time=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# exports (wall time deliberately omitted so identical configs give
# byte-identical files)


def _ordered_keys(report: BenchReport):
    schemes, durations = [], []
    for scheme, duration in report.cells:
        if scheme not in schemes:
            schemes.append(scheme)
        if duration not in durations:
            durations.append(duration)
    return schemes, sorted(durations)


def report_to_csv(report: BenchReport) -> str:
    lines = [
        f"# spikecodec bench report v{FORMAT_VERSION}",
        f"# seed={report.seed}",
        f"# config_hash={report.config_hash}",
        "scheme,duration,samples,efficiency_mean,efficiency_sd,rmse_mean,rmse_sd",
    ]
    schemes, durations = _ordered_keys(report)
    for scheme in schemes:
        for duration in durations:
            cell = report.cells.get((scheme, duration))
            if cell is None:
                continue
            lines.append(
                ",".join(
                    (
                        scheme.value,
                        format_float(duration),
                        str(cell.samples),
                        format_float(cell.efficiency_mean),
                        format_float(cell.efficiency_sd),
                        format_float(cell.rmse_mean),
                        format_float(cell.rmse_sd),
                    )
                )
            )
    return "\n".join(lines) + "\n"


def _markdown_table(report: BenchReport, metric: str) -> list[str]:
    schemes, durations = _ordered_keys(report)
    head = "| Duration | Stat | " + " | ".join(s.value for s in schemes) + " |"
    rule = "|---" * (len(schemes) + 2) + "|"
    lines = [head, rule]
    for duration in durations:
        means, sds = [], []
        for scheme in schemes:
            cell = report.cells.get((scheme, duration))
            means.append("" if cell is None else f"{getattr(cell, metric + '_mean'):.2f}")
            sds.append("" if cell is None else f"{getattr(cell, metric + '_sd'):.2f}")
        lines.append(f"| {duration:g} s | mean | " + " | ".join(means) + " |")
        lines.append("| | sd | " + " | ".join(sds) + " |")
    return lines


def report_to_markdown(report: BenchReport) -> str:
    lines = [
        "# Benchmark report",
        "",
        f"seed: {report.seed}  ",
        f"config: `{report.config_hash[:16]}`",
        "",
        "## Spiking efficiency (%)",
        "",
        *_markdown_table(report, "efficiency"),
        "",
        "## Reconstruction RMSE",
        "",
        *_markdown_table(report, "rmse"),
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parameter tuning


def tune_params(
    scheme: Scheme,
    signal: Signal,
    grid: dict[str, list],
    rmse_weight: float = 1.0,
    efficiency_weight: float = 0.0,
) -> CodecParams:
    """Exhaustive grid search minimizing a weighted (rmse, sparsity) loss.

    The objective is ``rmse_weight * rmse + efficiency_weight *
    (100 - efficiency)``.  Candidates are visited in the grid's given order
    and ties keep the earliest candidate, so the result is the
    lexicographically-first argmin.
    """
    if not grid or any(len(list(v)) == 0 for v in grid.values()):
        raise EmptyGrid("grid must map parameter names to non-empty value lists")
    names = list(grid)
    best: tuple[float, CodecParams] | None = None
    for combo in itertools.product(*(list(grid[name]) for name in names)):
        params = CodecParams(scheme=Scheme(scheme), **dict(zip(names, combo)))
        channel = codec.encode(signal, params)[0]
        eff = spiking_efficiency(channel.spikes)
        recon = codec.decode(channel.spikes, channel.params)
        objective = rmse_weight * rmse(recon, signal) + efficiency_weight * (
            100.0 - eff
        )
        if best is None or objective < best[0]:
            best = (objective, params)
    return best[1]
