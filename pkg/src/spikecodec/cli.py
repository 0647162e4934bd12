"""Command-line interface.

Subcommands: ``generate``, ``encode``, ``decode``, ``stream``, ``bench``,
``tune``.  Exit codes: 0 success, 2 bad arguments (including invalid codec
parameters), 3 malformed input files, 4 codec failures on well-formed input.

``bench`` reads its config from ``--config``, else the path in the
``SPIKECODEC_CONFIG`` environment variable, else the built-in defaults.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import codec
from .bench import (
    bench_config_from_text,
    default_bench_config,
    report_to_csv,
    report_to_markdown,
    run_benchmark,
    tune_params,
)
from .errors import MalformedSpikes, ParameterError, SpikeCodecError
from .formats import (
    FormatError,
    params_from_sidecar,
    params_to_sidecar,
    read_events,
    read_signal_csv,
    signal_spec_from_config,
    write_events,
    write_signal_csv,
    event_line_polarity,
    event_line_population,
)
from .rate import FILTER_KINDS, make_fir_filter
from .signals import SignalSpec, generate
from .streaming import (
    StreamingGRF,
    StreamingMW,
    StreamingPosition,
    StreamingSF,
    StreamingTBR,
)
from .types import (
    TIME_TOLERANCE,
    CodecParams,
    PopulationSpikes,
    Scheme,
    Signal,
    events_to_dense,
)

__all__ = ["main", "entrypoint", "build_parser"]


class UsageError(Exception):
    """Bad command-line arguments (exit code 2)."""


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats: {text!r}")


def _component(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("component must be freq:amp[:phase]")
    try:
        freq, amp = float(parts[0]), float(parts[1])
        phase = float(parts[2]) if len(parts) == 3 else 0.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric component {text!r}")
    return (freq, amp, phase)


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("codec parameters")
    group.add_argument("--threshold", type=float, help="spike threshold")
    group.add_argument("--factor", type=float, help="tbr std multiplier")
    group.add_argument("--window", type=int, help="mw trailing window (samples)")
    group.add_argument("--filter-kind", choices=FILTER_KINDS, help="FIR kernel kind")
    group.add_argument("--filter-len", type=int, help="FIR kernel length (taps)")
    group.add_argument("--filter-scale", type=float, help="FIR kernel peak value")
    group.add_argument("--neurons", type=int, help="population size m")
    group.add_argument("--subtimes", type=int, help="grf sub-timesteps n")
    group.add_argument(
        "--distribution", type=_float_list, help="position codebook values"
    )
    group.add_argument("--min-sig", type=float, help="grf lower signal bound")
    group.add_argument("--max-sig", type=float, help="grf upper signal bound")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikecodec", description="Spike-train codecs for analog signals"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="render a synthetic signal to CSV")
    p.add_argument("--spec", help="signal spec config file")
    p.add_argument(
        "--component",
        action="append",
        type=_component,
        help="freq:amp[:phase]; repeatable",
    )
    p.add_argument("--noise-std", type=float, default=0.0)
    p.add_argument("--duration", type=float, help="seconds")
    p.add_argument("--rate", type=float, help="samples per second")
    p.add_argument("--seed", type=int, help="noise generator seed")
    p.add_argument("--output", "-o", help="CSV path (default stdout)")

    p = sub.add_parser("encode", help="encode a signal CSV to an event stream")
    p.add_argument("--scheme", type=Scheme, choices=list(Scheme), required=True)
    p.add_argument("--input", "-i", required=True, help="signal CSV path")
    p.add_argument("--output", "-o", required=True, help="event stream path")
    p.add_argument("--sidecar", help="params sidecar path (default OUTPUT.params)")
    p.add_argument("--rate", type=float, help="declared sample rate to validate")
    p.add_argument("--params", help="params config file instead of flags")
    p.add_argument("--probabilistic", action="store_true", help="grf draws spikes")
    p.add_argument("--seed", type=int, help="seed for --probabilistic")
    _add_param_flags(p)

    p = sub.add_parser("decode", help="reconstruct a signal CSV from events")
    p.add_argument("--input", "-i", required=True, help="event stream path")
    p.add_argument("--params", help="params sidecar path (default INPUT.params)")
    p.add_argument("--output", "-o", help="CSV path (default stdout)")

    p = sub.add_parser("stream", help="encode samples line by line")
    p.add_argument(
        "--scheme",
        type=Scheme,
        choices=[Scheme.TBR, Scheme.SF, Scheme.MW, Scheme.POSITION, Scheme.GRF],
        required=True,
    )
    p.add_argument("--rate", type=float, default=1.0, help="samples per second")
    p.add_argument("--t0", type=float, default=0.0, help="timestamp of sample 0")
    p.add_argument(
        "--calibration",
        type=int,
        help="tbr: derive the threshold from this many leading samples",
    )
    p.add_argument("--input", "-i", help="sample file (default stdin)")
    p.add_argument("--output", "-o", help="event file (default stdout)")
    _add_param_flags(p)

    p = sub.add_parser("bench", help="run the Monte-Carlo benchmark")
    p.add_argument("--config", help="bench config file")
    p.add_argument("--output", "-o", help="report path (default stdout)")
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.add_argument("--samples", type=int, help="override samples per case")
    p.add_argument("--durations", type=_float_list, help="override case durations")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("tune", help="grid-search codec parameters on a signal")
    p.add_argument("--scheme", type=Scheme, choices=list(Scheme), required=True)
    p.add_argument("--input", "-i", required=True, help="signal CSV path")
    p.add_argument(
        "--grid",
        action="append",
        default=[],
        metavar="NAME=V1,V2,...",
        help="grid over threshold, factor, window or filter_scale; repeatable",
    )
    p.add_argument("--rmse-weight", type=float, default=1.0)
    p.add_argument("--efficiency-weight", type=float, default=0.0)
    p.add_argument("--rate", type=float, help="declared sample rate to validate")
    p.add_argument("--output", "-o", help="tuned params path (default stdout)")
    _add_param_flags(p)

    return parser


# ---------------------------------------------------------------------------
# helpers


def _open_input(path: str):
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    return open(path, "r", encoding="utf-8")


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as out:
            out.write(text)


def _filter_from_args(args) -> object | None:
    if args.filter_len is None and args.filter_kind is None and args.filter_scale is None:
        return None
    if args.filter_len is None:
        raise UsageError("--filter-len is required when specifying a filter")
    kind = args.filter_kind or "gaussian"
    scale = 1.0 if args.filter_scale is None else args.filter_scale
    return make_fir_filter(kind, args.filter_len, scale)


def _params_from_flags(args, scheme: Scheme) -> CodecParams:
    return CodecParams(
        scheme=scheme,
        factor=args.factor,
        threshold=args.threshold,
        window=args.window,
        filter=_filter_from_args(args),
        m=args.neurons,
        n=args.subtimes,
        distribution=args.distribution,
        min_sig=None if args.min_sig is None else (args.min_sig,),
        max_sig=None if args.max_sig is None else (args.max_sig,),
    )


# ---------------------------------------------------------------------------
# subcommands


def _cmd_generate(args) -> int:
    if args.spec:
        with _open_input(args.spec) as handle:
            spec = signal_spec_from_config(handle.read())
    else:
        if not args.component or args.duration is None or args.rate is None:
            raise UsageError(
                "generate needs --spec or --component/--duration/--rate"
            )
        if args.noise_std > 0.0 and args.seed is None:
            raise UsageError("--seed is required when --noise-std > 0")
        try:
            spec = SignalSpec(
                components=tuple(args.component),
                noise_std=args.noise_std,
                duration=args.duration,
                sample_rate=args.rate,
                seed=args.seed or 0,
            )
        except SpikeCodecError as exc:
            raise UsageError(str(exc)) from None
    signal = generate(spec)
    import io as _io

    buf = _io.StringIO()
    write_signal_csv(signal, buf)
    _write_text(args.output, buf.getvalue())
    return 0


def _load_signal(path: str, rate: float | None) -> Signal:
    with _open_input(path) as handle:
        return read_signal_csv(handle, rate)


def _cmd_encode(args) -> int:
    signal = _load_signal(args.input, args.rate)
    scheme = Scheme(args.scheme)
    if args.params:
        with _open_input(args.params) as handle:
            loaded, _meta = params_from_sidecar(handle.read())
        base = loaded[0]
        if base.scheme is not scheme:
            raise UsageError(
                f"--scheme {scheme.value} does not match params file "
                f"({base.scheme.value})"
            )
        # side-channel state is re-derived at encode time (grf bounds persist)
        params = dataclasses.replace(base, init=None, shift=None)
    else:
        params = _params_from_flags(args, scheme)
    if codec.is_population(scheme) and signal.channels != 1:
        raise UsageError(f"{scheme.value} encodes a single channel")
    encoded = codec.encode(
        signal, params, probabilistic=args.probabilistic, seed=args.seed
    )
    sidecar_path = args.sidecar or args.output + ".params"
    sidecar_text = params_to_sidecar(
        [channel.params for channel in encoded],
        signal.sample_rate,
        signal.t0,
        len(signal),
    )
    with open(args.output, "w", encoding="utf-8") as out:
        write_events(
            [channel.spikes for channel in encoded],
            scheme,
            os.path.basename(sidecar_path),
            out,
        )
    _write_text(sidecar_path, sidecar_text)
    return 0


def _records_to_spikes(records, meta, params_list):
    """Rebuild dense spikes from event records; structural issues -> exit 3."""
    scheme = params_list[0].scheme
    rate, t0, length = meta["sample_rate"], meta["t0"], meta["length"]
    if scheme in (Scheme.GRF, Scheme.POSITION):
        p = params_list[0]
        m = p.m if p.m is not None else (
            len(p.distribution) if p.distribution else 0
        )
        if m < 1:
            raise FormatError("sidecar does not define the population size")
        n = p.n if scheme is Scheme.GRF else 1
        shape = (length, n, m) if scheme is Scheme.GRF else (length, m)
        cube = np.zeros(shape, dtype=np.uint8)
        for t, neuron, sub in records:
            i = int(round((t - t0) * rate))
            if not (0 <= i < length) or abs(t - (t0 + i / rate)) > TIME_TOLERANCE:
                raise FormatError(f"event at t={t} is off the sample grid")
            if not (0 <= neuron < m) or not (0 <= sub < n):
                raise FormatError(f"event ({t},{neuron},{sub}) out of bounds")
            index = (i, sub, neuron) if scheme is Scheme.GRF else (i, neuron)
            if cube[index]:
                raise FormatError(f"duplicate event at t={t}")
            cube[index] = 1
        return [PopulationSpikes(cube, rate, t0)]
    channels = meta["channels"]
    per_channel = [[] for _ in range(channels)]
    for t, polarity, channel in records:
        if not (0 <= channel < channels):
            raise FormatError(f"event channel {channel} out of bounds")
        per_channel[channel].append((t, polarity))
    try:
        return [
            events_to_dense(events, length, rate, t0) for events in per_channel
        ]
    except MalformedSpikes as exc:
        raise FormatError(str(exc)) from None


def _cmd_decode(args) -> int:
    with _open_input(args.input) as handle:
        stream = read_events(handle)
    params_path = args.params or args.input + ".params"
    if not os.path.exists(params_path):
        raise UsageError(f"no such file: {params_path}")
    with open(params_path, "r", encoding="utf-8") as handle:
        params_list, meta = params_from_sidecar(handle.read())
    if params_list[0].scheme is not stream["scheme"]:
        raise FormatError(
            f"event stream is {stream['scheme'].value} but sidecar is "
            f"{params_list[0].scheme.value}"
        )
    spikes_per_channel = _records_to_spikes(stream["records"], meta, params_list)
    decoded = [
        codec.decode(spikes, params)
        for spikes, params in zip(spikes_per_channel, params_list)
    ]
    if len(decoded) == 1:
        signal = decoded[0]
    else:
        signal = Signal(
            np.stack([d.samples for d in decoded]),
            meta["sample_rate"],
            meta["t0"],
        )
    import io as _io

    buf = _io.StringIO()
    write_signal_csv(signal, buf)
    _write_text(args.output, buf.getvalue())
    return 0


def _make_streamer(args):
    scheme = Scheme(args.scheme)
    if scheme is Scheme.SF:
        if args.threshold is None:
            raise UsageError("sf streaming requires --threshold")
        return StreamingSF(args.threshold, args.rate, args.t0)
    if scheme is Scheme.TBR:
        if (args.threshold is None) == (args.calibration is None):
            raise UsageError(
                "tbr streaming requires exactly one of --threshold or --calibration"
            )
        return StreamingTBR(
            args.rate,
            args.t0,
            threshold=args.threshold,
            factor=1.0 if args.factor is None else args.factor,
            calibration=args.calibration,
        )
    if scheme is Scheme.MW:
        if args.threshold is None or args.window is None:
            raise UsageError("mw streaming requires --threshold and --window")
        return StreamingMW(args.window, args.threshold, args.rate, args.t0)
    if scheme is Scheme.POSITION:
        if not args.distribution:
            raise UsageError("position streaming requires --distribution")
        return StreamingPosition(args.distribution, args.rate, args.t0)
    if args.neurons is None or args.subtimes is None:
        raise UsageError("grf streaming requires --neurons and --subtimes")
    if args.min_sig is None or args.max_sig is None:
        raise UsageError("grf streaming requires --min-sig and --max-sig")
    return StreamingGRF(
        args.neurons, args.subtimes, args.min_sig, args.max_sig, args.rate, args.t0
    )


def run_stream(args, source, sink, errlog=None) -> int:
    """Drive a streamer over text lines; shared by the CLI and tests."""
    if errlog is None:
        errlog = sys.stderr
    streamer = _make_streamer(args)
    population = Scheme(args.scheme) in (Scheme.GRF, Scheme.POSITION)
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            sample = float(line)
        except ValueError:
            print(f"warning: skipping non-numeric line {lineno}", file=errlog)
            continue
        for event in streamer.feed(sample):
            if population:
                sink.write(event_line_population(*event))
            else:
                sink.write(event_line_polarity(event[0], event[1], event[2]))
        sink.flush()
    return 0


def _cmd_stream(args) -> int:
    source = _open_input(args.input) if args.input else sys.stdin
    sink = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        return run_stream(args, source, sink)
    finally:
        if args.input:
            source.close()
        if args.output:
            sink.close()


def _cmd_bench(args) -> int:
    if args.config:
        path = args.config
    else:
        path = os.environ.get("SPIKECODEC_CONFIG")
    if path:
        with _open_input(path) as handle:
            config = bench_config_from_text(handle.read())
    else:
        config = default_bench_config()
    if args.samples is not None or args.durations is not None:
        config = dataclasses.replace(
            config,
            samples_per_case=args.samples or config.samples_per_case,
            durations=args.durations or config.durations,
        )
    report = run_benchmark(config, workers=args.workers)
    text = report_to_csv(report) if args.format == "csv" else report_to_markdown(report)
    _write_text(args.output, text)
    return 0


def _cmd_tune(args) -> int:
    signal = _load_signal(args.input, args.rate)
    scheme = Scheme(args.scheme)
    grid: dict[str, list] = {}
    for item in args.grid:
        if "=" not in item:
            raise UsageError(f"--grid expects NAME=V1,V2,..., got {item!r}")
        name, _, values = item.partition("=")
        name = name.strip()
        tokens = [tok for tok in values.split(",") if tok.strip()]
        try:
            if name == "window":
                grid[name] = [int(tok) for tok in tokens]
            elif name in ("threshold", "factor"):
                grid[name] = [float(tok) for tok in tokens]
            elif name == "filter_scale":
                if args.filter_len is None:
                    raise UsageError("filter_scale grid requires --filter-len")
                kind = args.filter_kind or "gaussian"
                grid["filter"] = [
                    make_fir_filter(kind, args.filter_len, float(tok))
                    for tok in tokens
                ]
            else:
                raise UsageError(f"unsupported grid parameter {name!r}")
        except ValueError:
            raise UsageError(f"--grid {name}: non-numeric value") from None
    if not grid:
        raise UsageError("tune requires at least one --grid")
    fixed = _params_from_flags(args, scheme)
    for field in ("factor", "threshold", "window", "filter", "m", "n", "distribution"):
        value = getattr(fixed, field)
        if value is not None and field not in grid:
            grid[field] = [value]
    best = tune_params(
        scheme,
        signal,
        grid,
        rmse_weight=args.rmse_weight,
        efficiency_weight=args.efficiency_weight,
    )
    text = params_to_sidecar([best], signal.sample_rate, signal.t0, len(signal))
    _write_text(args.output, text)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "stream": _cmd_stream,
    "bench": _cmd_bench,
    "tune": _cmd_tune,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return 3
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpikeCodecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    entrypoint()
