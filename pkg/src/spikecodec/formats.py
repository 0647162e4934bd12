"""Text formats: flat key-value configs, signal CSV, and event streams.

All floats are written with ``repr`` so a write/read round trip is exact.
The flat config format is shared by signal specs, params sidecars and
benchmark configs::

    # comment
    format_version = 1
    kind = params
    scheme = sf
    threshold = 0.35

Values are scalars or comma-separated lists; keys may be dotted.  Parsing
problems raise :class:`FormatError`, which the CLI reports as malformed
input (exit code 3) as opposed to codec failures (exit code 4).
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Sequence, TextIO

import numpy as np

from .signals import SignalSpec
from .types import (
    TIME_TOLERANCE,
    CodecParams,
    FIRFilter,
    PopulationSpikes,
    Scheme,
    Signal,
    SpikeTrain,
)

__all__ = [
    "FormatError",
    "FORMAT_VERSION",
    "parse_config",
    "dump_config",
    "parse_components",
    "check_version_kind",
    "signal_spec_to_config",
    "signal_spec_from_config",
    "params_to_sidecar",
    "params_from_sidecar",
    "write_signal_csv",
    "read_signal_csv",
    "write_events",
    "read_events",
    "format_float",
]

FORMAT_VERSION = 1


class FormatError(Exception):
    """A text document does not follow the documented schema."""


def format_float(value: float) -> str:
    """Shortest decimal text that parses back to the same float64."""
    return repr(float(value))


def _float_list(values: Iterable[float]) -> str:
    return ", ".join(format_float(v) for v in values)


# ---------------------------------------------------------------------------
# flat key-value config


def parse_config(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines into a dict; duplicates are errors."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise FormatError(f"line {lineno}: empty key")
        if key in pairs:
            raise FormatError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value.strip()
    return pairs


def dump_config(pairs: Sequence[tuple[str, str]], header: str | None = None) -> str:
    lines = [] if header is None else [f"# {header}"]
    lines.extend(f"{key} = {value}" for key, value in pairs)
    return "\n".join(lines) + "\n"


def _require(pairs: dict[str, str], key: str) -> str:
    if key not in pairs:
        raise FormatError(f"missing key {key!r}")
    return pairs[key]


def _as_float(pairs: dict[str, str], key: str) -> float:
    try:
        return float(_require(pairs, key))
    except ValueError as exc:
        raise FormatError(f"key {key!r}: {exc}") from None


def _as_int(pairs: dict[str, str], key: str) -> int:
    try:
        return int(_require(pairs, key))
    except ValueError as exc:
        raise FormatError(f"key {key!r}: {exc}") from None


def _as_float_list(text: str, key: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise FormatError(f"key {key!r}: {exc}") from None


def check_version_kind(pairs: dict[str, str], kind: str) -> None:
    version = _as_int(pairs, "format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {version}")
    actual = _require(pairs, "kind")
    if actual != kind:
        raise FormatError(f"expected kind={kind}, got kind={actual}")


# ---------------------------------------------------------------------------
# signal specs


def signal_spec_to_config(spec: SignalSpec) -> str:
    pairs = [
        ("format_version", str(FORMAT_VERSION)),
        ("kind", "signal"),
        (
            "components",
            "; ".join(
                f"{format_float(f)}:{format_float(a)}:{format_float(p)}"
                for f, a, p in spec.components
            ),
        ),
        ("noise_std", format_float(spec.noise_std)),
        ("duration", format_float(spec.duration)),
        ("sample_rate", format_float(spec.sample_rate)),
        ("seed", str(spec.seed)),
    ]
    return dump_config(pairs, header="spikecodec signal spec")


def parse_components(text: str) -> tuple[tuple[float, float, float], ...]:
    comps = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        fields = part.split(":")
        if len(fields) != 3:
            raise FormatError(f"component {part!r} must be freq:amp:phase")
        try:
            comps.append(tuple(float(v) for v in fields))
        except ValueError as exc:
            raise FormatError(f"component {part!r}: {exc}") from None
    if not comps:
        raise FormatError("components must list at least one freq:amp:phase triple")
    return tuple(comps)


def signal_spec_from_config(text: str) -> SignalSpec:
    pairs = parse_config(text)
    check_version_kind(pairs, "signal")
    return SignalSpec(
        components=parse_components(_require(pairs, "components")),
        noise_std=_as_float(pairs, "noise_std"),
        duration=_as_float(pairs, "duration"),
        sample_rate=_as_float(pairs, "sample_rate"),
        seed=_as_int(pairs, "seed"),
    )


# ---------------------------------------------------------------------------
# params sidecar


def params_to_sidecar(
    params_per_channel: Sequence[CodecParams],
    sample_rate: float,
    t0: float,
    length: int,
) -> str:
    """Serialize per-channel params (same knobs, per-channel side values)."""
    head = params_per_channel[0]
    scheme = Scheme(head.scheme)
    pairs = [
        ("format_version", str(FORMAT_VERSION)),
        ("kind", "params"),
        ("scheme", scheme.value),
        ("sample_rate", format_float(sample_rate)),
        ("t0", format_float(t0)),
        ("length", str(int(length))),
        ("channels", str(len(params_per_channel))),
    ]
    if head.factor is not None:
        pairs.append(("factor", format_float(head.factor)))
    if head.threshold is not None:
        if scheme is Scheme.TBR:
            # derived per channel by the encoder
            pairs.append(
                ("threshold", _float_list(p.threshold for p in params_per_channel))
            )
        else:
            pairs.append(("threshold", format_float(head.threshold)))
    if head.window is not None:
        pairs.append(("window", str(int(head.window))))
    if head.filter is not None:
        pairs.append(("filter", _float_list(head.filter.coefficients)))
    if head.m is not None:
        pairs.append(("m", str(int(head.m))))
    if head.n is not None:
        pairs.append(("n", str(int(head.n))))
    if head.distribution is not None:
        pairs.append(("distribution", _float_list(head.distribution)))
    for name in ("init", "shift", "min_sig", "max_sig"):
        if getattr(head, name) is not None:
            values = [getattr(p, name)[0] for p in params_per_channel]
            pairs.append((name, _float_list(values)))
    return dump_config(pairs, header="spikecodec params sidecar")


def params_from_sidecar(text: str) -> tuple[list[CodecParams], dict]:
    """Parse a sidecar back into per-channel params plus signal metadata."""
    pairs = parse_config(text)
    check_version_kind(pairs, "params")
    try:
        scheme = Scheme(_require(pairs, "scheme"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    meta = {
        "sample_rate": _as_float(pairs, "sample_rate"),
        "t0": _as_float(pairs, "t0"),
        "length": _as_int(pairs, "length"),
        "channels": _as_int(pairs, "channels"),
    }
    if meta["channels"] < 1 or meta["length"] < 1:
        raise FormatError("channels and length must be >= 1")

    def lst(key: str) -> tuple[float, ...] | None:
        return _as_float_list(pairs[key], key) if key in pairs else None

    thresholds = lst("threshold")
    filt = lst("filter")
    params = []
    for c in range(meta["channels"]):

        def pick(values, c=c):
            if values is None:
                return None
            return (values[c if len(values) > c else 0],)

        threshold = None
        if thresholds is not None:
            threshold = thresholds[c if len(thresholds) > c else 0]
        params.append(
            CodecParams(
                scheme=scheme,
                factor=_as_float(pairs, "factor") if "factor" in pairs else None,
                threshold=threshold,
                window=_as_int(pairs, "window") if "window" in pairs else None,
                filter=FIRFilter(filt) if filt is not None else None,
                m=_as_int(pairs, "m") if "m" in pairs else None,
                n=_as_int(pairs, "n") if "n" in pairs else None,
                distribution=lst("distribution"),
                init=pick(lst("init")),
                shift=pick(lst("shift")),
                min_sig=pick(lst("min_sig")),
                max_sig=pick(lst("max_sig")),
            )
        )
    return params, meta


# ---------------------------------------------------------------------------
# signal CSV


def write_signal_csv(signal: Signal, out: TextIO) -> None:
    """``t,value`` rows (plus a channel column for multi-channel signals)."""
    times = signal.timestamps
    if signal.channels == 1:
        out.write("t,value\n")
        for t, v in zip(times, signal.samples):
            out.write(f"{format_float(t)},{format_float(v)}\n")
    else:
        out.write("t,value,channel\n")
        for i, t in enumerate(times):
            for c in range(signal.channels):
                out.write(
                    f"{format_float(t)},{format_float(signal.samples[c, i])},{c}\n"
                )


def read_signal_csv(text_or_file: str | TextIO, sample_rate: float | None = None) -> Signal:
    """Parse a signal CSV; the grid is validated against the sample rate.

    When ``sample_rate`` is omitted it is inferred from the first two
    timestamps.  Every timestamp must match ``t0 + i / rate`` within 1e-9 s.
    """
    handle = io.StringIO(text_or_file) if isinstance(text_or_file, str) else text_or_file
    reader = csv.reader(handle)
    header = next(reader, None)
    if header is None:
        raise FormatError("empty signal file")
    header = [h.strip().lower() for h in header]
    if header[:2] != ["t", "value"] or len(header) > 3 or (
        len(header) == 3 and header[2] != "channel"
    ):
        raise FormatError("header must be 't,value' or 't,value,channel'")
    has_channel = len(header) == 3
    times: list[float] = []
    by_channel: dict[int, list[float]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise FormatError(f"line {lineno}: expected {len(header)} fields")
        try:
            t = float(row[0])
            v = float(row[1])
            c = int(row[2]) if has_channel else 0
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        if not (math.isfinite(t) and math.isfinite(v)):
            raise FormatError(f"line {lineno}: non-finite value")
        if c < 0:
            raise FormatError(f"line {lineno}: negative channel")
        if c == 0:
            times.append(t)
        channel = by_channel.setdefault(c, [])
        # rows are time-major with channel 0 first, so every channel must
        # hold exactly len(times) - 1 values before this row's append
        if len(channel) != len(times) - 1:
            raise FormatError(f"line {lineno}: channels out of step")
        channel.append(v)
    if not times:
        raise FormatError("signal file contains no samples")
    if sample_rate is None:
        if len(times) < 2:
            raise FormatError("cannot infer sample rate from a single sample")
        dt = times[1] - times[0]
        if dt <= 0:
            raise FormatError("timestamps must increase")
        sample_rate = 1.0 / dt
    t0 = times[0]
    expected = t0 + np.arange(len(times)) / sample_rate
    if np.max(np.abs(np.asarray(times) - expected)) > TIME_TOLERANCE:
        raise FormatError("timestamps are off the declared sample grid")
    channels = sorted(by_channel)
    if channels != list(range(len(channels))):
        raise FormatError("channel indices must be contiguous from 0")
    lengths = {len(v) for v in by_channel.values()}
    if len(lengths) != 1:
        raise FormatError("channels have unequal lengths")
    try:
        if len(channels) == 1:
            return Signal(by_channel[0], sample_rate, t0)
        return Signal([by_channel[c] for c in channels], sample_rate, t0)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# event streams


def _event_header(scheme: Scheme, params_ref: str) -> str:
    kind = "population" if scheme in (Scheme.GRF, Scheme.POSITION) else "polarity"
    return (
        f"# spikecodec-events format={FORMAT_VERSION} scheme={scheme.value} "
        f"kind={kind} params={params_ref}\n"
    )


def event_line_polarity(t: float, polarity: int, channel: int) -> str:
    return f"{format_float(t)},{'+1' if polarity > 0 else '-1'},{channel}\n"


def event_line_population(t: float, neuron: int, subtime: int) -> str:
    return f"{format_float(t)},{neuron},{subtime}\n"


def write_events(
    spikes_per_channel: Sequence[SpikeTrain | PopulationSpikes],
    scheme: Scheme,
    params_ref: str,
    out: TextIO,
) -> None:
    """Write the event stream for one encode call.

    1-D schemes produce ``t,polarity,channel`` records interleaved in time
    order; population schemes (single channel) produce ``t,neuron,subtime``
    records ordered by timestep, then sub-timestep, then neuron.
    """
    scheme = Scheme(scheme)
    out.write(_event_header(scheme, params_ref))
    if scheme in (Scheme.GRF, Scheme.POSITION):
        pop = spikes_per_channel[0]
        arr = pop.spikes
        times = pop.timestamps
        if arr.ndim == 2:
            for t_idx, neuron in zip(*np.nonzero(arr)):
                out.write(event_line_population(times[t_idx], int(neuron), 0))
        else:
            for t_idx, sub, neuron in zip(*np.nonzero(arr)):
                out.write(
                    event_line_population(times[t_idx], int(neuron), int(sub))
                )
        return
    merged: list[tuple[float, int, int, int]] = []
    for c, train in enumerate(spikes_per_channel):
        times = train.timestamps
        for i in np.flatnonzero(train.polarities):
            merged.append((float(times[i]), c, int(i), int(train.polarities[i])))
    merged.sort(key=lambda rec: (rec[2], rec[1]))
    for t, c, _i, p in merged:
        out.write(event_line_polarity(t, p, c))


def read_events(text_or_file: str | TextIO) -> dict:
    """Parse an event stream into header fields plus raw records."""
    handle = io.StringIO(text_or_file) if isinstance(text_or_file, str) else text_or_file
    first = handle.readline()
    if not first.startswith("# spikecodec-events"):
        raise FormatError("missing event stream header")
    fields = {}
    for token in first.split()[2:]:
        if "=" not in token:
            raise FormatError(f"malformed header token {token!r}")
        key, _, value = token.partition("=")
        fields[key] = value
    try:
        if int(fields.get("format", "-1")) != FORMAT_VERSION:
            raise FormatError(f"unsupported event format {fields.get('format')!r}")
        scheme = Scheme(fields["scheme"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad event header: {exc}") from None
    kind = fields.get("kind")
    expected_kind = (
        "population" if scheme in (Scheme.GRF, Scheme.POSITION) else "polarity"
    )
    if kind != expected_kind:
        raise FormatError(f"scheme {scheme.value} expects kind={expected_kind}")
    records = []
    for lineno, raw in enumerate(handle, start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 3 fields")
        try:
            t = float(parts[0])
            a = int(parts[1])
            b = int(parts[2])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        if not math.isfinite(t):
            raise FormatError(f"line {lineno}: non-finite timestamp")
        records.append((t, a, b))
    return {"scheme": scheme, "kind": kind, "params_ref": fields.get("params", ""), "records": records}
