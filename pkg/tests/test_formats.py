"""Text format tests: configs, signal CSV, params sidecars, event streams.

Every writer/reader pair must round-trip exactly (floats via repr), and every
documented schema violation must surface as FormatError so the CLI can map it
to the malformed-input exit code.
"""

import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spikecodec import (
    CodecParams,
    FIRFilter,
    FormatError,
    Scheme,
    Signal,
    SignalSpec,
    SpikeTrain,
    encode,
    generate,
    make_fir_filter,
)
from spikecodec.formats import (
    check_version_kind,
    dump_config,
    format_float,
    params_from_sidecar,
    params_to_sidecar,
    parse_config,
    read_events,
    read_signal_csv,
    signal_spec_from_config,
    signal_spec_to_config,
    write_events,
    write_signal_csv,
)

import strategies as sts


# ---------------------------------------------------------------------------
# float text


@given(value=sts.finite)
def test_float_text_round_trips_exactly(value):
    assert float(format_float(value)) == value


def test_float_text_handles_extremes():
    for value in (0.0, -0.0, 1e-308, 1.7976931348623157e308, 0.1, 1 / 3):
        assert float(format_float(value)) == value


# ---------------------------------------------------------------------------
# flat config


def test_parse_config_skips_comments_and_blanks():
    text = "# heading\n\n  a = 1 \nb= x y \n# tail\n"
    assert parse_config(text) == {"a": "1", "b": "x y"}


def test_parse_config_rejects_duplicate_keys():
    with pytest.raises(FormatError, match="duplicate"):
        parse_config("a = 1\na = 2\n")


def test_parse_config_rejects_missing_equals():
    with pytest.raises(FormatError, match="key = value"):
        parse_config("just some words\n")


def test_parse_config_rejects_empty_key():
    with pytest.raises(FormatError, match="empty key"):
        parse_config("= 3\n")


def test_dump_config_round_trips():
    pairs = [("format_version", "1"), ("kind", "demo"), ("x", "1.5, 2.5")]
    text = dump_config(pairs, header="demo file")
    assert text.startswith("# demo file\n")
    assert parse_config(text) == dict(pairs)


def test_check_version_kind():
    check_version_kind({"format_version": "1", "kind": "params"}, "params")
    with pytest.raises(FormatError, match="format_version"):
        check_version_kind({"format_version": "9", "kind": "params"}, "params")
    with pytest.raises(FormatError, match="kind"):
        check_version_kind({"format_version": "1", "kind": "signal"}, "params")
    with pytest.raises(FormatError, match="missing"):
        check_version_kind({"kind": "params"}, "params")


# ---------------------------------------------------------------------------
# signal CSV


def _csv_text(signal: Signal) -> str:
    out = io.StringIO()
    write_signal_csv(signal, out)
    return out.getvalue()


def test_signal_csv_round_trip_exact():
    signal = Signal([0.1, 1 / 3, -2.75, 1e-17], 100.0, t0=0.25)
    back = read_signal_csv(_csv_text(signal))
    assert np.array_equal(back.samples, signal.samples)
    assert back.sample_rate == pytest.approx(signal.sample_rate)
    assert back.t0 == signal.t0


def test_signal_csv_explicit_rate_single_sample():
    text = "t,value\n0.0,5.0\n"
    back = read_signal_csv(text, sample_rate=10.0)
    assert np.array_equal(back.samples, [5.0])
    assert back.sample_rate == 10.0
    with pytest.raises(FormatError, match="infer"):
        read_signal_csv(text)


def test_signal_csv_multichannel_round_trip():
    signal = Signal([[0.0, 1.5, -2.0], [3.0, 0.25, 9.0]], 50.0, t0=1.0)
    text = _csv_text(signal)
    assert text.splitlines()[0] == "t,value,channel"
    back = read_signal_csv(text)
    assert back.channels == 2
    assert np.array_equal(back.samples, signal.samples)
    assert back.t0 == 1.0


@given(
    samples=st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=40),
    rate=st.sampled_from([1.0, 8.0, 100.0, 1000.0]),
)
def test_signal_csv_round_trip_property(samples, rate):
    signal = Signal(samples, rate)
    back = read_signal_csv(_csv_text(signal))
    assert np.array_equal(back.samples, signal.samples)


def test_signal_csv_rejects_empty():
    with pytest.raises(FormatError, match="empty"):
        read_signal_csv("")
    with pytest.raises(FormatError, match="no samples"):
        read_signal_csv("t,value\n")


def test_signal_csv_rejects_bad_header():
    with pytest.raises(FormatError, match="header"):
        read_signal_csv("value,t\n0.0,1.0\n")
    with pytest.raises(FormatError, match="header"):
        read_signal_csv("t,value,magic\n0.0,1.0,0\n")


def test_signal_csv_rejects_off_grid_timestamps():
    with pytest.raises(FormatError, match="grid"):
        read_signal_csv("t,value\n0.0,1.0\n0.01,2.0\n0.025,3.0\n")


def test_signal_csv_rejects_nonincreasing_time():
    with pytest.raises(FormatError, match="increase"):
        read_signal_csv("t,value\n0.0,1.0\n0.0,2.0\n")


def test_signal_csv_rejects_bad_rows():
    with pytest.raises(FormatError, match="fields"):
        read_signal_csv("t,value\n0.0\n")
    with pytest.raises(FormatError, match="line 2"):
        read_signal_csv("t,value\n0.0,squid\n")
    with pytest.raises(FormatError, match="finite"):
        read_signal_csv("t,value\n0.0,nan\n0.01,1.0\n")


def test_signal_csv_rejects_interleave_errors():
    # channel 1 appears twice for one timestep
    bad = "t,value,channel\n0.0,1.0,0\n0.0,2.0,1\n0.0,3.0,1\n"
    with pytest.raises(FormatError, match="out of step"):
        read_signal_csv(bad, sample_rate=100.0)
    # channel indices skip 1
    bad = "t,value,channel\n0.0,1.0,0\n0.0,2.0,2\n"
    with pytest.raises(FormatError):
        read_signal_csv(bad, sample_rate=100.0)
    with pytest.raises(FormatError, match="negative channel"):
        read_signal_csv("t,value,channel\n0.0,1.0,-1\n", sample_rate=100.0)


# ---------------------------------------------------------------------------
# signal spec config


def test_signal_spec_config_round_trip():
    spec = SignalSpec(
        components=((1.0, 2.2, 0.0), (2.0, 0.9, 0.5), (5.0, 0.32, -0.25)),
        noise_std=0.1,
        duration=2.5,
        sample_rate=100.0,
        seed=411,
    )
    back = signal_spec_from_config(signal_spec_to_config(spec))
    assert back == spec


def test_signal_spec_config_rejects_bad_components():
    good = signal_spec_to_config(
        SignalSpec(((1.0, 1.0, 0.0),), 0.0, 1.0, 10.0, seed=0)
    )
    with pytest.raises(FormatError, match="freq:amp:phase"):
        signal_spec_from_config(good.replace("1.0:1.0:0.0", "1.0:1.0"))
    with pytest.raises(FormatError):
        signal_spec_from_config(good.replace("1.0:1.0:0.0", "a:b:c"))
    with pytest.raises(FormatError, match="at least one"):
        signal_spec_from_config(good.replace("1.0:1.0:0.0", ""))


def test_signal_spec_config_rejects_wrong_kind():
    text = dump_config([("format_version", "1"), ("kind", "params")])
    with pytest.raises(FormatError, match="kind"):
        signal_spec_from_config(text)


# ---------------------------------------------------------------------------
# params sidecar


def _assert_params_equal(a: CodecParams, b: CodecParams):
    assert a.scheme == b.scheme
    for name in ("factor", "threshold", "window", "m", "n"):
        assert getattr(a, name) == getattr(b, name), name
    for name in ("distribution", "init", "shift", "min_sig", "max_sig"):
        assert getattr(a, name) == getattr(b, name), name
    if a.filter is None or b.filter is None:
        assert a.filter is None and b.filter is None
    else:
        assert np.array_equal(a.filter.coefficients, b.filter.coefficients)


def _example_params():
    fir = make_fir_filter("gaussian", 5, 0.8)
    return {
        Scheme.TBR: CodecParams(Scheme.TBR, factor=0.5),
        Scheme.SF: CodecParams(Scheme.SF, threshold=0.4),
        Scheme.MW: CodecParams(Scheme.MW, threshold=0.3, window=2),
        Scheme.HSA: CodecParams(Scheme.HSA, filter=fir),
        Scheme.THSA: CodecParams(Scheme.THSA, threshold=0.7, filter=fir),
        Scheme.BSA: CodecParams(Scheme.BSA, threshold=0.9, filter=fir),
        Scheme.GRF: CodecParams(Scheme.GRF, m=4, n=3),
        Scheme.POSITION: CodecParams(
            Scheme.POSITION, distribution=(0.0, 0.5, 1.0)
        ),
    }


@pytest.mark.parametrize("scheme", list(Scheme), ids=lambda s: s.value)
def test_params_sidecar_round_trip_after_encode(scheme):
    signal = generate(
        SignalSpec(((1.0, 1.0, 0.0), (3.0, 0.4, 0.2)), 0.05, 0.5, 60.0, seed=9)
    )
    channels = encode(signal, _example_params()[scheme])
    originals = [ch.params for ch in channels]
    text = params_to_sidecar(originals, signal.sample_rate, signal.t0, len(signal))
    parsed, meta = params_from_sidecar(text)
    assert meta == {
        "sample_rate": signal.sample_rate,
        "t0": signal.t0,
        "length": len(signal),
        "channels": 1,
    }
    assert len(parsed) == 1
    _assert_params_equal(parsed[0], originals[0])


def test_params_sidecar_multichannel_keeps_per_channel_values():
    signal = Signal(
        [[0.0, 1.0, 3.0, 3.5], [0.0, 10.0, 30.0, 35.0]], 20.0, t0=0.5
    )
    channels = encode(signal, CodecParams(Scheme.TBR, factor=0.5))
    originals = [ch.params for ch in channels]
    assert originals[0].threshold != originals[1].threshold
    text = params_to_sidecar(originals, signal.sample_rate, signal.t0, len(signal))
    parsed, meta = params_from_sidecar(text)
    assert meta["channels"] == 2
    for got, want in zip(parsed, originals):
        _assert_params_equal(got, want)


def test_params_sidecar_rejects_wrong_kind():
    text = signal_spec_to_config(SignalSpec(((1.0, 1.0, 0.0),), 0.0, 1.0, 10.0, 0))
    with pytest.raises(FormatError, match="kind"):
        params_from_sidecar(text)


def test_params_sidecar_rejects_unknown_scheme():
    text = dump_config(
        [
            ("format_version", "1"),
            ("kind", "params"),
            ("scheme", "morse"),
            ("sample_rate", "10.0"),
            ("t0", "0.0"),
            ("length", "4"),
            ("channels", "1"),
        ]
    )
    with pytest.raises(FormatError, match="morse"):
        params_from_sidecar(text)


def test_params_sidecar_rejects_bad_meta():
    base = [
        ("format_version", "1"),
        ("kind", "params"),
        ("scheme", "sf"),
        ("sample_rate", "10.0"),
        ("t0", "0.0"),
        ("length", "0"),
        ("channels", "1"),
        ("threshold", "0.5"),
    ]
    with pytest.raises(FormatError, match=">= 1"):
        params_from_sidecar(dump_config(base))
    missing = [(k, v) for k, v in base if k != "sample_rate"]
    with pytest.raises(FormatError, match="sample_rate"):
        params_from_sidecar(dump_config(missing))


def test_params_sidecar_rejects_non_numeric_value():
    text = dump_config(
        [
            ("format_version", "1"),
            ("kind", "params"),
            ("scheme", "sf"),
            ("sample_rate", "ten"),
            ("t0", "0.0"),
            ("length", "4"),
            ("channels", "1"),
            ("threshold", "0.5"),
        ]
    )
    with pytest.raises(FormatError, match="sample_rate"):
        params_from_sidecar(text)


# ---------------------------------------------------------------------------
# event streams


def _events_text(spikes, scheme, ref="demo.params"):
    out = io.StringIO()
    write_events(spikes, scheme, ref, out)
    return out.getvalue()


def test_polarity_events_round_trip():
    train = SpikeTrain([0, 1, -1, 0, 1], 100.0, t0=2.0)
    text = _events_text([train], Scheme.SF)
    doc = read_events(text)
    assert doc["scheme"] is Scheme.SF
    assert doc["kind"] == "polarity"
    assert doc["params_ref"] == "demo.params"
    assert doc["records"] == [(2.01, 1, 0), (2.02, -1, 0), (2.04, 1, 0)]


def test_polarity_events_interleave_by_timestep_then_channel():
    a = SpikeTrain([0, 1, 0], 10.0)
    b = SpikeTrain([1, -1, 0], 10.0)
    doc = read_events(_events_text([a, b], Scheme.TBR))
    assert doc["records"] == [(0.0, 1, 1), (0.1, 1, 0), (0.1, -1, 1)]


def test_population_events_round_trip_cube():
    signal = Signal([0.1, 0.9, 0.4], 10.0)
    channel = encode(signal, CodecParams(Scheme.GRF, m=4, n=3))[0]
    cube = channel.spikes
    doc = read_events(_events_text([cube], Scheme.GRF))
    assert doc["kind"] == "population"
    rebuilt = np.zeros(cube.spikes.shape, dtype=np.uint8)
    for t, neuron, sub in doc["records"]:
        idx = int(round((t - cube.t0) * cube.sample_rate))
        rebuilt[idx, sub, neuron] = 1
    assert np.array_equal(rebuilt, cube.spikes)


def test_population_events_round_trip_flat():
    signal = Signal([0.1, 0.9, 0.4], 10.0)
    params = CodecParams(Scheme.POSITION, distribution=(0.0, 0.5, 1.0))
    flat = encode(signal, params)[0].spikes
    doc = read_events(_events_text([flat], Scheme.POSITION))
    assert [(r[1], r[2]) for r in doc["records"]] == [(0, 0), (2, 0), (1, 0)]


def test_events_rejects_missing_or_malformed_header():
    with pytest.raises(FormatError, match="header"):
        read_events("0.0,1,0\n")
    with pytest.raises(FormatError, match="token"):
        read_events("# spikecodec-events format=1 schemesf\n")
    with pytest.raises(FormatError, match="format"):
        read_events("# spikecodec-events format=7 scheme=sf kind=polarity params=\n")
    with pytest.raises(FormatError):
        read_events("# spikecodec-events format=1 scheme=morse kind=polarity params=\n")


def test_events_rejects_kind_scheme_mismatch():
    text = "# spikecodec-events format=1 scheme=sf kind=population params=\n"
    with pytest.raises(FormatError, match="kind=polarity"):
        read_events(text)
    text = "# spikecodec-events format=1 scheme=grf kind=polarity params=\n"
    with pytest.raises(FormatError, match="kind=population"):
        read_events(text)


def test_events_rejects_bad_records():
    head = "# spikecodec-events format=1 scheme=sf kind=polarity params=\n"
    with pytest.raises(FormatError, match="3 fields"):
        read_events(head + "0.0,1\n")
    with pytest.raises(FormatError, match="line 2"):
        read_events(head + "0.0,one,0\n")
    with pytest.raises(FormatError, match="finite"):
        read_events(head + "inf,1,0\n")


def test_events_skips_comments_and_blank_lines():
    head = "# spikecodec-events format=1 scheme=sf kind=polarity params=\n"
    doc = read_events(head + "\n# note\n0.5,1,0\n")
    assert doc["records"] == [(0.5, 1, 0)]
