import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
import strategies as sts
from spikecodec.errors import (
    ConstantSignal,
    EmptyDistribution,
    MalformedSpikes,
    OutOfRange,
)
from spikecodec.population import (
    GRFParams,
    grf_decode,
    grf_encode,
    position_decode,
    position_encode,
)
from spikecodec.signals import rmse
from spikecodec.types import PopulationSpikes, Signal


def sig(values, rate=100.0):
    return Signal(np.asarray(values, dtype=np.float64), rate)


# ---------------------------------------------------------------------------
# position coding


def test_position_encode_examples():
    spikes = position_encode(sig([0.9]), [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(spikes.spikes, [[0, 0, 1]])
    # exact codebook value
    spikes = position_encode(sig([0.5]), [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(spikes.spikes, [[0, 1, 0]])
    # equidistant tie goes to the lowest index
    spikes = position_encode(sig([0.25]), [0.0, 0.5])
    np.testing.assert_array_equal(spikes.spikes, [[1, 0]])


@given(
    x=sts.sample_lists(min_size=1, max_size=32),
    dist=st.lists(sts.small, min_size=1, max_size=9),
)
def test_position_matches_oracle_and_fires_once(x, dist):
    spikes = position_encode(sig(x), dist)
    assert np.all(spikes.spikes.sum(axis=1) == 1)
    np.testing.assert_array_equal(
        np.argmax(spikes.spikes, axis=1), oracles.oracle_position_encode(x, dist)
    )


def test_position_decode_lookup():
    spikes = PopulationSpikes(np.array([[0, 0, 1]], dtype=np.uint8), 100.0)
    out = position_decode(spikes, [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(out.samples, [1.0])


def test_position_decode_of_codebook_values_is_exact():
    dist = [-1.0, 0.25, 2.0]
    out = position_decode(position_encode(sig(dist), dist), dist)
    np.testing.assert_array_equal(out.samples, dist)


@given(
    x=st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=1, max_size=64),
    m=st.integers(2, 12),
)
def test_position_round_trip_quantization_bound(x, m):
    dist = np.linspace(-1.0, 1.0, m)
    out = position_decode(position_encode(sig(x), dist), dist)
    half_gap = np.max(np.diff(dist)) / 2.0 if m > 1 else np.inf
    assert np.max(np.abs(out.samples - np.asarray(x))) <= half_gap + 1e-12


def test_position_decode_rejects_bad_rows():
    with pytest.raises(MalformedSpikes):
        position_decode(
            PopulationSpikes(np.zeros((2, 3), dtype=np.uint8), 10.0), [0.0, 1.0, 2.0]
        )
    with pytest.raises(MalformedSpikes):
        position_decode(
            PopulationSpikes(np.ones((1, 3), dtype=np.uint8), 10.0), [0.0, 1.0, 2.0]
        )
    with pytest.raises(MalformedSpikes):
        position_decode(
            PopulationSpikes(np.eye(3, dtype=np.uint8), 10.0), [0.0, 1.0]
        )


def test_position_empty_distribution():
    with pytest.raises(EmptyDistribution):
        position_encode(sig([0.0]), [])


# ---------------------------------------------------------------------------
# grf geometry


def test_grf_params_validation():
    with pytest.raises(OutOfRange):
        GRFParams(2, 8, 0.0, 1.0)
    with pytest.raises(OutOfRange):
        GRFParams(10, 1, 0.0, 1.0)
    with pytest.raises(ConstantSignal):
        GRFParams(10, 8, 1.0, 1.0)


@given(
    m=st.integers(3, 20),
    n=st.integers(2, 12),
    lo=st.floats(-50.0, 49.0),
    span=st.floats(0.1, 100.0),
)
def test_grf_geometry_matches_oracle(m, n, lo, span):
    params = GRFParams(m, n, lo, lo + span)
    centers, width, peak, levels = oracles.oracle_grf_geometry(m, n, lo, lo + span)
    np.testing.assert_allclose(params.centers, centers, rtol=0, atol=0)
    assert params.width == width and params.peak_response == peak
    np.testing.assert_allclose(params.timing_levels, levels, rtol=0, atol=1e-15)
    gaps = np.diff(params.centers)
    assert np.all(gaps > 0)
    np.testing.assert_allclose(gaps, gaps[0])
    assert params.timing_levels[0] == 0.0
    assert params.timing_levels[-1] == pytest.approx(peak)
    assert len(params.timing_levels) == n + 1


# ---------------------------------------------------------------------------
# grf encode


def test_grf_peak_sample_fires_earliest_slot():
    params = GRFParams(5, 4, 0.0, 1.0)
    value = float(params.centers[2])
    res = grf_encode(sig([value]), 5, 4, min_sig=0.0, max_sig=1.0)
    assert res.spikes.spikes[0, 0, 2] == 1  # sub-slot 0 is the earliest
    subs = np.nonzero(res.spikes.spikes[0])[0]
    assert subs.min() == 0


def test_grf_far_outside_sample_is_silent():
    # responses decay below half the first nonzero level -> no spikes
    res = grf_encode(sig([0.5, 1000.0]), 6, 8, min_sig=0.0, max_sig=1.0)
    assert res.spikes.spikes[1].sum() == 0
    assert res.spikes.spikes[0].sum() > 0


def test_grf_constant_signal_rejected():
    with pytest.raises(ConstantSignal):
        grf_encode(sig([2.0, 2.0, 2.0]), 5, 4)


def test_grf_bounds_default_to_signal_extremes():
    res = grf_encode(sig([1.0, 3.0, 2.0]), 4, 3)
    assert res.min_sig == 1.0 and res.max_sig == 3.0


@given(
    x=st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=1, max_size=24),
    m=st.integers(3, 8),
    n=st.integers(2, 6),
)
def test_grf_encode_matches_oracle(x, m, n):
    res = grf_encode(sig(x), m, n, min_sig=-1.0, max_sig=1.0)
    got = sorted(zip(*np.nonzero(res.spikes.spikes)))
    expected = oracles.oracle_grf_encode(x, m, n, -1.0, 1.0)
    assert [tuple(map(int, e)) for e in got] == expected


@given(
    x=st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=1, max_size=24),
    m=st.integers(3, 10),
    n=st.integers(2, 8),
)
def test_grf_in_range_samples_always_fire(x, m, n):
    res = grf_encode(sig(x), m, n, min_sig=0.0, max_sig=1.0)
    assert np.all(res.spikes.spikes.sum(axis=(1, 2)) >= 1)
    # at most one spike per (timestep, neuron)
    assert np.all(res.spikes.spikes.sum(axis=1) <= 1)


@given(
    x=st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=1, max_size=16),
    m=st.integers(3, 8),
    n=st.integers(2, 6),
)
def test_grf_nearest_neuron_never_fires_later(x, m, n):
    res = grf_encode(sig(x), m, n, min_sig=0.0, max_sig=1.0)
    params = GRFParams(m, n, 0.0, 1.0)
    for t, v in enumerate(x):
        nearest = int(np.argmin(np.abs(params.centers - v)))
        slots, neurons = np.nonzero(res.spikes.spikes[t])
        mine = slots[neurons == nearest]
        assert mine.size == 1
        assert np.all(mine[0] <= slots)


# ---------------------------------------------------------------------------
# grf decode


def test_grf_decode_single_spike_recovers_center():
    params = GRFParams(5, 4, 0.0, 1.0)
    cube = np.zeros((1, 4, 5), dtype=np.uint8)
    cube[0, 0, 3] = 1
    out = grf_decode(PopulationSpikes(cube, 100.0), params)
    assert out.samples[0] == pytest.approx(params.centers[3])


def test_grf_decode_symmetric_pair_recovers_midpoint():
    params = GRFParams(5, 4, 0.0, 1.0)
    cube = np.zeros((1, 4, 5), dtype=np.uint8)
    cube[0, 1, 1] = 1
    cube[0, 1, 2] = 1
    out = grf_decode(PopulationSpikes(cube, 100.0), params)
    assert out.samples[0] == pytest.approx((params.centers[1] + params.centers[2]) / 2)


def test_grf_decode_holds_previous_estimate():
    params = GRFParams(5, 4, 0.0, 1.0)
    cube = np.zeros((3, 4, 5), dtype=np.uint8)
    cube[1, 0, 2] = 1
    out = grf_decode(PopulationSpikes(cube, 100.0), params)
    assert out.samples[0] == pytest.approx(0.5)  # mid-range before any spike
    assert out.samples[1] == out.samples[2] == pytest.approx(params.centers[2])


def test_grf_decode_shape_checks():
    params = GRFParams(5, 4, 0.0, 1.0)
    with pytest.raises(MalformedSpikes):
        grf_decode(PopulationSpikes(np.zeros((2, 5), dtype=np.uint8), 10.0), params)
    with pytest.raises(MalformedSpikes):
        grf_decode(
            PopulationSpikes(np.zeros((2, 3, 5), dtype=np.uint8), 10.0), params
        )


@given(
    x=st.lists(st.floats(0.05, 0.95, allow_nan=False), min_size=4, max_size=48),
)
def test_grf_round_trip_error_below_field_width(x):
    res = grf_encode(sig(x), 20, 10, min_sig=0.0, max_sig=1.0)
    params = GRFParams(20, 10, 0.0, 1.0)
    out = grf_decode(res.spikes, params)
    assert rmse(out.samples, np.asarray(x)) < params.width


def test_grf_decode_matches_oracle():
    rng = np.random.default_rng(7)
    x = rng.uniform(0.0, 1.0, 30)
    res = grf_encode(Signal(x, 100.0), 7, 5, min_sig=0.0, max_sig=1.0)
    triples = [tuple(map(int, e)) for e in zip(*np.nonzero(res.spikes.spikes))]
    expected = oracles.oracle_grf_decode(triples, len(x), 7, 5, 0.0, 1.0)
    out = grf_decode(res.spikes, GRFParams(7, 5, 0.0, 1.0))
    np.testing.assert_allclose(out.samples, expected, rtol=0, atol=1e-12)


# ---------------------------------------------------------------------------
# probabilistic mode


def test_probabilistic_grf_requires_seed():
    with pytest.raises(OutOfRange):
        grf_encode(sig([0.1, 0.9]), 5, 4, probabilistic=True)


def test_probabilistic_grf_is_deterministic_given_seed():
    x = np.linspace(0.0, 1.0, 50)
    a = grf_encode(Signal(x, 100.0), 6, 4, probabilistic=True, seed=99)
    b = grf_encode(Signal(x, 100.0), 6, 4, probabilistic=True, seed=99)
    np.testing.assert_array_equal(a.spikes.spikes, b.spikes.spikes)
    c = grf_encode(Signal(x, 100.0), 6, 4, probabilistic=True, seed=100)
    assert not np.array_equal(a.spikes.spikes, c.spikes.spikes)


def test_probabilistic_grf_uses_first_slot_only():
    x = np.linspace(0.0, 1.0, 40)
    res = grf_encode(Signal(x, 100.0), 6, 4, probabilistic=True, seed=5)
    assert res.spikes.spikes[:, 1:, :].sum() == 0
    # a sample exactly on a center fires that neuron with probability 1
    params = GRFParams(6, 4, 0.0, 1.0)
    single = grf_encode(
        sig([float(params.centers[2])]), 6, 4, min_sig=0.0, max_sig=1.0,
        probabilistic=True, seed=1,
    )
    assert single.spikes.spikes[0, 0, 2] == 1
