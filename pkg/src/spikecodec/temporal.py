"""Temporal-contrast codecs: change detectors emitting signed spikes.

Three encoders share the same output shape (one polarity per sample) and the
same decoder: a cumulative sum of polarities scaled by the threshold and
anchored at the first sample value.

* ``tbr``: thresholds the sample-to-sample difference against a statistic of
  the whole signal (mean + factor * std of the differences).
* ``sf``: step-forward tracking; a baseline moves by +-threshold whenever the
  signal escapes a band around it.
* ``mw``: like ``sf`` but the baseline is a trailing moving average, so the
  encoder never feeds its own spikes back.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import NonPositiveThreshold, SignalTooShort
from .types import Signal, SpikeTrain

__all__ = [
    "TemporalEncodeResult",
    "tbr_encode",
    "sf_encode",
    "mw_encode",
    "tbr_decode",
    "sf_decode",
    "mw_decode",
]


@dataclass(frozen=True)
class TemporalEncodeResult:
    """A polarity train plus the side-channel a decoder needs.

    ``threshold`` is the band half-width actually used (for ``tbr`` it is
    derived from the signal, never negative); ``init`` is the first sample.
    """

    train: SpikeTrain
    threshold: float
    init: float


def _require_single_channel(signal: Signal, op: str) -> np.ndarray:
    if signal.channels != 1:
        raise ValueError(f"{op} encodes one channel at a time")
    return signal.samples


def tbr_encode(signal: Signal, factor: float) -> TemporalEncodeResult:
    """Temporal contrast: spike where the step exceeds a global threshold.

    The threshold is ``mean(diff) + factor * std(diff)`` over the first
    differences (sample std, ddof=1), clamped at zero so a strongly trending
    signal cannot invert the polarity logic.  The difference sequence is
    prepended with its own first entry so every timestep gets a polarity.
    """
    x = _require_single_channel(signal, "tbr_encode")
    if len(x) < 2:
        raise SignalTooShort("tbr needs at least 2 samples")
    diff = np.diff(x)
    # ddof=1 matches the sample-std convention; a single diff has no spread.
    std = float(np.std(diff, ddof=1)) if diff.size > 1 else 0.0
    threshold = float(np.mean(diff)) + float(factor) * std
    threshold = max(threshold, 0.0)
    full = np.concatenate(([diff[0]], diff))
    pol = np.zeros(len(x), dtype=np.int8)
    pol[full > threshold] = 1
    pol[full < -threshold] = -1
    train = SpikeTrain(pol, signal.sample_rate, signal.t0)
    return TemporalEncodeResult(train, threshold, float(x[0]))


@njit(cache=True, nogil=True)
def _sf_kernel(x, threshold):  # pragma: no cover - exercised via sf_encode
    n = x.shape[0]
    pol = np.zeros(n, dtype=np.int8)
    base = x[0]
    for i in range(1, n):
        if x[i] > base + threshold:
            pol[i] = 1
            base += threshold
        elif x[i] < base - threshold:
            pol[i] = -1
            base -= threshold
    return pol


def sf_encode(signal: Signal, threshold: float) -> TemporalEncodeResult:
    """Step-forward encoding against a spike-updated baseline.

    The baseline starts at the first sample and moves by exactly one
    threshold per emitted spike, so the decoder can replay it from the
    polarities alone.  The first timestep never spikes.
    """
    x = _require_single_channel(signal, "sf_encode")
    threshold = float(threshold)
    if not threshold > 0.0:
        raise NonPositiveThreshold("sf threshold must be > 0")
    pol = _sf_kernel(x, threshold)
    train = SpikeTrain(pol, signal.sample_rate, signal.t0)
    return TemporalEncodeResult(train, threshold, float(x[0]))


def mw_encode(signal: Signal, window: int, threshold: float) -> TemporalEncodeResult:
    """Moving-window encoding against a trailing mean baseline.

    For the first ``window + 1`` timesteps the baseline is the mean of
    samples ``0 .. window``; afterwards it is the mean of the ``window + 1``
    samples strictly preceding the current one.  Spikes never feed back into
    the baseline.
    """
    x = _require_single_channel(signal, "mw_encode")
    window = int(window)
    if window < 1:
        raise ValueError("window must be >= 1")
    threshold = float(threshold)
    if not threshold > 0.0:
        raise NonPositiveThreshold("mw threshold must be > 0")
    n = len(x)
    if n <= window + 1:
        raise SignalTooShort("mw needs more than window + 1 samples")
    width = window + 1
    base = np.empty(n, dtype=np.float64)
    base[: width + 1] = np.mean(x[:width])
    if n > width + 1:
        csum = np.concatenate(([0.0], np.cumsum(x)))
        starts = np.arange(width + 1, n) - width
        base[width + 1 :] = (csum[starts + width] - csum[starts]) / width
    pol = np.zeros(n, dtype=np.int8)
    pol[x > base + threshold] = 1
    pol[x < base - threshold] = -1
    train = SpikeTrain(pol, signal.sample_rate, signal.t0)
    return TemporalEncodeResult(train, threshold, float(x[0]))


def _cumsum_decode(train: SpikeTrain, threshold: float, init: float) -> Signal:
    steps = train.polarities.astype(np.float64) * float(threshold)
    samples = float(init) + np.cumsum(steps)
    return Signal(samples, train.sample_rate, train.t0)


def tbr_decode(train: SpikeTrain, threshold: float, init: float) -> Signal:
    """Integrate polarities: ``out[i] = init + threshold * cumsum(pol)[i]``."""
    return _cumsum_decode(train, threshold, init)


def sf_decode(train: SpikeTrain, threshold: float, init: float) -> Signal:
    """Replay the step-forward baseline from the polarity train."""
    return _cumsum_decode(train, threshold, init)


def mw_decode(train: SpikeTrain, threshold: float, init: float) -> Signal:
    """Same contract as :func:`sf_decode`; reconstruction drifts over time."""
    return _cumsum_decode(train, threshold, init)
