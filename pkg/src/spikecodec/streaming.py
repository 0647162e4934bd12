"""Incremental encoders for the stream CLI: feed one sample, get events.

Every streamer exposes ``feed(sample) -> list[event]``; events for sample
``i`` are emitted before sample ``i + 1`` is read, except during a scheme's
documented warm-up (``mw`` needs ``window + 1`` samples before it can commit
its first baseline, ``tbr`` needs two samples to form the first difference,
and calibrated ``tbr`` buffers the whole calibration prefix).  Pent-up
warm-up events are flushed in one batch, so the overall event sequence is
identical to the batch encoder given the same parameters.

Polarity events are ``(t, polarity, channel)``; population events are
``(t, neuron, subtime)``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonPositiveThreshold, OutOfRange
from .population import GRFParams, _grf_levels
from .types import Scheme

__all__ = [
    "StreamingSF",
    "StreamingTBR",
    "StreamingMW",
    "StreamingPosition",
    "StreamingGRF",
    "STREAMABLE_SCHEMES",
]

STREAMABLE_SCHEMES = (Scheme.TBR, Scheme.SF, Scheme.MW, Scheme.POSITION, Scheme.GRF)


class _Clock:
    def __init__(self, sample_rate: float, t0: float):
        if sample_rate <= 0:
            raise OutOfRange("sample_rate must be > 0")
        self.sample_rate = float(sample_rate)
        self.t0 = float(t0)

    def at(self, index: int) -> float:
        return self.t0 + index / self.sample_rate


class StreamingSF(_Clock):
    """Step-forward; strictly causal, no warm-up."""

    def __init__(self, threshold: float, sample_rate: float, t0: float = 0.0):
        super().__init__(sample_rate, t0)
        if not float(threshold) > 0.0:
            raise NonPositiveThreshold("sf threshold must be > 0")
        self.threshold = float(threshold)
        self.base: float | None = None
        self.index = 0

    def feed(self, sample: float) -> list[tuple[float, int, int]]:
        i = self.index
        self.index += 1
        if self.base is None:
            self.base = float(sample)
            return []
        if sample > self.base + self.threshold:
            self.base += self.threshold
            return [(self.at(i), 1, 0)]
        if sample < self.base - self.threshold:
            self.base -= self.threshold
            return [(self.at(i), -1, 0)]
        return []


class StreamingTBR(_Clock):
    """Temporal contrast with an explicit threshold or a calibration prefix.

    With ``threshold`` the first two samples form the duplicated first
    difference, so the decisions for timesteps 0 and 1 flush together.  With
    ``calibration=N`` the threshold is ``mean + factor * std`` (sample std,
    clamped at zero) over the first ``N`` samples' differences, and the
    buffered decisions flush once calibration completes.
    """

    def __init__(
        self,
        sample_rate: float,
        t0: float = 0.0,
        threshold: float | None = None,
        factor: float = 1.0,
        calibration: int | None = None,
    ):
        super().__init__(sample_rate, t0)
        if (threshold is None) == (calibration is None):
            raise OutOfRange("tbr streaming needs either threshold or calibration")
        if threshold is not None and threshold < 0:
            raise OutOfRange("threshold must be >= 0")
        if calibration is not None and calibration < 2:
            raise OutOfRange("calibration prefix must be >= 2 samples")
        self.threshold = None if threshold is None else float(threshold)
        self.factor = float(factor)
        self.calibration = calibration
        self.buffer: list[float] = []
        self.previous: float | None = None
        self.index = 0

    def _decision(self, i: int, diff: float) -> list[tuple[float, int, int]]:
        if diff > self.threshold:
            return [(self.at(i), 1, 0)]
        if diff < -self.threshold:
            return [(self.at(i), -1, 0)]
        return []

    def feed(self, sample: float) -> list[tuple[float, int, int]]:
        sample = float(sample)
        i = self.index
        self.index += 1
        if self.threshold is None:
            # calibrating: buffer the prefix, then flush all pent-up decisions
            self.buffer.append(sample)
            if len(self.buffer) < self.calibration:
                return []
            diffs = np.diff(self.buffer)
            std = float(np.std(diffs, ddof=1)) if diffs.size > 1 else 0.0
            self.threshold = max(float(np.mean(diffs)) + self.factor * std, 0.0)
            events = []
            for j in range(len(self.buffer)):
                diff = float(diffs[max(j - 1, 0)])
                events.extend(self._decision(j, diff))
            self.previous = sample
            self.buffer = []
            return events
        if self.previous is None:
            self.previous = sample
            if i == 0:
                return []  # timestep 0 decided once the first diff exists
        diff = sample - self.previous
        self.previous = sample
        if i == 1:
            return self._decision(0, diff) + self._decision(1, diff)
        return self._decision(i, diff)


class StreamingMW(_Clock):
    """Moving window; buffers ``window + 1`` samples, then runs causally."""

    def __init__(
        self, window: int, threshold: float, sample_rate: float, t0: float = 0.0
    ):
        super().__init__(sample_rate, t0)
        if int(window) < 1:
            raise OutOfRange("window must be >= 1")
        if not float(threshold) > 0.0:
            raise NonPositiveThreshold("mw threshold must be > 0")
        self.window = int(window)
        self.threshold = float(threshold)
        self.width = self.window + 1
        self.trailing: list[float] = []
        self.warmup: list[float] | None = []
        self.index = 0

    def _decision(self, i: int, sample: float, base: float):
        if sample > base + self.threshold:
            return [(self.at(i), 1, 0)]
        if sample < base - self.threshold:
            return [(self.at(i), -1, 0)]
        return []

    def feed(self, sample: float) -> list[tuple[float, int, int]]:
        sample = float(sample)
        i = self.index
        self.index += 1
        if self.warmup is not None:
            self.warmup.append(sample)
            if len(self.warmup) < self.width:
                return []
            base = float(np.mean(self.warmup))
            events = []
            for j, value in enumerate(self.warmup):
                events.extend(self._decision(j, value, base))
            self.trailing = list(self.warmup)
            self.warmup = None
            return events
        base = sum(self.trailing) / self.width
        events = self._decision(i, sample, base)
        self.trailing.pop(0)
        self.trailing.append(sample)
        return events


class StreamingPosition(_Clock):
    """Codebook lookup; stateless, one event per sample."""

    def __init__(self, distribution, sample_rate: float, t0: float = 0.0):
        super().__init__(sample_rate, t0)
        self.distribution = np.asarray(tuple(distribution), dtype=np.float64)
        if self.distribution.size == 0:
            raise OutOfRange("distribution must contain at least one value")
        self.index = 0

    def feed(self, sample: float) -> list[tuple[float, int, int]]:
        i = self.index
        self.index += 1
        neuron = int(np.argmin(np.abs(float(sample) - self.distribution)))
        return [(self.at(i), neuron, 0)]


class StreamingGRF(_Clock):
    """Gaussian fields with caller-supplied bounds; stateless per sample."""

    def __init__(
        self,
        m: int,
        n: int,
        min_sig: float,
        max_sig: float,
        sample_rate: float,
        t0: float = 0.0,
    ):
        super().__init__(sample_rate, t0)
        self.params = GRFParams(int(m), int(n), float(min_sig), float(max_sig))
        self.index = 0

    def feed(self, sample: float) -> list[tuple[float, int, int]]:
        i = self.index
        self.index += 1
        levels = _grf_levels(np.array([float(sample)]), self.params)[0]
        events = []
        # match the batch writer's (subtime, neuron) ordering
        order = []
        for neuron in range(self.params.m):
            if levels[neuron] > 0:
                order.append((self.params.n - int(levels[neuron]), neuron))
        for sub, neuron in sorted(order):
            events.append((self.at(i), neuron, sub))
        return events
