"""Core value types shared by all codecs.

Arrays are coerced to fixed dtypes and frozen (``writeable=False``) at
construction so verified instances cannot drift afterwards.  Timestamps are
never stored: sample ``i`` of a signal or train lives at ``t0 + i / sample_rate``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .errors import (
    EmptyDistribution,
    MalformedSpikes,
    MissingParameter,
    NonPositiveThreshold,
    OutOfRange,
    UnexpectedParameter,
)

__all__ = [
    "Signal",
    "SpikeTrain",
    "PopulationSpikes",
    "FIRFilter",
    "Scheme",
    "CodecParams",
    "validate_params",
    "dense_to_events",
    "events_to_dense",
    "TIME_TOLERANCE",
]

# Timestamps parsed from files must sit on the sample grid within this many
# seconds; also used by events_to_dense.
TIME_TOLERANCE = 1e-9


def _frozen_f64(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Signal:
    """A uniformly sampled analog signal.

    ``samples`` is 1-D for a single channel, or channel-major 2-D
    ``(channels, length)`` for multi-channel data.  Sample ``i`` is taken at
    ``t0 + i / sample_rate``.
    """

    samples: np.ndarray
    sample_rate: float
    t0: float = 0.0

    def __post_init__(self):
        arr = _frozen_f64(self.samples, "samples")
        if arr.ndim not in (1, 2):
            raise ValueError("samples must be 1-D or channel-major 2-D")
        if arr.ndim == 2 and arr.shape[1] == 0:
            raise ValueError("samples must be non-empty")
        object.__setattr__(self, "samples", arr)
        rate = float(self.sample_rate)
        if not math.isfinite(rate) or rate <= 0.0:
            raise ValueError("sample_rate must be finite and > 0")
        object.__setattr__(self, "sample_rate", rate)
        t0 = float(self.t0)
        if not math.isfinite(t0):
            raise ValueError("t0 must be finite")
        object.__setattr__(self, "t0", t0)

    @property
    def channels(self) -> int:
        return 1 if self.samples.ndim == 1 else self.samples.shape[0]

    def __len__(self) -> int:
        return self.samples.shape[-1]

    @property
    def timestamps(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) / self.sample_rate

    def channel(self, index: int) -> "Signal":
        """Single-channel view of channel ``index``."""
        if self.samples.ndim == 1:
            if index != 0:
                raise IndexError("signal has a single channel")
            return self
        return Signal(self.samples[index], self.sample_rate, self.t0)


@dataclass(frozen=True)
class SpikeTrain:
    """A dense polarity sequence aligned with its source signal.

    One entry per source sample: +1 (onset spike), -1 (offset spike), or 0.
    """

    polarities: np.ndarray
    sample_rate: float
    t0: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.polarities)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("polarities must be a non-empty 1-D sequence")
        if not np.all(np.isin(arr, (-1, 0, 1))):
            raise ValueError("polarities must contain only -1, 0, +1")
        arr = arr.astype(np.int8)
        arr.flags.writeable = False
        object.__setattr__(self, "polarities", arr)
        rate = float(self.sample_rate)
        if not math.isfinite(rate) or rate <= 0.0:
            raise ValueError("sample_rate must be finite and > 0")
        object.__setattr__(self, "sample_rate", rate)
        object.__setattr__(self, "t0", float(self.t0))

    def __len__(self) -> int:
        return self.polarities.shape[0]

    @property
    def timestamps(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) / self.sample_rate

    @property
    def spike_count(self) -> int:
        return int(np.count_nonzero(self.polarities))


@dataclass(frozen=True)
class PopulationSpikes:
    """Binary spikes from a population of ``m`` neurons.

    ``spikes`` is ``(timesteps, m)`` for codes without a temporal axis
    (``n == 1``) or ``(timesteps, n, m)`` when each timestep is divided into
    ``n`` sub-timesteps.
    """

    spikes: np.ndarray
    sample_rate: float
    t0: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.spikes)
        if arr.ndim not in (2, 3) or arr.size == 0:
            raise ValueError("spikes must be a non-empty 2-D or 3-D array")
        if not np.all(np.isin(arr, (0, 1))):
            raise ValueError("spikes must be binary")
        arr = arr.astype(np.uint8)
        arr.flags.writeable = False
        object.__setattr__(self, "spikes", arr)
        rate = float(self.sample_rate)
        if not math.isfinite(rate) or rate <= 0.0:
            raise ValueError("sample_rate must be finite and > 0")
        object.__setattr__(self, "sample_rate", rate)
        object.__setattr__(self, "t0", float(self.t0))

    def __len__(self) -> int:
        return self.spikes.shape[0]

    @property
    def m(self) -> int:
        """Neuron count."""
        return self.spikes.shape[-1]

    @property
    def n(self) -> int:
        """Sub-timesteps per timestep (1 when there is no temporal axis)."""
        return self.spikes.shape[1] if self.spikes.ndim == 3 else 1

    @property
    def timestamps(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) / self.sample_rate


@dataclass(frozen=True, eq=False)
class FIRFilter:
    """A finite impulse response kernel used by the rate coders."""

    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _frozen_f64(self.coefficients, "coefficients")
        )
        if self.coefficients.ndim != 1:
            raise ValueError("coefficients must be 1-D")

    def __len__(self) -> int:
        return self.coefficients.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FIRFilter):
            return NotImplemented
        return np.array_equal(self.coefficients, other.coefficients)

    def __hash__(self) -> int:
        return hash(self.coefficients.tobytes())


class Scheme(str, enum.Enum):
    """The eight supported encoding schemes."""

    TBR = "tbr"
    SF = "sf"
    MW = "mw"
    HSA = "hsa"
    THSA = "thsa"
    BSA = "bsa"
    GRF = "grf"
    POSITION = "position"

    def __str__(self) -> str:  # argparse-friendly
        return self.value


# Primary (user-facing) knobs each scheme accepts; validate_params rejects
# both missing and extraneous entries so a params set is unambiguous.
_REQUIRED: dict[Scheme, frozenset] = {
    Scheme.TBR: frozenset({"factor"}),
    Scheme.SF: frozenset({"threshold"}),
    Scheme.MW: frozenset({"threshold", "window"}),
    Scheme.HSA: frozenset({"filter"}),
    Scheme.THSA: frozenset({"threshold", "filter"}),
    Scheme.BSA: frozenset({"threshold", "filter"}),
    Scheme.GRF: frozenset({"m", "n"}),
    Scheme.POSITION: frozenset({"distribution"}),
}

_PRIMARY_FIELDS = ("factor", "threshold", "window", "filter", "m", "n", "distribution")


@dataclass(frozen=True)
class CodecParams:
    """Everything a codec needs, both user knobs and encode side-channels.

    Primary knobs (checked by :func:`validate_params`):

    * ``factor`` -- temporal-contrast std multiplier (tbr)
    * ``threshold`` -- spike threshold (sf, mw, bsa, thsa; filled in by tbr)
    * ``window`` -- trailing window length in samples (mw)
    * ``filter`` -- FIR kernel (hsa, thsa, bsa)
    * ``m`` -- neuron count, ``n`` -- sub-timesteps per timestep (grf)
    * ``distribution`` -- codebook values (position)

    Side-channel fields are produced by encoding and consumed by decoding:
    ``init`` (first sample, temporal schemes), ``shift`` (signal minimum,
    rate schemes), ``min_sig``/``max_sig`` (signal bounds, grf).  Multi-channel
    encodes carry one value per channel.
    """

    scheme: Scheme
    factor: float | None = None
    threshold: float | None = None
    window: int | None = None
    filter: FIRFilter | None = None
    m: int | None = None
    n: int | None = None
    distribution: tuple[float, ...] | None = None
    init: tuple[float, ...] | None = None
    shift: tuple[float, ...] | None = None
    min_sig: tuple[float, ...] | None = None
    max_sig: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        for name in ("distribution", "init", "shift", "min_sig", "max_sig"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(float(v) for v in value))

    def with_side_channel(self, **kw) -> "CodecParams":
        """Copy with encode outputs (init/shift/bounds/threshold) filled in."""
        return replace(self, **kw)


def validate_params(params: CodecParams) -> None:
    """Check that exactly the scheme's knobs are present and in range.

    Raises :class:`MissingParameter`, :class:`UnexpectedParameter` or
    :class:`OutOfRange` (or a subclass); returns ``None`` when valid.
    Side-channel fields are exempt: they are encode outputs, not knobs.
    """
    scheme = Scheme(params.scheme)
    required = _REQUIRED[scheme]
    present = {name for name in _PRIMARY_FIELDS if getattr(params, name) is not None}
    missing = required - present
    if missing:
        raise MissingParameter(f"{scheme.value} requires {sorted(missing)}")
    extra = present - required
    if scheme is Scheme.TBR:
        extra -= {"threshold"}  # derived at encode time, rides along for decode
    if extra:
        raise UnexpectedParameter(f"{scheme.value} does not use {sorted(extra)}")

    if params.factor is not None and not math.isfinite(params.factor):
        raise OutOfRange("factor must be finite")
    if params.threshold is not None:
        thr = float(params.threshold)
        if not math.isfinite(thr):
            raise OutOfRange("threshold must be finite")
        if scheme in (Scheme.SF, Scheme.MW) and thr <= 0.0:
            raise NonPositiveThreshold(f"{scheme.value} threshold must be > 0")
        if thr < 0.0:
            raise OutOfRange("threshold must be >= 0")
    if params.window is not None:
        if int(params.window) != params.window or params.window < 1:
            raise OutOfRange("window must be an integer >= 1")
    if params.m is not None and params.m < 3:
        raise OutOfRange("m must be >= 3 (field width divides by m - 2)")
    if params.n is not None and params.n < 2:
        raise OutOfRange("n must be >= 2")
    if params.distribution is not None and len(params.distribution) == 0:
        raise EmptyDistribution("distribution must contain at least one value")


def dense_to_events(train: SpikeTrain) -> list[tuple[float, int]]:
    """Sparse view of a train: ``(timestamp, polarity)`` per nonzero entry.

    Timestamps are strictly increasing; zeros are dropped.  The inverse is
    :func:`events_to_dense` given the original length, rate and t0.
    """
    idx = np.flatnonzero(train.polarities)
    times = train.t0 + idx / train.sample_rate
    return [(float(t), int(p)) for t, p in zip(times, train.polarities[idx])]


def events_to_dense(
    events: Iterable[tuple[float, int]],
    length: int,
    sample_rate: float,
    t0: float = 0.0,
) -> SpikeTrain:
    """Rebuild a dense train from ``(timestamp, polarity)`` events.

    Every timestamp must sit on the sample grid within ``TIME_TOLERANCE``
    seconds and each grid slot may fire at most once.
    """
    if length < 1:
        raise MalformedSpikes("length must be >= 1")
    pol = np.zeros(length, dtype=np.int8)
    for t, p in events:
        i = int(round((float(t) - t0) * sample_rate))
        if i < 0 or i >= length:
            raise MalformedSpikes(f"event at t={t} falls outside the signal")
        if abs(t - (t0 + i / sample_rate)) > TIME_TOLERANCE:
            raise MalformedSpikes(f"event at t={t} is off the sample grid")
        if p not in (-1, 1):
            raise MalformedSpikes(f"event polarity must be -1 or +1, got {p}")
        if pol[i] != 0:
            raise MalformedSpikes(f"duplicate event for sample {i}")
        pol[i] = p
    return SpikeTrain(pol, sample_rate, t0)
