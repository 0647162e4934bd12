"""FIR rate coders: greedy deconvolution of a non-negative working signal.

All three encoders first shift the signal by its minimum so the working copy
starts at zero, then walk left to right deciding at each position ``i``
whether the window ``work[i : i + len(filter)]`` "contains" the filter; on a
spike the filter is subtracted from that window.  Windows never extend past
the end of the signal, so spikes can only occur at positions
``0 .. len(signal) - len(filter)``.

* ``hsa``: spike iff every sample in the window is >= the filter.
* ``thsa``: spike iff the total shortfall ``sum(max(0, filter - window))``
  is <= a threshold (``thsa`` with threshold 0 behaves exactly like ``hsa``).
* ``bsa``: spike iff the absolute error against the filter is <= the
  absolute energy of the window scaled by a threshold.

Decoding is shared: convolve the spikes with the filter, truncate to the
signal length, and add the shift back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import FilterTooLong, OutOfRange
from .types import FIRFilter, Signal, SpikeTrain

__all__ = [
    "RateEncodeResult",
    "make_fir_filter",
    "hsa_encode",
    "thsa_encode",
    "bsa_encode",
    "rate_decode",
]

FILTER_KINDS = ("gaussian", "triangular", "boxcar")


@dataclass(frozen=True)
class RateEncodeResult:
    """A unipolar spike train plus the level shift removed before encoding."""

    train: SpikeTrain
    shift: float


def make_fir_filter(kind: str, length: int, scale: float) -> FIRFilter:
    """Build a standard kernel scaled so the centre tap equals ``scale``.

    * ``gaussian``: bell centered on the window, std = length / 6 samples so
      the tails decay to ~1% at the edges.
    * ``triangular``: linear ramp up and down.
    * ``boxcar``: constant.

    Tapered kinds reach ``scale`` exactly only for odd lengths, where a tap
    sits on the window centre; even lengths straddle it.
    """
    length = int(length)
    if length < 1:
        raise OutOfRange("filter length must be >= 1")
    scale = float(scale)
    if not math.isfinite(scale) or scale <= 0.0:
        raise OutOfRange("filter scale must be finite and > 0")
    center = (length - 1) / 2.0
    k = np.arange(length, dtype=np.float64)
    if kind == "gaussian":
        if length == 1:
            coeffs = np.array([scale])
        else:
            sigma = length / 6.0
            coeffs = scale * np.exp(-((k - center) ** 2) / (2.0 * sigma * sigma))
    elif kind == "triangular":
        half = (length + 1) / 2.0 if length % 2 else length / 2.0
        coeffs = scale * (1.0 - np.abs(k - center) / half)
    elif kind == "boxcar":
        coeffs = np.full(length, scale)
    else:
        raise OutOfRange(f"unknown filter kind {kind!r}; choose from {FILTER_KINDS}")
    return FIRFilter(coeffs)


def _shifted_working(signal: Signal, fir: FIRFilter, op: str):
    if signal.channels != 1:
        raise ValueError(f"{op} encodes one channel at a time")
    x = signal.samples
    f = fir.coefficients
    if len(f) >= len(x):
        raise FilterTooLong(
            f"filter of {len(f)} taps needs a signal longer than {len(f)} samples"
        )
    shift = float(np.min(x))
    return x - shift, np.asarray(f, dtype=np.float64), shift


@njit(cache=True, nogil=True)
def _hsa_kernel(work, f):  # pragma: no cover - exercised via hsa_encode
    n = work.shape[0]
    m = f.shape[0]
    spikes = np.zeros(n, dtype=np.int8)
    for i in range(n - m + 1):
        fits = True
        for j in range(m):
            if work[i + j] < f[j]:
                fits = False
                break
        if fits:
            spikes[i] = 1
            for j in range(m):
                work[i + j] -= f[j]
    return spikes


@njit(cache=True, nogil=True)
def _thsa_kernel(work, f, threshold):  # pragma: no cover
    n = work.shape[0]
    m = f.shape[0]
    spikes = np.zeros(n, dtype=np.int8)
    for i in range(n - m + 1):
        error = 0.0
        for j in range(m):
            gap = f[j] - work[i + j]
            if gap > 0.0:
                error += gap
        if error <= threshold:
            spikes[i] = 1
            for j in range(m):
                work[i + j] -= f[j]
    return spikes


@njit(cache=True, nogil=True)
def _bsa_kernel(work, f, threshold):  # pragma: no cover
    n = work.shape[0]
    m = f.shape[0]
    spikes = np.zeros(n, dtype=np.int8)
    for i in range(n - m + 1):
        err_fit = 0.0
        err_energy = 0.0
        for j in range(m):
            err_fit += abs(work[i + j] - f[j])
            err_energy += abs(work[i + j])
        if err_fit <= err_energy * threshold:
            spikes[i] = 1
            for j in range(m):
                work[i + j] -= f[j]
    return spikes


def hsa_encode(signal: Signal, fir: FIRFilter) -> RateEncodeResult:
    """Spike wherever the window dominates the filter pointwise."""
    work, f, shift = _shifted_working(signal, fir, "hsa_encode")
    spikes = _hsa_kernel(work, f)
    return RateEncodeResult(SpikeTrain(spikes, signal.sample_rate, signal.t0), shift)


def thsa_encode(signal: Signal, fir: FIRFilter, threshold: float) -> RateEncodeResult:
    """Like hsa but tolerating a bounded pointwise shortfall.

    With a very large threshold every in-range position spikes, which is
    degenerate; thresholds are normally a small fraction of ``sum(filter)``.
    """
    threshold = float(threshold)
    if threshold < 0.0:
        raise OutOfRange("thsa threshold must be >= 0")
    work, f, shift = _shifted_working(signal, fir, "thsa_encode")
    spikes = _thsa_kernel(work, f, threshold)
    return RateEncodeResult(SpikeTrain(spikes, signal.sample_rate, signal.t0), shift)


def bsa_encode(signal: Signal, fir: FIRFilter, threshold: float) -> RateEncodeResult:
    """Spike when fitting the filter beats leaving the window as-is."""
    threshold = float(threshold)
    if threshold < 0.0:
        raise OutOfRange("bsa threshold must be >= 0")
    work, f, shift = _shifted_working(signal, fir, "bsa_encode")
    spikes = _bsa_kernel(work, f, threshold)
    return RateEncodeResult(SpikeTrain(spikes, signal.sample_rate, signal.t0), shift)


def rate_decode(train: SpikeTrain, fir: FIRFilter, shift: float = 0.0) -> Signal:
    """Convolve spikes with the filter, truncate, and undo the shift."""
    spikes = train.polarities.astype(np.float64)
    samples = np.convolve(spikes, fir.coefficients)[: len(train)] + float(shift)
    return Signal(samples, train.sample_rate, train.t0)
