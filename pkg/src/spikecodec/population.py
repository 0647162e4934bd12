"""Population codecs: one neuron population per signal sample.

* Position coding: a codebook of values, the nearest entry fires.  Exactly
  one spike per timestep, so this scheme trades all sparsity for robustness.
* Gaussian receptive fields (grf): ``m`` overlapping tuning curves spread
  over the signal range; each sufficiently excited neuron fires once inside
  a grid of ``n`` sub-timesteps, earlier meaning more excited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstantSignal, EmptyDistribution, MalformedSpikes, OutOfRange
from .types import PopulationSpikes, Signal

__all__ = [
    "GRFParams",
    "GRFEncodeResult",
    "position_encode",
    "position_decode",
    "grf_encode",
    "grf_decode",
]


def _gauss_response(x, mu, sigma):
    """Normal density; only ratios to the on-center peak matter downstream."""
    z = (x - mu) / sigma
    return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))


@dataclass(frozen=True)
class GRFParams:
    """Receptive-field geometry derived from (m, n, min_sig, max_sig).

    Centers sit at ``min_sig + (i + 0.5) * width`` for ``i = 0 .. m - 1``
    with ``width = (max_sig - min_sig) / (m - 2)``; all fields share that
    width as their std.  Note the top centers deliberately extend beyond
    ``max_sig``.  ``timing_levels`` are ``n + 1`` evenly spaced response
    levels from 0 to the on-center peak density.
    """

    m: int
    n: int
    min_sig: float
    max_sig: float

    def __post_init__(self):
        if self.m < 3:
            raise OutOfRange("m must be >= 3 (field width divides by m - 2)")
        if self.n < 2:
            raise OutOfRange("n must be >= 2")
        if not (math.isfinite(self.min_sig) and math.isfinite(self.max_sig)):
            raise OutOfRange("signal bounds must be finite")
        if not self.max_sig > self.min_sig:
            raise ConstantSignal("max_sig must exceed min_sig")

    @property
    def width(self) -> float:
        return (self.max_sig - self.min_sig) / (self.m - 2)

    @property
    def centers(self) -> np.ndarray:
        i = np.arange(self.m, dtype=np.float64)
        return self.min_sig + (i + 0.5) * self.width

    @property
    def peak_response(self) -> float:
        return 1.0 / (self.width * math.sqrt(2.0 * math.pi))

    @property
    def timing_levels(self) -> np.ndarray:
        return np.linspace(0.0, self.peak_response, self.n + 1)


@dataclass(frozen=True)
class GRFEncodeResult:
    """Spike cube plus the signal bounds the decoder needs."""

    spikes: PopulationSpikes
    min_sig: float
    max_sig: float


def position_encode(signal: Signal, distribution) -> PopulationSpikes:
    """Fire the codebook neuron nearest each sample (ties -> lowest index)."""
    if signal.channels != 1:
        raise ValueError("position_encode encodes one channel at a time")
    dist = np.asarray(tuple(distribution), dtype=np.float64)
    if dist.size == 0:
        raise EmptyDistribution("distribution must contain at least one value")
    if not np.all(np.isfinite(dist)):
        raise OutOfRange("distribution values must be finite")
    x = signal.samples
    nearest = np.argmin(np.abs(x[:, None] - dist[None, :]), axis=1)
    spikes = np.zeros((len(x), dist.size), dtype=np.uint8)
    spikes[np.arange(len(x)), nearest] = 1
    return PopulationSpikes(spikes, signal.sample_rate, signal.t0)


def position_decode(spikes: PopulationSpikes, distribution) -> Signal:
    """Invert position coding by codebook lookup (one spike per timestep)."""
    dist = np.asarray(tuple(distribution), dtype=np.float64)
    if dist.size == 0:
        raise EmptyDistribution("distribution must contain at least one value")
    arr = spikes.spikes
    if arr.ndim != 2:
        raise MalformedSpikes("position spikes must be 2-D [timestep][neuron]")
    if arr.shape[1] != dist.size:
        raise MalformedSpikes("neuron count does not match the distribution")
    counts = arr.sum(axis=1)
    if np.any(counts != 1):
        bad = int(np.flatnonzero(counts != 1)[0])
        raise MalformedSpikes(f"timestep {bad} must have exactly one spike")
    samples = dist[np.argmax(arr, axis=1)]
    return Signal(samples, spikes.sample_rate, spikes.t0)


def _grf_levels(x: np.ndarray, params: GRFParams) -> np.ndarray:
    """Quantized response level per (timestep, neuron); level 0 is silent.

    Equivalent to an argmin over the ``n + 1`` timing levels with ties going
    to the lower level (strict ``>`` on the fractional part).
    """
    responses = _gauss_response(x[:, None], params.centers[None, :], params.width)
    step = params.peak_response / params.n
    q = responses / step
    base = np.floor(q)
    levels = (base + (q - base > 0.5)).astype(np.int64)
    return np.clip(levels, 0, params.n)


def grf_encode(
    signal: Signal,
    m: int,
    n: int,
    min_sig: float | None = None,
    max_sig: float | None = None,
    probabilistic: bool = False,
    seed: int | None = None,
) -> GRFEncodeResult:
    """Encode each sample through ``m`` Gaussian fields and ``n`` sub-slots.

    Each neuron's response is snapped to the nearest of ``n + 1`` evenly
    spaced levels; level ``k`` fires at sub-timestep ``n - k`` when that slot
    exists (so the peak level fires at sub-timestep 0 and the zero level
    stays silent).  Bounds default to the signal's min/max; pass them
    explicitly to encode causally or to match another signal's geometry.

    With ``probabilistic=True`` the timing grid is ignored: each neuron
    fires at sub-timestep 0 with probability ``response / peak``, drawn from
    a counter-based generator keyed by ``(seed, timestep)`` so results do not
    depend on evaluation order.
    """
    if signal.channels != 1:
        raise ValueError("grf_encode encodes one channel at a time")
    x = signal.samples
    lo = float(np.min(x)) if min_sig is None else float(min_sig)
    hi = float(np.max(x)) if max_sig is None else float(max_sig)
    if hi <= lo:
        raise ConstantSignal("grf needs max_sig > min_sig")
    params = GRFParams(int(m), int(n), lo, hi)
    cube = np.zeros((len(x), params.n, params.m), dtype=np.uint8)
    if probabilistic:
        if seed is None:
            raise OutOfRange("probabilistic grf requires an explicit seed")
        responses = _gauss_response(x[:, None], params.centers[None, :], params.width)
        prob = responses / params.peak_response
        for t in range(len(x)):
            rng = np.random.Generator(np.random.Philox(key=[int(seed), t]))
            cube[t, 0, :] = rng.random(params.m) < prob[t]
    else:
        levels = _grf_levels(x, params)
        t_idx, neuron_idx = np.nonzero(levels)
        # level n -> slot 0 (earliest), level 1 -> slot n - 1; level 0 silent
        sub = params.n - levels[t_idx, neuron_idx]
        cube[t_idx, sub, neuron_idx] = 1
    spikes = PopulationSpikes(cube, signal.sample_rate, signal.t0)
    return GRFEncodeResult(spikes, lo, hi)


def grf_decode(spikes: PopulationSpikes, params: GRFParams) -> Signal:
    """Response-weighted mean of the firing neurons' centers.

    Each spike at sub-timestep ``s`` implies response level ``n - s``; the
    estimate is the level-weighted mean of the corresponding centers.  Silent
    timesteps hold the previous estimate (mid-range before any spike).
    """
    arr = spikes.spikes
    if arr.ndim != 3:
        raise MalformedSpikes("grf spikes must be 3-D [timestep][subtime][neuron]")
    if arr.shape[1] != params.n or arr.shape[2] != params.m:
        raise MalformedSpikes("spike cube does not match the field geometry")
    # implied level per sub-slot: slot s -> n - s
    level_of_slot = (params.n - np.arange(params.n)).astype(np.float64)
    weights = arr.astype(np.float64) * level_of_slot[None, :, None]
    w_per_neuron = weights.sum(axis=1)
    totals = w_per_neuron.sum(axis=1)
    estimate = np.empty(arr.shape[0], dtype=np.float64)
    previous = 0.5 * (params.min_sig + params.max_sig)
    centers = params.centers
    for t in range(arr.shape[0]):
        if totals[t] > 0.0:
            previous = float(w_per_neuron[t] @ centers / totals[t])
        estimate[t] = previous
    return Signal(estimate, spikes.sample_rate, spikes.t0)
