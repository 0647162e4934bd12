"""Synthetic signal lab: seeded sine mixtures plus the shared metrics.

Randomness contract: generation uses numpy's counter-based Philox generator
keyed by a 64-bit seed, with Gaussian noise drawn via ``Generator.normal``.
The same spec therefore produces bit-identical samples on every platform and
run.  Derived seeds for Monte-Carlo sweeps come from :func:`mix_seed`, a
splitmix64 hash of the master seed and any number of indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, LengthMismatch
from .types import PopulationSpikes, Signal, SpikeTrain

__all__ = [
    "SignalSpec",
    "generate",
    "mix_seed",
    "spiking_efficiency",
    "rmse",
    "DriftProfile",
    "drift_profile",
]

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> int:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(master: int, *indices: int) -> int:
    """Derive an independent child seed from a master seed and indices.

    Feeds each index through splitmix64 in turn; documented so external
    tooling can reproduce any single Monte-Carlo sample in isolation.
    """
    state = int(master) & _MASK64
    for ix in indices:
        state = _splitmix64(state ^ (int(ix) & _MASK64))
    return state


@dataclass(frozen=True)
class SignalSpec:
    """Recipe for a noisy sum of sines.

    ``components`` is a sequence of ``(frequency_hz, amplitude, phase_rad)``
    triples.  ``duration * sample_rate`` must round to at least 2 samples.
    """

    components: tuple[tuple[float, float, float], ...]
    noise_std: float
    duration: float
    sample_rate: float
    seed: int

    def __post_init__(self):
        comps = tuple(
            (float(f), float(a), float(p)) for (f, a, p) in self.components
        )
        if len(comps) == 0:
            raise InvalidSpec("at least one component is required")
        for f, a, p in comps:
            if not all(map(math.isfinite, (f, a, p))):
                raise InvalidSpec("component values must be finite")
            if f <= 0:
                raise InvalidSpec("component frequency must be > 0")
        object.__setattr__(self, "components", comps)
        if not math.isfinite(self.noise_std) or self.noise_std < 0:
            raise InvalidSpec("noise_std must be finite and >= 0")
        if not math.isfinite(self.sample_rate) or self.sample_rate <= 0:
            raise InvalidSpec("sample_rate must be finite and > 0")
        if not math.isfinite(self.duration) or self.duration <= 0:
            raise InvalidSpec("duration must be finite and > 0")
        if self.length < 2:
            raise InvalidSpec("duration * sample_rate must give >= 2 samples")
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)

    @property
    def length(self) -> int:
        return int(round(self.duration * self.sample_rate))

    def with_case(self, duration: float, seed: int) -> "SignalSpec":
        return SignalSpec(
            self.components, self.noise_std, duration, self.sample_rate, seed
        )


def generate(spec: SignalSpec) -> Signal:
    """Render a SignalSpec to samples; same SignalSpec -> bit-identical signal."""
    n = spec.length
    t = np.arange(n, dtype=np.float64) / spec.sample_rate
    samples = np.zeros(n, dtype=np.float64)
    for freq, amp, phase in spec.components:
        samples += amp * np.sin(2.0 * math.pi * freq * t + phase)
    if spec.noise_std > 0.0:
        rng = np.random.Generator(np.random.Philox(key=spec.seed))
        samples += rng.normal(0.0, spec.noise_std, n)
    return Signal(samples, spec.sample_rate, 0.0)


def spiking_efficiency(spikes: SpikeTrain | PopulationSpikes) -> float:
    """Percentage of timesteps without any spike.

    ``(1 - spiking_timesteps / timesteps) * 100``; for population codes a
    timestep counts as spiking when any neuron fires in any sub-slot.
    """
    if isinstance(spikes, SpikeTrain):
        active = int(np.count_nonzero(spikes.polarities))
    elif isinstance(spikes, PopulationSpikes):
        arr = spikes.spikes
        flat = arr.reshape(arr.shape[0], -1)
        active = int(np.count_nonzero(flat.any(axis=1)))
    else:
        raise TypeError("expected SpikeTrain or PopulationSpikes")
    total = len(spikes)
    return (1.0 - active / total) * 100.0


def rmse(a: Signal | np.ndarray, b: Signal | np.ndarray) -> float:
    """Root-mean-square error between two equally long sample sequences."""
    xa = a.samples if isinstance(a, Signal) else np.asarray(a, dtype=np.float64)
    xb = b.samples if isinstance(b, Signal) else np.asarray(b, dtype=np.float64)
    if xa.shape != xb.shape:
        raise LengthMismatch(f"shape {xa.shape} vs {xb.shape}")
    return float(np.sqrt(np.mean((xa - xb) ** 2)))


@dataclass(frozen=True)
class DriftProfile:
    """Windowed RMSE values plus their least-squares slope per window."""

    values: tuple[float, ...]
    slope: float


def drift_profile(a: Signal, b: Signal, window: int) -> DriftProfile:
    """RMSE over consecutive non-overlapping windows, plus its trend.

    The slope is the least-squares fit of window RMSE against window index;
    a clearly positive slope means the reconstruction is drifting away.  A
    trailing partial window is dropped.
    """
    window = int(window)
    if window < 1:
        raise ValueError("window must be >= 1")
    xa, xb = a.samples, b.samples
    if xa.shape != xb.shape:
        raise LengthMismatch(f"shape {xa.shape} vs {xb.shape}")
    if xa.shape[-1] < window:
        raise LengthMismatch("signals must be at least one window long")
    count = xa.shape[-1] // window
    err2 = (xa - xb) ** 2
    values = tuple(
        float(np.sqrt(np.mean(err2[k * window : (k + 1) * window])))
        for k in range(count)
    )
    if count == 1:
        slope = 0.0
    else:
        k = np.arange(count, dtype=np.float64)
        slope = float(np.polyfit(k, np.asarray(values), 1)[0])
    return DriftProfile(values, slope)
