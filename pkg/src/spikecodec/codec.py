"""Scheme-indexed dispatch: one encode/decode entry point for all codecs.

``encode`` validates the params, runs the scheme's encoder channel by
channel, and returns the spikes together with a params copy whose
side-channel fields (init / shift / bounds / derived threshold) are filled
in -- exactly what a decoder, a params sidecar, or a benchmark run needs.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import population, rate, temporal
from .errors import MissingParameter
from .population import GRFParams
from .types import (
    CodecParams,
    PopulationSpikes,
    Scheme,
    Signal,
    SpikeTrain,
    validate_params,
)

__all__ = ["EncodedChannel", "encode", "decode", "is_population", "POPULATION_SCHEMES"]

POPULATION_SCHEMES = (Scheme.GRF, Scheme.POSITION)


def is_population(scheme: Scheme) -> bool:
    return Scheme(scheme) in POPULATION_SCHEMES


@dataclass(frozen=True)
class EncodedChannel:
    """Spikes for one channel plus the params that can decode them."""

    spikes: SpikeTrain | PopulationSpikes
    params: CodecParams


def _encode_channel(
    signal: Signal, params: CodecParams, probabilistic: bool, seed: int | None
) -> EncodedChannel:
    scheme = Scheme(params.scheme)
    if scheme is Scheme.TBR:
        res = temporal.tbr_encode(signal, params.factor)
        out = params.with_side_channel(threshold=res.threshold, init=(res.init,))
        return EncodedChannel(res.train, out)
    if scheme is Scheme.SF:
        res = temporal.sf_encode(signal, params.threshold)
        return EncodedChannel(res.train, params.with_side_channel(init=(res.init,)))
    if scheme is Scheme.MW:
        res = temporal.mw_encode(signal, params.window, params.threshold)
        return EncodedChannel(res.train, params.with_side_channel(init=(res.init,)))
    if scheme is Scheme.HSA:
        res = rate.hsa_encode(signal, params.filter)
        return EncodedChannel(res.train, params.with_side_channel(shift=(res.shift,)))
    if scheme is Scheme.THSA:
        res = rate.thsa_encode(signal, params.filter, params.threshold)
        return EncodedChannel(res.train, params.with_side_channel(shift=(res.shift,)))
    if scheme is Scheme.BSA:
        res = rate.bsa_encode(signal, params.filter, params.threshold)
        return EncodedChannel(res.train, params.with_side_channel(shift=(res.shift,)))
    if scheme is Scheme.GRF:
        lo = params.min_sig[0] if params.min_sig else None
        hi = params.max_sig[0] if params.max_sig else None
        res = population.grf_encode(
            signal, params.m, params.n, lo, hi, probabilistic=probabilistic, seed=seed
        )
        out = params.with_side_channel(min_sig=(res.min_sig,), max_sig=(res.max_sig,))
        return EncodedChannel(res.spikes, out)
    if scheme is Scheme.POSITION:
        spikes = population.position_encode(signal, params.distribution)
        return EncodedChannel(spikes, params)
    raise ValueError(f"unhandled scheme {scheme}")  # pragma: no cover


def encode(
    signal: Signal,
    params: CodecParams,
    probabilistic: bool = False,
    seed: int | None = None,
) -> list[EncodedChannel]:
    """Encode every channel independently; returns one entry per channel.

    Single-channel encodes of a multi-channel signal keep per-channel
    side-channel state in their own params copy.
    """
    validate_params(params)
    return [
        _encode_channel(signal.channel(c), params, probabilistic, seed)
        for c in range(signal.channels)
    ]


def _side(params: CodecParams, name: str, channel: int = 0) -> float:
    values = getattr(params, name)
    if values is None:
        raise MissingParameter(f"{params.scheme.value} decode requires {name}")
    return float(values[min(channel, len(values) - 1)])


def decode(spikes: SpikeTrain | PopulationSpikes, params: CodecParams) -> Signal:
    """Reconstruct one channel from its spikes and side-channel params."""
    scheme = Scheme(params.scheme)
    if scheme in (Scheme.TBR, Scheme.SF, Scheme.MW):
        if params.threshold is None:
            raise MissingParameter(f"{scheme.value} decode requires threshold")
        init = _side(params, "init")
        if scheme is Scheme.TBR:
            return temporal.tbr_decode(spikes, params.threshold, init)
        if scheme is Scheme.SF:
            return temporal.sf_decode(spikes, params.threshold, init)
        return temporal.mw_decode(spikes, params.threshold, init)
    if scheme in (Scheme.HSA, Scheme.THSA, Scheme.BSA):
        if params.filter is None:
            raise MissingParameter(f"{scheme.value} decode requires filter")
        return rate.rate_decode(spikes, params.filter, _side(params, "shift"))
    if scheme is Scheme.GRF:
        geometry = GRFParams(
            params.m, params.n, _side(params, "min_sig"), _side(params, "max_sig")
        )
        return population.grf_decode(spikes, geometry)
    if scheme is Scheme.POSITION:
        return population.position_decode(spikes, params.distribution)
    raise ValueError(f"unhandled scheme {scheme}")  # pragma: no cover
