"""Exception hierarchy shared by every codec module.

``SpikeCodecError`` is the common base so callers can catch codec failures
without enumerating the concrete classes.  Parameter problems subclass
``ParameterError``; range violations that carry a more specific name
(``NonPositiveThreshold``, ``EmptyDistribution``) subclass ``OutOfRange`` so
generic range handling still sees them.
"""

from __future__ import annotations

__all__ = [
    "SpikeCodecError",
    "ParameterError",
    "MissingParameter",
    "UnexpectedParameter",
    "OutOfRange",
    "NonPositiveThreshold",
    "EmptyDistribution",
    "SignalTooShort",
    "FilterTooLong",
    "ConstantSignal",
    "MalformedSpikes",
    "LengthMismatch",
    "InvalidSpec",
    "EmptyGrid",
    "BenchError",
]


class SpikeCodecError(Exception):
    """Base class for all codec-level failures."""


class ParameterError(SpikeCodecError):
    """A codec parameter set is unusable for the requested scheme."""


class MissingParameter(ParameterError):
    """A parameter required by the scheme is absent."""


class UnexpectedParameter(ParameterError):
    """A parameter not used by the scheme was supplied."""


class OutOfRange(ParameterError):
    """A parameter value lies outside its valid range."""


class NonPositiveThreshold(OutOfRange):
    """A threshold that must be strictly positive is zero or negative."""


class EmptyDistribution(OutOfRange):
    """Position coding needs at least one distribution value."""


class SignalTooShort(SpikeCodecError):
    """The input signal has too few samples for the requested codec."""


class FilterTooLong(SpikeCodecError):
    """The FIR filter does not fit inside the signal."""


class ConstantSignal(SpikeCodecError):
    """Receptive fields cannot be placed on a signal with zero range."""


class MalformedSpikes(SpikeCodecError):
    """A spike container violates the structure the decoder relies on."""


class LengthMismatch(SpikeCodecError):
    """Two sequences that must align have different lengths."""


class InvalidSpec(SpikeCodecError):
    """A signal specification fails validation."""


class EmptyGrid(SpikeCodecError):
    """A tuning grid contains no candidate parameter sets."""


class BenchError(SpikeCodecError):
    """A benchmark run failed; the message names scheme, duration and sample."""
