"""Spike-train codecs for analog signals.

Temporal-contrast (tbr, sf, mw) and deconvolution-based (hsa, thsa, bsa)
codecs over polarity spike trains, plus population codes (position, grf),
with a synthetic-signal generator and a Monte-Carlo benchmark harness.
"""

from .bench import (
    BenchCell,
    BenchConfig,
    BenchReport,
    bench_config_from_text,
    bench_config_to_text,
    default_bench_config,
    report_to_csv,
    report_to_markdown,
    run_benchmark,
    tune_params,
)
from .codec import EncodedChannel, POPULATION_SCHEMES, decode, encode, is_population
from .errors import (
    BenchError,
    ConstantSignal,
    EmptyDistribution,
    EmptyGrid,
    FilterTooLong,
    InvalidSpec,
    LengthMismatch,
    MalformedSpikes,
    MissingParameter,
    NonPositiveThreshold,
    OutOfRange,
    ParameterError,
    SignalTooShort,
    SpikeCodecError,
    UnexpectedParameter,
)
from .formats import FormatError
from .population import (
    GRFParams,
    grf_decode,
    grf_encode,
    position_decode,
    position_encode,
)
from .rate import (
    FILTER_KINDS,
    bsa_encode,
    hsa_encode,
    make_fir_filter,
    rate_decode,
    thsa_encode,
)
from .signals import (
    DriftProfile,
    SignalSpec,
    drift_profile,
    generate,
    mix_seed,
    rmse,
    spiking_efficiency,
)
from .streaming import (
    STREAMABLE_SCHEMES,
    StreamingGRF,
    StreamingMW,
    StreamingPosition,
    StreamingSF,
    StreamingTBR,
)
from .temporal import (
    mw_decode,
    mw_encode,
    sf_decode,
    sf_encode,
    tbr_decode,
    tbr_encode,
)
from .types import (
    CodecParams,
    FIRFilter,
    PopulationSpikes,
    Scheme,
    Signal,
    SpikeTrain,
    dense_to_events,
    events_to_dense,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core types
    "Scheme",
    "Signal",
    "SpikeTrain",
    "PopulationSpikes",
    "FIRFilter",
    "CodecParams",
    "validate_params",
    "dense_to_events",
    "events_to_dense",
    # codecs
    "encode",
    "decode",
    "EncodedChannel",
    "POPULATION_SCHEMES",
    "is_population",
    "tbr_encode",
    "tbr_decode",
    "sf_encode",
    "sf_decode",
    "mw_encode",
    "mw_decode",
    "hsa_encode",
    "thsa_encode",
    "bsa_encode",
    "rate_decode",
    "make_fir_filter",
    "FILTER_KINDS",
    "position_encode",
    "position_decode",
    "grf_encode",
    "grf_decode",
    "GRFParams",
    # signals and metrics
    "SignalSpec",
    "generate",
    "mix_seed",
    "rmse",
    "spiking_efficiency",
    "drift_profile",
    "DriftProfile",
    # streaming
    "STREAMABLE_SCHEMES",
    "StreamingSF",
    "StreamingTBR",
    "StreamingMW",
    "StreamingPosition",
    "StreamingGRF",
    # benchmark
    "BenchConfig",
    "BenchCell",
    "BenchReport",
    "default_bench_config",
    "run_benchmark",
    "report_to_csv",
    "report_to_markdown",
    "bench_config_to_text",
    "bench_config_from_text",
    "tune_params",
    # errors
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
    "FormatError",
]
