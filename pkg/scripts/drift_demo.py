"""Show reconstruction drift: windowed RMSE over time per scheme.

Integrating decoders (tbr, mw) accumulate error, so their windowed RMSE
grows along the signal; the step coder and the filter coders stay flat.
Prints one row per scheme with the per-window RMSE profile and its slope.

Usage:
    python3 scripts/drift_demo.py [duration_seconds]
"""

import sys

from spikecodec import (
    SignalSpec,
    decode,
    default_bench_config,
    drift_profile,
    encode,
    generate,
)


def main() -> None:
    duration = float(sys.argv[1]) if len(sys.argv) > 1 else 30.0
    config = default_bench_config()
    signal = generate(
        SignalSpec(
            config.signal.components,
            config.signal.noise_std,
            duration,
            config.signal.sample_rate,
            seed=2024,
        )
    )
    window = int(config.signal.sample_rate * duration / 6)
    print(f"windowed RMSE over {duration:g}s in {window}-sample windows\n")
    for scheme in config.schemes:
        channel = encode(signal, config.params[scheme])[0]
        recon = decode(channel.spikes, channel.params)
        profile = drift_profile(signal, recon, window)
        cells = " ".join(f"{v:7.3f}" for v in profile.values)
        print(f"{scheme.value:5s} slope={profile.slope:+.4f}  {cells}")


if __name__ == "__main__":
    main()
