"""Sweep codec knobs over the benchmark signal family.

Prints per-duration efficiency/RMSE for candidate parameter values so the
shipped defaults can be chosen with margin inside the target bands.  Slow-ish
(manual tool); run with python3 scripts/calibrate_defaults.py [samples].
"""

import sys

import numpy as np

from spikecodec import Scheme, SignalSpec, generate, mix_seed, rmse, spiking_efficiency
from spikecodec.codec import encode, decode
from spikecodec.types import CodecParams
from spikecodec.rate import make_fir_filter

DURATIONS = (1.0, 5.0, 15.0, 50.0)
SAMPLES = int(sys.argv[1]) if len(sys.argv) > 1 else 100
BASE = SignalSpec(
    components=((1.0, 2.2, 0.0), (2.0, 0.9, 0.0), (5.0, 0.32, 0.0)),
    noise_std=0.1,
    duration=1.0,
    sample_rate=100.0,
    seed=0,
)


def sweep(scheme: Scheme, label: str, params: CodecParams) -> None:
    rows = []
    for duration in DURATIONS:
        eff = np.empty(SAMPLES)
        err = np.empty(SAMPLES)
        for k in range(SAMPLES):
            spec = BASE.with_case(duration, mix_seed(999, int(duration * 1000), k))
            signal = generate(spec)
            channel = encode(signal, params)[0]
            eff[k] = spiking_efficiency(channel.spikes)
            err[k] = rmse(signal.samples, decode(channel.spikes, channel.params).samples)
        rows.append((duration, eff.mean(), eff.std(ddof=1), err.mean()))
    cells = "  ".join(
        f"{d:>4.0f}s eff={e:5.2f}±{s:4.2f} rmse={r:7.4f}" for d, e, s, r in rows
    )
    print(f"{scheme.value:5s} {label:18s} {cells}")


def main() -> None:
    for thr in (0.05, 0.08, 0.1, 0.12, 0.15):
        sweep(Scheme.MW, f"thr={thr} w=3", CodecParams(Scheme.MW, threshold=thr, window=3))
    print()
    for thr in (0.3, 0.35, 0.4, 0.45):
        sweep(Scheme.SF, f"thr={thr}", CodecParams(Scheme.SF, threshold=thr))
    print()
    for factor in (0.4, 0.5, 0.6):
        sweep(Scheme.TBR, f"factor={factor}", CodecParams(Scheme.TBR, factor=factor))
    print()
    for scale in (1.2, 1.8):
        filt = make_fir_filter("gaussian", 11, scale)
        sweep(Scheme.HSA, f"g11x{scale}", CodecParams(Scheme.HSA, filter=filt))
        for thr in (0.55, 0.7, 0.85):
            sweep(
                Scheme.THSA,
                f"g11x{scale} thr={thr}",
                CodecParams(Scheme.THSA, threshold=thr, filter=filt),
            )
        for thr in (0.88, 0.92, 0.955):
            sweep(
                Scheme.BSA,
                f"g11x{scale} thr={thr}",
                CodecParams(Scheme.BSA, threshold=thr, filter=filt),
            )
        print()


if __name__ == "__main__":
    main()
