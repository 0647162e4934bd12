"""Run the shipped benchmark and print the efficiency/RMSE tables.

The full run is 1000 samples per (scheme, duration) case over 1/5/15/50/100 s
and takes a few minutes single-threaded; pass a smaller sample count for a
quick look.

Usage:
    python3 scripts/reproduce_tables.py [samples] [workers]

The same sweep is available via the CLI:
    spikecodec bench --format md [--samples N] [--workers W]
"""

import sys

from spikecodec import default_bench_config, report_to_markdown, run_benchmark


def main() -> None:
    samples = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
    workers = int(sys.argv[2]) if len(sys.argv) > 2 else 4
    config = default_bench_config(samples_per_case=samples)
    report = run_benchmark(config, workers=workers)
    print(report_to_markdown(report))
    print(
        f"({samples} samples/case, seed {config.seed}, "
        f"{report.wall_time:.1f}s wall)",
        file=sys.stderr,
    )


if __name__ == "__main__":
    main()
