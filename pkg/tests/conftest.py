from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,          # numba warm-up would trip per-example deadlines
    derandomize=True,       # deterministic suite, no flaky example search
    max_examples=60,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
settings.load_profile("suite")
