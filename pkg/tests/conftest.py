import random

import pytest
from hypothesis import settings

from powersched.core import Instance, Interval
from powersched.gen import GenerationError, generate_instance

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")

# five unit jobs whose LP relaxation sits strictly below the integral
# optimum of 8; the golden fixture for the rounding pipeline
GAP_JOBS = [(0, 1, 1), (1, 7, 1), (2, 4, 1), (4, 6, 1), (7, 8, 1)]


@pytest.fixture
def gap_instance() -> Instance:
    return Instance.build(GAP_JOBS, machines=1, wakeup=1)


def make_gap_instance() -> Instance:
    return Instance.build(GAP_JOBS, machines=1, wakeup=1)


def seeded_instance(seed: int, n_max=6, d_max=12, machines=1,
                    wakeups=(0, 1, 3), density_lo=0.2) -> Instance:
    """Deterministic feasible instance for a given seed."""
    rng = random.Random(seed * 7919 + 13)
    for bump in range(50):
        n = rng.randint(1, n_max)
        horizon = rng.randint(max(2, n_max // 2), d_max)
        q = wakeups[rng.randrange(len(wakeups))]
        density = density_lo + rng.random() * (0.9 - density_lo)
        try:
            return generate_instance(seed * 1000 + bump, n, machines,
                                     horizon, q, density)
        except GenerationError:
            continue
    raise RuntimeError(f"seed {seed} produced no instance")


def random_supply(rng: random.Random, horizon: int, machines: int,
                  max_intervals: int = 3) -> list[Interval]:
    """Random integral supply with per-slot coverage within the machine count."""
    out: list[Interval] = []
    for _ in range(rng.randint(0, max_intervals)):
        a = rng.randrange(0, horizon)
        b = rng.randint(a + 1, horizon)
        trial = out + [Interval(a, b)]
        prof = [0] * horizon
        for iv in trial:
            for t in range(iv.start, iv.end):
                prof[t] += 1
        if max(prof) <= machines:
            out = trial
    return sorted(out)
