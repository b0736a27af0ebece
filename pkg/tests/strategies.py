"""Shared generators: random additive metric tables via shortest-path repair."""

import random

from hypothesis import strategies as st

from mulmetric.core import DistanceTable, Flavor, shortest_path_closure


@st.composite
def closed_metric_tables(draw, max_n=6, min_val=0.05, max_val=10.0):
    n = draw(st.integers(min_value=2, max_value=max_n))
    vals = st.floats(min_value=min_val, max_value=max_val, allow_nan=False)
    raw = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            raw[i][j] = raw[j][i] = draw(vals)
    return DistanceTable.from_rows(shortest_path_closure(raw), Flavor.ADDITIVE)


def random_closed_table(rng: random.Random, n: int, lo=0.0, hi=10.0) -> DistanceTable:
    """Seeded-RNG variant used by the acceptance fixtures: entries drawn
    uniformly from [lo, hi], then metric-repaired."""
    raw = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            raw[i][j] = raw[j][i] = rng.uniform(lo, hi)
    return DistanceTable.from_rows(shortest_path_closure(raw), Flavor.ADDITIVE)


def random_maps(rng: random.Random, n: int, count: int = 1):
    return [tuple(rng.randrange(n) for _ in range(n)) for _ in range(count)]
