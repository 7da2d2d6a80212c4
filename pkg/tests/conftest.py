from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from qplancherel import Partition, enumerate_level


@st.composite
def partitions(draw, min_boxes: int = 0, max_boxes: int = 16):
    """Random partition built from a weakly decreasing sequence of parts."""
    n = draw(st.integers(min_value=min_boxes, max_value=max_boxes))
    parts = []
    remaining = n
    bound = n
    while remaining > 0:
        part = draw(st.integers(min_value=1, max_value=min(bound, remaining)))
        parts.append(part)
        bound = part
        remaining -= part
    return Partition(tuple(parts))


def random_partitions(count: int, max_boxes: int, seed: int) -> list[Partition]:
    """Deterministic sample of partitions, one uniform level index each."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_boxes + 1))
        level = enumerate_level(n)
        out.append(level[int(rng.integers(0, len(level)))])
    return out
