"""Shared fixtures: an independent adjacency-matrix/BFS analysis oracle and
a hypothesis strategy for small valid parameter tuples."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from rigraph import ModelParams
from rigraph.sampler import GraphSample


def make_sample(groups: list[int], object_sets: list[list[int]], params_hash: str = "test") -> GraphSample:
    """Build a GraphSample directly from per-vertex sets (tests only)."""
    flat: list[int] = []
    offsets = [0]
    for s in object_sets:
        flat.extend(sorted(s))
        offsets.append(len(flat))
    return GraphSample(
        groups=np.asarray(groups, dtype=np.int64),
        objects=np.asarray(flat, dtype=np.int64),
        offsets=np.asarray(offsets, dtype=np.int64),
        params_hash=params_hash,
    )


def naive_stats(sample: GraphSample) -> tuple[bool, int, int, int]:
    """Independent oracle: O(n^2) pairwise set intersections + BFS.

    Returns (connected, component_count, isolated, group1_isolated).
    """
    n = sample.n
    sets = [set(sample.object_set(x).tolist()) for x in range(n)]
    adj = [[bool(sets[i] & sets[j]) and i != j for j in range(n)] for i in range(n)]
    seen = [False] * n
    comps = 0
    for s in range(n):
        if seen[s]:
            continue
        comps += 1
        queue = [s]
        seen[s] = True
        while queue:
            v = queue.pop()
            for w in range(n):
                if adj[v][w] and not seen[w]:
                    seen[w] = True
                    queue.append(w)
    isolated = [not any(adj[v]) for v in range(n)]
    iso = sum(isolated)
    g1 = sum(1 for v in range(n) if isolated[v] and sample.groups[v] == 1)
    return comps == 1, comps, iso, g1


@st.composite
def small_params(draw, max_m: int = 3, max_P: int = 12, min_n: int = 2, max_n: int = 8) -> ModelParams:
    m = draw(st.integers(1, max_m))
    P = draw(st.integers(m, max_P))  # leaves room for a valid K vector
    n = draw(st.integers(min_n, max_n))
    weights = draw(st.lists(st.integers(1, 9), min_size=m, max_size=m))
    total = sum(weights)
    a = tuple(w / total for w in weights)
    K = []
    lo = 1
    for _ in range(m):
        k = draw(st.integers(lo, P))
        K.append(k)
        lo = k
    return ModelParams(n=n, a=a, K=tuple(K), P=P)


@pytest.fixture
def sample_builder():
    return make_sample


@pytest.fixture
def naive_oracle():
    return naive_stats
