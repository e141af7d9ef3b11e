"""Observable events on a realized graph: connectivity, isolation, and the
"no isolated vertex but still disconnected" indicator.

Adjacency is "object sets intersect", so vertices sharing an object form a
clique; uniting each object's holder list therefore yields exactly the
connected components without ever materializing the O(n^2) edge set.  Small
samples run a dict-based union-find (path compression + union by size);
large samples run the equivalent computation over a compacted
vertex-object incidence graph via ``scipy.sparse.csgraph``.  Both paths are
exact and agree sample-for-sample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _sp_connected_components

from .errors import InvalidParamsError, InvariantViolation
from .sampler import GraphSample

# at or below this many incidences the pure-python path is faster
_SMALL_CUTOFF = 512


@dataclass(frozen=True)
class TrialStats:
    """Per-sample observables.

    ``no_isolated_but_disconnected`` is the event that can separate
    "no isolated vertex" from "connected"; connectivity implies the absence
    of isolated vertices (for n >= 2), never the other way around.
    """

    connected: bool
    isolated_count: int
    group1_isolated_count: int
    no_isolated_but_disconnected: bool
    component_count: int
    min_degree_zero: bool


def build_inverted_index(sample: GraphSample) -> dict[int, list[int]]:
    """Map each object id to the ordered list of vertices holding it."""
    index: dict[int, list[int]] = {}
    objects = sample.objects.tolist()
    offsets = sample.offsets.tolist()
    for x in range(sample.n):
        for p in range(offsets[x], offsets[x + 1]):
            o = objects[p]
            if o in index:
                index[o].append(x)
            else:
                index[o] = [x]
    return index


def _components_small(n: int, index: dict[int, list[int]]) -> int:
    parent = list(range(n))
    size = [1] * n

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comp = n
    for holders in index.values():
        if len(holders) > 1:
            r0 = find(holders[0])
            for w in holders[1:]:
                r1 = find(w)
                if r1 != r0:
                    if size[r0] < size[r1]:
                        r0, r1 = r1, r0
                    parent[r1] = r0
                    size[r0] += size[r1]
                    comp -= 1
    return comp


def _components_large(sample: GraphSample) -> int:
    n = sample.n
    # compact object ids so memory tracks the incidence count, not the pool
    uniq, inv = np.unique(sample.objects, return_inverse=True)
    verts = np.repeat(np.arange(n, dtype=np.int64), np.diff(sample.offsets))
    nodes = n + len(uniq)
    graph = csr_matrix(
        (np.ones(len(inv), dtype=np.int8), (verts, n + inv)), shape=(nodes, nodes)
    )
    _, labels = _sp_connected_components(graph, directed=False)
    return len(np.unique(labels[:n]))


def connectivity(sample: GraphSample) -> tuple[bool, int]:
    """(connected, component count); a single vertex counts as connected."""
    if sample.n == 1:
        return True, 1
    if len(sample.objects) <= _SMALL_CUTOFF:
        comp = _components_small(sample.n, build_inverted_index(sample))
    else:
        comp = _components_large(sample)
    return comp == 1, comp


def _isolation_from_index(sample: GraphSample, index: dict[int, list[int]]) -> tuple[int, int]:
    objects = sample.objects.tolist()
    offsets = sample.offsets.tolist()
    groups = sample.groups.tolist()
    isolated = 0
    group1 = 0
    for x in range(sample.n):
        if all(len(index[objects[p]]) == 1 for p in range(offsets[x], offsets[x + 1])):
            isolated += 1
            if groups[x] == 1:
                group1 += 1
    return isolated, group1


def _analyze_small(sample: GraphSample) -> tuple[int, int, int]:
    """Single-pass index + components + isolation for small samples.

    Same results as the public ops; shares one list conversion per array.
    """
    n = sample.n
    objects = sample.objects.tolist()
    offsets = sample.offsets.tolist()
    groups = sample.groups.tolist()
    index: dict[int, list[int]] = {}
    for x in range(n):
        for p in range(offsets[x], offsets[x + 1]):
            o = objects[p]
            if o in index:
                index[o].append(x)
            else:
                index[o] = [x]
    comp = _components_small(n, index)
    isolated = 0
    group1 = 0
    for x in range(n):
        if all(len(index[objects[p]]) == 1 for p in range(offsets[x], offsets[x + 1])):
            isolated += 1
            if groups[x] == 1:
                group1 += 1
    return comp, isolated, group1


def _isolation_large(sample: GraphSample) -> tuple[int, int]:
    _, inv = np.unique(sample.objects, return_inverse=True)
    counts = np.bincount(inv)
    # a vertex is isolated iff every object it holds has exactly one holder
    alone = np.maximum.reduceat(counts[inv], sample.offsets[:-1]) == 1
    return int(alone.sum()), int((alone & (sample.groups == 1)).sum())


def isolation_counts(sample: GraphSample) -> tuple[int, int]:
    """(#isolated vertices, #isolated vertices in group 1).

    Isolation is only defined for n >= 2 here: with a single vertex there is
    no other vertex to share with, and we refuse rather than pick a
    convention.
    """
    if sample.n < 2:
        raise InvalidParamsError(f"isolation needs n >= 2, got n={sample.n}")
    if len(sample.objects) <= _SMALL_CUTOFF:
        return _isolation_from_index(sample, build_inverted_index(sample))
    return _isolation_large(sample)


def analyze(sample: GraphSample) -> TrialStats:
    """All per-sample observables, with the connectivity=>no-isolation
    implication asserted before returning."""
    n = sample.n
    if n < 2:
        raise InvalidParamsError(f"analyze needs n >= 2, got n={n}")
    if len(sample.objects) <= _SMALL_CUTOFF:
        comp, isolated, group1 = _analyze_small(sample)
    else:
        comp = _components_large(sample)
        isolated, group1 = _isolation_large(sample)
    connected = comp == 1
    if connected and isolated > 0:
        raise InvariantViolation(
            f"connected sample reported {isolated} isolated vertices"
        )
    return TrialStats(
        connected=connected,
        isolated_count=isolated,
        group1_isolated_count=group1,
        no_isolated_but_disconnected=(isolated == 0 and not connected),
        component_count=comp,
        min_degree_zero=isolated > 0,
    )
