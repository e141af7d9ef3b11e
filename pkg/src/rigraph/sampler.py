"""Seeded realization of the random intersection graph.

Reproducibility contract
------------------------
Every trial is generated from a PCG64 stream whose 256-bit state is derived
from ``(master_seed, trial_index)`` alone, by splitmix64 expansion:

    base  = (master_seed + (trial_index + 1) * GAMMA) mod 2^64
    seed  = mix64(base)                       # the trial seed
    w_k   = mix64((seed + k * GAMMA) mod 2^64),  k = 1..4
    state = w1 << 64 | w2,   inc = (w3 << 64 | w4) | 1

where ``mix64`` is the standard splitmix64 finalizer (an avalanche function:
every output bit depends on every input bit).  Trial t is therefore
independent of whether trials 0..t-1 were ever generated, which is what makes
parallel trial execution deterministic.

A trial consumes randomness in a fixed order: one block of n uniforms for
group assignment (inverse CDF over the cumulative a), then one block of
sum_x K_{g_x} uniforms for the object sets, vertex by vertex.  Each vertex's
K-subset comes from Floyd's selection-tracking algorithm driven by its block:
draw s (0-based) maps u to t = min(floor(u * (j+1)), j) with j = P - K + s,
inserting j on collision.  Memory per set is O(K); the pool is never
materialized.  Small and large graphs take scalar and vectorized code paths
over the *same* float stream, so the realized sample is bit-identical either
way.  Bit-compatibility is promised only within this implementation.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParamsError, InvariantViolation
from .model_core import ModelParams

_M64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15

# below roughly n*(1+K_m) float draws, scalar sampling beats vectorized
_SCALAR_CUTOFF = 512


def mix64(x: int) -> int:
    """splitmix64 finalizer; 64-bit in, 64-bit out, full avalanche."""
    x &= _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def _mix64_array(x: np.ndarray) -> np.ndarray:
    """``mix64`` over a uint64 array (wraparound multiply matches the
    scalar's mod-2^64 semantics)."""
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def trial_state_words(master_seed: int, start: int, stop: int) -> np.ndarray:
    """PCG64 state words for trials [start, stop) as a (stop-start, 4) array.

    Row t-start holds the four splitmix64 expansion words of trial t; equals
    the scalar derivation in ``generator_for`` exactly.
    """
    base = np.uint64(master_seed) + np.arange(start + 1, stop + 1, dtype=np.uint64) * np.uint64(GAMMA)
    seeds = _mix64_array(base)
    cols = [
        _mix64_array(seeds + np.uint64((k * GAMMA) & _M64)) for k in (1, 2, 3, 4)
    ]
    return np.stack(cols, axis=1)


@dataclass(frozen=True)
class SeedSpec:
    """Addresses one trial: (64-bit master seed, trial index >= 0)."""

    master_seed: int
    trial_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed <= _M64:
            raise InvalidParamsError(
                f"master_seed must be a 64-bit unsigned integer, got {self.master_seed!r}"
            )
        if self.trial_index < 0:
            raise InvalidParamsError(f"trial_index must be >= 0, got {self.trial_index!r}")

    def trial_seed(self) -> int:
        return mix64((self.master_seed + (self.trial_index + 1) * GAMMA) & _M64)


def _pcg_state(seed: int) -> dict:
    w = [mix64((seed + k * GAMMA) & _M64) for k in (1, 2, 3, 4)]
    return {
        "bit_generator": "PCG64",
        "state": {"state": (w[0] << 64) | w[1], "inc": ((w[2] << 64) | w[3]) | 1},
        "has_uint32": 0,
        "uinteger": 0,
    }


def generator_for(spec: SeedSpec, scratch: np.random.PCG64 | None = None) -> np.random.Generator:
    """PCG64 generator positioned at the start of the trial's stream.

    Passing a ``scratch`` bit generator reuses it (its state is overwritten),
    which avoids per-trial construction cost in hot loops.
    """
    bg = scratch if scratch is not None else np.random.PCG64(0)
    bg.state = _pcg_state(spec.trial_seed())
    return np.random.Generator(bg)


@dataclass(frozen=True)
class GraphSample:
    """One realized graph: group labels and per-vertex object sets.

    ``objects``/``offsets`` store the sets in one flat array: vertex x holds
    the sorted, duplicate-free ids ``objects[offsets[x]:offsets[x+1]]``.
    Edges are implicit (two vertices are adjacent iff their sets intersect)
    and never materialized here.
    """

    groups: np.ndarray  # shape (n,), 1-based group index per vertex
    objects: np.ndarray  # flat int64 object ids, each in 0..P-1
    offsets: np.ndarray  # shape (n+1,), block boundaries into objects
    params_hash: str

    @property
    def n(self) -> int:
        return len(self.groups)

    def object_set(self, x: int) -> np.ndarray:
        return self.objects[self.offsets[x]:self.offsets[x + 1]]

    def object_sets(self) -> list[list[int]]:
        return [self.object_set(x).tolist() for x in range(self.n)]

    def to_debug_json(self) -> str:
        return json.dumps({"groups": self.groups.tolist(), "object_sets": self.object_sets()})

    def validate(self, params: ModelParams) -> None:
        """Check the structural invariants against the generating params."""
        if self.groups.min(initial=1) < 1 or self.groups.max(initial=1) > params.m:
            raise InvariantViolation("group labels out of range")
        sizes = np.diff(self.offsets)
        expect = np.asarray(params.K, dtype=np.int64)[self.groups - 1]
        if not np.array_equal(sizes, expect):
            raise InvariantViolation("object-set sizes do not match ring sizes")
        if len(self.objects) and (self.objects.min() < 0 or self.objects.max() >= params.P):
            raise InvariantViolation("object id outside pool")
        for x in range(self.n):
            s = self.object_set(x)
            if len(s) > 1 and not (np.diff(s) > 0).all():
                raise InvariantViolation(f"object set of vertex {x} not strictly increasing")
        if self.params_hash != params.fingerprint():
            raise InvariantViolation("params fingerprint mismatch")


def assign_group(a: tuple[float, ...], u: float) -> int:
    """Inverse-CDF group draw: least 1-based i with u < a_1 + ... + a_i.

    The last group absorbs any float dust at the top of the CDF.
    """
    cum = np.cumsum(np.asarray(a, dtype=np.float64)).tolist()
    return min(bisect_right(cum, u) + 1, len(cum))


def _floyd_scalar(P: int, K: int, u: list[float], pos: int) -> list[int]:
    """One Floyd K-subset from u[pos:pos+K]; returns a sorted list."""
    sel: set[int] = set()
    for s in range(K):
        j = P - K + s
        t = int(u[pos + s] * (j + 1))
        if t > j:  # guard against u*(j+1) rounding up to j+1
            t = j
        sel.add(j if t in sel else t)
    return sorted(sel)


def _floyd_batch(P: int, K: int, U: np.ndarray) -> np.ndarray:
    """Row-wise Floyd subsets from an (count, K) block of uniforms.

    Column s applies the same map as ``_floyd_scalar`` draw s, so each row
    equals the scalar result on the same floats.  Rows come back sorted.
    """
    count = U.shape[0]
    sel = np.empty((count, K), dtype=np.int64)
    for s in range(K):
        j = P - K + s
        t = (U[:, s] * (j + 1)).astype(np.int64)
        np.minimum(t, j, out=t)
        if s == 0:
            sel[:, 0] = t
        else:
            dup = (sel[:, :s] == t[:, None]).any(axis=1)
            sel[:, s] = np.where(dup, j, t)
    sel.sort(axis=1)
    return sel


def sample_object_set(P: int, K: int, rng: np.random.Generator) -> list[int]:
    """Uniform K-subset of {0..P-1} as a sorted list; O(K) memory.

    Uniformity over all C(P, K) subsets is Floyd's invariant; the draw for
    slot s consumes one uniform and maps it into {0..P-K+s}.
    """
    if not 1 <= K <= P:
        raise InvalidParamsError(f"need 1 <= K <= P, got K={K}, P={P}")
    u = rng.random(K)
    return _floyd_scalar(P, K, u.tolist(), 0)


@lru_cache(maxsize=512)
def _sampling_consts(params: ModelParams) -> tuple[np.ndarray, list[float], np.ndarray, str]:
    """Per-params constants hoisted out of the per-trial hot path."""
    cum = np.cumsum(np.asarray(params.a, dtype=np.float64))
    return cum, cum.tolist(), np.asarray(params.K, dtype=np.int64), params.fingerprint()


def _sample_scalar(params: ModelParams, rng: np.random.Generator) -> GraphSample:
    n, P, K = params.n, params.P, params.K
    m = params.m
    _, cum, _, fingerprint = _sampling_consts(params)
    ug = rng.random(n).tolist()
    groups = [min(bisect_right(cum, u) + 1, m) for u in ug]
    sizes = [K[g - 1] for g in groups]
    uo = rng.random(sum(sizes)).tolist()
    flat: list[int] = []
    offsets = [0]
    pos = 0
    for Kg in sizes:
        flat.extend(_floyd_scalar(P, Kg, uo, pos))
        pos += Kg
        offsets.append(pos)
    return GraphSample(
        groups=np.asarray(groups, dtype=np.int64),
        objects=np.asarray(flat, dtype=np.int64),
        offsets=np.asarray(offsets, dtype=np.int64),
        params_hash=fingerprint,
    )


def _sample_vector(params: ModelParams, rng: np.random.Generator) -> GraphSample:
    n, P = params.n, params.P
    cum, _, Karr, fingerprint = _sampling_consts(params)
    u = rng.random(n)
    groups = np.searchsorted(cum, u, side="right").astype(np.int64) + 1
    np.minimum(groups, params.m, out=groups)
    sizes = Karr[groups - 1]
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    floats = rng.random(int(offsets[-1]))
    flat = np.empty(int(offsets[-1]), dtype=np.int64)
    for gi in range(1, params.m + 1):
        idx = np.flatnonzero(groups == gi)
        if len(idx) == 0:
            continue
        Kg = int(Karr[gi - 1])
        cols = offsets[idx][:, None] + np.arange(Kg)[None, :]
        flat[cols] = _floyd_batch(P, Kg, floats[cols])
    return GraphSample(
        groups=groups,
        objects=flat,
        offsets=offsets,
        params_hash=fingerprint,
    )


def sample_graph(params: ModelParams, seed: SeedSpec, *, scratch: np.random.PCG64 | None = None) -> GraphSample:
    """Realize one graph; deterministic in (params, seed).

    Vertices are sampled independently: a group via inverse CDF, then a
    uniform K-subset of the pool.  The scalar/vectorized dispatch depends
    only on params, and both paths replay the identical stream.
    """
    rng = generator_for(seed, scratch)
    if params.n * (1 + params.K[-1]) <= _SCALAR_CUTOFF:
        return _sample_scalar(params, rng)
    return _sample_vector(params, rng)
