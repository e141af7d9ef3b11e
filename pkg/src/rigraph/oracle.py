"""Independent brute-force ground truth for tiny instances.

Two enumerations, both in exact rational arithmetic end to end (never
float-vs-float comparisons):

* ``enumerate_pair_prob``: intersection probability of two independent
  uniform subsets, counted over every ordered subset pair.
* ``enumerate_event_probs``: connectivity / isolation probabilities and the
  expected isolated count, by summing the exact weight of every joint
  (group, object set) assignment and evaluating the events with
  ``graph_analysis``.

Enumeration size is capped at 1e7 evaluations with a hard error so a typo'd
instance cannot melt CI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .errors import EnumerationBudgetError, InvalidParamsError
from .graph_analysis import analyze
from .model_core import ModelParams
from .sampler import GraphSample

BUDGET = 10_000_000


def enumerate_pair_prob(P: int, Ki: int, Kj: int) -> Fraction:
    """Exact P[two independent uniform subsets of sizes Ki, Kj intersect],
    by counting intersecting ordered pairs over all C(P,Ki)*C(P,Kj) pairs."""
    if Ki < 0 or Kj < 0 or Ki > P or Kj > P:
        raise InvalidParamsError(f"need 0 <= Ki, Kj <= P, got Ki={Ki}, Kj={Kj}, P={P}")
    total = math.comb(P, Ki) * math.comb(P, Kj)
    if total > BUDGET:
        raise EnumerationBudgetError(
            f"{total} subset pairs exceed the {BUDGET} enumeration budget"
        )
    masks_i = [_mask(c) for c in combinations(range(P), Ki)]
    masks_j = [_mask(c) for c in combinations(range(P), Kj)]
    hits = sum(1 for mi in masks_i for mj in masks_j if mi & mj)
    return Fraction(hits, total)


def _mask(objs: tuple[int, ...]) -> int:
    m = 0
    for o in objs:
        m |= 1 << o
    return m


@dataclass(frozen=True)
class EventProbs:
    """Exact event probabilities for one tiny instance."""

    p_connected: Fraction
    p_no_isolated: Fraction
    expected_isolated: Fraction


def enumerate_event_probs(params: ModelParams) -> EventProbs:
    """Exact probabilities by full enumeration of the sample space.

    Each vertex independently picks (group g, set S) with probability
    a_g / C(P, K_g); every joint assignment is weighted accordingly and the
    events evaluated with the same analysis code the simulator uses.
    """
    if params.n < 2:
        raise InvalidParamsError(f"event enumeration needs n >= 2, got n={params.n}")
    per_vertex = sum(math.comb(params.P, Kg) for Kg in params.K)
    if per_vertex ** params.n > BUDGET:
        raise EnumerationBudgetError(
            f"{per_vertex}^{params.n} joint assignments exceed the {BUDGET} budget"
        )
    a_frac = [Fraction(x) for x in params.a]
    a_total = sum(a_frac)
    choices: list[tuple[int, tuple[int, ...], Fraction]] = []
    for g, (ag, Kg) in enumerate(zip(a_frac, params.K), start=1):
        w = (ag / a_total) / math.comb(params.P, Kg)
        for subset in combinations(range(params.P), Kg):
            choices.append((g, subset, w))

    fingerprint = params.fingerprint()
    p_conn = Fraction(0)
    p_noiso = Fraction(0)
    e_iso = Fraction(0)
    # connectivity/isolation depend on the sets alone, so when groups share a
    # ring size the analysis can be reused across their joint assignments
    stats_cache: dict[tuple[tuple[int, ...], ...], tuple[bool, int]] = {}
    for combo in product(choices, repeat=params.n):
        weight = Fraction(1)
        for _, _, w in combo:
            weight *= w
        key = tuple(subset for _, subset, _ in combo)
        cached = stats_cache.get(key)
        if cached is None:
            flat: list[int] = []
            offsets = [0]
            for subset in key:
                flat.extend(subset)
                offsets.append(len(flat))
            sample = GraphSample(
                groups=np.asarray([g for g, _, _ in combo], dtype=np.int64),
                objects=np.asarray(flat, dtype=np.int64),
                offsets=np.asarray(offsets, dtype=np.int64),
                params_hash=fingerprint,
            )
            stats = analyze(sample)
            cached = (stats.connected, stats.isolated_count)
            stats_cache[key] = cached
        connected, isolated = cached
        if connected:
            p_conn += weight
        if isolated == 0:
            p_noiso += weight
        else:
            e_iso += weight * isolated
    return EventProbs(p_connected=p_conn, p_no_isolated=p_noiso, expected_isolated=e_iso)
