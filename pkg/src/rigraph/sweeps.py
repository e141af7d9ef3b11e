"""Sweep configuration, execution, CSV emission, and regime classification.

A sweep walks one axis (n, P, K1-scale, or beta-target) across a base
parameter point, runs a fixed trial budget per point, and emits one frozen
CSV row per point.  Identical config plus seed yields byte-identical CSV.
Axis point i derives its own master seed from the sweep seed by splitmix64,
so parameter points never share random numbers.

The beta-target axis picks, for each target, the ratio-shaped ring vector
whose *achieved* deviation is nearest the target.  Integer ring sizes make
beta jump in coarse steps at desk scale, so "smallest K with beta >= target"
could land far above a negative target; choosing the nearer of the two
bracketing candidates keeps the labeled point honest.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from dataclasses import dataclass
from typing import Any

from .errors import InvalidParamsError, RegimeViolationError
from .model_core import (
    ModelParams,
    b_vector,
    beta,
    cross_moment_ratio,
    diagnostics,
    expected_isolated,
    ring_sizes_for,
    solve_k1,
)
from .montecarlo import TrialAggregate, run_trials
from .sampler import SeedSpec

SCHEMA_VERSION = 1
AXES = ("n", "P", "K1-scale", "beta-target")
CRITICAL_WINDOW = 0.05

CSV_COLUMNS = (
    "axis",
    "axis_value",
    "n",
    "P",
    "K",
    "b1",
    "beta",
    "yagan_c",
    "p_connected",
    "p_connected_low",
    "p_connected_high",
    "p_no_isolated",
    "p_no_isolated_low",
    "p_no_isolated_high",
    "p_f",
    "p_f_low",
    "p_f_high",
    "mean_isolated",
    "expected_isolated_closed_form",
    "cross_moment_ratio",
    "regime_flags",
)


@dataclass(frozen=True)
class RegimeLabel:
    """Connectivity regime of one instance under the coarse c = n*b_1/ln n
    law, refined by the sign of beta inside the critical window where the
    coarse law is silent."""

    kind: str  # subcritical-yagan | supercritical-yagan | critical-window
    c: float
    beta: float
    window: float

    @property
    def label(self) -> str:
        if self.kind != "critical-window":
            return self.kind
        sign = ">" if self.beta > 0 else ("<" if self.beta < 0 else "=")
        return f"critical-window(beta{sign}0)"


def classify_from_values(n: int, b1: float, window: float = CRITICAL_WINDOW) -> RegimeLabel:
    if n < 2:
        raise InvalidParamsError(f"classification needs n >= 2, got n={n}")
    ln_n = math.log(n)
    c = n * b1 / ln_n
    bta = n * b1 - ln_n
    if c < 1.0 - window:
        kind = "subcritical-yagan"
    elif c > 1.0 + window:
        kind = "supercritical-yagan"
    else:
        kind = "critical-window"
    return RegimeLabel(kind=kind, c=c, beta=bta, window=window)


def classify_regime(params: ModelParams, window: float = CRITICAL_WINDOW) -> RegimeLabel:
    """Classify one instance; depends on params only through (n, b_1)."""
    return classify_from_values(params.n, b_vector(params)[0], window)


def solve_k1_nearest(
    n: int, P: int, a: tuple[float, ...], ratios: tuple[float, ...], target_beta: float
) -> tuple[int, ...]:
    """Ratio-shaped ring vector whose achieved beta is nearest the target.

    Candidates are the ``solve_k1`` result (smallest vector at or above the
    target) and its base-size-minus-one sibling (just below); ties go to the
    smaller vector.
    """
    upper = solve_k1(n, P, a, ratios, target_beta)

    def achieved(K: tuple[int, ...]) -> float:
        return beta(ModelParams(n=n, a=a, K=K, P=P))

    if upper[0] == 1:
        return upper
    lower = ring_sizes_for(upper[0] - 1, tuple(float(r) for r in ratios), P)
    if abs(achieved(lower) - target_beta) <= abs(achieved(upper) - target_beta):
        return lower
    return upper


@dataclass(frozen=True)
class SweepSpec:
    """Validated sweep definition (JSON schema version 1)."""

    base_n: int
    base_P: int
    a: tuple[float, ...]
    base_K: tuple[int, ...] | None
    ratios: tuple[float, ...] | None
    axis: str
    points: tuple[float, ...]
    trials: int
    master_seed: int
    output_path: str

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise InvalidParamsError(f"axis must be one of {AXES}, got {self.axis!r}")
        if len(self.points) == 0:
            raise InvalidParamsError("points must be nonempty")
        if any(self.points[i] >= self.points[i + 1] for i in range(len(self.points) - 1)):
            raise InvalidParamsError(f"points must be strictly increasing, got {self.points}")
        if self.trials < 1:
            raise InvalidParamsError(f"trials must be >= 1, got {self.trials}")
        if self.axis == "beta-target":
            if self.ratios is None:
                raise InvalidParamsError("beta-target axis requires 'ratios'")
        elif self.base_K is None:
            raise InvalidParamsError(f"axis {self.axis!r} requires base K")
        if not self.output_path:
            raise InvalidParamsError("output_path must be nonempty")


def load_sweep_spec(path: str) -> SweepSpec:
    """Parse and validate a sweep config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParamsError(f"cannot read sweep config {path!r}: {exc}") from exc
    return sweep_spec_from_dict(doc)


def sweep_spec_from_dict(doc: dict[str, Any]) -> SweepSpec:
    if not isinstance(doc, dict):
        raise InvalidParamsError("sweep config must be a JSON object")
    if doc.get("schema") != SCHEMA_VERSION:
        raise InvalidParamsError(
            f"unsupported config schema {doc.get('schema')!r}; expected {SCHEMA_VERSION}"
        )
    base = doc.get("base")
    if not isinstance(base, dict):
        raise InvalidParamsError("config needs a 'base' object with n, P, a")
    try:
        spec = SweepSpec(
            base_n=int(base["n"]),
            base_P=int(base["P"]),
            a=tuple(float(x) for x in base["a"]),
            base_K=tuple(int(k) for k in base["K"]) if "K" in base else None,
            ratios=tuple(float(r) for r in doc["ratios"]) if "ratios" in doc else None,
            axis=str(doc["axis"]),
            points=tuple(float(p) for p in doc["points"]),
            trials=int(doc["trials"]),
            master_seed=int(doc["master_seed"]),
            output_path=str(doc["output_path"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParamsError(f"malformed sweep config: {exc!r}") from exc
    return spec


def _int_axis_value(value: float, what: str) -> int:
    if value != int(value):
        raise InvalidParamsError(f"{what} axis points must be integers, got {value}")
    return int(value)


def resolve_point(spec: SweepSpec, value: float) -> ModelParams:
    """Materialize the parameter point for one axis value."""
    n, P, a = spec.base_n, spec.base_P, spec.a
    if spec.axis == "n":
        return ModelParams(n=_int_axis_value(value, "n"), a=a, K=spec.base_K, P=P)
    if spec.axis == "P":
        return ModelParams(n=n, a=a, K=spec.base_K, P=_int_axis_value(value, "P"))
    if spec.axis == "K1-scale":
        scaled = [min(P, max(1, math.floor(k * value + 0.5))) for k in spec.base_K]
        for i in range(1, len(scaled)):  # rounding can break monotonicity
            scaled[i] = max(scaled[i], scaled[i - 1])
        return ModelParams(n=n, a=a, K=tuple(scaled), P=P)
    K = solve_k1_nearest(n, P, a, spec.ratios, value)
    return ModelParams(n=n, a=a, K=K, P=P)


@dataclass(frozen=True)
class SweepRow:
    """One (axis point x estimators) record; column set is frozen."""

    axis: str
    axis_value: float
    n: int
    P: int
    K: tuple[int, ...]
    b1: float
    beta: float
    yagan_c: float
    p_connected: float
    p_connected_low: float
    p_connected_high: float
    p_no_isolated: float
    p_no_isolated_low: float
    p_no_isolated_high: float
    p_f: float
    p_f_low: float
    p_f_high: float
    mean_isolated: float
    expected_isolated_closed_form: float
    cross_moment_ratio: float
    regime_flags: tuple[str, ...]

    def to_csv_fields(self) -> list[str]:
        return [
            self.axis,
            _fmt(self.axis_value),
            str(self.n),
            str(self.P),
            ";".join(str(k) for k in self.K),
            _fmt(self.b1),
            _fmt(self.beta),
            _fmt(self.yagan_c),
            _fmt(self.p_connected),
            _fmt(self.p_connected_low),
            _fmt(self.p_connected_high),
            _fmt(self.p_no_isolated),
            _fmt(self.p_no_isolated_low),
            _fmt(self.p_no_isolated_high),
            _fmt(self.p_f),
            _fmt(self.p_f_low),
            _fmt(self.p_f_high),
            _fmt(self.mean_isolated),
            _fmt(self.expected_isolated_closed_form),
            _fmt(self.cross_moment_ratio),
            ";".join(self.regime_flags),
        ]


def _fmt(x: float) -> str:
    """Floats print with 9 significant digits throughout the CSV schema."""
    return format(float(x), ".9g")


def point_seed(master_seed: int, point_index: int) -> int:
    """Per-point master seed; points never share trial randomness."""
    return SeedSpec(master_seed, point_index).trial_seed()


def build_row(
    axis: str, axis_value: float, params: ModelParams, agg: TrialAggregate
) -> SweepRow:
    b1 = b_vector(params)[0]
    e_j, _ = expected_isolated(params)
    try:
        cmr = cross_moment_ratio(params)
    except (RegimeViolationError, InvalidParamsError):
        cmr = math.nan
    return SweepRow(
        axis=axis,
        axis_value=axis_value,
        n=params.n,
        P=params.P,
        K=params.K,
        b1=b1,
        beta=beta(params),
        yagan_c=classify_regime(params).c,
        p_connected=agg.connected.point,
        p_connected_low=agg.connected.ci_low,
        p_connected_high=agg.connected.ci_high,
        p_no_isolated=agg.no_isolated.point,
        p_no_isolated_low=agg.no_isolated.ci_low,
        p_no_isolated_high=agg.no_isolated.ci_high,
        p_f=agg.no_isolated_but_disconnected.point,
        p_f_low=agg.no_isolated_but_disconnected.ci_low,
        p_f_high=agg.no_isolated_but_disconnected.ci_high,
        mean_isolated=agg.mean_isolated,
        expected_isolated_closed_form=e_j,
        cross_moment_ratio=cmr,
        regime_flags=diagnostics(params).flags,
    )


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """Resolve every axis point up front (config errors must precede any
    simulation), then run them in order."""
    resolved = [(i, v, resolve_point(spec, v)) for i, v in enumerate(spec.points)]
    rows = []
    for i, value, params in resolved:
        agg = run_trials(params, spec.trials, point_seed(spec.master_seed, i), workers)
        rows.append(build_row(spec.axis, value, params, agg))
    return rows


def simulate_row(
    params: ModelParams, trials: int, master_seed: int, workers: int | None = None
) -> tuple[SweepRow, TrialAggregate]:
    """Single-point run; identical to a one-point sweep on the n axis."""
    agg = run_trials(params, trials, point_seed(master_seed, 0), workers)
    return build_row("n", float(params.n), params, agg), agg


def rows_to_csv_text(rows: list[SweepRow]) -> str:
    out = []
    out.append(",".join(CSV_COLUMNS))
    for row in rows:
        fields = row.to_csv_fields()
        assert len(fields) == len(CSV_COLUMNS)
        out.append(",".join(fields))
    return "\n".join(out) + "\n"


def write_sweep_csv(rows: list[SweepRow], path: str) -> None:
    """Write atomically: a failed run never leaves a partial file behind."""
    text = rows_to_csv_text(rows)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".sweep-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_sweep_csv(path: str) -> list[dict[str, str]]:
    """Rows as column->string dicts, for round-trip checks and scripts."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise InvalidParamsError(f"unexpected CSV columns in {path!r}")
        return list(reader)
