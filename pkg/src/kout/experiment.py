"""Deterministic Monte Carlo over K-out graphs.

Trial ``t`` of configuration ``c`` draws its graph from
``SeedSpec(master_seed, c * trials + t)``. Trials are tallied into integer
sums only, so results do not depend on how trials are split across workers.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np
from scipy.stats import norm

from .analysis import _count_mutual, _union_find, count_isolated_pairs
from .params import ModelParams, ParamError
from .rng import SeedSpec
from .sampler import build_graph
from .theory import BoundReport, bound_report

log = logging.getLogger(__name__)

DEFAULT_TRIALS = 10_000
CHUNK = 500
OUTPUT_FIELDS = ("connectivity", "y_stats", "edge_count", "component_histogram")
DEFAULT_OUTPUTS = ("connectivity", "y_stats", "edge_count")
CSV_COLUMNS = ("n", "mu", "k", "trials", "seed", "p_connected", "ci_low", "ci_high",
               "mean_y", "p_y_zero", "upper_bound", "lower_bound", "lower_bound_valid",
               "second_moment_bound", "union_bound")

FIGURE1_N = 1000
FIGURE1_MU = (0.9, 0.06, 0.04)
FIGURE1_K3 = range(3, 21)
FIGURE1_SEED = 20190


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    z = float(norm.ppf(0.5 + confidence / 2.0))
    p = successes / trials
    z2n = z * z / trials
    center = (p + z2n / 2.0) / (1.0 + z2n)
    half = z / (1.0 + z2n) * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials))
    return max(0.0, min(p, center - half)), min(1.0, max(p, center + half))


@dataclass
class Tally:
    """Integer sums over trials; merging is order independent."""

    trials: int = 0
    connected: int = 0
    disconnected: int = 0
    y_sum: int = 0
    y_sq_sum: int = 0
    y_zero: int = 0
    edge_sum: int = 0
    edge_sq_sum: int = 0
    sizes: Counter = field(default_factory=Counter)

    def merge(self, other: "Tally") -> "Tally":
        self.trials += other.trials
        self.connected += other.connected
        self.disconnected += other.disconnected
        self.y_sum += other.y_sum
        self.y_sq_sum += other.y_sq_sum
        self.y_zero += other.y_zero
        self.edge_sum += other.edge_sum
        self.edge_sq_sum += other.edge_sq_sum
        self.sizes.update(other.sizes)
        return self


def run_trial(params: ModelParams, seed: SeedSpec, histogram: bool = False):
    """One graph: (component count, Y, edge count, component sizes or None)."""
    g = build_graph(params, seed)
    src = np.repeat(np.arange(g.n, dtype=np.int64), g.out_degree)
    roots, comps = _union_find(g.n, src, g.sel_idx)
    y = count_isolated_pairs(g)
    edges = g.sel_idx.size - _count_mutual(g.sel_ptr, g.sel_idx)
    sizes = None
    if histogram:
        counts = np.bincount(roots, minlength=g.n)
        sizes = counts[counts > 0]
    return int(comps), y, int(edges), sizes


def _run_chunk(params: ModelParams, master_seed: int, first: int, count: int,
               histogram: bool) -> Tally:
    t = Tally()
    for index in range(first, first + count):
        comps, y, edges, sizes = run_trial(params, SeedSpec(master_seed, index), histogram)
        t.trials += 1
        t.connected += comps == 1
        t.disconnected += comps >= 2
        t.y_sum += y
        t.y_sq_sum += y * y
        t.y_zero += y == 0
        t.edge_sum += edges
        t.edge_sq_sum += edges * edges
        if sizes is not None:
            t.sizes.update(sizes.tolist())
    return t


@dataclass(frozen=True)
class ExperimentConfig:
    points: tuple[ModelParams, ...]
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    confidence_level: float = 0.95
    outputs: tuple[str, ...] = DEFAULT_OUTPUTS

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if not self.points:
            raise ParamError("a sweep needs at least one configuration")
        if int(self.trials) < 1:
            raise ParamError(f"trials must be >= 1, got {self.trials}")
        if not 0 < self.confidence_level < 1:
            raise ParamError(f"confidence_level must lie in (0, 1), got {self.confidence_level}")
        unknown = set(self.outputs) - set(OUTPUT_FIELDS)
        if unknown:
            raise ParamError(f"unknown output field(s): {', '.join(sorted(unknown))}")
        SeedSpec(self.master_seed, 0)
        SeedSpec(self.master_seed, len(self.points) * self.trials - 1)

    @classmethod
    def from_mapping(cls, doc: Mapping[str, Any]) -> "ExperimentConfig":
        """Build from a JSON-style document.

        Keys: ``n``, ``mu``, ``k`` (the base point), ``trials``,
        ``master_seed``, ``confidence_level``, ``outputs``, and optionally
        ``sweep`` = ``{"vary": "k_r" | "n", "values": [...]}`` or with
        ``"start"``/``"stop"`` (inclusive) and ``"step"``.
        """
        base = ModelParams.from_mapping(doc)
        sweep = doc.get("sweep")
        points = [base] if sweep is None else sweep_points(base, **sweep)
        kwargs = {key: doc[key] for key in ("trials", "master_seed", "confidence_level")
                  if doc.get(key) is not None}
        if doc.get("outputs") is not None:
            kwargs["outputs"] = tuple(doc["outputs"])
        return cls(points, **kwargs)


def sweep_points(base: ModelParams, vary: str, values: Sequence[int] | None = None,
                 start: int | None = None, stop: int | None = None,
                 step: int = 1) -> list[ModelParams]:
    """Copies of ``base`` with ``K_r`` or ``n`` set to each value in turn."""
    if values is None:
        if start is None or stop is None:
            raise ParamError("sweep needs 'values' or both 'start' and 'stop'")
        values = range(int(start), int(stop) + 1, int(step))
    values = [int(v) for v in values]
    if not values:
        raise ParamError("sweep range is empty")
    if vary == "k_r":
        return [base.replace(k=base.k[:-1] + (v,)) for v in values]
    if vary == "n":
        return [base.replace(n=v) for v in values]
    raise ParamError(f"can only vary 'k_r' or 'n', not {vary!r}")


@dataclass(frozen=True)
class ExperimentResult:
    params: ModelParams
    trials: int
    master_seed: int
    confidence_level: float
    tally: Tally
    bounds: BoundReport
    outputs: tuple[str, ...] = DEFAULT_OUTPUTS

    @property
    def empirical_p_connected(self) -> float:
        return self.tally.connected / self.trials

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.tally.connected, self.trials, self.confidence_level)

    @property
    def ci_low(self) -> float:
        return self.ci[0]

    @property
    def ci_high(self) -> float:
        return self.ci[1]

    @property
    def ci_half_width(self) -> float:
        lo, hi = self.ci
        return (hi - lo) / 2.0

    @property
    def p_disconnected(self) -> float:
        return self.tally.disconnected / self.trials

    @property
    def mean_y(self) -> float:
        return self.tally.y_sum / self.trials

    @property
    def var_y(self) -> float:
        return _sample_var(self.tally.y_sum, self.tally.y_sq_sum, self.trials)

    @property
    def empirical_p_y_zero(self) -> float:
        return self.tally.y_zero / self.trials

    @property
    def p_y_zero_ci(self) -> tuple[float, float]:
        return wilson_interval(self.tally.y_zero, self.trials, self.confidence_level)

    @property
    def mean_edges(self) -> float:
        return self.tally.edge_sum / self.trials

    @property
    def var_edges(self) -> float:
        return _sample_var(self.tally.edge_sum, self.tally.edge_sq_sum, self.trials)

    @property
    def component_histogram(self) -> dict[int, int]:
        return dict(sorted(self.tally.sizes.items()))

    def to_dict(self) -> dict:
        out = {
            "n": self.params.n,
            "mu": list(self.params.mu),
            "k": list(self.params.k),
            "trials": self.trials,
            "master_seed": self.master_seed,
            "confidence_level": self.confidence_level,
        }
        if "connectivity" in self.outputs:
            out.update(connected_trials=self.tally.connected,
                       empirical_p_connected=self.empirical_p_connected,
                       p_disconnected=self.p_disconnected,
                       ci_low=self.ci_low, ci_high=self.ci_high)
        if "y_stats" in self.outputs:
            out.update(mean_y=self.mean_y, var_y=self.var_y,
                       empirical_p_y_zero=self.empirical_p_y_zero)
        if "edge_count" in self.outputs:
            out.update(mean_edges=self.mean_edges, var_edges=self.var_edges)
        if "component_histogram" in self.outputs:
            out["component_histogram"] = {str(s): c for s, c in self.component_histogram.items()}
        out["bounds"] = self.bounds.to_dict()
        return out

    def csv_row(self) -> dict:
        b = self.bounds
        return {
            "n": self.params.n,
            "mu": ";".join(repr(m) for m in self.params.mu),
            "k": ";".join(str(k) for k in self.params.k),
            "trials": self.trials,
            "seed": self.master_seed,
            "p_connected": repr(self.empirical_p_connected),
            "ci_low": repr(self.ci_low),
            "ci_high": repr(self.ci_high),
            "mean_y": repr(self.mean_y),
            "p_y_zero": repr(self.empirical_p_y_zero),
            "upper_bound": repr(b.upper_bound_asymptotic),
            "lower_bound": _fmt(b.lower_bound_one_law),
            "lower_bound_valid": "true" if b.lower_bound_valid else "false",
            "second_moment_bound": _fmt(b.second_moment_upper_bound),
            "union_bound": _fmt(b.union_bound_disconnect),
        }


def _fmt(x) -> str:
    return "" if x is None or not math.isfinite(x) else repr(float(x))


def _sample_var(s: int, sq: int, t: int) -> float:
    if t < 2:
        return 0.0
    return (sq - s * s / t) / (t - 1)


def default_workers() -> int:
    env = os.environ.get("KOUT_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ParamError(f"KOUT_THREADS must be an integer, got {env!r}") from None
        if value < 1:
            raise ParamError(f"KOUT_THREADS must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def run_point(params: ModelParams, trials: int, master_seed: int = 0,
              first_index: int = 0, workers: int | None = None,
              histogram: bool = False) -> Tally:
    """Tally ``trials`` graphs using trial indices ``first_index, ...``."""
    workers = default_workers() if workers is None else workers
    chunks = [(first_index + s, min(CHUNK, trials - s)) for s in range(0, trials, CHUNK)]
    total = Tally()
    if workers == 1 or len(chunks) == 1:
        for first, count in chunks:
            total.merge(_run_chunk(params, master_seed, first, count, histogram))
        return total
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda c: _run_chunk(params, master_seed, c[0], c[1], histogram),
                         chunks)
        for part in parts:
            total.merge(part)
    return total


def run(config: ExperimentConfig, workers: int | None = None) -> list[ExperimentResult]:
    results = []
    histogram = "component_histogram" in config.outputs
    for c, params in enumerate(config.points):
        log.info("configuration %d/%d: n=%d mu=%s k=%s, %d trials", c + 1,
                 len(config.points), params.n, params.mu, params.k, config.trials)
        tally = run_point(params, config.trials, config.master_seed,
                          first_index=c * config.trials, workers=workers,
                          histogram=histogram)
        results.append(ExperimentResult(params, config.trials, config.master_seed,
                                         config.confidence_level, tally,
                                         bound_report(params), config.outputs))
    return results


def figure1_config(trials: int = DEFAULT_TRIALS, master_seed: int = FIGURE1_SEED,
                   k3=FIGURE1_K3) -> ExperimentConfig:
    base = ModelParams.of(FIGURE1_N, FIGURE1_MU, (1, 2, min(k3)))
    return ExperimentConfig(sweep_points(base, "k_r", values=list(k3)), trials, master_seed)


def results_to_csv(results: Sequence[ExperimentResult]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for res in results:
        writer.writerow(res.csv_row())
    return buf.getvalue()


def results_to_json(results: Sequence[ExperimentResult]) -> str:
    return json.dumps([res.to_dict() for res in results], indent=2, allow_nan=False) + "\n"


def result_to_json(result: ExperimentResult) -> str:
    return json.dumps(result.to_dict(), indent=2, allow_nan=False) + "\n"
