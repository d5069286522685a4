"""Inhomogeneous random K-out graphs: sampling, exact and asymptotic
connectivity bounds, and a deterministic Monte Carlo harness."""

from .analysis import ComponentCensus, census, count_isolated_pairs
from .params import ModelParams, ParamError, k_avg, validate
from .rng import SeedSpec
from .sampler import KOutGraph, build_graph, sample_classes, sample_selections
from .theory import (BoundReport, bound_report, edge_probability,
                     expected_isolated_pairs, isolation_probability, k_star,
                     one_law_lower_bound, psi, second_moment_upper_bound,
                     union_bound_disconnect, zero_law_upper_bound)

__all__ = [
    "BoundReport", "ComponentCensus", "KOutGraph", "ModelParams", "ParamError",
    "SeedSpec", "bound_report", "build_graph", "census", "count_isolated_pairs",
    "edge_probability", "expected_isolated_pairs", "isolation_probability",
    "k_avg", "k_star", "one_law_lower_bound", "psi", "sample_classes",
    "sample_selections", "second_moment_upper_bound", "union_bound_disconnect",
    "validate", "zero_law_upper_bound",
]
