"""Model parameters for inhomogeneous random K-out graphs H(n; mu, K).

A node is class ``i`` with probability ``mu[i]`` and then selects ``k[i]``
distinct other nodes uniformly at random. Classes are indexed from 0 in code
and reported from 1 in anything a user reads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from numbers import Integral
from typing import Any, Mapping, Sequence

PROB_SUM_TOL = 1e-12


class ParamError(ValueError):
    """Base class for invalid model parameters."""


class NonPositiveProbabilityError(ParamError):
    pass


class ProbabilitySumError(ParamError):
    pass


class NonMonotoneKError(ParamError):
    pass


class KTooLargeError(ParamError):
    pass


class LengthMismatchError(ParamError):
    pass


class TooFewNodesError(ParamError):
    pass


@dataclass(frozen=True)
class ClassDistribution:
    """Class probabilities ``mu``; every entry positive, summing to one."""

    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise LengthMismatchError("need at least one class")
        for i, p in enumerate(probs):
            if not (p > 0.0) or not math.isfinite(p):
                raise NonPositiveProbabilityError(
                    f"class {i + 1} probability must be positive, got {p!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ProbabilitySumError(f"class probabilities sum to {total!r}, not 1")

    @property
    def r(self) -> int:
        return len(self.probs)

    @property
    def mu_tilde(self) -> float:
        """Total mass of every class except the last one."""
        return math.fsum(self.probs[:-1])


@dataclass(frozen=True)
class KScaling:
    """Selection counts per class, nondecreasing."""

    ks: tuple[int, ...]

    def __post_init__(self):
        ks = []
        for k in self.ks:
            if isinstance(k, bool) or not isinstance(k, Integral):
                if isinstance(k, float) and k.is_integer():
                    k = int(k)
                else:
                    raise ParamError(f"selection counts must be integers, got {k!r}")
            ks.append(int(k))
        ks = tuple(ks)
        object.__setattr__(self, "ks", ks)
        if not ks:
            raise LengthMismatchError("need at least one selection count")
        if ks[0] < 1:
            raise ParamError(f"selection counts must be positive, got {ks[0]}")
        for a, b in zip(ks, ks[1:]):
            if b < a:
                raise NonMonotoneKError(f"selection counts must be nondecreasing: {ks}")

    @property
    def r(self) -> int:
        return len(self.ks)


@dataclass(frozen=True)
class ModelParams:
    """Full parameterization ``(n, mu, K)``; validated on construction."""

    n: int
    dist: ClassDistribution
    scaling: KScaling

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, Integral):
            raise ParamError(f"n must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        _check_params(self)

    @classmethod
    def of(cls, n: int, mu: Sequence[float], k: Sequence[int]) -> "ModelParams":
        return cls(n, ClassDistribution(tuple(mu)), KScaling(tuple(k)))

    @classmethod
    def from_mapping(cls, doc: Mapping[str, Any]) -> "ModelParams":
        """Build from a document with keys ``n``, ``mu`` and ``k``."""
        missing = [key for key in ("n", "mu", "k") if key not in doc]
        if missing:
            raise ParamError(f"missing parameter field(s): {', '.join(missing)}")
        return cls.of(doc["n"], doc["mu"], doc["k"])

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_mapping(json.loads(text))

    def to_mapping(self) -> dict:
        return {"n": self.n, "mu": list(self.mu), "k": list(self.k)}

    def replace(self, *, n: int | None = None, mu=None, k=None) -> "ModelParams":
        return ModelParams.of(self.n if n is None else n,
                              self.mu if mu is None else mu,
                              self.k if k is None else k)

    @property
    def mu(self) -> tuple[float, ...]:
        return self.dist.probs

    @property
    def k(self) -> tuple[int, ...]:
        return self.scaling.ks

    @property
    def r(self) -> int:
        return self.dist.r

    @property
    def mu_tilde(self) -> float:
        return self.dist.mu_tilde


def _check_params(params: ModelParams) -> None:
    if params.n < 2:
        raise TooFewNodesError(f"need n >= 2, got {params.n}")
    if params.dist.r != params.scaling.r:
        raise LengthMismatchError(
            f"{params.dist.r} class probabilities but {params.scaling.r} selection counts")
    if params.scaling.ks[-1] >= params.n:
        raise KTooLargeError(
            f"largest selection count {params.scaling.ks[-1]} must be below n={params.n}")


def validate(params: ModelParams) -> ModelParams:
    """Re-check every invariant and return ``params`` unchanged.

    Raises:
        ParamError: one of its subclasses, naming the violated condition.
    """
    ClassDistribution(params.dist.probs)
    KScaling(params.scaling.ks)
    _check_params(params)
    return params


def k_avg(params: ModelParams) -> float:
    """Expected number of selections per node, ``sum_i mu_i K_i``."""
    total = math.fsum(m * k for m, k in zip(params.mu, params.k))
    # mu may sum to 1 only within PROB_SUM_TOL
    return min(max(total, float(params.k[0])), float(params.k[-1]))
