"""Closed-form connectivity quantities for H(n; mu, K).

Finite-n quantities (edge probability, moments of the isolated-pair count,
isolated-set probabilities, the union bound) are exact. The asymptotic upper
bound ``1 - C`` drops its o(1) term; the one-law lower bound is reported
together with the condition on ``K_r`` under which it is proven.

Ratios ``C(a, k) / C(b, k)`` are taken as products ``prod (a - j) / (b - j)``,
in log space for floats. ``C(a, k)`` is zero whenever ``a < k``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.special import expit, gammaln, logsumexp

from .params import ModelParams, k_avg

# past this many factors the log-gamma form is cheaper than the product
PRODUCT_FORM_MAX_K = 64
K_STAR_LIMIT = 10**6


# -- exact arithmetic ------------------------------------------------------

def rational(x: float, max_denominator: int = 10**6) -> Fraction:
    """The short decimal a float was typed as, else its exact binary value."""
    short = Fraction(repr(float(x)))
    if short.denominator <= max_denominator:
        return short
    return Fraction(float(x))


def exact_mu(params: ModelParams) -> tuple[Fraction, ...]:
    """Class probabilities as rationals, renormalized to sum to exactly 1."""
    mu = [rational(m) for m in params.mu]
    total = sum(mu)
    return tuple(m / total for m in mu)


def binom_ratio_exact(a: int, b: int, k: int) -> Fraction:
    if a < k:
        return Fraction(0)
    out = Fraction(1)
    for j in range(k):
        out *= Fraction(a - j, b - j)
    return out


# -- float helpers ---------------------------------------------------------

def log_binom_ratio(a, b: int, k: int):
    """``log(C(a, k) / C(b, k))`` for integer ``a <= b``; ``-inf`` if a < k.

    ``a`` may be an array.
    """
    a = np.asarray(a, dtype=np.float64)
    out = np.full(a.shape, -np.inf)
    ok = a >= k
    if k == 0:
        out[ok] = 0.0
        return out if out.ndim else float(out)
    av = a[ok]
    if k <= PRODUCT_FORM_MAX_K:
        j = np.arange(k, dtype=np.float64)
        gap = (b - av)[..., None]
        out[ok] = np.log1p(-gap / (b - j)).sum(axis=-1)
    else:
        out[ok] = (gammaln(av + 1) - gammaln(av - k + 1)
                   - gammaln(b + 1) + gammaln(b - k + 1))
    return out if out.ndim else float(out)


def _log_mixture(params: ModelParams, a, b: int):
    """``log sum_i mu_i C(a, K_i) / C(b, K_i)``, vectorized over ``a``."""
    terms = [math.log(m) + log_binom_ratio(a, b, k)
             for m, k in zip(params.mu, params.k)]
    return logsumexp(np.stack(np.broadcast_arrays(*terms)), axis=0)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def log_comb(n: int, k):
    k = np.asarray(k, dtype=np.float64)
    out = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return out if out.ndim else float(out)


# -- model-level quantities ------------------------------------------------

def edge_probability(params: ModelParams) -> float:
    """``P[u ~ v] = 1 - (1 - K_avg / (n - 1))^2`` for distinct u, v."""
    miss = 1.0 - k_avg(params) / (params.n - 1)
    return min(1.0, max(0.0, 1.0 - miss * miss))


def c_value(params: ModelParams) -> float:
    """``C = 1 / (1 + (2 / mu_1^2) exp(2 K_avg))``."""
    return float(expit(-(2.0 * k_avg(params) + math.log(2.0)
                         - 2.0 * math.log(params.mu[0]))))


def zero_law_upper_bound(params: ModelParams) -> float:
    """Asymptotic upper bound ``1 - C`` on the connectivity probability."""
    return 1.0 - c_value(params)


def _require_two_classes(params: ModelParams) -> float:
    if params.r < 2:
        raise ValueError("the one-law bound needs r >= 2 (mu_tilde would be 0)")
    return params.mu_tilde


def psi_terms(n: int | None, mu_tilde: float, kr: int) -> tuple[float, float]:
    """The two exponentials whose max is Psi; ``n=None`` means n -> inf."""
    h = 0.5 ** (kr - 1) / mu_tilde
    first = _exp(-2.0 * (1.0 - mu_tilde) * ((kr - 1) / 4.0 - h))
    if n is None:
        slope = 1.0 - math.exp(-1.0) - h
        second = 0.0 if slope > 0 else (1.0 if slope == 0 else math.inf)
    else:
        second = _exp(-(1.0 - mu_tilde) * (n / 2.0) * (1.0 - math.exp(-1.0) - h))
    return first, second


def psi(params: ModelParams) -> float:
    mt = _require_two_classes(params)
    return max(psi_terms(params.n, mt, params.k[-1]))


def one_law_condition(mu_tilde: float, kr: int) -> bool:
    """``K_r >= ceil(4 * 0.5^(K_r - 1) / mu_tilde + 1)``."""
    need = 4.0 * 0.5 ** (kr - 1) / mu_tilde + 1.0
    return kr >= math.ceil(need - 1e-9)


class OneLawBound(NamedTuple):
    value: float
    valid: bool
    trivial: bool


def one_law_lower_bound(params: ModelParams) -> OneLawBound:
    """``max(0, 1 - mu_tilde^2 / (1 - mu_tilde) * Psi)`` plus its flags.

    ``valid`` says whether ``K_r`` meets the condition the bound is proven
    under; ``trivial`` says the unclamped value was not positive.
    """
    mt = _require_two_classes(params)
    raw = 1.0 - mt * mt / (1.0 - mt) * psi(params)
    return OneLawBound(max(0.0, raw), one_law_condition(mt, params.k[-1]), not raw > 0)


def k_star(mu_tilde: float, max_k: int = K_STAR_LIMIT) -> int:
    """Smallest ``K_r`` making the n -> inf one-law bound non-trivial.

    Requires the proof's condition on ``K_r``, a vanishing second Psi term,
    and ``mu_tilde^2 / (1 - mu_tilde) * first_term < 1``.
    """
    if not 0.0 < mu_tilde < 1.0:
        raise ValueError(f"mu_tilde must lie in (0, 1), got {mu_tilde}")
    factor = mu_tilde * mu_tilde / (1.0 - mu_tilde)
    for k in range(2, max_k + 1):
        if not one_law_condition(mu_tilde, k):
            continue
        if not 1.0 - math.exp(-1.0) - 0.5 ** (k - 1) / mu_tilde > 0.0:
            continue
        first, _ = psi_terms(None, mu_tilde, k)
        if factor * first < 1.0:
            return k
    raise ValueError(f"no K_r <= {max_k} works for mu_tilde={mu_tilde}")


# -- isolated class-1 pairs --------------------------------------------------

def _require_n(params: ModelParams, at_least: int) -> None:
    if params.n < at_least:
        raise ValueError(f"needs n >= {at_least}, got n={params.n}")


def isolated_pair_probability(params: ModelParams, exact: bool = False):
    """``P[U_12]``: nodes 1, 2 are class 1, select each other, and nobody
    else selects either. Zero unless ``K_1 == 1``."""
    _require_n(params, 3)
    n = params.n
    if exact:
        mu = exact_mu(params)
        if params.k[0] != 1:
            return Fraction(0)
        base = sum(m * binom_ratio_exact(n - 3, n - 1, k) for m, k in zip(mu, params.k))
        return mu[0] ** 2 * Fraction(1, (n - 1) ** 2) * base ** (n - 2)
    if params.k[0] != 1:
        return 0.0
    log_p = (2.0 * math.log(params.mu[0]) - 2.0 * math.log(n - 1)
             + (n - 2) * float(_log_mixture(params, n - 3, n - 1)))
    return math.exp(log_p)


def two_isolated_pairs_probability(params: ModelParams, exact: bool = False):
    """``P[U_12 and U_34]``."""
    _require_n(params, 4)
    n = params.n
    if exact:
        mu = exact_mu(params)
        if params.k[0] != 1:
            return Fraction(0)
        base = sum(m * binom_ratio_exact(n - 5, n - 1, k) for m, k in zip(mu, params.k))
        return mu[0] ** 4 * Fraction(1, (n - 1) ** 4) * base ** (n - 4)
    if params.k[0] != 1:
        return 0.0
    if n == 4:
        return params.mu[0] ** 4 / (n - 1) ** 4
    log_base = float(_log_mixture(params, n - 5, n - 1))
    if log_base == -math.inf:
        return 0.0
    return math.exp(4.0 * math.log(params.mu[0]) - 4.0 * math.log(n - 1)
                    + (n - 4) * log_base)


def expected_isolated_pairs(params: ModelParams, exact: bool = False):
    """``E[Y] = C(n, 2) P[U_12]``."""
    _require_n(params, 4)
    return math.comb(params.n, 2) * isolated_pair_probability(params, exact)


def expected_isolated_pairs_squared(params: ModelParams, exact: bool = False):
    """``E[Y^2] = C(n,2) P[U_12] + C(n,2) C(n-2,2) P[U_12 and U_34]``."""
    n = params.n
    return (expected_isolated_pairs(params, exact)
            + math.comb(n, 2) * math.comb(n - 2, 2)
            * two_isolated_pairs_probability(params, exact))


def asymptotic_isolated_pairs(params: ModelParams) -> float:
    """Large-n limit ``(mu_1^2 / 2) exp(-2 K_avg)`` of ``E[Y]``."""
    return params.mu[0] ** 2 / 2.0 * math.exp(-2.0 * k_avg(params))


def second_moment_upper_bound(params: ModelParams, exact: bool = False):
    """``1 - E[Y]^2 / E[Y^2]``, an upper bound on ``P[Y = 0]`` and hence on
    the connectivity probability. Equals 1 when ``E[Y] = 0``."""
    ey = expected_isolated_pairs(params, exact)
    if ey == 0:
        return Fraction(1) if exact else 1.0
    ey2 = expected_isolated_pairs_squared(params, exact)
    if exact:
        return 1 - ey * ey / ey2
    return min(1.0, max(0.0, 1.0 - ey / (ey2 / ey)))


# -- isolated sets and the union bound ---------------------------------------

def _check_ell(n: int, ell) -> None:
    ell = np.asarray(ell)
    if np.any(ell < 2) or np.any(ell > n // 2):
        raise ValueError(f"set size must lie in [2, {n // 2}], got {ell}")


def log_isolation_probability(params: ModelParams, ell):
    """Log of ``P[B_{n,ell}]``; ``ell`` may be an array."""
    n = params.n
    _check_ell(n, ell)
    ell = np.asarray(ell, dtype=np.int64)
    inside = _log_mixture(params, ell - 1, n - 1)
    outside = _log_mixture(params, n - ell - 1, n - 1)
    with np.errstate(invalid="ignore"):
        out = np.where(inside == -np.inf, -np.inf, ell * inside + (n - ell) * outside)
    return out if out.ndim else float(out)


def isolation_probability(params: ModelParams, ell: int, exact: bool = False):
    """Probability that a fixed set of ``ell`` nodes has no edge leaving it."""
    n = params.n
    _check_ell(n, ell)
    if exact:
        mu = exact_mu(params)
        inside = sum(m * binom_ratio_exact(ell - 1, n - 1, k) for m, k in zip(mu, params.k))
        outside = sum(m * binom_ratio_exact(n - ell - 1, n - 1, k)
                      for m, k in zip(mu, params.k))
        return inside ** ell * outside ** (n - ell)
    return math.exp(log_isolation_probability(params, ell))


def union_bound_disconnect(params: ModelParams, exact: bool = False):
    """``sum_{ell=2}^{n//2} C(n, ell) P[B_{n,ell}]``; may exceed 1."""
    n = params.n
    if n // 2 < 2:
        return Fraction(0) if exact else 0.0
    if exact:
        return sum(math.comb(n, ell) * isolation_probability(params, ell, exact=True)
                   for ell in range(2, n // 2 + 1))
    ell = np.arange(2, n // 2 + 1)
    log_terms = log_comb(n, ell) + log_isolation_probability(params, ell)
    with np.errstate(over="ignore", under="ignore"):
        terms = np.exp(log_terms)
    return math.fsum(terms.tolist())


def a_bound(n: int, mu_tilde: float, kr: int, ell: int) -> float:
    """The per-size factor ``A_{n,ell}`` that Psi dominates in the one-law
    proof. Diagnostic only."""
    c = 1.0 - mu_tilde
    gain = c / mu_tilde * ell * (ell / n) ** (kr - 1)
    loss = c * (n - ell) * -math.expm1(-ell * (kr - 1) / n)
    return _exp(gain - loss)


# -- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    k_avg: float
    edge_prob: float
    upper_bound_asymptotic: float
    c_value: float
    psi_value: float | None
    lower_bound_one_law: float | None
    lower_bound_valid: bool
    lower_bound_trivial: bool | None
    second_moment_upper_bound: float | None
    union_bound_disconnect: float
    union_bound_clamped: float
    mu_tilde: float | None

    def to_dict(self) -> dict:
        out = asdict(self)
        for key, value in out.items():
            if isinstance(value, float) and not math.isfinite(value):
                out[key] = None
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), allow_nan=False, **kw)


def bound_report(params: ModelParams) -> BoundReport:
    if params.r >= 2:
        lower = one_law_lower_bound(params)
        psi_value, mt = psi(params), params.mu_tilde
    else:
        lower, psi_value, mt = None, None, None
    ub = union_bound_disconnect(params)
    return BoundReport(
        k_avg=k_avg(params),
        edge_prob=edge_probability(params),
        upper_bound_asymptotic=zero_law_upper_bound(params),
        c_value=c_value(params),
        psi_value=psi_value,
        lower_bound_one_law=lower.value if lower else None,
        lower_bound_valid=bool(lower and lower.valid),
        lower_bound_trivial=lower.trivial if lower else None,
        second_moment_upper_bound=(second_moment_upper_bound(params)
                                   if params.n >= 4 else None),
        union_bound_disconnect=ub,
        union_bound_clamped=min(1.0, ub),
        mu_tilde=mt,
    )
