"""Elementary inequalities the bounds rest on, evaluated side by side.

Each checker validates its domain, evaluates both sides (exactly where the
sides are rational) and returns whether the inequality holds. They exist to
be property-tested.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _domain(ok: bool, msg: str) -> None:
    if not ok:
        raise ValueError(msg)


def power_sandwich(x: float, y: int) -> bool:
    """``1 - xy <= (1 - x)^y <= 1 - xy + (xy)^2 / 2`` for ``0 <= x < 1``."""
    _domain(0 <= x < 1, f"x must lie in [0, 1), got {x}")
    _domain(int(y) == y and y >= 0, f"y must be a nonnegative integer, got {y}")
    fx, y = Fraction(x), int(y)
    mid = (1 - fx) ** y
    xy = fx * y
    return 1 - xy <= mid <= 1 - xy + xy * xy / 2


def binom_shift_lower(x: int, y: int, z: int) -> bool:
    """``C(y - z, x) / C(y, x) >= 1 - zx / (y - z)`` for ``y >= 2x``,
    ``0 <= z <= x``."""
    _domain(x >= 1 and y >= 2 * x, f"need x >= 1 and y >= 2x, got x={x}, y={y}")
    _domain(0 <= z <= x, f"need 0 <= z <= x, got z={z}")
    lhs = Fraction(math.comb(y - z, x), math.comb(y, x))
    return lhs >= 1 - Fraction(z * x, y - z)


def binom_entropy_bound(n: int, r: int) -> bool:
    """``C(n, r) <= (n / r)^r (n / (n - r))^(n - r)`` for ``1 <= r <= n/2``.

    Cleared of denominators: ``C(n, r) r^r (n - r)^(n - r) <= n^n``.
    """
    _domain(1 <= r <= n // 2, f"need 1 <= r <= n/2, got n={n}, r={r}")
    return math.comb(n, r) * r**r * (n - r) ** (n - r) <= n**n


def binom_ratio_power(x: int, y: int, k: int) -> bool:
    """``C(x, k) / C(y, k) <= (x / y)^k`` for ``0 <= k <= x <= y``, ``y >= 1``."""
    _domain(0 <= k <= x <= y and y >= 1, f"need 0 <= k <= x <= y, got {k}, {x}, {y}")
    return Fraction(math.comb(x, k), math.comb(y, k)) <= Fraction(x, y) ** k


def exp_linear(x: float) -> bool:
    """``1 + x <= e^x`` and ``1 - x <= e^-x`` on ``[0, 1]``."""
    _domain(0 <= x <= 1, f"x must lie in [0, 1], got {x}")
    return 1 + x <= math.exp(x) and 1 - x <= math.exp(-x)


def exp_gap(x: float) -> bool:
    """``1 - e^-x >= x / 2`` on ``[0, 1]``."""
    _domain(0 <= x <= 1, f"x must lie in [0, 1], got {x}")
    return -math.expm1(-x) >= x / 2
