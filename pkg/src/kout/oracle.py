"""Ground truth for tiny instances by enumerating every outcome.

Every class assignment (``r^n`` of them) is visited in lexicographic order;
for each, every tuple of selection sets is enumerated with a mixed-radix
counter over subset ranks. Graphs are bitmasks, so one assignment's tuples
are processed as a single numpy batch. Probabilities are exact rationals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .params import ModelParams
from .theory import exact_mu

MAX_STATES = 10**8
# tuples per numpy batch; bounds memory at roughly n * 8 bytes per tuple
BATCH = 1 << 20


class InstanceTooLargeError(ValueError):
    def __init__(self, states: int):
        super().__init__(f"{states} states to enumerate (limit {MAX_STATES})")
        self.states = states


@dataclass(frozen=True)
class ExactResult:
    p_connected: Fraction
    e_y: Fraction
    p_y_zero: Fraction
    state_count: int

    def to_dict(self) -> dict:
        out = {"state_count": self.state_count}
        for name in ("p_connected", "e_y", "p_y_zero"):
            value = getattr(self, name)
            out[name] = f"{value.numerator}/{value.denominator}"
            out[name + "_float"] = float(value)
        return out


def state_count(params: ModelParams) -> int:
    """Number of (class assignment, selection tuple) outcomes."""
    per_class = [math.comb(params.n - 1, k) for k in params.k]
    # sum over assignments of prod_v C(n-1, K_{t_v}) factorizes
    return sum(per_class) ** params.n


def _options(n: int, v: int, k: int) -> np.ndarray:
    others = [u for u in range(n) if u != v]
    return np.array([sum(1 << u for u in c) for c in itertools.combinations(others, k)],
                    dtype=np.int64)


def _tally(n: int, sel: np.ndarray, class1_pair: np.ndarray) -> tuple[int, int, int]:
    """Connected count, total Y and Y == 0 count over a batch.

    ``sel`` is ``(n, m)``: selection bitmask of each node in each outcome.
    """
    bits = [np.int64(1 << v) for v in range(n)]
    adj = sel.copy()
    for u in range(n):
        for v in range(n):
            if u != v:
                adj[v] |= ((sel[u] >> v) & 1) << u
    reach = np.full(sel.shape[1], 1, dtype=np.int64)
    for _ in range(n - 1):
        grown = reach.copy()
        for v in range(n):
            grown |= np.where(reach & bits[v], adj[v], 0)
        reach = grown
    connected = int(np.count_nonzero(reach == (1 << n) - 1))

    y = np.zeros(sel.shape[1], dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        if not (class1_pair[i] and class1_pair[j]):
            continue
        hit = (sel[i] == bits[j]) & (sel[j] == bits[i])
        pair = bits[i] | bits[j]
        for l in range(n):
            if l != i and l != j:
                hit &= (sel[l] & pair) == 0
        y += hit
    return connected, int(y.sum()), int(np.count_nonzero(y == 0))


def exact_connectivity(params: ModelParams, max_states: int = MAX_STATES) -> ExactResult:
    """Exact P[connected], E[Y] and P[Y = 0] by total enumeration.

    Raises:
        InstanceTooLargeError: more than ``max_states`` outcomes.
    """
    n, r = params.n, params.r
    total_states = state_count(params)
    if total_states > max_states:
        raise InstanceTooLargeError(total_states)
    mu = exact_mu(params)
    options = {(v, c): _options(n, v, params.k[c]) for v in range(n) for c in range(r)}

    p_conn = e_y = p_y0 = Fraction(0)
    for assignment in itertools.product(range(r), repeat=n):
        weight = math.prod(mu[c] for c in assignment)
        opts = [options[v, c] for v, c in enumerate(assignment)]
        radix = [len(o) for o in opts]
        tuples = math.prod(radix)
        is_class1 = [c == 0 for c in assignment]
        conn = ysum = y0 = 0
        for start in range(0, tuples, BATCH):
            code = np.arange(start, min(tuples, start + BATCH), dtype=np.int64)
            sel = np.empty((n, code.size), dtype=np.int64)
            for v in range(n):
                code, digit = np.divmod(code, radix[v])
                sel[v] = opts[v][digit]
            c, s, z = _tally(n, sel, is_class1)
            conn, ysum, y0 = conn + c, ysum + s, y0 + z
        p_conn += weight * Fraction(conn, tuples)
        e_y += weight * Fraction(ysum, tuples)
        p_y0 += weight * Fraction(y0, tuples)
    return ExactResult(p_conn, e_y, p_y0, total_states)
