#!/usr/bin/env python3
# %% [markdown]
# # Exact answers for tiny graphs
#
# For a handful of nodes every outcome can be enumerated, which gives exact
# rational probabilities. The Monte Carlo harness should land within a few
# standard errors of them.

# %%
import math

from kout import experiment as ex
from kout.oracle import exact_connectivity
from kout.params import ModelParams

CASES = [
    (4, [1.0], [1]),
    (5, [1.0], [1]),
    (6, [1.0], [2]),
    (5, [0.5, 0.5], [1, 2]),
]
TRIALS = 20_000

# %%
for n, mu, k in CASES:
    p = ModelParams.of(n, mu, k)
    exact = exact_connectivity(p)
    res = ex.run(ex.ExperimentConfig([p], trials=TRIALS, master_seed=1))[0]
    pc = float(exact.p_connected)
    z = (res.empirical_p_connected - pc) / math.sqrt(pc * (1 - pc) / TRIALS)
    print(f"n={n} mu={mu} k={k}: exact {exact.p_connected} = {pc:.5f}, "
          f"MC {res.empirical_p_connected:.5f} (z = {z:+.2f}), "
          f"E[Y] = {exact.e_y}")

# %% [markdown]
# With n = 4 and K = 1 the graph is disconnected only when it splits into two
# mutually selecting pairs: 3 of the 81 outcomes, so P = 78/81 and Y = 2 in
# each of them, giving E[Y] = 6/81 = 2/27.
