#!/usr/bin/env python3
# %% [markdown]
# # The bound family at growing n
#
# All numbers here are closed-form; nothing is sampled. For fixed mu and K
# the exact second-moment bound settles onto the asymptotic 1 - C and the
# mean number of isolated pairs approaches its limit at rate 1/n. The union
# bound on disconnection levels off too; compare it with the disconnection
# rate the Monte Carlo reports for the same parameters.

# %%
from kout.params import ModelParams
from kout.theory import (asymptotic_isolated_pairs, bound_report,
                         expected_isolated_pairs)

base = ModelParams.of(1000, [0.9, 0.06, 0.04], [1, 2, 3])

print(f"{'n':>8}  {'1 - C':>7}  {'2nd mom':>7}  {'union':>9}  {'E[Y] / limit':>12}")
for n in (10, 100, 1_000, 10_000, 100_000, 1_000_000):
    p = base.replace(n=n)
    b = bound_report(p)
    ratio = expected_isolated_pairs(p) / asymptotic_isolated_pairs(p)
    print(f"{n:8d}  {b.upper_bound_asymptotic:7.4f}  {b.second_moment_upper_bound:7.4f}  "
          f"{b.union_bound_disconnect:9.3g}  {ratio:12.6f}")

# %% [markdown]
# A case where the one-law lower bound is informative: a small sparse class
# next to a heavy class with many selections.

# %%
p = ModelParams.of(10_000, [0.1, 0.9], [1, 8])
print(bound_report(p).to_json(indent=2))
