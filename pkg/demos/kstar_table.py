#!/usr/bin/env python3
# %% [markdown]
# # How many selections does the last class need?
#
# The one-law lower bound only says something once K_r is large enough.
# k_star finds the smallest such K_r for a given total weight mu_tilde of the
# sparse classes, using the large-n form of Psi.

# %%
from kout.theory import k_star, one_law_condition, psi_terms

MU_TILDE = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95]

print("mu_tilde  K*   gap factor at K*")
for mt in MU_TILDE:
    k = k_star(mt)
    first, _ = psi_terms(None, mt, k)
    print(f"{mt:8.2f}  {k:3d}  {mt * mt / (1 - mt) * first:.4f}")

# %% [markdown]
# Below the table value a candidate K_r fails at least one requirement: the
# proof's condition on K_r, the second exponential of Psi vanishing as n
# grows, or the gap factor dropping under 1.

# %%
import math

for mt, k_top in ((0.1, 5), (0.9, 43)):
    for k in range(max(2, k_top - 2), k_top + 1):
        slope = 1 - math.exp(-1) - 0.5 ** (k - 1) / mt
        first, _ = psi_terms(None, mt, k)
        print(f"mu_tilde={mt}, K_r={k}: condition {one_law_condition(mt, k)}, "
              f"second term vanishes {slope > 0}, gap factor {mt * mt / (1 - mt) * first:.4f}")
