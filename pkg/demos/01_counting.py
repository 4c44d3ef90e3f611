# %% [markdown]
# # Counting sums of two squares
#
# Build a membership window, count N(x) and watch N(x) sqrt(log x) / x
# creep down towards the Landau-Ramanujan constant.

# %%
import math

import numpy as np

import twosquares as ts

# %%
win = ts.sieve_upto(10**7)
print(ts.elements(ts.window_sieve(0, 30)))

# %%
C = ts.landau_ramanujan(10**7)
print(f"C = {C.value:.10f} +/- {C.tail_bound:.1e}")
for x in np.logspace(3, 7, 5).astype(int):
    n = ts.count(win, int(x))
    print(f"x = {x:>9}  N(x) = {n:>8}  N sqrt(log x)/x = {n * math.sqrt(math.log(x)) / x:.5f}")

# %% [markdown]
# Windows far out are built directly, without touching the integers below.

# %%
far = ts.window_sieve(10**12, 10**5)
print(len(ts.elements(far)), "elements in [1e12, 1e12 + 1e5)")
print(ts.is_sots(10**12 + 1), ts.is_sots(2**61 - 1))
