# %% [markdown]
# # Gap statistics near 10^12
#
# Rescale the gaps to mean one and compare with the exponential law; then
# look at counts in short intervals and their moments.

# %%
import numpy as np

import twosquares as ts

# %%
h = ts.spacing_histogram(ts.window_sieve(10**12, 10**6), bins=12, t_max=4.0)
print(f"mean gap {h.mean_gap:.3f}, sup distance at atoms {h.sup_distance:.4f}")
for lo, m, r in zip(h.edges[:-1], h.masses, h.reference):
    print(f"  t >= {lo:4.2f}: {m:.4f}  exp {r:.4f}")

# %%
ic = ts.interval_counts(10**7, 1.0, m_max=5)
print("interval counts", np.round(ic.empirical, 4))
print("poisson        ", np.round(ic.poisson, 4))
for ell in (1, 2, 3):
    print(ell, ts.empirical_moment(ell, 10**7, 1.0, ic.y), ts.poisson_moment(ell, 1.0))
