# %% [markdown]
# # Local densities and the singular series
#
# delta_h(p) is an exact rational; the singular series multiplies the
# exceptional factors with a product over generic primes 3 mod 4.

# %%
from twosquares import OffsetSet, delta, enumerate_T, epsilon, is_admissible, singular_series

# %%
for h in ([0], [0, 1], [0, 1, 2], [0, 1, 2, 3], [0, 4]):
    print(h, "delta_2 =", delta(h, 2).value, " delta_3 =", delta(h, 3).value)

print("T_{0}(8) =", enumerate_T([0], 2))

# %%
for h in ([0, 1], [0, 1, 2], [0, 2, 6, 8], [0, 1, 2, 4, 5, 8, 16, 21]):
    s = singular_series(h)
    print(f"{h}: S = {s.value:.10f} (tail {s.tail_bound:.1e}), admissible {is_admissible(h)}")

# %% [markdown]
# Local increments: they vanish at even powers of odd primes.

# %%
h = OffsetSet([0, 1])
for a in range(1, 5):
    print(a, epsilon(h, 3, a), epsilon(h, 2, a))
