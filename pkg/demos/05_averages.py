# %% [markdown]
# # Averages over chain regions
#
# Summing S_h over lattice points of a dilated region recovers its volume,
# and truncated inclusion-exclusion brackets the consecutive-gap counts.

# %%
from twosquares import Region, inclusion_exclusion_bounds, singular_series_average, volume

# %%
region = Region.box(2)
for y in (50, 100, 200):
    rep = singular_series_average(2, region, False, y)
    print(f"y = {y}: sum/y^2 = {rep.total / y**2:.5f}  volume = {volume(region)}  points {rep.points}")

# %%
for r, ell in [(1, 0), (1, 1), (2, 0), (2, 1)]:
    print(r, ell, inclusion_exclusion_bounds(r, [1.0] * r, 10**5, ell=ell))
