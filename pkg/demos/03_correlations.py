# %% [markdown]
# # Pair and triple correlations against the prediction
#
# Observed counts of n < x with n + h inside S, against x S_h R_1(x)^k.
# Set X to 1e9 to reproduce the published tables (about a minute).

# %%
from twosquares import table_rows

X = [10**6, 10**7, 10**8]

# %%
for h in ([0, 1], [0, 1, 2]):
    print("h =", h)
    for row in table_rows(h, X):
        print(f"  {row.x:>11}  {row.count:>10}  {row.prediction:>14.1f}  {row.ratio:.5f}")
