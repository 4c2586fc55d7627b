# %% [markdown]
# # 4-rank statistics over {2d in D_2 : d = 3 mod 4}
#
# The limiting law gives rank 0 with probability 0.2888 and mean 2^rk4 equal to 2.
# The relative error in the first moment decays like (log X)^(-1/4), so desk-scale
# X sits far from the limit.

# %%
import numpy as np

from unitindex.stats import moment_from_survey, predicted_rank_probability, rank_survey

rows = []
for X in (10**4, 10**5, 10**6):
    s = rank_survey(X)
    freq0 = s.histogram.get(0, 0) / s.A_value
    ratios = [float(moment_from_survey(s, k).ratio) for k in (1, 2, 3)]
    rows.append((X, s.A_value, freq0, *ratios))
    print(X, s.A_value, s.histogram, f"rank-0 {freq0:.4f}", [f"{r:.3f}" for r in ratios])

# %%
print("limit:", [round(predicted_rank_probability(r), 6) for r in range(4)], "moments 2, 5, 16")

# %% [markdown]
# Fit 2 - ratio against (log X)^(-1/4) to see how far out the limit lies.

# %%
t = np.array([np.log(X) ** -0.25 for X, *_ in rows])
gap = np.array([2 - r[3] for r in rows])
slope = float(np.dot(t, gap) / np.dot(t, t))
print(f"gap ~ {slope:.2f} (log X)^(-1/4); gap < 0.5 would need log X > {(slope / 0.5) ** 4:.0f}")
