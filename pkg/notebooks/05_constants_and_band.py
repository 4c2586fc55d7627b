# %% [markdown]
# # Densities of D_2, D_-2 and the band for |SD(X)|

# %%
from unitindex.families import FamilyTag
from unitindex.stats import ConstantMethod, estimate_constant, sd_band_check

for fam in (FamilyTag.D2, FamilyTag.DM2):
    counts = [estimate_constant(fam, X).estimate for X in (10**4, 10**5, 10**6)]
    euler = estimate_constant(fam, 10**6, ConstantMethod.EULER_PRODUCT).estimate
    print(fam.name, [f"{c:.5f}" for c in counts], f"euler {euler:.5f}")

# %%
for X in (10**4, 10**5):
    rep = sd_band_check(X)
    print(X, rep.sd_count, f"normalised {rep.normalized:.4f} in [{rep.c1:.4f}, {rep.c2:.4f}]", rep.position)
