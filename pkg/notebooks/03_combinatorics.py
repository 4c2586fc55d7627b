# %% [markdown]
# # Unlinked families in F_2^{2k} and the main-term identities

# %%
from unitindex.f2comb import (
    count_subspaces,
    gamma_plus,
    good_subspaces,
    lambda_stratified_counts,
    maximal_unlinked_subsets,
    subspace_contribution,
    verify_identities,
)

for k in (1, 2, 3):
    fams = maximal_unlinked_subsets(k, "brute" if k <= 2 else "coset")
    odd = sum(gamma_plus(U, 1) for U in fams)
    even = sum(gamma_plus(U, 0) for U in fams)
    print(f"k={k}: {len(fams)} families of size {len(fams[0])}, sum gamma+(U,1)={odd}, sum gamma+(U,0)={even}, "
          f"N(k,2)={count_subspaces(k)}")

# %% [markdown]
# Pairwise-unlinked subspaces outnumber N(k, 2); only N(k, 2) of them carry a nonzero coset sum.

# %%
for k in (1, 2, 3):
    contrib = [subspace_contribution(k, U0) for U0 in good_subspaces(k)]
    print(k, len(contrib), sorted(set(contrib)), sum(c != 0 for c in contrib))

# %%
print(lambda_stratified_counts(3))
for c in verify_identities(3):
    print(f"{c.name:<28} k={c.k} {c.lhs} {c.rhs} {'PASS' if c.passed else 'FAIL'}")
