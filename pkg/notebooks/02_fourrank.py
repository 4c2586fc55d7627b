# %% [markdown]
# # 4-rank of Cl+(8d): divisor sums against the form-class oracle

# %%
from collections import Counter

from unitindex.arith import squarefree_range
from unitindex.forms import bqf_class_group
from unitindex.fourrank import fk_general_sum, fourrank_fk, fourrank_fk_special, fourrank_oracle

# %% [markdown]
# d = 7: the four slot assignments contribute 0, 2, 2, 0; the sum 4 over 2 * 2^1 gives power 1.

# %%
print(fk_general_sum((7,)), fourrank_fk(7))

# %%
for D in (56, 136, 264, 952):
    G = bqf_class_group(D)
    print(f"disc {D}: h+ = {G.class_number}, structure {G.structure}, 4-rank {G.four_rank()}")

# %%
odd = [f for f in squarefree_range(1, 3000) if f.value % 2]
bad = [f.value for f in odd if fourrank_fk(f).rank != fourrank_oracle(f).rank]
print(len(odd), "checked, mismatches:", bad)

# %% [markdown]
# For d with every prime 1 or 7 mod 8 the special formula applies; d = 1 mod 4 forces rank at least 1.

# %%
special = [f for f in squarefree_range(1, 20000) if f.value % 2 and all(p % 8 in (1, 7) for p in f.primes)]
ranks = Counter((f.value % 4, fourrank_fk_special(f).rank) for f in special)
print(sorted(ranks.items()))
