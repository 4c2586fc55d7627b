# %% [markdown]
# # Hasse unit index of Q(sqrt(d), i)
#
# Q(L) = 2 exactly when d is not 1 mod 4 and x^2 - d y^2 = +-2 has a solution.
# The norm equations are decided from the continued fraction of sqrt(d).

# %%
from unitindex.families import FamilyTag, census
from unitindex.pell import cf_sqrt, hasse_unit_index, solve_norm_equation, unit_index_witness

for D in (2, 7, 14, 23):
    cf = cf_sqrt(D)
    print(f"sqrt({D}) = [{cf.a0}; {', '.join(map(str, cf.period))}]  norms over one period: {cf.norm_seq}")

# %%
for d in (6, 7, 10, 14, 15, 21, 34, 79):
    w = unit_index_witness(d)
    print(d, hasse_unit_index(d), "" if w is None else f"{w.x}^2 - {d}*{w.y}^2 = {w.N}")

# %% [markdown]
# The negative Pell equation is solvable exactly when the period length is odd.

# %%
odd = [D for D in range(2, 200) if int(D**0.5) ** 2 != D and cf_sqrt(D).length % 2]
print(all(solve_norm_equation(D, -1) is not None for D in odd), odd[:15])

# %% [markdown]
# Every d with Q(L) = 2 lies in D_2 or D_-2. At X = 10^5:

# %%
res = census(10**5, {FamilyTag.D2, FamilyTag.DM2, FamilyTag.SD})
print({t.name: c for t, c in res.counts.items()})
print(all(FamilyTag.D2 in r.memberships or FamilyTag.DM2 in r.memberships
          for r in res.records if FamilyTag.SD in r.memberships))
print(res.notes[0])
