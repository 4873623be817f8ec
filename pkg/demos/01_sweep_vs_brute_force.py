"""Finding the best discrete phases for a small surface.

We maximize |sum_i z_i exp(j k_i 2 pi / L)| over integer levels k_i. For a
handful of cells we can afford to try every configuration, which gives a
reference to compare the sorted sweep against.
"""

# %%
import numpy as np

from ris_das import QuantizationScheme, RankOneObjective, enumerate_candidates, evaluate, solve_das
from ris_das.baselines import exhaustive

rng = np.random.default_rng(1)
z = rng.standard_normal(6) + 1j * rng.standard_normal(6)
obj = RankOneObjective(z)
q = QuantizationScheme(2)
print("levels:", q.levels, " step (deg):", np.degrees(q.step))

# %% [markdown]
# The sweep visits L*N candidates, changing a single cell between neighbours.

# %%
cands = enumerate_candidates(obj, q)
print("candidates:", len(cands))
for t in range(6):
    print(t, cands.indices(t), round(float(cands.values[t]), 4))

# %%
sol = solve_das(obj, q)
ref = exhaustive(obj, q)
print("sweep     :", sol.config.indices, sol.value)
print("exhaustive:", ref.config.indices, ref.value, f"({ref.candidate_count} sums)")
print("continuous bound:", np.abs(z).sum())
assert np.isclose(sol.value, ref.value, rtol=1e-9)
assert np.isclose(evaluate(obj, sol.config), sol.value)
