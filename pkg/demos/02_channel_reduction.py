"""From a cascaded channel with a direct link to a single inner product.

The received amplitude is h_r^H diag(w) h_s + h_d. Folding the direct link
into an extra always-on cell turns it into |w~^H z~|, whose optimum is the
principal direction of a rank-one matrix.
"""

# %%
import numpy as np

from ris_das import (
    CascadedChannel,
    RankOneMatrix,
    channel_objective,
    dehomogenize,
    principal_vector,
    solve_das,
)
from ris_das.reduce import quadratic_form

rng = np.random.default_rng(7)
N = 8
ch = CascadedChannel(
    h_s=rng.standard_normal(N) + 1j * rng.standard_normal(N),
    h_r=rng.standard_normal(N) + 1j * rng.standard_normal(N),
    h_d=0.4 - 0.9j,
)
obj = channel_objective(ch)
print("objective length:", len(obj), "augmented:", obj.augmented)

# %%
aug = solve_das(obj, 1)
sol = dehomogenize(aug)
print("levels on the surface:", sol.config.indices)
print("|received| =", abs(ch.received(sol.config)), " solver value =", sol.value)

# %% [markdown]
# The same optimum, starting from the matrix form instead of the vector.

# %%
R = RankOneMatrix.from_generator(obj.z)
print("eigenvalue ratio:", R.eigenvalue_ratio())
z_back = principal_vector(R.matrix)
again = solve_das(type(obj)(z_back, augmented=True), 1)
print("value from matrix:", again.value)
print("w^H R w =", quadratic_form(R.matrix, aug.config), " value^2 =", aug.value**2)
