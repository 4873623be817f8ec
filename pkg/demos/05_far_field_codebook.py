"""Steering the 10 x 16 prototype board and exporting its control matrix.

The far-field model builds the per-cell gain from departure and arrival
steering vectors. The optimal 1-bit setting is then written as the 0/1 grid
the board firmware expects (bit 1 = phase 0, bit 0 = phase pi, row-major).
"""

# %%
import numpy as np

from ris_das import build_model2_objective, solve_das, trivial_codebook
from ris_das.channels import model2_matrix, model2_quadratic_form, prototype_scene
from ris_das.codebook import CodebookGrid

scene = prototype_scene(departure_deg=(40.0, 0.0), arrival_deg=(0.0, 0.0))
obj = build_model2_objective(scene, verify=True)
sol = solve_das(obj, 1)
R = model2_matrix(scene)
print("N =", scene.N, " |y|^2 =", abs(scene.received(sol.config)) ** 2)
print("quadratic form     =", model2_quadratic_form(R, sol.config))

# %%
plate = trivial_codebook("allzeros", scene.N, 1)
print("gain over a plain plate:", 20 * np.log10(sol.value / abs(scene.received(plate))), "dB")

# %%
grid = CodebookGrid.from_config(sol.config, 10, 16)
print(grid.to_text())
assert CodebookGrid.from_text(grid.to_text()).to_config() == sol.config
