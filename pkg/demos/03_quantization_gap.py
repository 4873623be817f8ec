"""How much does coarse quantization cost?

For i.i.d. Gaussian channels we compare the optimal B-bit value against the
continuous-phase bound sum |z_i|, and against simply rounding the continuous
solution.
"""

# %%
import numpy as np

from ris_das import channel_objective, continuous_bound, quantized_alignment, sample_gaussian_cascade, solve_das

N, trials = 200, 200
gaps = {b: [] for b in (1, 2, 3, 4)}
rounding = {b: [] for b in (1, 2, 3, 4)}
for t in range(trials):
    obj = channel_objective(sample_gaussian_cascade(N, seed=[3, t]))
    bound = continuous_bound(obj)
    for b in gaps:
        gaps[b].append(20 * np.log10(bound / solve_das(obj, b).value))
        rounding[b].append(20 * np.log10(bound / quantized_alignment(obj, b).value))

# %%
print(" B   optimal gap dB   rounded gap dB")
for b in gaps:
    print(f"{b:>2}   {np.mean(gaps[b]):>14.3f}   {np.mean(rounding[b]):>14.3f}")
