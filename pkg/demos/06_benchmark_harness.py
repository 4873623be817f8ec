"""Running a paired Monte-Carlo plan.

Every method in a (trial, N) cell sees the same channel draw, so the records
support per-trial comparisons. The summary gives SNR statistics, the mean
gap to continuous phases and solver wall time.
"""

# %%
import io

from ris_das.bench import ExperimentPlan, aggregate, format_summary, records_to_csv, run_plan

plan = ExperimentPlan(
    model="gaussian",
    n_values=[10, 100, 1000],
    bits=[1, 2],
    methods=["das", "quantized", "random", "continuous"],
    trials=30,
    seed=11,
)
records = list(run_plan(plan))
print(format_summary(aggregate(records)))

# %%
text = records_to_csv(records)
print(io.StringIO(text).readline().strip())
print(len(text.splitlines()) - 1, "records")
