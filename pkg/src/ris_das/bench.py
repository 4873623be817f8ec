"""Monte-Carlo experiment harness.

A plan is a grid of (trial, N, B) cells. Within one (trial, N) pair every B
and every method sees the same channel realization, so per-trial comparisons
(gaps, dominance, monotonicity in B) are paired. Records come out in
trial-major order whatever the number of worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import baselines, channels
from .baselines import EXHAUSTIVE_CAP
from .das import solve_binary, solve_das
from .errors import PlanError
from .reduce import channel_objective
from .types import QuantizationScheme, RankOneObjective, continuous_bound

MODELS = ("gaussian", "model1", "model2")
METHODS = ("das", "binary", "exhaustive", "bnb", "quantized", "random", "allzeros", "continuous")
CSV_FIELDS = ("trial", "seed", "N", "B", "method", "value", "snr_db", "time_s")
WORKERS_ENV = "RIS_DAS_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class ExperimentPlan:
    model: str
    n_values: list
    bits: list
    methods: list
    trials: int = 100
    seed: int = 0
    variance: float = 1.0
    direct_link: bool = True
    P_dBm: float | None = None
    noise_dBm: float | None = None
    model1: dict = field(default_factory=dict)
    model2: dict = field(default_factory=dict)
    timing: bool = True
    workers: int = 1

    def __post_init__(self):
        self.n_values = [int(n) for n in np.atleast_1d(self.n_values)]
        self.bits = [int(b) for b in np.atleast_1d(self.bits)]
        self.methods = [str(m) for m in self.methods]
        self.validate()

    @property
    def power_dBm(self) -> float:
        if self.P_dBm is not None:
            return self.P_dBm
        return 30.0 if self.model == "model1" else 0.0

    @property
    def noise_level_dBm(self) -> float:
        if self.noise_dBm is not None:
            return self.noise_dBm
        return -90.0 if self.model == "model1" else 0.0

    def objective_length(self, n: int) -> int:
        if self.model == "model1" or (self.model == "gaussian" and self.direct_link):
            return n + 1
        return n

    def validate(self):
        if self.model not in MODELS:
            raise PlanError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if self.trials < 1:
            raise PlanError("trials must be >= 1")
        if not self.methods:
            raise PlanError("at least one method is required")
        if not self.n_values or min(self.n_values) < 1:
            raise PlanError("N values must be >= 1")
        if not self.bits or min(self.bits) < 1:
            raise PlanError("bit depths must be >= 1")
        if self.variance <= 0:
            raise PlanError("variance must be positive")
        for m in self.methods:
            if m not in METHODS:
                raise PlanError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
        if "binary" in self.methods and any(b != 1 for b in self.bits):
            raise PlanError("method 'binary' only supports B=1")
        if "exhaustive" in self.methods:
            for n in self.n_values:
                for b in self.bits:
                    if (1 << b) ** self.objective_length(n) > EXHAUSTIVE_CAP:
                        raise PlanError(
                            f"exhaustive over N={self.objective_length(n)}, B={b} exceeds the "
                            f"cap of {EXHAUSTIVE_CAP} configurations"
                        )
        if self.model == "model2":
            rows = int(self.model2.get("rows", 1))
            for n in self.n_values:
                if n % rows:
                    raise PlanError(f"N={n} is not a multiple of model2 rows={rows}")

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ExperimentPlan":
        d = dict(d)
        for old, new in (("n", "n_values"), ("N", "n_values"), ("B", "bits")):
            if old in d:
                d[new] = d.pop(old)
        try:
            return cls(**d)
        except TypeError as exc:
            raise PlanError(str(exc)) from None


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    N: int
    B: int
    method: str
    value: float
    snr_db: object
    time_s: float
    bound: float
    channel: str

    def csv_row(self) -> list:
        return [self.trial, self.seed, self.N, self.B, self.method,
                repr(self.value), str(self.snr_db) if not isinstance(self.snr_db, float) else repr(self.snr_db),
                repr(self.time_s)]

    def to_json(self) -> dict:
        d = asdict(self)
        if not isinstance(self.snr_db, float):
            d["snr_db"] = None
        return d


def _realize(plan: ExperimentPlan, trial: int, n: int):
    """Objective and content hash for one (trial, N) channel draw."""
    seed = channels.trial_seed(plan.seed, trial)
    rng = np.random.default_rng([seed, n])
    if plan.model == "gaussian":
        ch = channels.sample_gaussian_cascade(n, plan.variance, rng, direct_link=plan.direct_link)
        return seed, channel_objective(ch), channels.channel_digest(ch.h_s, ch.h_r, [ch.h_d])
    if plan.model == "model1":
        params = channels.Model1Params.from_json({**plan.model1, "n": n})
        h = channels.sample_model1(params, rng)
        return seed, channels.model1_objective(h), channels.channel_digest(h)
    scene = random_scene(plan.model2, n, rng)
    g = channels.model2_generator(scene)
    return seed, RankOneObjective(g), channels.channel_digest(g)


def random_scene(params: dict, n: int, rng) -> channels.FarFieldScene:
    """Far-field scene on a rows x (n/rows) grid with random arrival paths."""
    rows = int(params.get("rows", 1))
    spacing = float(params.get("spacing", channels.PROTOTYPE_SPACING))
    wavelength = float(params.get("wavelength", channels.PROTOTYPE_WAVELENGTH))
    dep = np.radians(params.get("departure", [45.0, 0.0]))
    m = int(params.get("arrivals", 1))
    theta = rng.uniform(0.0, np.pi / 2, m)
    phi = rng.uniform(0.0, 2 * np.pi, m)
    amps = channels.complex_normal(rng, m)
    return channels.FarFieldScene(
        positions=channels.upa_positions(rows, n // rows, spacing),
        wavelength=wavelength,
        departure=tuple(dep),
        arrivals=np.column_stack((theta, phi)),
        amplitudes=amps,
        grid=(rows, n // rows, spacing),
    )


def _solve(method: str, obj: RankOneObjective, bits: int, seed: int):
    scheme = QuantizationScheme(bits)
    if method == "das":
        return solve_das(obj, scheme).value
    if method == "binary":
        return solve_binary(obj).value
    if method == "exhaustive":
        return baselines.exhaustive(obj, scheme).value
    if method == "bnb":
        return baselines.branch_and_bound(obj, scheme).value
    if method == "quantized":
        return baselines.quantized_alignment(obj, scheme).value
    if method == "random":
        return baselines.codebook_solution(obj, "random", scheme, seed=[seed, bits]).value
    if method == "allzeros":
        return baselines.codebook_solution(obj, "allzeros", scheme).value
    if method == "continuous":
        return continuous_bound(obj)
    raise PlanError(f"unknown method {method!r}")


def _warm_up(plan: ExperimentPlan):
    rng = np.random.default_rng(12345)
    for n in plan.n_values:
        obj = RankOneObjective(channels.complex_normal(rng, plan.objective_length(n)))
        for b in plan.bits:
            for m in plan.methods:
                _solve(m, obj, b, 0)


def run_trial(plan: ExperimentPlan, trial: int) -> list:
    out = []
    for n in plan.n_values:
        seed, obj, digest = _realize(plan, trial, n)
        bound = continuous_bound(obj)
        for b in plan.bits:
            for m in plan.methods:
                t0 = time.perf_counter()
                value = _solve(m, obj, b, seed)
                elapsed = time.perf_counter() - t0 if plan.timing else 0.0
                out.append(TrialRecord(
                    trial=trial, seed=seed, N=n, B=b, method=m, value=float(value),
                    snr_db=channels.snr_db(value, plan.power_dBm, plan.noise_level_dBm),
                    time_s=elapsed, bound=bound, channel=digest,
                ))
    return out


def _run_chunk(args):
    plan, trials = args
    if plan.timing:
        _warm_up(plan)
    return [run_trial(plan, t) for t in trials]


def run_plan(plan: ExperimentPlan):
    """Yield every TrialRecord of the plan in (trial, N, B, method) order."""
    plan.validate()
    workers = max(1, int(plan.workers))
    if workers == 1:
        if plan.timing:
            _warm_up(plan)
        for t in range(plan.trials):
            yield from run_trial(plan, t)
        return
    chunks = [list(c) for c in np.array_split(np.arange(plan.trials), workers) if len(c)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for block in ex.map(_run_chunk, [(plan, [int(t) for t in c]) for c in chunks]):
            for recs in block:
                yield from recs


def _finite(x) -> bool:
    return isinstance(x, float) and math.isfinite(x)


def empirical_cdf(values) -> list:
    """Sorted ``(value, fraction <= value)`` pairs."""
    v = np.sort(np.asarray(values, dtype=float))
    n = v.size
    return [(float(x), (i + 1) / n) for i, x in enumerate(v)]


def gap_db(bound: float, value: float) -> float:
    """``20 log10(bound / value)``; the loss against continuous phases."""
    if value <= 0:
        return math.inf
    return 20.0 * math.log10(bound / value)


def aggregate(records) -> list:
    """Per (N, B, method) statistics, sorted by that key."""
    records = list(records)
    if not records:
        raise PlanError("cannot summarize an empty record set")
    cells = {}
    for r in records:
        cells.setdefault((r.N, r.B, r.method), []).append(r)
    out = []
    for (n, b, m), rs in sorted(cells.items()):
        snr = [r.snr_db for r in rs if _finite(r.snr_db)]
        gaps = [gap_db(r.bound, r.value) for r in rs if r.value > 0]
        s = {
            "N": n,
            "B": b,
            "method": m,
            "count": len(rs),
            "mean_value": float(np.mean([r.value for r in rs])),
            "mean_gap_db": float(np.mean(gaps)) if gaps else None,
            "mean_time_s": float(np.mean([r.time_s for r in rs])),
            "zero_gain": len(rs) - len(snr),
        }
        if snr:
            s.update(
                mean_snr_db=float(np.mean(snr)),
                median_snr_db=float(np.median(snr)),
                p10_snr_db=float(np.percentile(snr, 10)),
                p90_snr_db=float(np.percentile(snr, 90)),
                cdf=empirical_cdf(snr),
            )
        out.append(s)
    return out


def write_csv(records, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow(r.csv_row())


def write_jsonl(records, fh):
    for r in records:
        fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")


def records_to_csv(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def read_csv(fh) -> list:
    """Parse a results CSV back into dictionaries with numeric fields."""
    rows = []
    for row in csv.DictReader(fh):
        rows.append({
            "trial": int(row["trial"]), "seed": int(row["seed"]), "N": int(row["N"]),
            "B": int(row["B"]), "method": row["method"], "value": float(row["value"]),
            "snr_db": float(row["snr_db"]), "time_s": float(row["time_s"]),
        })
    return rows


def format_summary(summary) -> str:
    lines = [f"{'N':>6} {'B':>2} {'method':<11} {'count':>6} {'mean value':>12} "
             f"{'SNR dB':>9} {'gap dB':>8} {'time s':>10}"]
    for s in summary:
        snr = s.get("mean_snr_db")
        gap = s.get("mean_gap_db")
        lines.append(
            f"{s['N']:>6} {s['B']:>2} {s['method']:<11} {s['count']:>6} {s['mean_value']:>12.6g} "
            f"{'-inf' if snr is None else f'{snr:9.3f}':>9} {'-' if gap is None else f'{gap:8.3f}':>8} "
            f"{s['mean_time_s']:>10.3g}"
        )
    return "\n".join(lines)
