"""Command-line front end: ``ris-das solve | bench | codebook``.

Exit codes: 0 success, 2 usage or parse error, 3 runtime failure (for
example an exhaustive search refused by its budget).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bench
from .baselines import branch_and_bound, exhaustive, quantized_alignment
from .channels import FarFieldScene, build_model2_objective
from .codebook import CodebookGrid
from .das import solve_binary, solve_das
from .errors import RisDasError
from .reduce import CascadedChannel, channel_objective, dehomogenize, homogenize
from .types import PhaseConfig, QuantizationScheme, RankOneObjective, continuous_bound

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 2, 3


class InputError(Exception):
    """Malformed input file; carries the offending line when known."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line

    def __str__(self):
        msg = super().__str__()
        return f"line {self.line}: {msg}" if self.line is not None else msg


def _pairs(values, what) -> np.ndarray:
    try:
        arr = np.array([complex(float(re), float(im)) for re, im in values])
    except (TypeError, ValueError):
        raise InputError(f"{what} must be a list of [re, im] pairs") from None
    if arr.size == 0:
        raise InputError(f"{what} is empty")
    return arr


def _scalar(value, what) -> complex:
    try:
        re, im = value
        return complex(float(re), float(im))
    except (TypeError, ValueError):
        raise InputError(f"{what} must be an [re, im] pair") from None


def parse_csv_vector(text: str) -> np.ndarray:
    """``re,im`` per line; blank lines and ``#`` comments are skipped."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise InputError(f"expected 're,im', got {raw.strip()!r}", line=lineno)
        try:
            out.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise InputError(f"not a number pair: {raw.strip()!r}", line=lineno) from None
    if not out:
        raise InputError("no complex entries found", line=1)
    return np.array(out)


def load_problem(text: str):
    """Parse solve input into ``(objective, description)``.

    Accepted forms: CSV ``re,im`` lines; a JSON array of ``[re, im]`` pairs;
    or a JSON object with ``z``, with ``h_s``/``h_r``/``h_d`` (cascaded
    channel), with ``h``/``h0`` (statistical model realization) or a
    far-field scene (``wavelength``, ``grid`` or ``positions``, ``departure``,
    ``arrivals`` in degrees).
    """
    stripped = text.lstrip()
    if not stripped:
        raise InputError("input is empty", line=1)
    if stripped[0] not in "[{":
        return RankOneObjective(parse_csv_vector(text)), "vector"
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, line=exc.lineno) from None
    if isinstance(data, list):
        return RankOneObjective(_pairs(data, "vector")), "vector"
    if not isinstance(data, dict):
        raise InputError("top-level JSON must be an array or an object")
    try:
        if "z" in data:
            return RankOneObjective(_pairs(data["z"], "z")), "vector"
        if "h_s" in data:
            h_d = _scalar(data.get("h_d", [0.0, 0.0]), "h_d")
            ch = CascadedChannel(_pairs(data["h_s"], "h_s"), _pairs(data["h_r"], "h_r"), h_d)
            return channel_objective(ch), "cascaded"
        if "h" in data:
            return homogenize(_pairs(data["h"], "h"), _scalar(data.get("h0", [0.0, 0.0]), "h0")), "model1"
        if "wavelength" in data:
            return build_model2_objective(FarFieldScene.from_json(data)), "model2"
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from None
    except RisDasError as exc:
        raise InputError(str(exc)) from None
    raise InputError("unrecognized JSON input")


SOLVERS = {
    "das": lambda obj, s: solve_das(obj, s),
    "binary": lambda obj, s: solve_binary(obj),
    "exhaustive": exhaustive,
    "bnb": branch_and_bound,
    "quantized": quantized_alignment,
}


def solve_report(obj: RankOneObjective, bits: int, method: str = "das") -> dict:
    scheme = QuantizationScheme(bits)
    if method == "binary" and bits != 1:
        raise RisDasError("the binary solver needs --bits 1")
    sol = SOLVERS[method](obj, scheme)
    if sol.augmented:
        sol = dehomogenize(sol)
    bound = continuous_bound(obj)
    gap = 20.0 * math.log10(bound / sol.value) if sol.value > 0 else None
    return {
        "method": sol.method,
        "bits": bits,
        "value": sol.value,
        "bound": bound,
        "gap_db": gap,
        "candidate_count": sol.candidate_count,
        "indices": sol.config.indices.tolist(),
        "phases_deg": [round(math.degrees(p), 10) for p in sol.config.phases],
    }


def cmd_solve(args) -> int:
    try:
        with open(args.input) as fh:
            text = fh.read()
        obj, _ = load_problem(text)
    except (OSError, InputError) as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = solve_report(obj, args.bits, args.method)
    except RisDasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    gap = "inf" if rep["gap_db"] is None else f"{rep['gap_db']:.4f}"
    print(f"method      {rep['method']}")
    print(f"bits        {rep['bits']}")
    print(f"value       {rep['value']:.12g}")
    print(f"bound       {rep['bound']:.12g}")
    print(f"gap_db      {gap}")
    print(f"candidates  {rep['candidate_count']}")
    print("indices     " + " ".join(map(str, rep["indices"])))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rep, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def _load_config(args) -> PhaseConfig:
    if args.solution:
        with open(args.solution) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(exc.msg, line=exc.lineno) from None
        try:
            return PhaseConfig(np.array(data["indices"], dtype=np.int64), int(data["bits"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad solution file: {exc}") from None
    with open(args.scene) as fh:
        text = fh.read()
    obj, _ = load_problem(text)
    sol = solve_das(obj, QuantizationScheme(1))
    return dehomogenize(sol).config if sol.augmented else sol.config


def cmd_codebook(args) -> int:
    try:
        cfg = _load_config(args)
    except (OSError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        grid = CodebookGrid.from_config(cfg, args.rows, args.cols)
    except RisDasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = grid.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _int_list(s):
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def _build_plan(args, parser) -> bench.ExperimentPlan:
    if args.plan:
        with open(args.plan) as fh:
            d = json.load(fh)
    else:
        if args.model is None:
            parser.error("bench needs --model (or --plan)")
        d = {"model": args.model}
    for key, attr in (("n_values", "n"), ("bits", "bits"), ("trials", "trials"), ("seed", "seed"),
                      ("variance", "variance"), ("P_dBm", "p_dbm"), ("noise_dBm", "noise_dbm")):
        v = getattr(args, attr)
        if v is not None:
            d[key] = v
    if args.model is not None:
        d["model"] = args.model
    if args.methods is not None:
        d["methods"] = [m.strip() for m in args.methods.split(",") if m.strip()]
    if args.no_direct_link:
        d["direct_link"] = False
    d.setdefault("n_values", [64])
    d.setdefault("bits", [1])
    d.setdefault("methods", ["das", "quantized", "continuous"])
    d["timing"] = bool(args.timing)
    d["workers"] = args.workers if args.workers is not None else bench.default_workers()
    return bench.ExperimentPlan.from_json(d)


def cmd_bench(args, parser) -> int:
    try:
        plan = _build_plan(args, parser)
    except (OSError, json.JSONDecodeError, RisDasError) as exc:
        print(f"error: invalid plan: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        records = list(bench.run_plan(plan))
    except RisDasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    summary = bench.aggregate(records)
    ext = "csv" if args.format == "csv" else "jsonl"
    with open(f"{args.out}.{ext}", "w", newline="") as fh:
        (bench.write_csv if ext == "csv" else bench.write_jsonl)(records, fh)
    with open(f"{args.out}.summary.json", "w") as fh:
        json.dump({"plan": plan.to_json(), "cells": summary}, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(bench.format_summary(summary))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ris-das", description="Optimal discrete RIS phase configuration.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("input", help="CSV of 're,im' lines or a JSON vector/channel/scene")
    s.add_argument("--bits", "-B", type=int, default=1)
    s.add_argument("--method", choices=sorted(SOLVERS), default="das")
    s.add_argument("--json", metavar="PATH", help="also write the solution as JSON")

    c = sub.add_parser("codebook", help="export a 1-bit control matrix")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--solution", help="JSON written by 'solve --json'")
    src.add_argument("--scene", help="problem file to solve with B=1 first")
    c.add_argument("--rows", type=int, required=True)
    c.add_argument("--cols", type=int, required=True)
    c.add_argument("--out", help="output text file (default: stdout)")

    b = sub.add_parser("bench", help="run a Monte-Carlo plan")
    b.add_argument("--plan", help="JSON plan file; flags override its fields")
    b.add_argument("--model", choices=bench.MODELS)
    b.add_argument("--n", type=_int_list)
    b.add_argument("--bits", type=_int_list)
    b.add_argument("--methods", help=f"comma list from {','.join(bench.METHODS)}")
    b.add_argument("--trials", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--variance", type=float)
    b.add_argument("--p-dbm", type=float)
    b.add_argument("--noise-dbm", type=float)
    b.add_argument("--no-direct-link", action="store_true")
    b.add_argument("--workers", type=int, help=f"worker processes (default ${bench.WORKERS_ENV} or 1)")
    b.add_argument("--timing", action="store_true", help="record wall time (output no longer byte-reproducible)")
    b.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    b.add_argument("--out", default="results", help="output prefix")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve":
        return cmd_solve(args)
    if args.command == "codebook":
        return cmd_codebook(args)
    if args.bits is not None and not args.bits:
        parser.error("--bits is empty")
    return cmd_bench(args, parser)


if __name__ == "__main__":
    sys.exit(main())
