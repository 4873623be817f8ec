"""Reference solvers: exhaustive oracle, exact branch-and-bound, quantized
alignment and the trivial codebooks used as hardware benchmarks."""

from __future__ import annotations

import enum
import math
import time

import numpy as np

from .das import subproblem_best
from .errors import BudgetExceededError, DimensionError
from .types import (
    PhaseConfig,
    RankOneObjective,
    Solution,
    _as_scheme,
    evaluate,
)

EXHAUSTIVE_CAP = 1 << 24
TIE_RTOL = 1e-12
_BLOCK = 1 << 16


class BaselineKind(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    QUANTIZED_ALIGNMENT = "quantized"
    RANDOM = "random"
    ALL_ZEROS = "allzeros"


def _partial_sums(z: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """All sums ``sum_i z_i roots[k_i]`` in mixed-radix order (first cell most significant)."""
    sums = np.zeros(1, dtype=np.complex128)
    for zi in z:
        sums = (sums[:, None] + zi * roots[None, :]).ravel()
    return sums


def _unravel(flat: int, n: int, L: int) -> np.ndarray:
    k = np.zeros(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        flat, k[i] = divmod(flat, L)
    return k


def exhaustive(obj: RankOneObjective, scheme, cap: int = EXHAUSTIVE_CAP) -> Solution:
    """Global optimum by enumerating every configuration.

    The first cell is pinned to level 0 (a global shift leaves the objective
    unchanged, so this loses nothing) and the remaining ``L**(N-1)`` sums are
    formed as prefix-plus-suffix blocks. Among configurations within ``1e-12``
    of the best value the lexicographically smallest is returned.
    """
    started = time.perf_counter()
    scheme = _as_scheme(scheme)
    N, L = len(obj), scheme.levels
    if L**N > cap:
        raise BudgetExceededError(
            f"exhaustive search over {L}^{N} configurations exceeds the cap of {cap}"
        )
    roots = scheme.roots
    z = obj.z
    rest = N - 1
    n_suffix = min(rest, max(0, int(math.log(_BLOCK, L))))
    n_prefix = rest - n_suffix
    prefix = z[0] + _partial_sums(z[1 : 1 + n_prefix], roots)
    suffix = _partial_sums(z[1 + n_prefix :], roots)
    rows = max(1, _BLOCK // suffix.size)

    block_max = []
    for start in range(0, prefix.size, rows):
        vals = np.abs(prefix[start : start + rows, None] + suffix[None, :])
        block_max.append(vals.max())
    best = max(block_max)
    threshold = best * (1.0 - TIE_RTOL)
    flat = None
    for b, m in enumerate(block_max):
        if m < threshold:
            continue
        start = b * rows
        vals = np.abs(prefix[start : start + rows, None] + suffix[None, :]).ravel()
        flat = start * suffix.size + int(np.flatnonzero(vals >= threshold)[0])
        break
    k = np.concatenate(([0], _unravel(flat, rest, L)))
    cfg = PhaseConfig(k, scheme)
    return Solution(
        config=cfg,
        value=evaluate(obj, cfg),
        candidate_count=L**rest,
        method="exhaustive",
        elapsed=time.perf_counter() - started,
        augmented=obj.augmented,
    )


def _align_to(direction: float, angles: np.ndarray, step: float, L: int) -> np.ndarray:
    """Per cell, the level rotating ``angles`` nearest to ``direction``."""
    return np.mod(np.round((direction - angles) / step).astype(np.int64), L)


def branch_and_bound(obj: RankOneObjective, scheme, max_frontier: int = 1 << 22) -> Solution:
    """Exact global optimum by breadth-first enumeration with safe pruning.

    Cells are fixed in order of decreasing magnitude. A partial assignment with
    running sum ``S`` can reach at most ``|S| + sum(|z_rest|)``; it is discarded
    only when that bound falls strictly below the incumbent. The incumbent is
    refreshed at every depth by completing the most promising partial sums
    with each remaining cell aligned to the running direction.
    """
    started = time.perf_counter()
    scheme = _as_scheme(scheme)
    N, L, step = len(obj), scheme.levels, scheme.step
    roots = scheme.roots
    perm = np.argsort(-obj.magnitudes, kind="stable")
    z = obj.z[perm]
    ang = obj.angles[perm]
    mags = obj.magnitudes[perm]
    tail = np.concatenate((np.cumsum(mags[::-1])[::-1], [0.0]))

    def complete(S_row, depth):
        k = _align_to(np.angle(S_row), ang[depth:], step, L)
        return k, abs(S_row + np.sum(z[depth:] * roots[k]))

    # incumbent: quantized alignment
    k0 = _align_to(0.0, ang, step, L)
    inc_k = k0
    inc_val = abs(np.sum(z * roots[k0]))

    sums = np.array([z[0]])
    assign = np.zeros((1, 1), dtype=np.int8 if L <= 128 else np.int64)
    visited = 1
    for depth in range(1, N):
        top = np.argsort(-np.abs(sums))[:4]
        for r in top:
            kc, v = complete(sums[r], depth)
            if v > inc_val:
                inc_val = v
                inc_k = np.concatenate((assign[r].astype(np.int64), kc))
        sums = (sums[:, None] + z[depth] * roots[None, :]).ravel()
        assign = np.concatenate(
            (np.repeat(assign, L, axis=0), np.tile(np.arange(L, dtype=assign.dtype), sums.size // L)[:, None]),
            axis=1,
        )
        keep = np.abs(sums) + tail[depth + 1] >= inc_val * (1.0 - TIE_RTOL)
        sums, assign = sums[keep], assign[keep]
        visited += keep.size
        if sums.size > max_frontier:
            raise BudgetExceededError(f"branch-and-bound frontier exceeded {max_frontier}")
    if sums.size:
        r = int(np.argmax(np.abs(sums)))
        if abs(sums[r]) > inc_val:
            inc_val = abs(sums[r])
            inc_k = assign[r].astype(np.int64)
    k = np.empty(N, dtype=np.int64)
    k[perm] = inc_k
    cfg = PhaseConfig(k, scheme).canonical()
    return Solution(
        config=cfg,
        value=evaluate(obj, cfg),
        candidate_count=visited,
        method="bnb",
        elapsed=time.perf_counter() - started,
        augmented=obj.augmented,
    )


def quantized_alignment(obj: RankOneObjective, scheme) -> Solution:
    """Round the continuous optimum ``omega_i = -tau_i`` to the nearest level."""
    started = time.perf_counter()
    scheme = _as_scheme(scheme)
    k = _align_to(0.0, obj.angles, scheme.step, scheme.levels)
    # np.round sends exact half-steps to even; match the smaller-k tie rule
    ties = np.isclose(np.mod(-obj.angles / scheme.step, 1.0), 0.5, rtol=0, atol=1e-12)
    for i in np.flatnonzero(ties):
        k[i] = subproblem_best(obj.angles[i], 0.0, scheme)
    cfg = PhaseConfig(k, scheme)
    return Solution(
        config=cfg,
        value=evaluate(obj, cfg),
        candidate_count=1,
        method="quantized",
        elapsed=time.perf_counter() - started,
        augmented=obj.augmented,
    )


def trivial_codebook(kind, N: int, scheme, seed: int | None = None) -> PhaseConfig:
    """Benchmark codebooks: every cell at phase pi, or i.i.d. uniform levels."""
    scheme = _as_scheme(scheme)
    kind = BaselineKind(kind)
    if N < 1:
        raise DimensionError("N must be >= 1")
    if kind is BaselineKind.ALL_ZEROS:
        return PhaseConfig(np.full(N, scheme.index_of_pi()), scheme)
    if kind is BaselineKind.RANDOM:
        rng = np.random.default_rng(seed)
        return PhaseConfig(rng.integers(0, scheme.levels, size=N), scheme)
    raise ValueError(f"{kind} is a solver, not a fixed codebook")


def codebook_solution(obj: RankOneObjective, kind, scheme, seed=None) -> Solution:
    """Evaluate a trivial codebook against an objective."""
    started = time.perf_counter()
    cfg = trivial_codebook(kind, len(obj), scheme, seed=seed)
    return Solution(
        config=cfg,
        value=evaluate(obj, cfg),
        candidate_count=1,
        method=BaselineKind(kind).value,
        elapsed=time.perf_counter() - started,
        augmented=obj.augmented,
    )
