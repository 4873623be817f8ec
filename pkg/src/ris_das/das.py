"""Divide-and-sort search for discrete inner-product maximization.

For a fixed auxiliary angle ``psi`` the best level of every cell is the one
that rotates ``tau_i + k*step`` closest to ``psi``. As ``psi`` sweeps the
circle, cell ``i`` changes level only at the ``L`` points
``tau_i + (n + 1/2) * step``, so the whole circle splits into ``L * N`` arcs on
each of which the per-cell choice is constant. Sorting the folded angles
``tau_i mod step`` orders these switch points, and one pass over them visits
every arc while changing exactly one cell per step. The best of the ``L * N``
resulting configurations is a global optimum.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .types import (
    TWO_PI,
    PhaseConfig,
    QuantizationScheme,
    RankOneObjective,
    Solution,
    _as_scheme,
    evaluate,
)

# re-anchoring interval for the running sum of the sweep
REFRESH_EVERY = 1024
TIE_ATOL = 1e-12


def circular_distance(a, b):
    """Distance between angles on the circle, in ``[0, pi]``."""
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


def subproblem_best(tau: float, psi: float, scheme) -> int:
    """Level ``k`` that brings ``tau + k*step`` closest to ``psi``.

    Exact ties (a distance of half a step to two levels) go to the smaller k.
    """
    scheme = _as_scheme(scheme)
    k = np.arange(scheme.levels)
    dist = circular_distance(psi, tau + k * scheme.step)
    best = dist.min()
    return int(np.flatnonzero(dist <= best + TIE_ATOL)[0])


@dataclass(frozen=True, eq=False)
class PartitionCoder:
    """Sorted folded angles that encode the ``L * N`` arcs of the sweep.

    ``order`` lists the indices of the non-zero cells sorted by folded angle
    (stable), ``folded`` holds ``tau_i mod step`` for every cell and ``base``
    the level that moves each cell onto its folded angle.
    """

    scheme: QuantizationScheme
    order: np.ndarray
    folded: np.ndarray
    base: np.ndarray
    active: np.ndarray

    @property
    def n_active(self) -> int:
        return self.order.size

    @property
    def boundaries(self) -> np.ndarray:
        """Switch angles of the sweep in visiting order, starting above ``step/2``."""
        step = self.scheme.step
        n = np.arange(self.scheme.levels)[:, None]
        return (self.folded[self.order][None, :] + (n + 0.5) * step).ravel()


def build_coder(obj: RankOneObjective, scheme) -> PartitionCoder:
    scheme = _as_scheme(scheme)
    step = scheme.step
    tau = obj.angles
    m = np.floor(tau / step)
    folded = tau - m * step
    # rounding can land a folded angle on the wrong side of [0, step)
    over = folded >= step
    m[over] += 1
    folded[over] -= step
    under = folded < 0
    m[under] -= 1
    folded[under] += step
    m = m.astype(np.int64)
    active = obj.magnitudes > 0
    folded[~active] = 0.0
    base = np.mod(-m, scheme.levels)
    base[~active] = 0
    idx = np.flatnonzero(active)
    order = idx[np.argsort(folded[idx], kind="stable")]
    return PartitionCoder(scheme=scheme, order=order, folded=folded, base=base, active=active)


class CandidateSet:
    """The ``L * N`` sweep candidates, materialized lazily.

    Candidate ``t`` is the configuration after the first ``t + 1`` single-cell
    advances of the sweep; the last candidate is the base configuration.
    """

    def __init__(self, obj: RankOneObjective, coder: PartitionCoder):
        self.objective = obj
        self.coder = coder
        scheme = coder.scheme
        L = scheme.levels
        n_act = coder.n_active
        roots = scheme.roots
        # z_i * exp(j*base_i*step) == |z_i| exp(j*folded_i)
        zb = obj.z[coder.order] * roots[coder.base[coder.order]]
        self._zb = zb
        if n_act == 0:
            self.values = np.zeros(1)
            self.values.setflags(write=False)
            return
        step_factor = roots[1 % L] - 1.0
        deltas = (roots[:, None] * step_factor * zb[None, :]).ravel()
        total = deltas.size
        blocks = -(-total // REFRESH_EVERY)
        padded = np.zeros(blocks * REFRESH_EVERY, dtype=np.complex128)
        padded[:total] = deltas
        padded = padded.reshape(blocks, REFRESH_EVERY)
        # each block restarts from an anchor built on pairwise-summed block
        # totals, so rounding error cannot accumulate across the sweep
        anchors = self._exact_sum(0) + np.concatenate(([0j], np.cumsum(padded.sum(axis=1))[:-1]))
        values = np.abs(anchors[:, None] + np.cumsum(padded, axis=1)).ravel()[:total]
        values.setflags(write=False)
        self.values = values

    def __len__(self):
        return self.values.size

    def _advances(self, events: int) -> np.ndarray:
        """Per sorted cell, how many +1 advances happened in the first ``events`` steps."""
        n_act = self.coder.n_active
        r = np.arange(n_act)
        return np.where(events > r, (events - r + n_act - 1) // n_act, 0)

    def _exact_sum(self, events: int) -> complex:
        L = self.coder.scheme.levels
        roots = self.coder.scheme.roots
        terms = self._zb * roots[np.mod(self._advances(events), L)]
        return complex(math.fsum(terms.real), math.fsum(terms.imag))

    def indices(self, t: int) -> np.ndarray:
        if not 0 <= t < len(self):
            raise IndexError(t)
        coder = self.coder
        k = coder.base.copy()
        if coder.n_active:
            k[coder.order] += self._advances(t + 1)
        return np.mod(k, coder.scheme.levels)

    def config(self, t: int) -> PhaseConfig:
        return PhaseConfig(self.indices(t), self.coder.scheme)

    def __iter__(self):
        for t in range(len(self)):
            yield self.config(t), float(self.values[t])

    def best_index(self) -> int:
        return int(np.argmax(self.values))


def enumerate_candidates(obj: RankOneObjective, scheme) -> CandidateSet:
    """All ``L * N`` sweep candidates with incrementally computed values."""
    return CandidateSet(obj, build_coder(obj, scheme))


def spot_check(cands: CandidateSet, count: int = 16, rtol: float = 1e-9) -> float:
    """Largest relative error between sweep values and full evaluation on
    ``count`` evenly spaced candidates. Raises AssertionError above ``rtol``."""
    picks = np.unique(np.linspace(0, len(cands) - 1, min(count, len(cands))).astype(int))
    worst = 0.0
    for t in picks:
        exact = evaluate(cands.objective, cands.config(int(t)))
        err = abs(exact - cands.values[t]) / max(exact, 1e-300)
        worst = max(worst, err)
    if worst > rtol:
        raise AssertionError(f"incremental sweep drifted: relative error {worst:.3e}")
    return worst


def _finish(obj, cfg, count, method, started, t=None) -> Solution:
    cfg = cfg.canonical()
    return Solution(
        config=cfg,
        value=evaluate(obj, cfg),
        candidate_count=count,
        method=method,
        elapsed=time.perf_counter() - started,
        candidate_index=t,
        augmented=obj.augmented,
    )


def solve_das(obj: RankOneObjective, scheme, check: bool = False) -> Solution:
    """Globally optimal B-bit configuration by the divide-and-sort sweep."""
    started = time.perf_counter()
    if len(obj) == 0:
        raise DimensionError("empty objective")
    cands = enumerate_candidates(obj, scheme)
    if check:
        spot_check(cands)
    t = cands.best_index()
    return _finish(obj, cands.config(t), len(cands), "das", started, t)


def solve_binary(obj: RankOneObjective) -> Solution:
    """Globally optimal 1-bit configuration from ``N`` prefix-sign candidates.

    Angles are folded into ``[0, pi)`` (cells with ``tau >= pi`` get their sign
    flipped) and sorted; candidate ``i`` sets the ``i`` smallest folded cells to
    +1 and the rest to -1, before the flipped signs are restored.
    """
    started = time.perf_counter()
    if len(obj) == 0:
        raise DimensionError("empty objective")
    scheme = QuantizationScheme(1)
    active = obj.magnitudes > 0
    upper = obj.angles >= math.pi
    sign = np.where(upper, -1.0, 1.0)
    folded = np.where(upper, obj.angles - math.pi, obj.angles)
    idx = np.flatnonzero(active)
    if idx.size == 0:
        cfg = PhaseConfig(np.zeros(len(obj), dtype=np.int64), scheme)
        return _finish(obj, cfg, 1, "binary", started, 0)
    order = idx[np.argsort(folded[idx], kind="stable")]
    zhat = obj.z[order] * sign[order]
    s0 = -complex(math.fsum(zhat.real), math.fsum(zhat.imag))
    values = np.abs(s0 + 2.0 * np.cumsum(zhat))
    t = int(np.argmax(values))
    what = np.full(len(obj), -1.0)
    what[order[: t + 1]] = 1.0
    w = what * sign
    k = np.where(w > 0, 0, 1)
    k[~active] = 0
    return _finish(obj, PhaseConfig(k, scheme), idx.size, "binary", started, t)
