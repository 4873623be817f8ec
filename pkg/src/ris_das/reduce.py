"""Reduction of channel models to a rank-one inner-product objective.

The received amplitude of a RIS-aided SISO link is

    h_r^H W h_s + h_d = sum_i conj(h_r[i]) h_s[i] exp(j omega_i) + h_d,

so with ``phi = conj(h_r) * h_s`` and a fixed extra cell carrying ``h_d`` the
problem becomes a homogeneous quadratic form ``w~^H R~ w~`` with the rank-one
matrix ``R~ = phi~ phi~^H``, whose maximization is equivalent to maximizing
``|w~^H phi~|``.

Quadratic forms here use the configuration vector ``w = exp(-1j * omega)``
(the conjugated phasor), which makes ``w^H (z z^H) w == evaluate(z, cfg)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, DimensionError, DomainError, MisuseError
from .types import PhaseConfig, RankOneObjective, Solution, evaluate

RANK_ONE_RTOL = 1e-9
POWER_ITERATIONS = 200
POWER_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class CascadedChannel:
    """BS->RIS vector ``h_s``, RIS->user vector ``h_r`` and direct link ``h_d``."""

    h_s: np.ndarray
    h_r: np.ndarray
    h_d: complex = 0j

    def __post_init__(self):
        h_s = np.asarray(self.h_s, dtype=np.complex128).ravel()
        h_r = np.asarray(self.h_r, dtype=np.complex128).ravel()
        if h_s.size != h_r.size:
            raise DimensionError(f"h_s has {h_s.size} entries but h_r has {h_r.size}")
        if h_s.size == 0:
            raise DimensionError("empty channel")
        h_d = complex(self.h_d)
        if not (np.all(np.isfinite(h_s)) and np.all(np.isfinite(h_r)) and np.isfinite(h_d)):
            raise DomainError("channel entries must be finite")
        object.__setattr__(self, "h_s", h_s)
        object.__setattr__(self, "h_r", h_r)
        object.__setattr__(self, "h_d", h_d)

    def __len__(self):
        return self.h_s.size

    def received(self, cfg: PhaseConfig) -> complex:
        """Effective scalar channel ``h_r^H W h_s + h_d`` for a configuration."""
        return complex(np.sum(np.conj(self.h_r) * cfg.phasors * self.h_s) + self.h_d)


def build_phi(ch: CascadedChannel) -> np.ndarray:
    """Cascaded per-cell channel ``phi_i = conj(h_r[i]) * h_s[i]``."""
    return np.conj(ch.h_r) * ch.h_s


def homogenize(phi, h_d) -> RankOneObjective:
    """Append the direct link as an extra cell, giving an N+1 objective."""
    phi = np.asarray(phi, dtype=np.complex128).ravel()
    if phi.size == 0:
        raise DimensionError("phi is empty")
    return RankOneObjective(np.append(phi, complex(h_d)), augmented=True)


def channel_objective(ch: CascadedChannel) -> RankOneObjective:
    """Objective for a cascaded channel; homogenized only when ``h_d != 0``."""
    phi = build_phi(ch)
    if ch.h_d == 0:
        return RankOneObjective(phi)
    return homogenize(phi, ch.h_d)


def dehomogenize(sol: Solution) -> Solution:
    """Drop the direct-link slot, rotating every cell so that slot sits at phase 0."""
    if not sol.augmented:
        raise MisuseError("dehomogenize needs a solution of an augmented objective")
    k = sol.config.indices
    if k.size < 2:
        raise DimensionError("augmented solution needs at least two entries")
    L = sol.config.scheme.levels
    cfg = PhaseConfig(np.mod(k[:-1] - k[-1], L), sol.config.scheme)
    return Solution(
        config=cfg,
        value=sol.value,
        candidate_count=sol.candidate_count,
        method=sol.method,
        elapsed=sol.elapsed,
        candidate_index=sol.candidate_index,
        augmented=False,
    )


def direct_link_value(phi, h_d, cfg: PhaseConfig) -> float:
    """``|w^H phi + h_d|`` for an N-cell configuration."""
    obj = homogenize(phi, h_d)
    full = PhaseConfig(np.append(cfg.indices, 0), cfg.scheme)
    return evaluate(obj, full)


def quadratic_form(R, cfg: PhaseConfig) -> float:
    """``w^H R w`` with ``w = exp(-1j * omega)``."""
    R = np.asarray(R)
    w = np.conj(cfg.phasors)
    if R.shape != (w.size, w.size):
        raise DimensionError(f"matrix of shape {R.shape} vs configuration of length {w.size}")
    return float(np.real(np.conj(w) @ R @ w))


class RankOneMatrix:
    """Hermitian PSD rank-one matrix, kept as its generator whenever known."""

    def __init__(self, matrix=None, generator=None):
        if matrix is None and generator is None:
            raise ValueError("need a matrix or a generator")
        self._generator = None
        self._matrix = None
        if generator is not None:
            g = np.asarray(generator, dtype=np.complex128).ravel()
            if g.size == 0:
                raise DimensionError("empty generator")
            self._generator = g
        if matrix is not None:
            R = np.asarray(matrix, dtype=np.complex128)
            if R.ndim != 2 or R.shape[0] != R.shape[1] or R.shape[0] == 0:
                raise DimensionError(f"expected a non-empty square matrix, got shape {R.shape}")
            self._matrix = R
            if generator is None:
                self._check()

    @classmethod
    def from_generator(cls, v) -> "RankOneMatrix":
        return cls(generator=v)

    @property
    def dimension(self) -> int:
        if self._generator is not None:
            return self._generator.size
        return self._matrix.shape[0]

    @property
    def generator(self):
        return self._generator

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            g = self._generator
            self._matrix = np.outer(g, np.conj(g))
        return self._matrix

    def eigenvalue_ratio(self) -> float:
        """Second-largest over largest eigenvalue (0 for an exact rank-one matrix)."""
        ev = np.linalg.eigvalsh(self.matrix)
        top = ev[-1]
        if top <= 0:
            return math.inf
        second = ev[-2] if ev.size > 1 else 0.0
        return float(max(second, 0.0) / top)

    def _check(self):
        R = self._matrix
        scale = np.max(np.abs(R))
        if scale == 0:
            raise DegeneracyError("zero matrix has no principal direction", ratio=math.inf)
        if np.max(np.abs(R - R.conj().T)) > 1e-12 * scale:
            raise DegeneracyError("matrix is not Hermitian")
        ev = np.linalg.eigvalsh(R)
        if ev[0] < -RANK_ONE_RTOL * ev[-1]:
            raise DegeneracyError("matrix is not positive semidefinite")
        ratio = self.eigenvalue_ratio()
        if ratio > RANK_ONE_RTOL:
            raise DegeneracyError(
                f"matrix is not rank one: eigenvalue ratio {ratio:.3e} > {RANK_ONE_RTOL:g}",
                ratio=ratio,
            )


def _power_iteration(R: np.ndarray) -> np.ndarray:
    col = int(np.argmax(np.linalg.norm(R, axis=0)))
    v = R[:, col].copy()
    v /= np.linalg.norm(v)
    lam = float(np.real(np.vdot(v, R @ v)))
    for _ in range(POWER_ITERATIONS):
        y = R @ v
        v = y / np.linalg.norm(y)
        new = float(np.real(np.vdot(v, R @ v)))
        done = abs(new - lam) <= POWER_RTOL * abs(new)
        lam = new
        if done:
            break
    return math.sqrt(lam) * v


def principal_vector(R) -> np.ndarray:
    """Vector ``v`` with ``v v^H == R``; unique only up to a global phase."""
    if not isinstance(R, RankOneMatrix):
        R = RankOneMatrix(matrix=R)
    if R.generator is not None:
        return R.generator.copy()
    return _power_iteration(R.matrix)


def objective_from_matrix(R, augmented=False) -> RankOneObjective:
    """Objective ``|w^H v|`` equivalent to maximizing ``w^H R w``."""
    return RankOneObjective(principal_vector(R), augmented=augmented)
