"""Domain types: quantization scheme, phase configurations, rank-one objectives.

Phases are stored as integer level indices ``k`` in ``[0, L)``; the phase in
radians is ``k * step``. The objective convention used throughout the package
is

    evaluate(z, k) = | sum_i z_i * exp(1j * k_i * step) |

i.e. each cell multiplies its coefficient by ``exp(+j omega_i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionError, DomainError

TWO_PI = 2.0 * math.pi

# magnitudes below this are treated as exact zeros (angle undefined)
ZERO_MAGNITUDE = 1e-300


@dataclass(frozen=True)
class QuantizationScheme:
    """B-bit uniform phase quantizer with ``L = 2**B`` levels spaced ``2*pi/L``."""

    bits: int

    def __post_init__(self):
        if isinstance(self.bits, bool) or not isinstance(self.bits, (int, np.integer)):
            raise DomainError(f"bits must be an integer, got {self.bits!r}")
        if self.bits < 1:
            raise DomainError(f"bits must be >= 1, got {self.bits}")
        object.__setattr__(self, "bits", int(self.bits))

    @property
    def levels(self) -> int:
        return 1 << self.bits

    @property
    def step(self) -> float:
        return TWO_PI / self.levels

    @cached_property
    def roots(self) -> np.ndarray:
        """Unit phasors ``exp(1j*k*step)`` for k = 0..L-1, axis points snapped exact."""
        k = np.arange(self.levels)
        ang = TWO_PI * k / self.levels
        re, im = np.cos(ang), np.sin(ang)
        re[np.abs(re) < 1e-15] = 0.0
        im[np.abs(im) < 1e-15] = 0.0
        r = re + 1j * im
        r.setflags(write=False)
        return r

    def phases(self, indices) -> np.ndarray:
        return np.asarray(indices) * self.step

    def index_of_pi(self) -> int:
        return self.levels // 2


def _as_scheme(scheme) -> QuantizationScheme:
    if isinstance(scheme, QuantizationScheme):
        return scheme
    return QuantizationScheme(scheme)


@dataclass(frozen=True, eq=False)
class PhaseConfig:
    """Discrete configuration of N cells as level indices of a scheme."""

    indices: np.ndarray
    scheme: QuantizationScheme

    def __post_init__(self):
        scheme = _as_scheme(self.scheme)
        raw = np.asarray(self.indices)
        if raw.ndim != 1 or raw.size == 0:
            raise DimensionError("a phase configuration needs a non-empty 1-D index vector")
        if raw.dtype.kind not in "iu":
            if raw.dtype.kind == "f" and np.all(raw == np.round(raw)):
                raw = raw.astype(np.int64)
            else:
                raise DomainError("phase indices must be integers")
        idx = raw.astype(np.int64, copy=True)
        if idx.min() < 0 or idx.max() >= scheme.levels:
            raise DomainError(
                f"phase indices must lie in [0, {scheme.levels - 1}] for B={scheme.bits}"
            )
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "scheme", scheme)

    @classmethod
    def from_phases(cls, phases, scheme, atol=1e-9) -> "PhaseConfig":
        """Build from radians; every phase must already be a multiple of the step."""
        scheme = _as_scheme(scheme)
        q = np.asarray(phases, dtype=float) / scheme.step
        k = np.round(q)
        if np.any(np.abs(q - k) > atol):
            raise DomainError("phase not in the quantization set")
        return cls(np.mod(k.astype(np.int64), scheme.levels), scheme)

    def __len__(self):
        return self.indices.size

    def __eq__(self, other):
        if not isinstance(other, PhaseConfig):
            return NotImplemented
        return self.scheme == other.scheme and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash((self.scheme, self.indices.tobytes()))

    def __repr__(self):
        return f"PhaseConfig({self.indices.tolist()}, B={self.scheme.bits})"

    @property
    def phases(self) -> np.ndarray:
        return self.indices * self.scheme.step

    @property
    def phasors(self) -> np.ndarray:
        """``exp(1j * omega_i)`` per cell."""
        return self.scheme.roots[self.indices]

    def shifted(self, offset: int) -> "PhaseConfig":
        """Add the same level offset to every cell (mod L); objective-invariant."""
        return PhaseConfig(np.mod(self.indices + offset, self.scheme.levels), self.scheme)

    def canonical(self) -> "PhaseConfig":
        """Global-shift representative whose first entry is level 0."""
        return self.shifted(-int(self.indices[0]))


@dataclass(frozen=True, eq=False)
class RankOneObjective:
    """Complex vector ``z`` defining the objective ``|sum_i z_i exp(j omega_i)|``.

    ``augmented`` marks objectives whose last slot is a homogenized direct link.
    """

    z: np.ndarray
    augmented: bool = False
    magnitudes: np.ndarray = field(init=False, repr=False)
    angles: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        z = np.array(self.z, dtype=np.complex128).ravel()
        if z.size == 0:
            raise DimensionError("objective vector is empty")
        if not np.all(np.isfinite(z)):
            raise DomainError("objective vector has non-finite entries")
        mag = np.abs(z)
        ang = np.mod(np.angle(z), TWO_PI)
        # mod can round a tiny negative angle up to exactly 2*pi
        ang[ang >= TWO_PI] = 0.0
        zero = mag < ZERO_MAGNITUDE
        mag[zero] = 0.0
        ang[zero] = 0.0
        z[zero] = 0.0
        for a in (z, mag, ang):
            a.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "magnitudes", mag)
        object.__setattr__(self, "angles", ang)

    def __len__(self):
        return self.z.size

    def __repr__(self):
        return f"RankOneObjective(N={len(self)}, augmented={self.augmented})"

    def rotated(self, theta: float) -> "RankOneObjective":
        return RankOneObjective(self.z * np.exp(1j * theta), augmented=self.augmented)


@dataclass(frozen=True)
class Solution:
    """An optimizer returned by a solver, with its objective value."""

    config: PhaseConfig
    value: float
    candidate_count: int
    method: str
    elapsed: float = 0.0
    candidate_index: int | None = None
    augmented: bool = False

    @property
    def scheme(self) -> QuantizationScheme:
        return self.config.scheme


def _check_pair(obj: RankOneObjective, cfg: PhaseConfig):
    if len(obj) != len(cfg):
        raise DimensionError(f"objective has N={len(obj)} but configuration has N={len(cfg)}")


def phase_sum(obj: RankOneObjective, cfg: PhaseConfig) -> complex:
    """``sum_i z_i exp(j omega_i)`` accumulated with correctly rounded sums."""
    _check_pair(obj, cfg)
    terms = obj.z * cfg.phasors
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def evaluate(obj: RankOneObjective, cfg: PhaseConfig) -> float:
    """Objective value ``|w^H z|`` of a configuration."""
    return abs(phase_sum(obj, cfg))


def continuous_bound(obj: RankOneObjective) -> float:
    """``sum_i |z_i|``: the exact optimum when phases are unquantized."""
    return math.fsum(obj.magnitudes)
