"""Seeded channel generators and SNR bookkeeping.

Three models are supported:

* i.i.d. circularly-symmetric Gaussian cascade ``(h_s, h_r, h_d)``;
* the statistical pathloss model ("model 1") with background link ``h_0``
  and per-cell cascaded channels ``h_1..h_N``;
* the far-field angular model ("model 2") built from steering vectors of the
  cell positions.

Randomness always comes from ``numpy.random.Generator`` (PCG64). Per-trial
streams are derived with ``trial_seed(master, index)`` so that trial ``i``
sees the same channel no matter how trials are scheduled.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, GeometryError
from .reduce import CascadedChannel, homogenize
from .types import PhaseConfig, RankOneObjective

DEFAULT_TX = (50.0, -200.0, 20.0)
DEFAULT_RIS = (-2.0, -1.0, 0.0)
DEFAULT_RX = (0.0, 0.0, 0.0)

PROTOTYPE_ROWS = 10
PROTOTYPE_COLS = 16
PROTOTYPE_SPACING = 0.027
PROTOTYPE_WAVELENGTH = 0.062


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_seed(master_seed: int, trial: int) -> int:
    """Deterministic 63-bit seed for one trial of a master-seeded experiment."""
    ss = np.random.SeedSequence([int(master_seed), int(trial)])
    return int(ss.generate_state(2, dtype=np.uint32).view(np.uint64)[0] >> np.uint64(1))


def complex_normal(rng: np.random.Generator, size, variance: float = 1.0) -> np.ndarray:
    """CN(0, variance): real and imaginary parts i.i.d. N(0, variance/2)."""
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def sample_gaussian_cascade(N: int, variance: float = 1.0, seed=None, direct_link=True) -> CascadedChannel:
    if N < 1:
        raise DimensionError("N must be >= 1")
    if variance <= 0:
        raise DomainError("variance must be positive")
    rng = make_rng(seed)
    h_s = complex_normal(rng, N, variance)
    h_r = complex_normal(rng, N, variance)
    h_d = complex_normal(rng, 1, variance)[0]
    return CascadedChannel(h_s, h_r, h_d if direct_link else 0j)


def pathloss_direct_db(d: float) -> float:
    return 32.6 + 36.7 * math.log10(d)


def pathloss_ris_db(d: float) -> float:
    return 30.0 + 22.0 * math.log10(d)


@dataclass(frozen=True)
class Model1Params:
    """Geometry (meters) and power levels (dBm) of the statistical model."""

    N: int = 200
    tx_pos: tuple = DEFAULT_TX
    ris_pos: tuple = DEFAULT_RIS
    rx_pos: tuple = DEFAULT_RX
    P_dBm: float = 30.0
    noise_dBm: float = -90.0

    def __post_init__(self):
        if self.N < 1:
            raise DimensionError("N must be >= 1")
        for name in ("tx_pos", "ris_pos", "rx_pos"):
            p = tuple(float(v) for v in getattr(self, name))
            if len(p) != 3 or not all(math.isfinite(v) for v in p):
                raise GeometryError(f"{name} must be a finite 3-vector")
            object.__setattr__(self, name, p)

    @property
    def distances(self):
        """``(d_0, d_1, d_2)``: tx-rx, tx-RIS and RIS-rx distances."""
        tx, ris, rx = (np.asarray(p) for p in (self.tx_pos, self.ris_pos, self.rx_pos))
        d = (
            float(np.linalg.norm(tx - rx)),
            float(np.linalg.norm(tx - ris)),
            float(np.linalg.norm(ris - rx)),
        )
        if min(d) <= 0:
            raise GeometryError(f"coincident positions give a zero distance: {d}")
        return d

    @property
    def pathloss_db(self):
        """``(PL_0, PL_1 + PL_2)`` in dB."""
        d0, d1, d2 = self.distances
        return pathloss_direct_db(d0), pathloss_ris_db(d1) + pathloss_ris_db(d2)

    def to_json(self) -> dict:
        return {
            "n": self.N,
            "tx": list(self.tx_pos),
            "ris": list(self.ris_pos),
            "rx": list(self.rx_pos),
            "p_dbm": self.P_dBm,
            "noise_dbm": self.noise_dBm,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Model1Params":
        return cls(
            N=int(d.get("n", 200)),
            tx_pos=tuple(d.get("tx", DEFAULT_TX)),
            ris_pos=tuple(d.get("ris", DEFAULT_RIS)),
            rx_pos=tuple(d.get("rx", DEFAULT_RX)),
            P_dBm=float(d.get("p_dbm", 30.0)),
            noise_dBm=float(d.get("noise_dbm", -90.0)),
        )


def sample_model1(params: Model1Params, seed=None) -> np.ndarray:
    """``[h_0, h_1, ..., h_N]`` with Rayleigh fading on top of the two pathloss laws."""
    rng = make_rng(seed)
    pl0, pl_ris = params.pathloss_db
    zeta = complex_normal(rng, params.N + 1)
    h = np.empty(params.N + 1, dtype=np.complex128)
    h[0] = 10.0 ** (-pl0 / 20.0) * zeta[0]
    h[1:] = 10.0 ** (-pl_ris / 20.0) * zeta[1:]
    return h


def model1_objective(h: np.ndarray) -> RankOneObjective:
    """Homogenized objective ``[h_1..h_N, h_0]`` of ``|h_0 + sum h_i e^{j w_i}|``."""
    return homogenize(h[1:], h[0])


def direction(theta: float, phi: float) -> np.ndarray:
    """Unit vector for elevation ``theta`` and azimuth ``phi`` (radians)."""
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def steering_entry(p, theta: float, phi: float, wavelength: float) -> complex:
    """``exp(j 2 pi p.u(theta, phi) / wavelength)`` for one cell position."""
    if wavelength <= 0:
        raise DomainError("wavelength must be positive")
    return complex(np.exp(2j * math.pi * float(np.dot(p, direction(theta, phi))) / wavelength))


def steering_vector(positions, theta: float, phi: float, wavelength: float) -> np.ndarray:
    if wavelength <= 0:
        raise DomainError("wavelength must be positive")
    P = np.asarray(positions, dtype=float).reshape(-1, 3)
    return np.exp(2j * np.pi * (P @ direction(theta, phi)) / wavelength)


def upa_positions(rows: int, cols: int, spacing: float) -> np.ndarray:
    """Cell centers of a rows x cols planar array in the z = 0 plane, centered
    on the origin, listed row-major."""
    if rows < 1 or cols < 1:
        raise GeometryError("grid needs at least one row and one column")
    if spacing <= 0:
        raise GeometryError("spacing must be positive")
    y = (np.arange(rows) - (rows - 1) / 2.0) * spacing
    x = (np.arange(cols) - (cols - 1) / 2.0) * spacing
    yy, xx = np.meshgrid(y, x, indexing="ij")
    return np.column_stack((xx.ravel(), yy.ravel(), np.zeros(rows * cols)))


@dataclass(frozen=True, eq=False)
class FarFieldScene:
    """Far-field reflection scene; angles in radians, lengths in meters.

    ``departure`` is the (theta, phi) of the receiver, ``arrivals`` an (M, 2)
    array of incoming directions with complex amplitudes ``amplitudes``.
    """

    positions: np.ndarray
    wavelength: float
    departure: tuple
    arrivals: np.ndarray
    amplitudes: np.ndarray = None
    path_gain: complex = 1.0 + 0j
    grid: tuple | None = field(default=None)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise GeometryError("positions must be an (N, 3) array with N >= 1")
        if not self.wavelength > 0:
            raise DomainError("wavelength must be positive")
        arr = np.asarray(self.arrivals, dtype=float).reshape(-1, 2)
        if arr.shape[0] < 1:
            raise DimensionError("need at least one arrival direction")
        amp = self.amplitudes
        amp = np.ones(arr.shape[0], dtype=np.complex128) if amp is None else np.asarray(amp, dtype=np.complex128).ravel()
        if amp.size != arr.shape[0]:
            raise DimensionError(f"{arr.shape[0]} arrival directions but {amp.size} amplitudes")
        dep = tuple(float(a) for a in self.departure)
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(arr)) and all(map(math.isfinite, dep))):
            raise DomainError("scene contains non-finite values")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "arrivals", arr)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "departure", dep)
        object.__setattr__(self, "path_gain", complex(self.path_gain))
        object.__setattr__(self, "wavelength", float(self.wavelength))

    @property
    def N(self) -> int:
        return self.positions.shape[0]

    @property
    def M(self) -> int:
        return self.arrivals.shape[0]

    def departure_vector(self) -> np.ndarray:
        """``b``: one unit phasor per cell towards the receiver."""
        return steering_vector(self.positions, *self.departure, self.wavelength)

    def arrival_matrix(self) -> np.ndarray:
        """``B``: N x M steering matrix, one column per arrival direction."""
        cols = [steering_vector(self.positions, t, p, self.wavelength) for t, p in self.arrivals]
        return np.column_stack(cols)

    def received(self, cfg: PhaseConfig) -> complex:
        """``eta * b^T W B x`` evaluated directly."""
        b = self.departure_vector()
        W = np.diag(cfg.phasors)
        return complex(self.path_gain * (b @ W @ self.arrival_matrix() @ self.amplitudes))

    def to_json(self) -> dict:
        """Serializable form; angles in degrees."""
        d = {
            "wavelength": self.wavelength,
            "departure": [math.degrees(a) for a in self.departure],
            "arrivals": [[math.degrees(t), math.degrees(p)] for t, p in self.arrivals],
            "amplitudes": [[a.real, a.imag] for a in self.amplitudes],
            "path_gain": [self.path_gain.real, self.path_gain.imag],
        }
        if self.grid is not None:
            rows, cols, spacing = self.grid
            d["grid"] = {"rows": rows, "cols": cols, "spacing": spacing}
        else:
            d["positions"] = self.positions.tolist()
        return d

    @classmethod
    def from_json(cls, d: dict) -> "FarFieldScene":
        grid = None
        if "grid" in d:
            g = d["grid"]
            grid = (int(g["rows"]), int(g["cols"]), float(g["spacing"]))
            positions = upa_positions(*grid)
        elif "positions" in d:
            positions = np.asarray(d["positions"], dtype=float)
        else:
            raise GeometryError("scene needs 'grid' or 'positions'")
        arrivals = np.radians(np.asarray(d.get("arrivals", [[0.0, 0.0]]), dtype=float))
        amps = d.get("amplitudes")
        if amps is not None:
            amps = np.array([complex(re, im) for re, im in amps])
        eta = d.get("path_gain", [1.0, 0.0])
        return cls(
            positions=positions,
            wavelength=float(d["wavelength"]),
            departure=tuple(np.radians(d["departure"])),
            arrivals=arrivals,
            amplitudes=amps,
            path_gain=complex(*eta),
            grid=grid,
        )


def prototype_scene(departure_deg=(45.0, 0.0), arrival_deg=(0.0, 0.0)) -> FarFieldScene:
    """The 10 x 16 prototype board at 4.85 GHz with one incoming direction."""
    grid = (PROTOTYPE_ROWS, PROTOTYPE_COLS, PROTOTYPE_SPACING)
    return FarFieldScene(
        positions=upa_positions(*grid),
        wavelength=PROTOTYPE_WAVELENGTH,
        departure=tuple(np.radians(departure_deg)),
        arrivals=np.radians([arrival_deg]),
        grid=grid,
    )


def model2_generator(scene: FarFieldScene) -> np.ndarray:
    """``g = eta * b * (B x)`` so that ``y = sum_i g_i exp(j omega_i)``."""
    return scene.path_gain * scene.departure_vector() * (scene.arrival_matrix() @ scene.amplitudes)


def model2_matrix(scene: FarFieldScene) -> np.ndarray:
    """``|eta|^2 * (Q o P^T)`` with ``P = Bxx^H B^H`` and ``Q = conj(b) b^T``."""
    b = scene.departure_vector()
    v = scene.arrival_matrix() @ scene.amplitudes
    P = np.outer(v, np.conj(v))
    Q = np.outer(np.conj(b), b)
    return abs(scene.path_gain) ** 2 * (Q * P.T)


def model2_quadratic_form(R, cfg: PhaseConfig) -> float:
    """``w^H R w`` with the unconjugated phasor ``w = exp(j omega)``."""
    w = cfg.phasors
    return float(np.real(np.conj(w) @ np.asarray(R) @ w))


def build_model2_objective(scene: FarFieldScene, verify: bool = False) -> RankOneObjective:
    """Rank-one objective of the far-field model.

    The Hadamard product of the two rank-one factors is generated by the
    elementwise product of their generators, so no eigensolver is needed.
    ``verify=True`` re-checks the quadratic identity on a few configurations.
    """
    g = model2_generator(scene)
    obj = RankOneObjective(g)
    if verify:
        R = model2_matrix(scene)
        rng = np.random.default_rng(0)
        for _ in range(4):
            cfg = PhaseConfig(rng.integers(0, 4, size=scene.N), 2)
            direct = abs(scene.received(cfg)) ** 2
            quad = model2_quadratic_form(R, cfg)
            if not math.isclose(direct, quad, rel_tol=1e-9, abs_tol=1e-300):
                raise AssertionError("far-field quadratic identity failed")
    return obj


@dataclass(frozen=True)
class ZeroGain:
    """SNR of a link with exactly zero gain (minus infinity in dB)."""

    def __repr__(self):
        return "ZeroGain()"

    def __str__(self):
        return "-inf"

    def __float__(self):
        return float("-inf")


ZERO_GAIN = ZeroGain()


def snr_db(h, P_dBm: float = 0.0, noise_dBm: float = 0.0):
    """``P |h|^2 / sigma^2`` in dB, or ``ZERO_GAIN`` when ``h == 0``."""
    g = abs(complex(h)) if not isinstance(h, (float, int)) else abs(h)
    if g == 0:
        return ZERO_GAIN
    return P_dBm - noise_dBm + 20.0 * math.log10(g)


def channel_digest(*arrays) -> str:
    """Short content hash used to check that paired trials share a channel."""
    h = hashlib.sha1()
    for a in arrays:
        h.update(np.ascontiguousarray(a, dtype=np.complex128).tobytes())
    return h.hexdigest()[:16]
