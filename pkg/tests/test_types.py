import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ris_das.errors import DimensionError, DomainError
from ris_das.types import (
    PhaseConfig,
    QuantizationScheme,
    RankOneObjective,
    continuous_bound,
    evaluate,
)

from conftest import brute_force


class TestQuantizationScheme:
    @pytest.mark.parametrize("bits", [1, 2, 3, 4, 8])
    def test_levels_and_step(self, bits):
        q = QuantizationScheme(bits)
        assert q.levels == 2**bits
        assert q.step * q.levels == pytest.approx(2 * math.pi, abs=1e-15)

    @pytest.mark.parametrize("bad", [0, -1, 1.5, True])
    def test_rejects_bad_bits(self, bad):
        with pytest.raises(DomainError):
            QuantizationScheme(bad)

    def test_roots_exact_on_axes(self):
        r = QuantizationScheme(2).roots
        assert list(r) == [1, 1j, -1, -1j]


class TestPhaseConfig:
    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            PhaseConfig([0, 2], 1)
        with pytest.raises(DomainError):
            PhaseConfig([-1], 2)

    def test_rejects_empty(self):
        with pytest.raises(DimensionError):
            PhaseConfig([], 1)

    def test_immutable(self):
        cfg = PhaseConfig([0, 1], 1)
        with pytest.raises(ValueError):
            cfg.indices[0] = 1

    def test_from_phases(self):
        cfg = PhaseConfig.from_phases([0, math.pi / 2, 3 * math.pi / 2], 2)
        assert cfg.indices.tolist() == [0, 1, 3]
        with pytest.raises(DomainError):
            PhaseConfig.from_phases([0.3], 2)

    def test_canonical(self):
        assert PhaseConfig([2, 3, 0], 2).canonical().indices.tolist() == [0, 1, 2]


class TestRankOneObjective:
    def test_polar_invariant(self, rng):
        z = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        obj = RankOneObjective(z)
        np.testing.assert_allclose(obj.magnitudes * np.exp(1j * obj.angles), z, atol=1e-12)
        assert np.all((obj.angles >= 0) & (obj.angles < 2 * math.pi))

    def test_zero_entries(self):
        obj = RankOneObjective([0, -1e-320, 1j])
        assert obj.angles[0] == 0 and obj.angles[1] == 0
        assert obj.magnitudes[1] == 0
        assert obj.angles[2] == pytest.approx(math.pi / 2)

    def test_negative_real_angle(self):
        assert RankOneObjective([-1.0]).angles[0] == pytest.approx(math.pi)

    def test_empty(self):
        with pytest.raises(DimensionError):
            RankOneObjective([])


class TestEvaluate:
    def test_aligned(self):
        assert evaluate(RankOneObjective([1, 1, 1]), PhaseConfig([0, 0, 0], 1)) == 3.0

    def test_pi_flip(self):
        assert evaluate(RankOneObjective([1, -1]), PhaseConfig([0, 1], 1)) == 2.0

    def test_third_roots(self):
        z = np.exp(2j * np.pi * np.arange(3) / 3)
        best, _ = brute_force(z, 1)
        assert best == pytest.approx(2.0, rel=1e-12)
        assert evaluate(RankOneObjective(z), PhaseConfig([0, 1, 1], 1)) == pytest.approx(2.0, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            evaluate(RankOneObjective([1, 1]), PhaseConfig([0], 1))


class TestContinuousBound:
    def test_examples(self):
        assert continuous_bound(RankOneObjective([3, 4j])) == 7.0
        assert continuous_bound(RankOneObjective([0, 0])) == 0.0
        z = np.exp(2j * np.pi * np.arange(3) / 3)
        assert continuous_bound(RankOneObjective(z)) == pytest.approx(3.0, rel=1e-15)


def _instance():
    return st.integers(1, 40).flatmap(
        lambda n: st.tuples(
            st.lists(st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
                     min_size=n, max_size=n),
            st.integers(1, 5),
            st.integers(0, 2**32 - 1),
        )
    )


@settings(max_examples=200, deadline=None)
@given(_instance(), st.floats(0, 2 * math.pi))
def test_phase_rotation_invariance(inst, theta):
    z, bits, seed = inst
    obj = RankOneObjective(z)
    cfg = PhaseConfig(np.random.default_rng(seed).integers(0, 2**bits, len(z)), bits)
    a, b = evaluate(obj, cfg), evaluate(obj.rotated(theta), cfg)
    assert b == pytest.approx(a, rel=1e-12, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(_instance(), st.integers(0, 255))
def test_global_shift_invariance(inst, offset):
    z, bits, seed = inst
    obj = RankOneObjective(z)
    cfg = PhaseConfig(np.random.default_rng(seed).integers(0, 2**bits, len(z)), bits)
    a, b = evaluate(obj, cfg), evaluate(obj, cfg.shifted(offset))
    assert b == pytest.approx(a, rel=1e-12, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(_instance())
def test_upper_bound(inst):
    z, bits, seed = inst
    obj = RankOneObjective(z)
    cfg = PhaseConfig(np.random.default_rng(seed).integers(0, 2**bits, len(z)), bits)
    assert evaluate(obj, cfg) <= continuous_bound(obj) * (1 + 1e-12) + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.integers(1, 5), st.floats(0, 2 * math.pi), st.integers(0, 2**32 - 1))
def test_bound_tight_when_angles_congruent(n, bits, offset, seed):
    """Angles offset + m*step: aligning each with -m levels reaches sum |z_i|."""
    rng = np.random.default_rng(seed)
    L = 2**bits
    m = rng.integers(0, L, n)
    mags = rng.uniform(0.1, 5.0, n)
    obj = RankOneObjective(mags * np.exp(1j * (offset + m * 2 * np.pi / L)))
    cfg = PhaseConfig(np.mod(-m, L), bits)
    assert evaluate(obj, cfg) == pytest.approx(continuous_bound(obj), rel=1e-12)
