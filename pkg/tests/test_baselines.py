import math

import numpy as np
import pytest

from ris_das.baselines import (
    BaselineKind,
    branch_and_bound,
    codebook_solution,
    exhaustive,
    quantized_alignment,
    trivial_codebook,
)
from ris_das.das import circular_distance, solve_das
from ris_das.errors import BudgetExceededError
from ris_das.types import QuantizationScheme, RankOneObjective

from conftest import brute_force, cgauss


class TestExhaustive:
    def test_two_ones(self):
        assert exhaustive(RankOneObjective([1, 1]), 1).value == 2.0

    def test_third_roots(self):
        z = np.exp(2j * np.pi * np.arange(3) / 3)
        sol = exhaustive(RankOneObjective(z), 1)
        assert sol.value == pytest.approx(2.0, rel=1e-12)
        # first cell pinned, lexicographically smallest among the ties
        assert sol.config.indices.tolist() == [0, 0, 1]

    def test_single_cell(self):
        assert exhaustive(RankOneObjective([2j]), 3).value == pytest.approx(2.0)

    def test_cap_refusal(self):
        with pytest.raises(BudgetExceededError, match="cap"):
            exhaustive(RankOneObjective(np.ones(25)), 1)
        with pytest.raises(BudgetExceededError):
            exhaustive(RankOneObjective(np.ones(9)), 3)
        with pytest.raises(BudgetExceededError):
            exhaustive(RankOneObjective(np.ones(5)), 1, cap=16)

    def test_cap_boundary_accepted(self):
        # 2^24 configurations exactly
        sol = exhaustive(RankOneObjective(np.exp(1j * np.linspace(0, 3, 12))), 2)
        assert sol.candidate_count == 4**11

    @pytest.mark.parametrize("bits", [1, 2, 3])
    def test_matches_itertools(self, bits):
        rng = np.random.default_rng(40 + bits)
        for _ in range(30):
            z = cgauss(rng, int(rng.integers(1, {1: 9, 2: 6, 3: 4}[bits] + 1)))
            best, _ = brute_force(z, bits)
            assert exhaustive(RankOneObjective(z), bits).value == pytest.approx(best, rel=1e-12)

    def test_ground_truth_dominates(self, rng):
        for _ in range(20):
            obj = RankOneObjective(cgauss(rng, 8))
            top = exhaustive(obj, 2).value
            for other in (solve_das(obj, 2), quantized_alignment(obj, 2), branch_and_bound(obj, 2)):
                assert other.value <= top + 1e-12
            assert solve_das(obj, 2).value == pytest.approx(top, rel=1e-9)


class TestBranchAndBound:
    @pytest.mark.parametrize("bits", [1, 2, 3])
    def test_matches_exhaustive(self, bits):
        rng = np.random.default_rng(bits)
        for _ in range(15):
            n = int(rng.integers(2, {1: 14, 2: 9, 3: 7}[bits]))
            obj = RankOneObjective(cgauss(rng, n))
            assert branch_and_bound(obj, bits).value == pytest.approx(exhaustive(obj, bits).value, rel=1e-9)

    def test_beyond_cap(self, rng):
        obj = RankOneObjective(cgauss(rng, 12))
        assert branch_and_bound(obj, 3).value == pytest.approx(solve_das(obj, 3).value, rel=1e-9)

    def test_zeros(self):
        assert branch_and_bound(RankOneObjective([0, 0, 1]), 2).value == pytest.approx(1.0)


class TestQuantizedAlignment:
    def test_congruent_angles_match_optimum(self, rng):
        q = QuantizationScheme(2)
        m = rng.integers(0, 4, 20)
        obj = RankOneObjective(rng.uniform(0.5, 2, 20) * np.exp(1j * m * q.step))
        assert quantized_alignment(obj, q).value == pytest.approx(solve_das(obj, q).value, rel=1e-12)

    def test_quarter_angles(self):
        z = np.exp(1j * np.array([np.pi / 4, -np.pi / 4]))
        sol = quantized_alignment(RankOneObjective(z), 1)
        assert sol.config.indices.tolist() == [0, 0]
        assert sol.value == pytest.approx(math.sqrt(2), rel=1e-12)

    def test_rounding_error_bounded(self, rng):
        obj = RankOneObjective(cgauss(rng, 200))
        for bits in (1, 2, 3):
            q = QuantizationScheme(bits)
            k = quantized_alignment(obj, q).config.indices
            err = circular_distance(obj.angles + k * q.step, 0.0)
            assert err.max() <= q.step / 2 + 1e-12

    def test_dominated_by_das(self):
        rng = np.random.default_rng(500)
        strict = 0
        for _ in range(500):
            obj = RankOneObjective(cgauss(rng, 50))
            das, qa = solve_das(obj, 1).value, quantized_alignment(obj, 1).value
            assert qa <= das * (1 + 1e-12)
            strict += qa < das * (1 - 1e-12)
        assert strict >= 50


class TestTrivialCodebooks:
    def test_all_zeros_is_pi(self):
        cfg = trivial_codebook(BaselineKind.ALL_ZEROS, 3, 1)
        np.testing.assert_allclose(cfg.phases, [math.pi] * 3)
        assert trivial_codebook("allzeros", 2, 3).indices.tolist() == [4, 4]

    def test_random_reproducible(self):
        a = trivial_codebook(BaselineKind.RANDOM, 50, 2, seed=8)
        b = trivial_codebook(BaselineKind.RANDOM, 50, 2, seed=8)
        assert a == b

    def test_random_uniform(self):
        cfg = trivial_codebook(BaselineKind.RANDOM, 10_000, 2, seed=1)
        counts = np.bincount(cfg.indices, minlength=4)
        np.testing.assert_allclose(counts / 2500, 1.0, atol=0.05)
        chi2 = np.sum((counts - 2500) ** 2 / 2500)
        assert chi2 < 16.27  # 99.9% point, 3 degrees of freedom

    def test_solver_kind_rejected(self):
        with pytest.raises(ValueError):
            trivial_codebook(BaselineKind.EXHAUSTIVE, 3, 1)

    def test_codebook_solution(self):
        sol = codebook_solution(RankOneObjective([1, 1]), "allzeros", 1)
        assert sol.value == pytest.approx(2.0)
        assert sol.method == "allzeros"
