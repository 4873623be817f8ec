import json
import math

import numpy as np
import pytest

from ris_das.channels import (
    DEFAULT_RIS,
    DEFAULT_RX,
    DEFAULT_TX,
    ZERO_GAIN,
    FarFieldScene,
    Model1Params,
    build_model2_objective,
    model1_objective,
    model2_matrix,
    model2_quadratic_form,
    pathloss_direct_db,
    pathloss_ris_db,
    prototype_scene,
    sample_gaussian_cascade,
    sample_model1,
    snr_db,
    steering_entry,
    steering_vector,
    trial_seed,
    upa_positions,
)
from ris_das.das import solve_das
from ris_das.errors import DomainError, GeometryError
from ris_das.types import PhaseConfig, evaluate


def random_scene(rng, n, m):
    return FarFieldScene(
        positions=rng.uniform(-0.2, 0.2, (n, 3)),
        wavelength=rng.uniform(0.01, 0.2),
        departure=(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)),
        arrivals=np.column_stack((rng.uniform(0, np.pi, m), rng.uniform(0, 2 * np.pi, m))),
        amplitudes=rng.standard_normal(m) + 1j * rng.standard_normal(m),
        path_gain=complex(rng.standard_normal(), rng.standard_normal()),
    )


class TestGaussian:
    def test_deterministic(self):
        a, b = sample_gaussian_cascade(4, seed=11), sample_gaussian_cascade(4, seed=11)
        np.testing.assert_array_equal(a.h_s, b.h_s)
        np.testing.assert_array_equal(a.h_r, b.h_r)
        assert a.h_d == b.h_d

    def test_unit_variance(self):
        ch = sample_gaussian_cascade(10_000, 1.0, seed=3)
        assert abs(np.mean(np.abs(ch.h_s) ** 2) - 1.0) <= 0.05
        # circular symmetry: real and imaginary parts carry half each
        assert np.var(ch.h_s.real) == pytest.approx(0.5, abs=0.03)

    def test_variance_scaling(self):
        a, b = sample_gaussian_cascade(6, 1.0, seed=5), sample_gaussian_cascade(6, 4.0, seed=5)
        np.testing.assert_allclose(b.h_s, 2 * a.h_s, rtol=1e-15)
        np.testing.assert_allclose(b.h_r, 2 * a.h_r, rtol=1e-15)

    def test_no_direct_link(self):
        assert sample_gaussian_cascade(3, seed=1, direct_link=False).h_d == 0

    def test_rejects(self):
        with pytest.raises(DomainError):
            sample_gaussian_cascade(3, 0.0, seed=1)

    def test_trial_seed_stable(self):
        assert trial_seed(7, 3) == trial_seed(7, 3)
        assert trial_seed(7, 3) != trial_seed(7, 4)
        assert 0 <= trial_seed(7, 3) < 2**63


class TestModel1:
    def test_pathloss_examples(self):
        assert pathloss_direct_db(100.0) == pytest.approx(106.0, abs=1e-12)
        assert pathloss_ris_db(10.0) == pytest.approx(52.0, abs=1e-12)

    def test_reference_geometry(self):
        d0, d1, d2 = Model1Params().distances
        assert d0 == pytest.approx(math.sqrt(42900))
        assert d0 == pytest.approx(207.12, abs=0.01)
        assert d2 == pytest.approx(math.sqrt(5))
        assert d1 == pytest.approx(math.sqrt(52**2 + 199**2 + 20**2))

    def test_coincident(self):
        with pytest.raises(GeometryError):
            Model1Params(ris_pos=DEFAULT_RX).distances

    def test_direct_magnitude_law(self):
        p = Model1Params(N=1, tx_pos=(100, 0, 0), ris_pos=(0, 10, 0), rx_pos=(0, 0, 0))
        pl0, pl = p.pathloss_db
        assert pl0 == pytest.approx(106.0)
        draws = np.array([sample_model1(p, seed=s)[0] for s in range(4000)])
        assert np.mean(np.abs(draws) ** 2) / 10 ** (-10.6) == pytest.approx(1.0, abs=0.06)

    def test_cascade_magnitude_law(self):
        p = Model1Params(N=10_000, tx_pos=(10, 0, 0), ris_pos=(0, 0, 0), rx_pos=(0, 10, 0))
        assert p.pathloss_db[1] == pytest.approx(104.0)
        h = sample_model1(p, seed=9)
        assert np.mean(np.abs(h[1:]) ** 2) / 10 ** (-10.4) == pytest.approx(1.0, abs=0.05)

    def test_deterministic_and_shape(self):
        p = Model1Params(N=7)
        a, b = sample_model1(p, seed=2), sample_model1(p, seed=2)
        assert a.shape == (8,)
        np.testing.assert_array_equal(a, b)

    def test_objective_layout(self):
        h = np.array([5, 1, 2, 3], dtype=complex)
        obj = model1_objective(h)
        np.testing.assert_array_equal(obj.z, [1, 2, 3, 5])
        assert obj.augmented

    def test_json_roundtrip(self):
        p = Model1Params(N=12, P_dBm=20)
        q = Model1Params.from_json(json.loads(json.dumps(p.to_json())))
        assert q == p
        assert Model1Params.from_json({}) == Model1Params(N=200, tx_pos=DEFAULT_TX, ris_pos=DEFAULT_RIS)


class TestSteering:
    def test_origin(self):
        assert steering_entry((0, 0, 0), 0.7, 1.3, 0.05) == 1

    def test_full_wavelength(self):
        lam = 0.062
        assert steering_entry((lam, 0, 0), math.pi / 2, 0.0, lam) == pytest.approx(1.0, abs=1e-14)

    def test_quarter_wavelength(self):
        lam = 0.062
        assert steering_entry((lam / 4, 0, 0), math.pi / 2, 0.0, lam) == pytest.approx(1j, abs=1e-14)

    def test_unit_modulus(self, rng):
        v = steering_vector(rng.uniform(-1, 1, (500, 3)), 0.4, 2.2, 0.031)
        np.testing.assert_allclose(np.abs(v), 1.0, atol=1e-14)

    def test_rejects_wavelength(self):
        with pytest.raises(DomainError):
            steering_entry((0, 0, 0), 0, 0, 0.0)

    def test_upa(self):
        P = upa_positions(10, 16, 0.027)
        assert P.shape == (160, 3)
        np.testing.assert_allclose(P.mean(axis=0), 0, atol=1e-15)
        # row-major: consecutive cells step along x
        assert P[1, 0] - P[0, 0] == pytest.approx(0.027)
        assert P[16, 1] - P[0, 1] == pytest.approx(0.027)
        with pytest.raises(GeometryError):
            upa_positions(0, 3, 0.01)


class TestModel2:
    def test_no_geometry(self):
        eta = 0.5 - 0.25j
        scene = FarFieldScene(np.zeros((6, 3)), 0.1, (0.3, 0.1), [[0.2, 0.4]], [1.0], eta)
        obj = build_model2_objective(scene)
        np.testing.assert_allclose(obj.z, eta * np.ones(6), atol=1e-15)
        assert solve_das(obj, 1).value == pytest.approx(abs(eta) * 6, rel=1e-12)

    def test_single_cell(self, rng):
        obj = build_model2_objective(random_scene(rng, 1, 2))
        assert len(obj) == 1
        for k in range(4):
            assert evaluate(obj, PhaseConfig([k], 2)) == pytest.approx(abs(obj.z[0]))

    def test_identity_n8_m3(self, rng):
        scene = random_scene(rng, 8, 3)
        R = model2_matrix(scene)
        for _ in range(100):
            cfg = PhaseConfig(rng.integers(0, 8, 8), 3)
            direct = abs(scene.received(cfg)) ** 2
            assert model2_quadratic_form(R, cfg) == pytest.approx(direct, rel=1e-9)

    def test_objective_matches_received(self, rng):
        scene = random_scene(rng, 10, 2)
        obj = build_model2_objective(scene, verify=True)
        for _ in range(20):
            cfg = PhaseConfig(rng.integers(0, 4, 10), 2)
            assert evaluate(obj, cfg) == pytest.approx(abs(scene.received(cfg)), rel=1e-9)

    def test_matrix_is_rank_one_psd(self, rng):
        R = model2_matrix(random_scene(rng, 9, 4))
        np.testing.assert_allclose(R, R.conj().T, atol=1e-12)
        ev = np.linalg.eigvalsh(R)
        assert ev[-2] <= 1e-9 * ev[-1] and ev[0] >= -1e-9 * ev[-1]

    def test_prototype_and_json(self):
        scene = prototype_scene((30.0, 10.0), (0.0, 0.0))
        assert scene.N == 160 and scene.M == 1
        d = json.loads(json.dumps(scene.to_json()))
        assert d["grid"] == {"rows": 10, "cols": 16, "spacing": 0.027}
        assert d["departure"] == pytest.approx([30.0, 10.0])
        back = FarFieldScene.from_json(d)
        np.testing.assert_allclose(back.positions, scene.positions)
        np.testing.assert_allclose(back.departure_vector(), scene.departure_vector(), atol=1e-12)

    def test_explicit_positions_json(self, rng):
        scene = random_scene(rng, 3, 2)
        back = FarFieldScene.from_json(json.loads(json.dumps(scene.to_json())))
        np.testing.assert_allclose(back.arrival_matrix(), scene.arrival_matrix(), atol=1e-12)
        assert back.path_gain == pytest.approx(scene.path_gain)

    def test_invalid_scene(self):
        with pytest.raises(DomainError):
            FarFieldScene(np.zeros((2, 3)), -1.0, (0, 0), [[0, 0]])
        with pytest.raises(DomainError):
            FarFieldScene(np.zeros((2, 3)), 1.0, (float("nan"), 0), [[0, 0]])


class TestSnr:
    def test_reference_power_levels(self):
        assert snr_db(1.0, 30, -90) == pytest.approx(120.0)

    def test_gain(self):
        assert snr_db(0.1) == pytest.approx(-20.0)
        assert snr_db(0.1j, 30, -90) == pytest.approx(100.0)

    def test_zero_sentinel(self):
        s = snr_db(0j, 30, -90)
        assert s is ZERO_GAIN
        assert not isinstance(s, float)
        assert str(s) == "-inf" and float(s) == -math.inf
