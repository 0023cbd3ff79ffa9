import math

import numpy as np
import pytest

from wptmod.characteristics import (
    CharacteristicCurve,
    NoiseSpec,
    SweepSpec,
    add_noise,
    curves_from_csv,
    curves_to_csv,
    evaluate_point,
    sweep_curve,
)
from wptmod.circuit import (
    Couplings,
    DriveSpec,
    default_tx_coil,
    resonant_coil_receiver,
)

OMEGA = 2.0 * math.pi * 20e3


def make_spec(m_ac=0.0, m_bc=0.0, theta=math.pi / 4, r_tx=0.1, label="x"):
    return SweepSpec(
        i_min=0.0,
        i_max=10.0,
        steps=21,
        drive=DriveSpec(OMEGA, 1.0, theta),
        receiver=resonant_coil_receiver(0.1, 4.5),
        couplings=Couplings(m_ac, m_bc),
        tx=default_tx_coil(resistance=r_tx),
        label=label,
    )


class TestSweepShapes:
    def test_decoupled_line_and_parabola(self):
        # with no coupling the voltage is R*I*sin(theta) and power is R*I^2
        spec = make_spec(theta=math.pi / 2, r_tx=0.25)
        curve = sweep_curve(spec)
        assert np.allclose(curve.u_tx, 0.25 * curve.i_tx, rtol=1e-12)
        assert np.allclose(curve.p_in, 0.25 * curve.i_tx**2, rtol=1e-12)

    def test_scaling_laws_with_coupling(self):
        spec = make_spec(m_ac=5e-7, m_bc=5e-7)
        curve = sweep_curve(spec)
        # linear in I for U, quadratic for P: check against the 1 A point
        u1, p1 = evaluate_point(spec, 1.0)
        mask = curve.i_tx > 0
        assert np.allclose(curve.u_tx[mask], u1 * curve.i_tx[mask], rtol=1e-9)
        assert np.allclose(curve.p_in[mask], p1 * curve.i_tx[mask] ** 2, rtol=1e-9)

    def test_coil_selection_by_steering(self):
        near_a = sweep_curve(make_spec(m_ac=5e-7, theta=math.pi / 2 - 0.1))
        near_b = sweep_curve(make_spec(m_ac=5e-7, theta=0.1))
        assert np.allclose(near_a.u_tx, near_a.u_a)
        assert np.allclose(near_b.u_tx, near_b.u_b)

    def test_evaluate_point_matches_sweep(self):
        spec = make_spec(m_ac=3e-7, m_bc=-4e-7)
        curve = sweep_curve(spec)
        for idx in (0, 7, 20):
            u, p = evaluate_point(spec, float(curve.i_tx[idx]))
            assert u == pytest.approx(curve.u_tx[idx], rel=1e-12, abs=1e-15)
            assert p == pytest.approx(curve.p_in[idx], rel=1e-12, abs=1e-15)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            make_spec().__class__(
                i_min=5.0,
                i_max=1.0,
                steps=10,
                drive=DriveSpec(OMEGA, 1.0, 0.0),
                receiver=resonant_coil_receiver(0.1, 4.5),
                couplings=Couplings(0.0, 0.0),
            )
        with pytest.raises(ValueError):
            CharacteristicCurve("x", [1.0, 1.0], [0.0, 0.0], [0.0, 0.0])
        with pytest.raises(ValueError):
            CharacteristicCurve("x", [1.0, 2.0], [-1.0, 0.0], [0.0, 0.0])


class TestNoise:
    def test_zero_sigma_identity(self):
        curve = sweep_curve(make_spec(m_ac=5e-7))
        noisy = add_noise(curve, NoiseSpec(relative_sigma=0.0, seed=3))
        assert noisy is curve

    def test_deterministic_per_seed(self):
        curve = sweep_curve(make_spec(m_ac=5e-7))
        a = add_noise(curve, NoiseSpec(0.01, seed=42))
        b = add_noise(curve, NoiseSpec(0.01, seed=42))
        c = add_noise(curve, NoiseSpec(0.01, seed=43))
        assert np.array_equal(a.u_tx, b.u_tx) and np.array_equal(a.p_in, b.p_in)
        assert not np.array_equal(a.u_tx, c.u_tx)

    def test_currents_untouched(self):
        curve = sweep_curve(make_spec(m_ac=5e-7))
        noisy = add_noise(curve, NoiseSpec(0.05, seed=1))
        assert np.array_equal(noisy.i_tx, curve.i_tx)

    def test_statistics(self):
        # mean relative deviation ~0, std ~sigma over many seeds at one point
        curve = CharacteristicCurve("x", [1.0, 2.0], [10.0, 20.0], [5.0, 10.0])
        sigma = 0.01
        rel = np.array(
            [
                add_noise(curve, NoiseSpec(sigma, seed=s)).u_tx[0] / 10.0 - 1.0
                for s in range(4000)
            ]
        )
        assert abs(rel.mean()) < 5e-4
        assert rel.std() == pytest.approx(sigma, rel=0.05)

    def test_clipped_at_zero(self):
        curve = CharacteristicCurve("x", [1.0, 2.0], [1e-12, 1e-12], [1e-12, 1e-12])
        noisy = add_noise(curve, NoiseSpec(relative_sigma=5.0, seed=0))
        assert np.all(noisy.u_tx >= 0.0) and np.all(noisy.p_in >= 0.0)


class TestCsv:
    def test_header_and_format(self):
        curve = CharacteristicCurve("coil:a", [1.0, 2.0], [0.5, 1.0], [0.25, 1.0])
        text = curves_to_csv([curve])
        lines = text.splitlines()
        assert lines[0] == "label,i_tx_A,u_tx_V,p_in_W"
        assert lines[1] == "coil:a,1.000000000000,0.500000000000,0.250000000000"

    def test_round_trip(self):
        curves = [
            sweep_curve(make_spec(m_ac=5e-7, label="coil:a")),
            sweep_curve(make_spec(m_bc=2e-7, label="metal:b")),
        ]
        back = curves_from_csv(curves_to_csv(curves))
        assert [c.label for c in back] == ["coil:a", "metal:b"]
        for orig, rt in zip(curves, back):
            assert np.allclose(rt.i_tx, orig.i_tx, rtol=0, atol=5e-13)
            assert np.allclose(rt.u_tx, orig.u_tx, rtol=0, atol=5e-13)
            assert np.allclose(rt.p_in, orig.p_in, rtol=0, atol=5e-13)

    def test_bad_header_rejected(self):
        with pytest.raises(ValueError):
            curves_from_csv("nope\n1,2,3,4\n")
