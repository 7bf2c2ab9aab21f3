import numpy as np
import pytest

from solwave.potential import PotentialSpec, evaluate_potential
from solwave.radial import (NoBracket, RadialProfile, ShootOutcome,
                            SolitaryWave, WaveInterpolant, count_nodes,
                            equation_residual, find_excited_state,
                            find_ground_state, fit_tail_decay, load_wave,
                            save_wave, shoot)

from conftest import AMP, KAPPA


class TestShootClassification:
    def test_exact_datum_decays(self, cubic):
        out, traj = shoot(cubic, 0.8, 1, 0, 0.848528)
        assert out is ShootOutcome.DECAYED
        assert traj.node_count == 0

    def test_double_amplitude_overshoots(self, cubic):
        out, _ = shoot(cubic, 0.8, 1, 0, 2 * AMP)
        assert out is ShootOutcome.OVERSHOT

    def test_half_amplitude_undershoots(self, cubic):
        out, _ = shoot(cubic, 0.8, 1, 0, 0.5 * AMP)
        assert out is ShootOutcome.UNDERSHOT

    def test_phase_plane_oracle_sweep(self, cubic):
        # 1D conservative motion: W(s) = omega^2 s^2/2 - U(s) decides the side.
        # W < 0 confines the trajectory (undershoot), W > 0 lets it cross zero.
        for s in np.linspace(0.1, 2.5, 12):
            if abs(s - AMP) < 0.05:
                continue
            w_val = 0.8**2 * s**2 / 2 - evaluate_potential(cubic, s)
            out, _ = shoot(cubic, 0.8, 1, 0, float(s))
            expected = ShootOutcome.UNDERSHOT if w_val < 0 else ShootOutcome.OVERSHOT
            assert out is expected, f"s={s}: {out} but W={w_val}"

    def test_shoot_validates_arguments(self, cubic):
        with pytest.raises(ValueError):
            shoot(cubic, 0.8, 1, 0, -1.0)
        with pytest.raises(ValueError):
            shoot(cubic, 1.5, 1, 0, 1.0)
        with pytest.raises(ValueError):
            shoot(cubic, 0.8, 3, 1, 1.0)


class TestGroundState:
    def test_sech_oracle_shoot_param(self, wave_1d):
        assert wave_1d.profile.shoot_param == pytest.approx(AMP, rel=1e-6)

    def test_sech_oracle_pointwise(self, wave_1d):
        p = wave_1d.profile
        mask = p.r_grid <= p.numeric_radius
        exact = AMP / np.cosh(KAPPA * p.r_grid[mask])
        assert np.max(np.abs(p.values[mask] - exact)) < 1e-6

    def test_delta_equals_linearization(self, wave_1d, wave_2d, wave_3d):
        for wave in (wave_1d, wave_2d, wave_3d):
            assert wave.profile.tail.delta == pytest.approx(
                np.sqrt(1.0 - 0.8**2), rel=1e-6)

    def test_fitted_decay_rate(self, wave_1d, wave_2d, wave_3d, wave_k1, wave_k2):
        for wave in (wave_1d, wave_2d, wave_3d, wave_k1, wave_k2):
            assert fit_tail_decay(wave) == pytest.approx(KAPPA, rel=1e-4)

    def test_tail_bound_pointwise(self, wave_2d):
        # |R(r)| <= C e^{-delta r} past match_radius for a fitted C
        p = wave_2d.profile
        tail = p.r_grid >= p.tail.match_radius
        r, v = p.r_grid[tail], np.abs(p.values[tail])
        c_fit = np.max(v * np.exp(p.tail.delta * r))
        assert np.all(v <= c_fit * np.exp(-p.tail.delta * r) * (1 + 1e-12))

    def test_no_nodes(self, wave_1d, wave_2d, wave_3d):
        for wave in (wave_1d, wave_2d, wave_3d):
            assert wave.profile.node_count == 0
            assert count_nodes(wave.profile) == 0

    def test_amplitude_within_cap(self, cubic, wave_3d):
        assert np.max(np.abs(wave_3d.profile.values)) <= cubic.amplitude_cap

    def test_near_critical_frequency(self, cubic):
        wave = find_ground_state(cubic, 0.999, 1)
        delta = np.sqrt(1 - 0.999**2)
        assert wave.profile.tail.delta == pytest.approx(delta, rel=1e-12)
        # wide profile: half-width scales like 1/delta
        p = wave.profile
        half = p.r_grid[np.abs(p.values) > 0.5 * np.max(np.abs(p.values))][-1]
        assert half > 10.0

    def test_scaling_covariance(self, cubic, wave_1d):
        # b -> lam b sends the profile to R / sqrt(lam) pointwise
        for lam in (0.5, 2.0):
            scaled = PotentialSpec(mass_sq=1.0, terms=((lam, 4),), amplitude_cap=8.5)
            wave = find_ground_state(scaled, 0.8, 1)
            p, q = wave.profile, wave_1d.profile
            m = min(p.values.size, q.values.size)
            keep = p.r_grid[:m] <= min(p.numeric_radius, q.numeric_radius)
            diff = p.values[:m][keep] - q.values[:m][keep] / np.sqrt(lam)
            assert np.max(np.abs(diff)) < 1e-6

    def test_no_bracket_for_defocusing(self):
        spec = PotentialSpec(mass_sq=1.0, terms=((-1.0, 4),), amplitude_cap=10.0)
        with pytest.raises(NoBracket):
            find_ground_state(spec, 0.8, 1)

    def test_ground_cap_below_amplitude_gives_no_bracket(self):
        # for ground states the peak equals the shoot parameter, so a cap
        # below the soliton amplitude leaves the scan with no overshoot side
        spec = PotentialSpec(mass_sq=1.0, terms=((1.0, 4),), amplitude_cap=0.7)
        with pytest.raises(NoBracket):
            find_ground_state(spec, 0.8, 1)

    def test_excited_peak_above_cap_warns(self):
        # the excited shoot parameter is a slope coefficient; the attained
        # peak can exceed the scanned range and must be flagged
        spec = PotentialSpec(mass_sq=1.0, terms=((1.0, 4),), amplitude_cap=0.6)
        with pytest.warns(RuntimeWarning, match="amplitude_cap"):
            wave = find_excited_state(spec, 0.8, 1)
        assert np.max(np.abs(wave.profile.values)) > 0.6


class TestExcitedStates:
    def test_origin_behavior(self, wave_k1, wave_k2):
        for wave, k in ((wave_k1, 1), (wave_k2, 2)):
            p = wave.profile
            assert p.values[0] == 0.0
            # R ~ s r^k near the origin
            r_small = p.r_grid[1:6]
            expected = p.shoot_param * r_small**k
            np.testing.assert_allclose(p.values[1:6], expected, rtol=1e-3)

    def test_first_extremum_positive_no_nodes(self, wave_k1, wave_k2):
        for wave in (wave_k1, wave_k2):
            assert np.max(wave.profile.values) > 0
            assert wave.profile.node_count == 0

    def test_dimension_is_two(self, wave_k1):
        assert wave_k1.n == 2
        with pytest.raises(ValueError):
            SolitaryWave(n=3, k=1, omega=0.8, profile=wave_k1.profile,
                         spec=wave_k1.spec)

    def test_k_validation(self, cubic):
        with pytest.raises(ValueError):
            find_excited_state(cubic, 0.8, 0)


class TestEquationResidual:
    def test_exact_sech_converges_quadratically(self, cubic):
        residuals = []
        for h in (0.04, 0.02, 0.01):
            r = np.arange(0, 30, h)
            vals = AMP / np.cosh(KAPPA * r)
            ders = -AMP * KAPPA * np.sinh(KAPPA * r) / np.cosh(KAPPA * r) ** 2
            prof = RadialProfile(r_grid=r, values=vals, derivative=ders,
                                 tail=None, node_count=0, shoot_param=AMP)
            wave = SolitaryWave(n=1, k=0, omega=0.8, profile=prof, spec=cubic)
            residuals.append(equation_residual(wave))
        assert residuals[0] / residuals[1] == pytest.approx(4.0, rel=0.1)
        assert residuals[1] / residuals[2] == pytest.approx(4.0, rel=0.1)

    def test_converged_wave_small_residual(self, wave_1d):
        assert equation_residual(wave_1d) < 1e-6

    def test_perturbed_profile_large_residual(self, wave_1d):
        p = wave_1d.profile
        prof = RadialProfile(r_grid=p.r_grid, values=p.values + 0.01,
                             derivative=p.derivative, tail=p.tail,
                             node_count=p.node_count, shoot_param=p.shoot_param,
                             numeric_radius=p.numeric_radius)
        wave = SolitaryWave(n=1, k=0, omega=0.8, profile=prof, spec=wave_1d.spec)
        assert equation_residual(wave) > 1e-3

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_residual_refines_quadratically(self, cubic, n):
        r1 = equation_residual(find_ground_state(cubic, 0.8, n, h_r=0.02))
        r2 = equation_residual(find_ground_state(cubic, 0.8, n, h_r=0.01))
        assert r1 / r2 == pytest.approx(4.0, rel=0.25)

    def test_residual_decreases_for_excited(self, cubic):
        # the odd k=1 profile limits the near-axis rate to O(h); still monotone
        r1 = equation_residual(find_excited_state(cubic, 0.8, 1, h_r=0.02))
        r2 = equation_residual(find_excited_state(cubic, 0.8, 1, h_r=0.01))
        assert r1 / r2 > 1.8


class TestNodeCounting:
    def test_sech_profile(self, wave_1d):
        assert count_nodes(wave_1d.profile) == 0

    def test_sign_flip_still_node_free(self, wave_1d):
        p = wave_1d.profile
        flipped = RadialProfile(r_grid=p.r_grid, values=-p.values,
                                derivative=-p.derivative, tail=p.tail,
                                node_count=0, shoot_param=p.shoot_param)
        assert count_nodes(flipped) == 0

    def test_synthetic_single_root(self):
        r = np.linspace(0, 10, 2001)
        prof = RadialProfile(r_grid=r, values=(1 - r) * np.exp(-r),
                             derivative=np.gradient((1 - r) * np.exp(-r), r),
                             tail=None, node_count=1, shoot_param=1.0)
        assert count_nodes(prof) == 1


class TestInterpolantAndSerialization:
    def test_interpolant_matches_oracle(self, wave_1d):
        interp = WaveInterpolant(wave_1d)
        r = np.linspace(0.0, 20.0, 777)
        exact = AMP / np.cosh(KAPPA * r)
        assert np.max(np.abs(interp.value(r) - exact)) < 1e-7
        d_exact = -AMP * KAPPA * np.sinh(KAPPA * r) / np.cosh(KAPPA * r) ** 2
        assert np.max(np.abs(interp.derivative(r) - d_exact)) < 1e-6

    def test_interpolant_tail_region(self, wave_1d):
        mr = wave_1d.profile.tail.match_radius
        interp = WaveInterpolant(wave_1d)
        r = np.linspace(mr + 1, mr + 15, 50)
        exact = 2 * AMP * np.exp(-KAPPA * r)
        np.testing.assert_allclose(interp.value(r), exact, rtol=1e-4)

    def test_save_load_roundtrip(self, wave_2d, cubic, tmp_path):
        csv_path = tmp_path / "wave.csv"
        sidecar = tmp_path / "wave.json"
        save_wave(wave_2d, csv_path, sidecar)
        back = load_wave(csv_path, sidecar, cubic)
        assert back.n == wave_2d.n and back.k == wave_2d.k
        assert back.omega == wave_2d.omega
        np.testing.assert_allclose(back.profile.values, wave_2d.profile.values,
                                   rtol=0, atol=1e-16)
        assert back.profile.tail.match_radius == wave_2d.profile.tail.match_radius

    def test_serialization_deterministic(self, wave_1d, tmp_path):
        a1, a2 = tmp_path / "a.csv", tmp_path / "a.json"
        b1, b2 = tmp_path / "b.csv", tmp_path / "b.json"
        save_wave(wave_1d, a1, a2)
        save_wave(wave_1d, b1, b2)
        assert a1.read_bytes() == b1.read_bytes()
        assert a2.read_bytes() == b2.read_bytes()
