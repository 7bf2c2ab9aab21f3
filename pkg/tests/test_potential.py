import numpy as np
import pytest

from solwave.potential import (PotentialSpec, check_conditions, evaluate_force,
                               evaluate_potential, expected_amplitude)


def test_potential_values(cubic):
    assert evaluate_potential(cubic, 0.0) == 0.0
    assert evaluate_potential(cubic, 1.0) == pytest.approx(0.25, abs=0)
    mass_only = PotentialSpec(mass_sq=1.0)
    assert evaluate_potential(mass_only, 2.0) == pytest.approx(2.0, abs=0)


def test_force_values(cubic):
    assert evaluate_force(cubic, 0.0) == 0.0
    assert evaluate_force(cubic, 1.0) == pytest.approx(0.0, abs=1e-15)
    got = evaluate_force(cubic, 0.5j)
    assert got == pytest.approx(-0.375j, abs=1e-15)


def test_force_is_vectorized(cubic):
    a = np.linspace(0, 2, 7)
    np.testing.assert_allclose(evaluate_force(cubic, a), -a + a**3, atol=1e-15)


@pytest.mark.parametrize("spec", [
    PotentialSpec(mass_sq=1.0, terms=((1.0, 4),)),
    PotentialSpec(mass_sq=2.0, terms=((0.5, 4), (-0.1, 6))),
    PotentialSpec(mass_sq=1.0),
    PotentialSpec(mass_sq=0.5, terms=((0.3, 3), (1.0, 5))),
])
def test_force_matches_potential_derivative(spec):
    # f(a) = -U'(a): centered difference of U agrees to O(h^2)
    a = np.linspace(0.05, 3.0, 40)
    h = 1e-6
    dU = (evaluate_potential(spec, a + h) - evaluate_potential(spec, a - h)) / (2 * h)
    np.testing.assert_allclose(evaluate_force(spec, a), -dU, atol=5e-10, rtol=1e-8)


def test_u1_equivariance(cubic):
    rng = np.random.default_rng(7)
    a = rng.uniform(0.01, 3.0, size=50)
    for theta in np.linspace(0.0, 2 * np.pi, 9, endpoint=False):
        rot = np.exp(1j * theta)
        lhs = evaluate_force(cubic, rot * a)
        rhs = rot * evaluate_force(cubic, a)
        np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_potential_no_linear_term(cubic):
    # U(0) = 0 and U'(0) = 0: U(a)/a vanishes linearly (slope m^2/2 here)
    a = np.logspace(-8, -2, 7)
    assert evaluate_potential(cubic, 0.0) == 0.0
    np.testing.assert_allclose(evaluate_potential(cubic, a) / a, 0.5 * a, rtol=1e-3)


def test_s1_value_exact(cubic):
    rep = check_conditions(cubic, 0.8, 1)
    assert rep.s1_value == 0.8**2 - 1.0
    assert rep.s1_holds
    rep_bad = check_conditions(PotentialSpec(mass_sq=1.0), 1.2, 1)
    assert not rep_bad.s1_holds


def test_s2_witness(cubic):
    rep = check_conditions(cubic, 0.8, 1)
    assert rep.s2_holds
    a0 = rep.s2_witness
    assert evaluate_potential(cubic, a0) - 0.8**2 * a0**2 / 2 < 0
    # the smallest negative-energy amplitude is the 1D separatrix amplitude
    assert a0 == pytest.approx(np.sqrt(0.72), rel=1e-3)


def test_s2_witness_beyond_cap():
    spec = PotentialSpec(mass_sq=1.0, terms=((1.0, 4),), amplitude_cap=0.5)
    rep = check_conditions(spec, 0.8, 1)
    assert rep.s2_holds  # negative leading tail guarantees a witness past the cap
    assert rep.s2_witness > 0.5


def test_s2_fails_for_defocusing():
    spec = PotentialSpec(mass_sq=1.0, terms=((-1.0, 4),), amplitude_cap=10.0)
    rep = check_conditions(spec, 0.8, 1)
    assert not rep.s2_holds
    assert rep.s2_witness is None


def test_s3_subcritical_cases():
    cubic = PotentialSpec(mass_sq=1.0, terms=((1.0, 4),))
    assert check_conditions(cubic, 0.8, 3).s3_holds is True       # power 3 < 5
    assert check_conditions(cubic, 0.8, 1).s3_holds is None       # not applicable
    assert check_conditions(cubic, 0.8, 2).s3_holds is None
    crit_bad = PotentialSpec(mass_sq=1.0, terms=((1.0, 6),))
    assert check_conditions(crit_bad, 0.8, 3).s3_holds is False   # +a^5 at l=5
    crit_ok = PotentialSpec(mass_sq=1.0, terms=((1.0, 4), (-1.0, 6)))
    assert check_conditions(crit_ok, 0.8, 3).s3_holds is True     # -a^5 at l=5


def test_s4_scan(cubic):
    rep = check_conditions(cubic, 0.8, 1)
    # U(a) + omega^2 a^2/2 = 0.82 a^2 - 0.25 a^4 dips negative past sqrt(3.28)
    assert not rep.s4_holds_on_cap_range
    assert rep.s4_first_violation == pytest.approx(np.sqrt(3.28), rel=1e-3)
    small_cap = PotentialSpec(mass_sq=1.0, terms=((1.0, 4),), amplitude_cap=1.5)
    assert check_conditions(small_cap, 0.8, 1).s4_holds_on_cap_range


def test_omega_zero_contradiction(cubic):
    # with omega = 0 a negative-energy amplitude is a pointwise S4 violation
    rep = check_conditions(cubic, 0.0, 1)
    assert rep.s2_holds
    assert not rep.s4_holds_on_cap_range
    assert rep.s4_first_violation <= rep.s2_witness


def test_expected_amplitude(cubic):
    assert expected_amplitude(cubic, 0.8) == pytest.approx(np.sqrt(0.72), rel=1e-12)
    assert expected_amplitude(cubic, 0.0) == pytest.approx(np.sqrt(2.0), rel=1e-12)
    assert expected_amplitude(PotentialSpec(mass_sq=1.0), 0.5) is None


def test_spec_validation():
    with pytest.raises(ValueError):
        PotentialSpec(mass_sq=-1.0)
    with pytest.raises(ValueError):
        PotentialSpec(mass_sq=1.0, terms=((1.0, 2),))
    with pytest.raises(ValueError):
        PotentialSpec(mass_sq=1.0, amplitude_cap=0.0)
