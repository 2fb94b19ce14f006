import math

import numpy as np
import pytest

from apery import measures


def nu_cdf_closed(x):
    # independent closed form obtained by integrating the substituted density
    U = (1.0 - x) ** 0.25
    return 1.0 - (2.0 / math.pi) * math.atan(math.sqrt(2.0) * U / math.sqrt(math.sqrt(2.0) - U * U))


def test_masses_are_one():
    assert abs(measures.nu_mass() - 1.0) < 1e-10
    assert abs(measures.mu_mass() - 1.0) < 1e-8


def test_nu_cdf_against_closed_form():
    for x in np.linspace(-0.999, 0.999, 41):
        assert abs(measures.nu_cdf(x) - nu_cdf_closed(x)) < 1e-10
    assert measures.nu_cdf(-1.5) == 0.0
    assert measures.nu_cdf(1.0) == 1.0


def test_density_domain_checks():
    with pytest.raises(ValueError):
        measures.nu_density(1.0)
    with pytest.raises(ValueError):
        measures.mu_density(0.5)


def test_mu_tail_is_thin():
    # density ~ |x|^{-3/2}: only ~3e-4 of the mass lies beyond -1e6
    assert measures.mu_cdf(-1e6) <= 0.02
    assert measures.mu_cdf(-1e6) > 0.0


def test_pushforward_between_supports():
    for x in (-0.2, -1.0, -4.0, -25.0):
        y = (1 + x) / (1 - x)
        assert abs(measures.mu_cdf(x) - measures.nu_cdf(y)) < 1e-8
        jac = 2.0 / (1 - x) ** 2
        assert measures.mu_density(x) == pytest.approx(measures.nu_density(y) * jac, rel=1e-10)


def test_potentials_match_quadrature():
    for z in (2.5, -3.0 + 0.5j, 0.3 + 1.2j, 10.0):
        assert abs(measures.potential_nu(z) - measures.potential_from_density(z, "nu")) < 1e-6
    for z in (3.0, -2.0 + 1.0j, 0.5 - 2.0j, 12.0):
        assert abs(measures.potential_mu(z) - measures.potential_from_density(z, "mu")) < 1e-6


def test_potential_rejects_support_points():
    with pytest.raises(ValueError):
        measures.potential_from_density(0.5, "nu")
    with pytest.raises(ValueError):
        measures.potential_from_density(-1.0, "mu")
    with pytest.raises(ValueError):
        measures.potential_from_density(1.0, "sigma")


def test_potential_asymptotics_at_infinity():
    # U(z) = -log|z| + o(1); the mu-side correction decays like |z|^{-1/2}
    R = 1e4
    assert abs(measures.potential_nu(R) + math.log(R)) < 1e-4
    assert abs(measures.potential_mu(R) + math.log(R)) < 5e-2


def test_equilibrium_residual_vanishes():
    worst = max(abs(measures.equilibrium_residual(x)) for x in np.linspace(-0.99, 0.99, 50))
    assert worst < 1e-10


def test_weight_positive_and_bounded():
    vals = [measures.weight_w(x) for x in np.linspace(-1.0, 1.0, 21)]
    assert all(v > 0 for v in vals)
    assert max(vals) <= 1.0  # the defining sum always has modulus >= 1 here


def test_discrete_potential_converges():
    target = measures.potential_nu(2.0)
    e50 = abs(measures.potentials_from_zeros(50, 2.0) - target)
    e200 = abs(measures.potentials_from_zeros(200, 2.0) - target)
    assert e200 < e50
    assert e200 < 0.02


def test_discrete_potential_complex_argument():
    target = measures.potential_nu(2j)
    assert abs(measures.potentials_from_zeros(100, 2j) - target) < 0.01


def test_models_expose_constants():
    nu = measures.nu_model()
    mu = measures.mu_model()
    assert nu.robin_constant == pytest.approx(4 * math.log(1 + math.sqrt(2)))
    assert mu.robin_constant == pytest.approx(4 * math.log(2))
    assert nu.weight is not None and mu.weight is None
