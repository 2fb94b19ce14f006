"""Limit zero distributions: densities, CDFs, potentials, weight, equilibrium.

Two measures appear: nu on [-1, 1] (zeros of the transformed polynomials)
and mu on (-inf, 0] (zeros of the Apery polynomials), related by the
pushforward under T(y) = (y-1)/(y+1).

All square roots inside the closed-form weight and potentials use
arg in (-pi, pi], i.e. negative reals continue from the upper half-plane.
CDF and potential quadratures substitute away the endpoint singularities:
for nu, u = (1-x)^{1/4} followed by u = 2^{1/4} sin(phi) leaves a smooth
bounded integrand on [0, pi/2]; for mu, u = |x|^{1/4} leaves a smooth
integrand on [0, inf) decaying like u^{-3}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath as mp
from scipy.integrate import quad

from .asymptotics import sqrt_upper
from .exact import apery_poly, eval_certified, eval_exact

SQRT2 = math.sqrt(2.0)
ROBIN_NU = 4.0 * math.log(1.0 + SQRT2)
MU_LOG_CONSTANT = 4.0 * math.log(2.0)


class ToleranceError(RuntimeError):
    """A quadrature failed to meet the requested tolerance."""


def nu_density(x: float) -> float:
    """Density of nu at x strictly inside (-1, 1)."""
    if not -1.0 < x < 1.0:
        raise ValueError("nu_density needs x strictly inside (-1, 1)")
    return 1.0 / (math.pi * math.sqrt(1.0 + x) * (1.0 - x) ** 0.75 * math.sqrt(SQRT2 + math.sqrt(1.0 - x)))


def mu_density(x: float) -> float:
    """Density of mu at x < 0."""
    if x >= 0.0:
        raise ValueError("mu_density needs x < 0")
    ax = -x
    return 1.0 / (
        SQRT2 * math.pi * ax**0.75 * math.sqrt(1.0 + ax) * math.sqrt(math.sqrt(ax) + math.sqrt(1.0 + ax))
    )


def _nu_phi_weight(phi: float) -> float:
    # nu in the angle variable: x = 1 - 2 sin^4(phi), phi in [0, pi/2]
    return 4.0 / (math.pi * SQRT2 * (1.0 + math.sin(phi) ** 2))


def _nu_phi_of_x(x: float) -> float:
    u = (1.0 - x) ** 0.25
    return math.asin(min(1.0, u / 2.0**0.25))


def nu_cdf(x: float, abs_tol: float = 1e-12) -> float:
    """nu((-1, x]) by adaptive quadrature in the substituted angle variable."""
    if x <= -1.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    val, err = quad(_nu_phi_weight, _nu_phi_of_x(x), math.pi / 2, epsabs=abs_tol, limit=200)
    if err > max(1000 * abs_tol, 1e-9):
        raise ToleranceError(f"nu_cdf quadrature error estimate {err:.3g}")
    return val


def _mu_u_weight(u: float) -> float:
    # mu in u = |x|^{1/4}: support becomes [0, inf), integrand smooth, ~2/(pi u^3)
    u4 = u**4
    return 4.0 / (SQRT2 * math.pi * math.sqrt(1.0 + u4) * math.sqrt(u * u + math.sqrt(1.0 + u4)))


def mu_cdf(x: float, abs_tol: float = 1e-10) -> float:
    """mu((-inf, x]) for x <= 0, computed as 1 - integral over (x, 0]."""
    if x >= 0.0:
        return 1.0
    U = (-x) ** 0.25
    val, err = quad(_mu_u_weight, 0.0, U, epsabs=abs_tol, limit=400)
    if err > max(1000 * abs_tol, 1e-7):
        raise ToleranceError(f"mu_cdf quadrature error estimate {err:.3g}")
    return 1.0 - val


def nu_mass(abs_tol: float = 1e-12) -> float:
    """Total mass of nu by quadrature over the whole substituted interval."""
    val, err = quad(_nu_phi_weight, 0.0, math.pi / 2, epsabs=abs_tol, limit=200)
    if err > max(1000 * abs_tol, 1e-9):
        raise ToleranceError(f"nu mass quadrature error estimate {err:.3g}")
    return val


def mu_mass(abs_tol: float = 1e-10) -> float:
    """Total mass of mu by quadrature over the whole substituted half-line."""
    val, err = quad(_mu_u_weight, 0.0, math.inf, epsabs=abs_tol, limit=400)
    if err > max(1000 * abs_tol, 1e-7):
        raise ToleranceError(f"mu mass quadrature error estimate {err:.3g}")
    return val


def _weight_sum(z: complex) -> complex:
    """sqrt(z+1) + 2 sqrt(z-1) + 2 sqrt(z-1+sqrt(z-1)sqrt(z+1)), arg in (-pi, pi]."""
    sp = sqrt_upper(z + 1)
    sm = sqrt_upper(z - 1)
    return sp + 2.0 * sm + 2.0 * sqrt_upper(z - 1 + sm * sp)


def weight_w(x: float) -> float:
    """Equilibrium weight on [-1, 1]: |weight sum|^{-2}."""
    if not -1.0 <= x <= 1.0:
        raise ValueError("weight_w is defined on [-1, 1]")
    return abs(_weight_sum(complex(x))) ** -2


def potential_nu(z) -> float:
    """Closed-form logarithmic potential of nu, valid on all of C."""
    return ROBIN_NU - 2.0 * math.log(abs(_weight_sum(complex(z))))


def potential_mu(z) -> float:
    """Closed-form logarithmic potential of mu, valid on all of C."""
    z = complex(z)
    s = sqrt_upper(z)
    t = sqrt_upper(z + s)
    return MU_LOG_CONSTANT - 2.0 * math.log(abs(1.0 + 2.0 * (s + t)))


def equilibrium_residual(x: float) -> float:
    """U^nu(x) + log(1/w(x)) - Robin constant; identically 0 on (-1, 1).

    This is the F = U + Q characterization of the weighted equilibrium
    measure, with modified Robin constant 4 log(1 + sqrt 2).
    """
    if not -1.0 < x < 1.0:
        raise ValueError("equilibrium residual is defined on the support interior")
    return potential_nu(x) + math.log(1.0 / weight_w(x)) - ROBIN_NU


def potential_from_density(z, kind: str, tol: float = 1e-8, mu_truncation: float = -1e8) -> float:
    """Quadrature of the logarithmic potential integral against the density.

    Independent oracle for the closed forms; z must be off the support.
    For mu the integral is truncated at ``mu_truncation`` and completed with
    the analytic tail of the density (~ 2/(pi |x|^{3/2})), which keeps the
    truncation error far below the quadrature tolerance.
    """
    z = complex(z)
    if kind == "nu":
        if z.imag == 0.0 and -1.0 <= z.real <= 1.0:
            raise ValueError("z must lie off the support [-1, 1]")

        def integrand(phi):
            x = 1.0 - 2.0 * math.sin(phi) ** 4
            return -math.log(abs(z - x)) * _nu_phi_weight(phi)

        val, err = quad(integrand, 0.0, math.pi / 2, epsabs=tol / 4, limit=400)
        if err > 10 * tol:
            raise ToleranceError(f"nu potential quadrature error {err:.3g} exceeds {tol}")
        return val
    if kind == "mu":
        if z.imag == 0.0 and z.real <= 0.0:
            raise ValueError("z must lie off the support (-inf, 0]")
        U = (-mu_truncation) ** 0.25

        def integrand(u):
            return -math.log(abs(z + u**4)) * _mu_u_weight(u)

        val, err = quad(integrand, 0.0, U, epsabs=tol / 4, limit=800)
        if err > 10 * tol:
            raise ToleranceError(f"mu potential quadrature error {err:.3g} exceeds {tol}")
        # analytic tail: integrand ~ -4 ln(u) * 2/(pi u^3) for u >> 1
        tail = -(8.0 / math.pi) * (math.log(U) / (2.0 * U**2) + 1.0 / (4.0 * U**2))
        return val + tail
    raise ValueError("kind must be 'nu' or 'mu'")


def potentials_from_zeros(n: int, z) -> float:
    """Discrete potential of the degree-n transformed zero measure at z.

    Computed from exact polynomial values:
    log|B_n(1)|^{1/n} - log(|z+1| |B_n((z-1)/(z+1))|^{1/n}).
    """
    zc = complex(z)
    if zc.imag == 0.0 and -1.0 <= zc.real <= 1.0:
        raise ValueError("z must lie off [-1, 1]")
    p = apery_poly(n)
    bn1 = eval_exact(p, 1)
    with mp.workdps(40):
        log_bn1 = mp.log(mp.mpf(bn1.numerator))
        if zc.imag == 0.0:
            arg = Fraction(zc.real - 1) / Fraction(zc.real + 1)
            val = eval_exact(p, arg)
            log_val = mp.log(abs(mp.mpf(val.numerator))) - mp.log(mp.mpf(val.denominator))
        else:
            cert = eval_certified(p, (zc - 1) / (zc + 1), rel_tol=1e-12)
            log_val = mp.log(abs(cert.value))
        return float(log_bn1 / n - (mp.log(abs(mp.mpc(zc) + 1)) + log_val / n))


@dataclass(frozen=True)
class MeasureModel:
    """Bundle of one limit measure's callables and constants."""

    kind: str
    density: Callable[[float], float]
    cdf: Callable[[float], float]
    potential: Callable[[complex], float]
    weight: Callable[[float], float] | None
    robin_constant: float


def nu_model() -> MeasureModel:
    return MeasureModel(
        kind="nu",
        density=nu_density,
        cdf=nu_cdf,
        potential=potential_nu,
        weight=weight_w,
        robin_constant=ROBIN_NU,
    )


def mu_model() -> MeasureModel:
    return MeasureModel(
        kind="mu",
        density=mu_density,
        cdf=mu_cdf,
        potential=potential_mu,
        weight=None,
        robin_constant=MU_LOG_CONSTANT,
    )
