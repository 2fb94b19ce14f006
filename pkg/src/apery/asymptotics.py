"""Closed-form asymptotics: branch machinery, the leading term off the cut,
and the oscillatory form with its phase shift on the negative axis.

Branch conventions: :func:`sqrt_principal` uses arg in (-pi, pi) and refuses
the cut; the continuation "from above" onto (-inf, 0] is a separate operation
(:class:`NegativeAxisPoint`). Quantities that grow like c^n are carried in
log scale (:class:`LogComplex`) or as mpmath values with unbounded exponents.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath as mp

THETA_SAFE_MIN = 0.02
THETA_SAFE_MAX = 0.98


class BranchCutDomainError(ValueError):
    """Argument lies on the branch cut (-inf, 0] of the principal root."""


def sqrt_principal(z) -> complex:
    """Principal square root, arg(z) in (-pi, pi); rejects the cut (-inf, 0]."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z != 0:
        raise BranchCutDomainError(f"z={z} lies on (-inf, 0]; use the upper continuation")
    return cmath.sqrt(z)


def sqrt_upper(z) -> complex:
    """Square root with arg(z) in (-pi, pi]: negative reals map to +i sqrt|z|."""
    z = complex(z)
    if z.imag == 0.0 and z.real < 0.0:
        return 1j * math.sqrt(-z.real)
    return cmath.sqrt(z)


@dataclass(frozen=True)
class LogComplex:
    """A complex number exp(log_abs + i*arg) stored without reducing arg mod 2pi."""

    log_abs: float
    arg: float

    @classmethod
    def from_complex(cls, w: complex) -> "LogComplex":
        w = complex(w)
        return cls(log_abs=math.log(abs(w)), arg=cmath.phase(w))

    def to_mpc(self, dps: int = 30) -> mp.mpc:
        with mp.workdps(dps):
            return mp.exp(mp.mpc(self.log_abs, self.arg))

    def real_part(self, dps: int = 30) -> mp.mpf:
        with mp.workdps(dps):
            return mp.exp(mp.mpf(self.log_abs)) * mp.cos(mp.mpf(self.arg))

    def ratio_to(self, other: "LogComplex") -> complex:
        """exp(self - other) as a plain complex; meaningful when the ratio is O(1)."""
        return cmath.exp(complex(self.log_abs - other.log_abs, self.arg - other.arg))

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        return LogComplex(self.log_abs + other.log_abs, self.arg + other.arg)


@dataclass(frozen=True)
class BranchedPoint:
    """z off the cut with a = sqrt(z+sqrt z) - sqrt z and b = sqrt(z+sqrt z) + sqrt z."""

    z: complex
    a: complex
    b: complex

    @classmethod
    def from_z(cls, z) -> "BranchedPoint":
        z = complex(z)
        s = sqrt_principal(z) if z != 0 else 0j
        t = sqrt_principal(z + s) if z + s != 0 else 0j
        return cls(z=z, a=t - s, b=t + s)


@dataclass(frozen=True)
class NegativeAxisPoint:
    """Continuation of (a, b) onto the cut from above, at z = -x with x > 0."""

    x: float
    theta: float
    a_minus: complex
    b_minus: complex

    @classmethod
    def from_x(cls, x: float) -> "NegativeAxisPoint":
        if x <= 0:
            raise ValueError("x must be positive")
        isx = 1j * math.sqrt(x)
        r = cmath.sqrt(complex(-x, math.sqrt(x)))
        return cls(x=x, theta=theta_from_x(x), a_minus=r - isx, b_minus=r + isx)


def x_from_theta(theta: float) -> float:
    """x(theta) = sin^4(pi theta/2) / (4 cos^2(pi theta/2)), strictly increasing on (0,1)."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    c = math.pi * theta / 2.0
    return math.sin(c) ** 4 / (4.0 * math.cos(c) ** 2)


def theta_from_x(x: float) -> float:
    """Closed-form inverse of x_from_theta via s = sin^2(pi theta/2) = 2(sqrt(x^2+x) - x)."""
    if x <= 0:
        raise ValueError("x must be positive")
    s = 2.0 * (math.sqrt(x * x + x) - x)
    if s >= 1.0:  # guard rounding for huge x
        s = 1.0 - 1e-17
    return 2.0 / math.pi * math.asin(math.sqrt(s))


def phase_shift(theta: float) -> float:
    """Phase shift f(theta) of the oscillatory form on the negative axis."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    c = math.pi * theta / 2.0
    sc, tc = math.sin(c), math.tan(c)
    return 2.0 * math.atan(tc * (1.0 + sc) / (2.0 + sc)) - 1.5 * math.atan(1.0 / math.cos(c))


def leading_term(n: int, z, dps: int = 40) -> mp.mpc:
    """Leading-order value of B_n(z) off the cut, in extended precision.

    (1 + sqrt z + sqrt(z+sqrt z))^2 / (2 (2 pi n sqrt(z+sqrt z))^{3/2})
    times (1 + 2 sqrt z + 2 sqrt(z+sqrt z))^{2n}.  mpmath's unbounded
    exponents keep the c^{2n} factor representable for any n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    zc = complex(z)
    if zc.imag == 0.0 and zc.real <= 0.0:
        raise BranchCutDomainError("leading_term requires z off (-inf, 0]")
    with mp.workdps(dps):
        zz = mp.mpc(z)
        s = mp.sqrt(zz)
        t = mp.sqrt(zz + s)
        pref = (1 + s + t) ** 2 / (2 * (2 * mp.pi * n * t) ** mp.mpf(1.5))
        return pref * (1 + 2 * s + 2 * t) ** (2 * n)


def cohen_approx(n: int, dps: int = 40) -> mp.mpf:
    """The classical b_n approximation (1+sqrt2)^{4n+2} / (2 pi n sqrt2)^{3/2}."""
    with mp.workdps(dps):
        return (1 + mp.sqrt(2)) ** (4 * n + 2) / (2 * mp.pi * n * mp.sqrt(2)) ** mp.mpf(1.5)


def gn_continued(n: int, x: float) -> LogComplex:
    """G_n(-x): the leading term continued onto the cut from above, log-scaled.

    The oscillatory approximation equals G_n(-x) + conjugate(G_n(-x)) exactly.
    """
    if n < 1 or x <= 0:
        raise ValueError("need n >= 1 and x > 0")
    pt = NegativeAxisPoint.from_x(x)
    r = cmath.sqrt(complex(-x, math.sqrt(x)))  # sqrt(z + sqrt z) continued
    isx = 1j * math.sqrt(x)
    pref = (1 + isx + r) ** 2 / (2 * (2 * math.pi * n) ** 1.5)
    base = 1 + 2 * isx + 2 * r
    # r^{3/2} in the prefactor, kept separate to stay in log scale
    log_abs = (
        math.log(abs(pref))
        - 1.5 * math.log(abs(r))
        + 2 * n * math.log(abs(base))
    )
    arg = cmath.phase(pref) - 1.5 * cmath.phase(r) + 2 * n * cmath.phase(base)
    return LogComplex(log_abs=log_abs, arg=arg)


@dataclass(frozen=True)
class OscillatoryForm:
    """Envelope/phase decomposition of the negative-axis approximation.

    value = exp(log_envelope) * cos(phase); log_envelope already includes
    the (2 pi n)^{-3/2} prefactor and the {(1+sin)/cos}^{2n} growth power.
    """

    n: int
    x: float
    theta: float
    log_envelope: float
    phase: float
    domain_warning: bool

    def value(self, dps: int = 30) -> mp.mpf:
        with mp.workdps(dps):
            return mp.exp(mp.mpf(self.log_envelope)) * mp.cos(mp.mpf(self.phase))


def oscillatory_approx(n: int, x: float) -> OscillatoryForm:
    """Oscillatory approximation of B_n(-x): envelope * cos(f(theta) + n pi theta).

    The closed form is pointwise in fixed x > 0; outside theta in
    [0.02, 0.98] the envelope degenerates and the form carries a domain
    warning flag instead of a value guarantee.
    """
    if n < 1 or x <= 0:
        raise ValueError("need n >= 1 and x > 0")
    theta = theta_from_x(x)
    c = math.pi * theta / 2.0
    sc, cc, tc = math.sin(c), math.cos(c), math.tan(c)
    envelope = (1 + sc) * (1 + 0.5 * tc**2) / (0.5 * tc * math.sqrt(1 + cc**2)) ** 1.5
    log_env = -1.5 * math.log(2 * math.pi * n) + math.log(envelope) + 2 * n * math.log((1 + sc) / cc)
    return OscillatoryForm(
        n=n,
        x=x,
        theta=theta,
        log_envelope=log_env,
        phase=phase_shift(theta) + n * math.pi * theta,
        domain_warning=not (THETA_SAFE_MIN <= theta <= THETA_SAFE_MAX),
    )


def _total_phase(n: int, theta: float) -> float:
    return phase_shift(theta) + n * math.pi * theta


def _solve_total_phase(n: int, target: float, iters: int = 80) -> float | None:
    """theta in (0,1) with f(theta) + n pi theta = target; None if out of range."""
    lo, hi = 1e-12, 1.0 - 1e-12
    if _total_phase(n, lo) > target or _total_phase(n, hi) < target:
        return None
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _total_phase(n, mid) <= target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def predicted_zero_thetas(n: int) -> list[float]:
    """theta locations of all predicted zeros of B_n (phase = pi/2 + k pi)."""
    out = []
    k = 0
    while True:
        th = _solve_total_phase(n, math.pi / 2 + k * math.pi)
        if th is None:
            if k == 0:
                k += 1
                continue
            break
        out.append(th)
        k += 1
    return out


def predicted_zero(n: int, k: int) -> float:
    """Approximate k-th (ascending in theta) zero of B_n on the negative axis."""
    th = _solve_total_phase(n, math.pi / 2 + k * math.pi)
    if th is None:
        raise IndexError(f"k={k} admits no theta in (0,1) for n={n}")
    return -x_from_theta(th)


def separator_thetas(n: int) -> list[float]:
    """theta values where the oscillation phase hits k pi (cosine extrema).

    Consecutive separators bracket exactly one predicted zero; they are the
    seed intervals for exact root isolation.
    """
    out = []
    for k in range(0, n + 1):
        th = _solve_total_phase(n, k * math.pi)
        if th is not None:
            out.append(th)
    return out
