"""Exact arbitrary-precision Apery numbers, polynomials, and evaluation.

Everything in this module is exact integer or rational arithmetic, except
:func:`eval_certified`, which evaluates in adaptive binary precision and
returns a rigorous absolute error bound alongside the value.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import mpmath as mp

DEFAULT_MAX_PRECISION_BITS = 2**20


class ConsistencyError(RuntimeError):
    """Internal-consistency fault: an exact identity failed (implementation bug)."""


class PrecisionExhaustedError(RuntimeError):
    """Adaptive precision hit the cap without certifying a nonzero value."""

    def __init__(self, message: str, bound: float):
        super().__init__(message)
        self.bound = bound


class SequenceMethod(str, Enum):
    DIRECT_SUM = "direct_sum"
    RECURRENCE = "recurrence"


class PolyKind(str, Enum):
    APERY = "apery"
    TRANSFORMED = "transformed"


def max_precision_bits() -> int:
    """Precision cap in bits, overridable via APERY_MAX_PRECISION_BITS."""
    raw = os.environ.get("APERY_MAX_PRECISION_BITS")
    if raw is None:
        return DEFAULT_MAX_PRECISION_BITS
    cap = int(raw)
    if cap < 64:
        raise ValueError("APERY_MAX_PRECISION_BITS must be >= 64")
    return cap


def binomial(n: int, k: int) -> int:
    """Exact C(n, k); returns 0 for k > n or k < 0."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def apery_coefficients(n: int) -> list[int]:
    """Coefficients c_k = C(n,k)^2 C(n+k,k)^2 of the degree-n Apery polynomial.

    Built by incremental ratio updates between consecutive k, so each step is
    one big-integer multiply and one exact divide.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    coeffs = [1] * (n + 1)
    for k in range(1, n + 1):
        num = (n - k + 1) ** 2 * (n + k) ** 2
        den = k**4
        val = coeffs[k - 1] * num
        if val % den != 0:
            raise ConsistencyError(f"coefficient ratio update not exact at n={n}, k={k}")
        coeffs[k] = val // den
    return coeffs


def apery_number_sum(n: int) -> int:
    """Apery number b_n by direct summation of the binomial sum."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return sum(apery_coefficients(n))


@dataclass(frozen=True)
class AperySequence:
    """Exact Apery numbers b_0..b_{n_max} with the method used to produce them."""

    values: tuple[int, ...]
    method: SequenceMethod

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


def apery_sequence_rec(n_max: int) -> AperySequence:
    """b_0..b_{n_max} from the three-term recurrence with seeds b_0=1, b_1=5.

    The division by n^3 at every step is asserted exact; a remainder would
    signal a transcription bug, never an expected condition.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    values = [1, 5]
    for n in range(2, n_max + 1):
        num = (34 * n**3 - 51 * n**2 + 27 * n - 5) * values[n - 1] - (n - 1) ** 3 * values[n - 2]
        den = n**3
        if num % den != 0:
            raise ConsistencyError(f"recurrence division by n^3 not exact at n={n}")
        values.append(num // den)
    return AperySequence(values=tuple(values), method=SequenceMethod.RECURRENCE)


def apery_sequence_sum(n_max: int) -> AperySequence:
    """b_0..b_{n_max} by direct summation (cross-check oracle for the recurrence)."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return AperySequence(
        values=tuple(apery_number_sum(n) for n in range(n_max + 1)),
        method=SequenceMethod.DIRECT_SUM,
    )


@dataclass(frozen=True)
class PolynomialZ:
    """Integer-coefficient polynomial; coeffs[k] multiplies z^k."""

    coeffs: tuple[int, ...]
    kind: PolyKind

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def apery_poly(n: int) -> PolynomialZ:
    """The degree-n Apery polynomial with coefficients C(n,k)^2 C(n+k,k)^2."""
    return PolynomialZ(coeffs=tuple(apery_coefficients(n)), kind=PolyKind.APERY)


def transformed_poly(n: int) -> PolynomialZ:
    """The degree-n transformed polynomial (z+1)^n B_n((z-1)/(z+1)), exactly.

    Expands sum_k c_k (z-1)^k (z+1)^{n-k} by walking k upward: each step
    multiplies the mixed power by (z-1) and divides exactly by (z+1).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    c = apery_coefficients(n)
    # current = coefficients of (z-1)^k (z+1)^(n-k), starting at k=0
    current = [binomial(n, j) for j in range(n + 1)]
    total = [c[0] * v for v in current]
    for k in range(1, n + 1):
        # multiply by (z-1)
        mult = [0] * (n + 2)
        for j, v in enumerate(current):
            mult[j + 1] += v
            mult[j] -= v
        # exact synthetic division by (z+1)
        quot = [0] * (n + 1)
        rem = 0
        for j in range(n + 1, 0, -1):
            quot[j - 1] = mult[j] - rem
            rem = quot[j - 1]
        if mult[0] - rem != 0:
            raise ConsistencyError("division by (z+1) not exact in transformed_poly")
        current = quot
        for j, v in enumerate(current):
            total[j] += c[k] * v
    return PolynomialZ(coeffs=tuple(total), kind=PolyKind.TRANSFORMED)


def eval_exact(p: PolynomialZ, x) -> Fraction:
    """Exact rational Horner evaluation at a rational (or integer) point."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def eval_sign(p: PolynomialZ, x: Fraction) -> int:
    """Sign of p(x) at a rational point using pure integer arithmetic.

    Evaluates num(x)^k den(x)^{deg-k}-scaled Horner, avoiding Fraction
    normalization; this is the hot path of exact root isolation.
    """
    x = Fraction(x)
    a, b = x.numerator, x.denominator
    n = p.degree
    acc = p.coeffs[n]
    bpow = 1
    for k in range(n - 1, -1, -1):
        bpow *= b
        acc = acc * a + p.coeffs[k] * bpow
    return (acc > 0) - (acc < 0)


@dataclass(frozen=True)
class CertifiedComplex:
    """A complex value with a rigorous absolute error bound.

    ``abs_error_bound`` upper-bounds |computed - true| under mpmath's
    correctly rounded arithmetic at ``working_precision_bits`` bits.
    """

    value: mp.mpc
    abs_error_bound: mp.mpf
    working_precision_bits: int


def _growth_log2(abs_z: float) -> float:
    """log2 of the modulus growth factor |1 + 2 sqrt|z| + 2 sqrt(|z|+sqrt|z|)|^2."""
    s = math.sqrt(abs_z)
    g = (1.0 + 2.0 * s + 2.0 * math.sqrt(abs_z + s)) ** 2
    return math.log2(g) if g > 1.0 else 0.0


def eval_certified(p: PolynomialZ, z, rel_tol: float) -> CertifiedComplex:
    """Evaluate p(z) with |value - true| <= abs_error_bound <= rel_tol * |true|.

    Working precision starts from a growth-informed estimate (cancellation on
    the negative axis costs about n * log2(growth) bits) and doubles until the
    running Horner rounding bound meets rel_tol, capped by
    :func:`max_precision_bits`.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if isinstance(z, (Fraction, int)) and rel_tol < 1e-30:
        # exactness is cheap for rational inputs; it removes tolerance questions
        exact = eval_exact(p, z)
        prec = max(64, int(-math.log2(rel_tol)) + 16)
        with mp.workprec(prec):
            value = mp.mpc(mp.mpf(exact.numerator) / exact.denominator)
            bound = abs(value) * mp.mpf(2) ** (2 - prec)
        return CertifiedComplex(value=value, abs_error_bound=bound, working_precision_bits=prec)

    if isinstance(z, Fraction):
        z_num = (z.numerator, z.denominator)
        abs_z = abs(z.numerator / z.denominator)
    else:
        z_num = z
        abs_z = abs(complex(z))
    n = p.degree
    cap = max_precision_bits()
    prec = min(max(64, int(math.ceil((n + 1) * _growth_log2(abs_z)))), cap)
    last_bound = mp.mpf("inf")
    while True:
        with mp.workprec(prec):
            if isinstance(z_num, tuple):
                zz = mp.mpc(mp.mpf(z_num[0]) / z_num[1])
            else:
                zz = mp.mpc(z_num)
            acc = mp.mpc(0)
            mag = mp.mpf(0)
            az = abs(zz)
            for c in reversed(p.coeffs):
                acc = acc * zz + c
                mag = mag * az + abs(c)
            # Horner forward-error bound: gamma_m * sum |c_k||z|^k with a
            # generous constant for complex multiplies and coefficient rounding
            u = mp.mpf(2) ** (-prec)
            bound = 8 * (n + 1) * u * mag
            value = acc
        last_bound = bound
        if abs(value) > 0 and bound <= rel_tol * abs(value):
            return CertifiedComplex(value=value, abs_error_bound=bound, working_precision_bits=prec)
        if prec >= cap:
            raise PrecisionExhaustedError(
                f"value indistinguishable from 0 at {prec} bits (bound {float(bound):.3g})",
                bound=float(last_bound),
            )
        prec = min(2 * prec, cap)


def eval_naive(coeffs: Sequence[int], x) -> Fraction:
    """Independent naive-power oracle: sum_k c_k x^k without Horner."""
    x = Fraction(x)
    return sum(Fraction(c) * x**k for k, c in enumerate(coeffs))
