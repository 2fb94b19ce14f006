"""Exact zero isolation and empirical zero-counting measures.

All isolation is exact integer arithmetic: signs at rational points are
computed from the polynomial's integer coefficients, never from floats.
Because every zero of the transformed polynomial lies in (-1, 1), isolation
works there and maps back to the negative axis through T(y) = (y-1)/(y+1).

Finding degree-many sign changes certifies by itself that all roots are real,
simple, and located; the gcd-based square-free decomposition is a defensive
fallback that only runs if the count comes up short.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import measures
from .asymptotics import separator_thetas, x_from_theta
from .exact import ConsistencyError, PolyKind, PolynomialZ, apery_poly, eval_sign

logger = logging.getLogger(__name__)

SEPARATOR_DENOMINATOR = 10**9
MIDPOINT_DENOMINATOR = 10**15
FALLBACK_BUDGET = 4096


class ZeroDomain(str, Enum):
    NEGATIVE_AXIS = "negative_axis"
    UNIT_INTERVAL = "unit_interval"


@dataclass(frozen=True)
class ZeroSet:
    """Disjoint rational isolating intervals, one simple real root in each.

    Intervals are ascending and live in the domain's coordinate: (-1, 1)
    for transformed polynomials, (-inf, 0) for Apery polynomials.
    """

    n: int
    intervals: tuple[tuple[Fraction, Fraction], ...]
    domain: ZeroDomain

    @property
    def count(self) -> int:
        return len(self.intervals)

    def midpoints(self) -> list[float]:
        return sorted(float((a + b) / 2) for a, b in self.intervals)


def transform_to_axis(y: Fraction) -> Fraction:
    """T(y) = (y-1)/(y+1), mapping (-1,1) onto (-inf, 0)."""
    return (y - 1) / (y + 1)


def transform_from_axis(x: Fraction) -> Fraction:
    """T^{-1}(x) = (1+x)/(1-x)."""
    return (1 + x) / (1 - x)


def _unit_interval_sign(p: PolynomialZ, y: Fraction) -> int:
    """Sign of the isolation target at y in [-1, 1].

    For transformed polynomials this is the polynomial itself.  For Apery
    polynomials we isolate the transformed zeros without expanding the
    transformed coefficients: sign((y+1)^n B_n(T(y))) = sign(B_n(T(y))).
    """
    if p.kind is PolyKind.TRANSFORMED:
        return eval_sign(p, y)
    if y == 1:
        return 1  # value 2^n B_n(0) > 0
    if y == -1:
        return -1 if p.degree % 2 else 1  # (-2)^n C(2n,n)^2
    return eval_sign(p, transform_to_axis(y))


def _seed_points(n: int) -> list[Fraction]:
    """Rational separator candidates in (-1, 1) from the oscillation phase.

    Cosine extrema of the oscillatory form interlace the predicted zeros;
    mapped through T^{-1} they bracket the true zeros for every tested n.
    """
    pts = {Fraction(-1), Fraction(1)}
    for th in separator_thetas(n):
        x = x_from_theta(th)
        y = (1.0 - x) / (1.0 + x)
        if -1.0 < y < 1.0:
            pts.add(Fraction(y).limit_denominator(SEPARATOR_DENOMINATOR))
    return sorted(pts)


def _hunt_sign_changes(p, a, b, sa, sb, needed, budget=FALLBACK_BUDGET):
    """Breadth-first bisection looking for sign changes hidden in a same-sign gap.

    The evaluation budget bounds total work: roots of even multiplicity (which
    never produce a sign change) must not turn the hunt into an endless split.
    """
    found = []
    queue = deque([(a, b, sa, sb)])
    evals = 0
    while queue and len(found) < needed and evals < budget:
        a, b, sa, sb = queue.popleft()
        m = ((a + b) / 2).limit_denominator(MIDPOINT_DENOMINATOR)
        if not a < m < b:
            continue
        sm = _unit_interval_sign(p, m)
        evals += 1
        if sm == 0:
            found.append((m, m))
            continue
        if sa * sm < 0:
            found.append((a, m))
        else:
            queue.append((a, m, sa, sm))
        if sm * sb < 0:
            found.append((m, b))
        else:
            queue.append((m, b, sm, sb))
    return found


def _refine(p, a, b, sa, width: Fraction):
    while b - a > width:
        m = ((a + b) / 2).limit_denominator(MIDPOINT_DENOMINATOR)
        if not a < m < b:
            m = (a + b) / 2
        sm = _unit_interval_sign(p, m)
        if sm == 0:
            return m, m
        if sm == sa:
            a = m
        else:
            b = m
    return a, b


def square_free_part(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    """Defensive square-free part via rational gcd with the derivative.

    Never exercised for genuine Apery inputs (their zeros are simple); kept
    for the contract that a count shortfall is diagnosed before it becomes a
    consistency fault.
    """

    def normalize(c):
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        return c

    def polymod(a, b):
        a = list(a)
        while len(a) >= len(b) and len(a) > 1:
            f = a[-1] / b[-1]
            off = len(a) - len(b)
            for i, bc in enumerate(b):
                a[off + i] -= f * bc
            a = normalize(a[:-1] + [Fraction(0)])[: len(a) - 1]
            a = normalize(a)
        return a

    f = [Fraction(c) for c in coeffs]
    g = normalize([Fraction(k * c) for k, c in enumerate(coeffs)][1:])
    a, b = f, g
    while len(b) > 1 or (len(b) == 1 and b[0] != 0):
        a, b = b, normalize(polymod(a, b))
        if len(b) == 1 and b[0] == 0:
            break
    gcd = a
    if len(gcd) == 1:
        return tuple(coeffs)
    # exact division f / gcd
    q = [Fraction(0)] * (len(f) - len(gcd) + 1)
    rem = list(f)
    for i in range(len(q) - 1, -1, -1):
        q[i] = rem[i + len(gcd) - 1] / gcd[-1]
        for j, gc in enumerate(gcd):
            rem[i + j] -= q[i] * gc
    lcm = math.lcm(*(c.denominator for c in q))
    return tuple(int(c * lcm) for c in q)


def isolate_zeros(p: PolynomialZ, iso_tol: float = 1e-9) -> ZeroSet:
    """Isolating intervals for all real zeros of an exact_core polynomial.

    Raises ConsistencyError if fewer than degree-many simple real zeros can
    be certified even after the square-free fallback (which would contradict
    the all-real-zeros guarantee for these polynomial families).
    """
    n = p.degree
    if n == 0:
        domain = ZeroDomain.UNIT_INTERVAL if p.kind is PolyKind.TRANSFORMED else ZeroDomain.NEGATIVE_AXIS
        return ZeroSet(n=0, intervals=(), domain=domain)
    pts = _seed_points(n)
    signs = [_unit_interval_sign(p, y) for y in pts]
    intervals = []
    for (a, b), (sa, sb) in zip(zip(pts, pts[1:]), zip(signs, signs[1:])):
        if sa == 0:
            continue  # exact root at a separator; recorded by the zero-width path
        if sb == 0:
            intervals.append((b, b))
            continue
        if sa * sb < 0:
            intervals.append((a, b))
    if len(intervals) < n:
        # missing roots must hide in same-sign gaps in even numbers
        extra = []
        for (a, b), (sa, sb) in zip(zip(pts, pts[1:]), zip(signs, signs[1:])):
            if sa != 0 and sb != 0 and sa * sb > 0:
                extra.extend(_hunt_sign_changes(p, a, b, sa, sb, n - len(intervals) - len(extra)))
        intervals = sorted(intervals + extra)
    if len(intervals) < n:
        sqfree = square_free_part(p.coeffs)
        if len(sqfree) - 1 < n:
            logger.warning(
                "degree-%d polynomial has square-free degree %d: multiple roots detected",
                n,
                len(sqfree) - 1,
            )
            reduced = isolate_zeros(PolynomialZ(coeffs=sqfree, kind=p.kind), iso_tol)
            return ZeroSet(n=n, intervals=reduced.intervals, domain=reduced.domain)
        raise ConsistencyError(
            f"found only {len(intervals)} of {n} real zeros; contradicts the realness guarantee"
        )
    width = Fraction(iso_tol).limit_denominator(10**18)
    refined = []
    for a, b in intervals:
        if a == b:
            refined.append((a, b))
            continue
        sa = _unit_interval_sign(p, a)
        refined.append(_refine(p, a, b, sa, width))
    refined.sort()
    if p.kind is PolyKind.TRANSFORMED:
        return ZeroSet(n=n, intervals=tuple(refined), domain=ZeroDomain.UNIT_INTERVAL)
    mapped = sorted((transform_to_axis(a), transform_to_axis(b)) for a, b in refined)
    return ZeroSet(n=n, intervals=tuple(mapped), domain=ZeroDomain.NEGATIVE_AXIS)


def count_zeros(n: int) -> int:
    """Number of certified real zeros of B_n, without refinement (fast path)."""
    p = apery_poly(n)
    if n == 0:
        return 0
    pts = _seed_points(n)
    signs = [_unit_interval_sign(p, y) for y in pts]
    count = 0
    for sa, sb in zip(signs, signs[1:]):
        if sa != 0 and sb != 0 and sa * sb < 0:
            count += 1
        elif sb == 0:
            count += 1
    if count < n:
        return isolate_zeros(p, iso_tol=1e-3).count
    return count


def empirical_cdf(zs: ZeroSet):
    """Step CDF of the zero-counting measure, using interval midpoints."""
    mids = zs.midpoints()
    n = zs.n

    def cdf(x: float) -> float:
        lo, hi = 0, len(mids)
        while lo < hi:
            m = (lo + hi) // 2
            if mids[m] <= x:
                lo = m + 1
            else:
                hi = m
        return lo / n

    return cdf


def ks_distance(n: int, kind: str, iso_tol: float = 1e-7) -> float:
    """sup |empirical CDF - model CDF| for the degree-n zero measure.

    kind "nu" compares transformed-polynomial zeros to the limit measure on
    [-1, 1]; kind "mu" compares Apery-polynomial zeros to the measure on
    (-inf, 0].  Both use the exact jump locations, evaluated from each side.
    """
    if kind not in ("nu", "mu"):
        raise ValueError("kind must be 'nu' or 'mu'")
    p = apery_poly(n)
    zs = isolate_zeros(p, iso_tol=iso_tol)
    xs = zs.midpoints()  # negative-axis roots, ascending
    if kind == "nu":
        roots = sorted((1.0 + x) / (1.0 - x) for x in xs)
        model = measures.nu_cdf
    else:
        roots = xs
        model = measures.mu_cdf
    worst = 0.0
    for i, r in enumerate(roots):
        f = model(r)
        worst = max(worst, abs((i + 1) / n - f), abs(i / n - f))
    return worst
