import math
from fractions import Fraction

import pytest

from apery import zeros
from apery.exact import PolyKind, PolynomialZ, apery_poly, eval_sign, transformed_poly


def test_degree_one_root():
    zs = zeros.isolate_zeros(apery_poly(1), iso_tol=1e-12)
    assert zs.count == 1
    assert abs(zs.midpoints()[0] - (-0.25)) < 1e-11


def test_degree_two_roots_closed_form():
    zs = zeros.isolate_zeros(apery_poly(2), iso_tol=1e-12)
    expected = sorted([(-3 - 2 * math.sqrt(2)) / 6, (-3 + 2 * math.sqrt(2)) / 6])
    assert zs.count == 2
    for mid, want in zip(zs.midpoints(), expected):
        assert abs(mid - want) < 1e-10


def test_roots_inside_each_interval():
    p = apery_poly(6)
    zs = zeros.isolate_zeros(p, iso_tol=1e-9)
    for a, b in zs.intervals:
        assert a <= b
        if a < b:
            assert eval_sign(p, a) * eval_sign(p, b) < 0


@pytest.mark.parametrize("n", [1, 2, 5, 10, 25, 50, 100])
def test_transform_consistency(n):
    # roots of the transformed polynomial map onto the negative-axis roots
    za = zeros.isolate_zeros(apery_poly(n), iso_tol=1e-10)
    zt = zeros.isolate_zeros(transformed_poly(n), iso_tol=1e-10)
    assert za.count == zt.count == n
    assert za.domain is zeros.ZeroDomain.NEGATIVE_AXIS
    assert zt.domain is zeros.ZeroDomain.UNIT_INTERVAL
    mapped = sorted(float(zeros.transform_to_axis(Fraction(m).limit_denominator(10**12))) for m in zt.midpoints())
    for a, b in zip(mapped, za.midpoints()):
        assert abs(a - b) < 1e-7 * max(1.0, abs(b))


def test_counts_small_range():
    for n in range(1, 40):
        assert zeros.count_zeros(n) == n


def test_intervals_are_disjoint_and_sorted():
    zs = zeros.isolate_zeros(apery_poly(12), iso_tol=1e-9)
    for (a1, b1), (a2, b2) in zip(zs.intervals, zs.intervals[1:]):
        assert b1 < a2


def test_square_free_part_strips_multiplicity():
    # (x+1)^2 (x-2) = x^3 - 3x - 2
    sf = zeros.square_free_part((-2, -3, 0, 1))
    # expect (x+1)(x-2) = x^2 - x - 2 up to integer scaling
    ratio = {k: c for k, c in enumerate(sf)}
    assert len(sf) == 3
    scale = sf[2]
    assert sf == (-2 * scale, -1 * scale, scale)


def test_isolation_handles_multiple_roots_defensively():
    # (x - 1/2)^2 scaled to integers: 4x^2 - 4x + 1, masquerading as transformed
    p = PolynomialZ(coeffs=(1, -4, 4), kind=PolyKind.TRANSFORMED)
    zs = zeros.isolate_zeros(p, iso_tol=1e-6)
    assert zs.count == 1
    assert abs(zs.midpoints()[0] - 0.5) < 1e-5


def test_empirical_cdf_steps():
    zs = zeros.isolate_zeros(apery_poly(4), iso_tol=1e-9)
    cdf = zeros.empirical_cdf(zs)
    mids = zs.midpoints()
    assert cdf(mids[0] - 1.0) == 0.0
    assert cdf(mids[-1] + 1.0) == 1.0
    assert cdf(mids[1] + 1e-12) == pytest.approx(0.5)


def test_ks_distance_shrinks():
    k25 = zeros.ks_distance(25, "nu")
    k100 = zeros.ks_distance(100, "nu")
    assert k100 < k25
    assert k100 < 0.05
    # mu-side distance uses the same roots through the pushforward
    assert abs(zeros.ks_distance(25, "mu") - k25) < 0.02


def test_ks_distance_rejects_unknown_kind():
    with pytest.raises(ValueError):
        zeros.ks_distance(10, "sigma")
