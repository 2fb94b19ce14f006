import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from apery import asymptotics as asym
from apery.exact import apery_poly, apery_sequence_rec, eval_certified


def test_sqrt_principal_rejects_cut():
    with pytest.raises(asym.BranchCutDomainError):
        asym.sqrt_principal(-2.0)
    assert asym.sqrt_principal(4) == 2.0


def test_sqrt_upper_continues_from_above():
    assert asym.sqrt_upper(-4.0) == 2j
    assert asym.sqrt_upper(9.0) == 3.0


def test_branch_identities_on_grid():
    # a*b = sqrt(z) and b - a = 2 sqrt(z) pin the branch choices down
    for re in (-2.0, -0.5, 0.3, 1.0, 4.0):
        for im in (-1.5, 0.5, 2.0):
            z = complex(re, im)
            pt = asym.BranchedPoint.from_z(z)
            s = cmath.sqrt(z)
            assert abs(pt.a * pt.b - s) < 1e-12 * max(1, abs(s))
            assert abs(pt.b - pt.a - 2 * s) < 1e-12 * max(1, abs(s))


def test_negative_axis_point_identities():
    for x in (0.01, 0.125, 1.0, 7.5):
        pt = asym.NegativeAxisPoint.from_x(x)
        isx = 1j * math.sqrt(x)
        assert abs(pt.a_minus * pt.b_minus - isx) < 1e-12
        assert abs(pt.b_minus - pt.a_minus - 2 * isx) < 1e-12


def test_theta_x_round_trips():
    for th in np.linspace(0.02, 0.98, 25):
        x = asym.x_from_theta(th)
        assert abs(asym.theta_from_x(x) - th) < 1e-14
    for x in (1e-4, 0.1, 1.0, 50.0):
        assert abs(asym.x_from_theta(asym.theta_from_x(x)) - x) < 1e-12 * max(1, x)


def test_phase_shift_limits():
    # theta -> 0+: both arctan arguments have simple limits, f -> -3 pi / 8
    assert abs(asym.phase_shift(1e-9) - (-3 * math.pi / 8)) < 1e-6
    # midpoint value by direct substitution into the two-arctan expression
    c = math.pi / 4
    expected = 2 * math.atan(math.tan(c) * (1 + math.sin(c)) / (2 + math.sin(c))) - 1.5 * math.atan(1 / math.cos(c))
    assert abs(asym.phase_shift(0.5) - expected) < 1e-15
    assert abs(expected - (-0.3077399)) < 1e-6


def test_cohen_is_leading_term_at_one():
    for n in (1, 10, 100):
        with mp.workdps(40):
            lt = asym.leading_term(n, 1)
            assert abs(lt.imag) < 1e-30 * abs(lt.real)
            assert abs(lt.real / asym.cohen_approx(n) - 1) < 1e-15


def test_leading_term_rejects_cut_and_small_n():
    with pytest.raises(asym.BranchCutDomainError):
        asym.leading_term(10, -1.0)
    with pytest.raises(ValueError):
        asym.leading_term(0, 2.0)


def test_leading_term_error_halves_roughly():
    seq = apery_sequence_rec(200)
    errs = {}
    for n in (50, 100, 200):
        with mp.workdps(40):
            errs[n] = float(abs(mp.mpf(seq.values[n]) / asym.leading_term(n, 1).real - 1))
    assert errs[200] < errs[100] < errs[50]
    assert 0.3 < errs[100] / errs[50] < 0.7  # approximately halves


def test_oscillatory_equals_twice_real_part():
    for n, x in ((5, 0.3), (40, 1.5), (150, 0.08)):
        form = asym.oscillatory_approx(n, x)
        g = asym.gn_continued(n, x)
        with mp.workdps(60):
            rel = float(abs(form.value(60) - 2 * g.real_part(60)) / mp.exp(mp.mpf(form.log_envelope)))
        assert rel < 1e-10


def test_oscillatory_matches_exact_when_gated():
    n = 100
    p = apery_poly(n)
    checked = 0
    for th in np.linspace(0.2, 0.8, 7):
        x = asym.x_from_theta(th)
        form = asym.oscillatory_approx(n, x)
        if abs(math.cos(form.phase)) < 0.5:
            continue
        checked += 1
        cert = eval_certified(p, complex(-x), rel_tol=1e-20)
        with mp.workdps(60):
            assert abs(float(cert.value.real / form.value(60)) - 1) < 0.1
    assert checked >= 3


def test_domain_warning_outside_safe_window():
    assert asym.oscillatory_approx(5, asym.x_from_theta(0.01)).domain_warning
    assert not asym.oscillatory_approx(5, asym.x_from_theta(0.5)).domain_warning


def test_predicted_zero_counts():
    for n in (1, 2, 10, 50):
        assert len(asym.predicted_zero_thetas(n)) == n
        # separators bracket the zeros
        seps = asym.separator_thetas(n)
        zs = asym.predicted_zero_thetas(n)
        for lo, hi, z in zip(seps, seps[1:], zs):
            assert lo < z < hi


def test_predicted_zero_out_of_range():
    with pytest.raises(IndexError):
        asym.predicted_zero(3, 10)


def test_log_complex_round_trip():
    w = complex(-2.5, 1.25)
    lc = asym.LogComplex.from_complex(w)
    assert abs(complex(lc.to_mpc(30)) - w) < 1e-14
    prod = lc * asym.LogComplex.from_complex(2j)
    assert abs(complex(prod.to_mpc(30)) - w * 2j) < 1e-13
