import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from apery import saddle
from apery.asymptotics import NegativeAxisPoint, leading_term, oscillatory_approx
from apery.exact import apery_poly, eval_certified, eval_exact


def gaussian_problem():
    # one-dimensional sanity case: integral of e^{-n t^2 / 2} over [-pi, pi]
    return saddle.SaddleProblem(
        r=1,
        p=lambda t: 0.5 * complex(t[0]) ** 2,
        q=lambda t: 1.0 + 0j,
        box=((-math.pi, math.pi),),
        saddle=(0.0,),
        periodic=False,
    )


def test_gaussian_estimate():
    prob = gaussian_problem()
    est = saddle.saddle_estimate(prob, 400)
    expected = math.sqrt(2 * math.pi / 400)
    assert abs(float(est.value.real_part()) / expected - 1) < 1e-10


def test_numeric_gradient_trivial():
    grad, err = saddle.numeric_gradient(lambda t: t[0] ** 2 + 3 * t[1], np.array([0.5, 0.0]))
    assert abs(grad[0] - 1.0) < 1e-9
    assert abs(grad[1] - 3.0) < 1e-9
    assert err < 1e-8


def test_numeric_hessian_trivial():
    H = saddle.numeric_hessian(lambda t: t[0] ** 2 + 1.5 * t[1] ** 2, np.zeros(2))
    assert np.allclose(H, np.diag([2.0, 3.0]), atol=1e-7)
    He = saddle.numeric_hessian(lambda t: cmath.exp(t[0]), np.zeros(1))
    assert abs(He[0, 0] - 1.0) < 1e-7


def test_validate_saddle_accepts_origin():
    prob = saddle.apery_saddle_problem(2.0)
    saddle.validate_saddle(prob)  # should not raise


def test_validate_saddle_rejects_nonstationary():
    prob = saddle.SaddleProblem(
        r=1,
        p=lambda t: complex(t[0]),
        q=lambda t: 1.0 + 0j,
        box=((-1.0, 1.0),),
        saddle=(0.0,),
        periodic=False,
    )
    with pytest.raises(saddle.NotSimpleSaddleError):
        saddle.validate_saddle(prob)


def test_closed_hessian_matches_numeric():
    for z in (0.5, 2.0, 1 + 1j, 0.3 - 0.7j):
        prob = saddle.apery_saddle_problem(z)
        H = saddle.numeric_hessian(prob.p, np.zeros(3))
        assert np.allclose(H, prob.hessian_closed, atol=1e-6)
        det = np.linalg.det(np.asarray(prob.hessian_closed, dtype=complex))
        assert abs(det - saddle.apery_det_hess_closed(z)) < 1e-10 * abs(det)


def test_sqrt_det_branch_is_continuous_along_rays():
    # a branch flip would negate the root (a ~200% jump); smooth variation on
    # this grid stays far below 50% between neighbouring points
    for phi in (0.0, 1.0, 2.5):
        prev = None
        for rad in np.linspace(0.2, 3.0, 25):
            z = rad * cmath.exp(1j * phi)
            H = np.asarray(saddle.apery_saddle_problem(z).hessian_closed, dtype=complex)
            root, cert = saddle.sqrt_det_continued(H)
            assert abs(root**2 - np.linalg.det(H)) < 1e-10 * abs(np.linalg.det(H))
            assert cert.steps >= 1
            if prev is not None:
                assert abs(root / prev - 1) < 0.50
            prev = root


def test_saddle_estimate_matches_leading_term():
    n = 100
    for z in (1.0, 2.0, 1 + 1j):
        est = saddle.saddle_estimate(saddle.apery_saddle_problem(z), n)
        with mp.workdps(60):
            assert abs(est.value.to_mpc(60) / leading_term(n, z, dps=60) - 1) < 1e-6


def test_direct_integral_reproduces_exact_values():
    for n, z, M in ((5, 1.0, 64), (8, 2.0, 96), (10, 1 + 1j, 96)):
        prob = saddle.apery_saddle_problem(z)
        val = saddle.direct_integral(prob, n, M)
        p = apery_poly(n)
        exact = complex(eval_certified(p, z, rel_tol=1e-20).value) if z.imag else complex(eval_exact(p, z))
        assert abs(val - exact) < 1e-8 * abs(exact)


def test_direct_integral_converges_with_grid():
    prob = saddle.apery_saddle_problem(2.0)
    exact = complex(eval_exact(apery_poly(6), 2))
    errs = [abs(saddle.direct_integral(prob, 6, M) - exact) / abs(exact) for M in (16, 32, 64)]
    assert errs[2] < errs[1] < errs[0]
    assert errs[2] < 1e-10


def test_direct_integral_checked_agrees():
    prob = saddle.apery_saddle_problem(1.0)
    val, diff = saddle.direct_integral_checked(prob, 5, 48)
    assert diff < 1e-10 * abs(val)


def test_generic_trapezoid_path_matches_fast_path():
    z = 1.5
    fast = saddle.apery_saddle_problem(z)
    generic = saddle.SaddleProblem(
        r=fast.r,
        p=fast.p,
        q=fast.q,
        box=fast.box,
        saddle=fast.saddle,
        periodic=True,
        normalization=fast.normalization,
    )
    a = saddle.direct_integral(fast, 4, 32)
    b = saddle.direct_integral(generic, 4, 32)
    assert abs(a - b) < 1e-12 * abs(a)


def test_modulus_max_off_cut():
    for z in (1.0, 2.0, 0.5 + 0.5j, 3j):
        rep = saddle.verify_modulus_max(z, M=51)
        assert rep.argmax == (0.0, 0.0, 0.0)
        assert rep.strict
        assert rep.max_value == rep.value_at_origin


def test_modulus_max_on_cut_second_peak():
    x = 0.125
    rep = saddle.verify_modulus_max(M=201, continued_x=x)
    assert len(rep.local_maxima) == 2
    assert (0.0, 0.0, 0.0) in rep.local_maxima
    pt = NegativeAxisPoint.from_x(x)
    aa, ab = cmath.phase(pt.a_minus), cmath.phase(pt.b_minus)
    target = tuple((t + math.pi) % (2 * math.pi) - math.pi for t in (-4 * aa, -2 * aa, -2 * ab))
    second = next(m for m in rep.local_maxima if m != (0.0, 0.0, 0.0))
    cell = 2 * math.pi / 200
    for got, want in zip(second, target):
        d = abs(got - want) % (2 * math.pi)
        assert min(d, 2 * math.pi - d) <= cell


def test_modulus_max_validates_grid():
    with pytest.raises(ValueError):
        saddle.verify_modulus_max(1.0, M=50)


def test_negative_axis_estimate_equals_oscillatory():
    for n, x in ((50, 0.5), (120, 2.0)):
        est = saddle.negative_axis_estimate(x, n)
        form = oscillatory_approx(n, x)
        with mp.workdps(60):
            rel = float(abs(est - form.value(60)) / mp.exp(mp.mpf(form.log_envelope)))
        assert rel < 1e-9
