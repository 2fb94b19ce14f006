"""End-to-end verification suite.

Each criterion function returns (passed, detail); :func:`run` prints one
line per criterion and reports overall success.  The same functions back
the acceptance tests and the ``selftest`` CLI subcommand, so there is a
single source of truth for what "working" means.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import mpmath as mp
import numpy as np

from . import asymptotics, measures, saddle, zeros
from .exact import apery_poly, apery_sequence_rec, apery_sequence_sum, eval_certified, eval_exact

RATIO_LIMIT = (1.0 + math.sqrt(2.0)) ** 4


def _rel_err_mp(exact: mp.mpf, approx: mp.mpf) -> float:
    return float(abs(exact / approx - 1))


def check_exact_cross(n_max: int = 200):
    """Recurrence and direct-sum sequences agree; small values match hand sums."""
    rec = apery_sequence_rec(n_max)
    direct = apery_sequence_sum(n_max)
    if rec.values != direct.values:
        bad = next(n for n, (a, b) in enumerate(zip(rec.values, direct.values)) if a != b)
        return False, f"sequences disagree first at n={bad}"
    known = {2: 73, 3: 1445, 4: 33001, 5: 819005}
    for n, v in known.items():
        if rec.values[n] != v:
            return False, f"b_{n} = {rec.values[n]}, expected {v}"
    return True, f"recurrence == direct sum for n <= {n_max}; b2..b5 spot-checked"


def check_ratio_limit(n: int = 2000):
    """b_{n+1}/b_n approaches (1+sqrt2)^4 at rate O(1/n)."""
    seq = apery_sequence_rec(n)
    with mp.workdps(30):
        ratio = mp.mpf(seq.values[n]) / seq.values[n - 1]
        err = float(abs(ratio / RATIO_LIMIT - 1))
    tol = 5.0 / n
    return err <= tol, f"|ratio/limit - 1| = {err:.3e} at n={n} (tol {tol:.2e})"


def check_cohen():
    """The classical b_n approximation: 5% at n=200, improving, and an identity."""
    seq = apery_sequence_rec(200)
    errs = {}
    for n in (50, 100, 200):
        with mp.workdps(40):
            errs[n] = _rel_err_mp(mp.mpf(seq.values[n]), asymptotics.cohen_approx(n))
    if errs[200] > 0.05:
        return False, f"relative error {errs[200]:.3g} > 0.05 at n=200"
    if not (errs[200] < errs[100] < errs[50]):
        return False, f"error not decreasing: {errs}"
    # identity: general leading term specialized at z=1 equals the classical form
    worst = 0.0
    for n in (5, 50, 200):
        with mp.workdps(40):
            lt = asymptotics.leading_term(n, 1)
            worst = max(worst, float(abs(lt.real / asymptotics.cohen_approx(n) - 1)))
    if worst > 1e-15:
        return False, f"closed forms disagree: {worst:.3g} > 1e-15"
    return True, f"err(50,100,200) = {errs[50]:.3g}, {errs[100]:.3g}, {errs[200]:.3g}; identity {worst:.1e}"


def check_leading_offaxis():
    """Leading-order approximation of B_n(z) off the cut: 5% at n=200, improving."""
    points = [2, 1 + 1j, 0.3, 3j]
    details = []
    for z in points:
        errs = {}
        for n in (50, 200):
            p = apery_poly(n)
            cert = eval_certified(p, z, rel_tol=1e-20)
            with mp.workdps(60):
                approx = asymptotics.leading_term(n, z, dps=60)
                errs[n] = float(abs(cert.value / approx - 1))
        if errs[200] > 0.05:
            return False, f"z={z}: error {errs[200]:.3g} > 0.05 at n=200"
        if errs[200] >= errs[50]:
            return False, f"z={z}: error not decreasing ({errs[50]:.3g} -> {errs[200]:.3g})"
        details.append(f"z={z}: {errs[200]:.3g}")
    return True, "; ".join(details)


def check_direct_integral():
    """Trapezoidal quadrature of the contour integral reproduces exact values."""
    cases = [(5, 1, 64), (8, 2, 96), (10, 1 + 1j, 96)]
    details = []
    for n, z, M in cases:
        prob = saddle.apery_saddle_problem(z)
        val = saddle.direct_integral(prob, n, M)
        p = apery_poly(n)
        if isinstance(z, complex) and z.imag != 0:
            exact = complex(eval_certified(p, z, rel_tol=1e-20).value)
        else:
            exact = complex(eval_exact(p, z))
        err = abs(val - exact) / abs(exact)
        if err > 1e-8:
            return False, f"(n={n}, z={z}, M={M}): relative error {err:.3g} > 1e-8"
        details.append(f"(n={n}, z={z}): {err:.2g}")
    return True, "; ".join(details)


def check_saddle_machinery():
    """Numeric saddle estimate matches the analytic leading term; Hessian determinant
    matches its closed form on a z-grid."""
    n = 100
    for z in (1, 2, 1 + 1j):
        prob = saddle.apery_saddle_problem(z)
        est = saddle.saddle_estimate(prob, n)
        with mp.workdps(60):
            lt = asymptotics.leading_term(n, z, dps=60)
            ratio = est.value.to_mpc(60) / lt
            err = float(abs(ratio - 1))
        if err > 1e-6:
            return False, f"z={z}: saddle estimate off by {err:.3g} > 1e-6"
    zs = list(np.linspace(0.2, 4.0, 12)) + [complex(re, im) for re in (0.5, 1.5) for im in (-1.0, -0.3, 0.3, 1.0)]
    worst = 0.0
    for z in zs[:20]:
        prob = saddle.apery_saddle_problem(z)
        H = saddle.numeric_hessian(prob.p, np.zeros(3))
        det_num = np.linalg.det(H)
        det_closed = saddle.apery_det_hess_closed(z)
        worst = max(worst, abs(det_num - det_closed) / abs(det_closed))
    if worst > 1e-6:
        return False, f"det Hess mismatch {worst:.3g} > 1e-6 on grid"
    return True, f"estimates within 1e-6 at 3 points; det Hess within {worst:.2g} on 20-point grid"


def check_modulus_max():
    """|integrand| peaks at the origin on a 101^3 grid for 25 sample z; on the cut the
    conjugate-saddle second maximum appears where the continued branches predict."""
    moduli = (0.2, 0.5, 1.0, 2.0, 5.0)
    args = (-2.2, -1.0, 0.0, 1.0, 2.2)
    M = 101
    for r in moduli:
        for th in args:
            z = r * cmath.exp(1j * th)
            if abs(th) < 1e-12:
                z = r
            rep = saddle.verify_modulus_max(z, M=M)
            if rep.argmax != (0.0, 0.0, 0.0) or not rep.strict:
                return False, f"z={z}: argmax {rep.argmax} (strict={rep.strict})"
    x = 0.125  # z = -1/8, on the cut; finer grid because the two maxima are tied
    M_cut = 201
    rep = saddle.verify_modulus_max(M=M_cut, continued_x=x)
    if len(rep.local_maxima) != 2:
        return False, f"cut: {len(rep.local_maxima)} grid-local maxima, expected 2"
    if (0.0, 0.0, 0.0) not in rep.local_maxima:
        return False, f"cut: origin is not a local maximum ({rep.local_maxima})"
    pt = asymptotics.NegativeAxisPoint.from_x(x)
    aa, ab = cmath.phase(pt.a_minus), cmath.phase(pt.b_minus)
    target = (-4 * aa, -2 * aa, -2 * ab)
    target = tuple((t + math.pi) % (2 * math.pi) - math.pi for t in target)
    cell = 2 * math.pi / (M_cut - 1)
    second = next(m for m in rep.local_maxima if m != (0.0, 0.0, 0.0))

    def per_dist(u, v):
        d = abs(u - v) % (2 * math.pi)
        return min(d, 2 * math.pi - d)

    dist = max(per_dist(a, b) for a, b in zip(second, target))
    if dist > cell:
        return False, f"cut: second maximum {second} is {dist:.3g} > one cell from {target}"
    return True, f"origin argmax at 25 sample z; cut second max within {dist / cell:.2f} cells of prediction"


def _gated_error(n: int, thetas) -> float:
    p = apery_poly(n)
    worst = 0.0
    gated = 0
    for th in thetas:
        x = Fraction(asymptotics.x_from_theta(th)).limit_denominator(10**6)
        form = asymptotics.oscillatory_approx(n, float(x))
        if abs(math.cos(form.phase)) < 0.5:
            continue
        gated += 1
        exact = eval_exact(p, -x)
        with mp.workdps(60):
            ex = mp.mpf(exact.numerator) / exact.denominator
            worst = max(worst, float(abs(ex / form.value(60) - 1)))
    if gated == 0:
        raise RuntimeError("no gated grid points; widen the theta grid")
    return worst


def check_oscillatory():
    """Envelope-cosine form on the negative axis: exact 2 Re identity, gated accuracy
    at n=200, improvement from n=50 to n=400, and zero prediction for n=50."""
    # algebraic identity against the continued leading term
    for n, x in ((10, 0.5), (50, 2.0), (200, 0.05)):
        form = asymptotics.oscillatory_approx(n, x)
        g = asymptotics.gn_continued(n, x)
        with mp.workdps(60):
            diff = abs(form.value(60) - 2 * g.real_part(60))
            rel = float(diff / mp.exp(mp.mpf(form.log_envelope)))
        if rel > 1e-9:
            return False, f"identity violated at (n={n}, x={x}): {rel:.3g} > 1e-9"
    thetas = np.linspace(0.15, 0.85, 10)
    e200 = _gated_error(200, thetas)
    if e200 > 0.1:
        return False, f"gated relative error {e200:.3g} > 0.1 at n=200"
    e50 = _gated_error(50, thetas)
    e400 = _gated_error(400, thetas)
    if e400 >= e50:
        return False, f"gated error not improving: {e50:.3g} -> {e400:.3g}"
    # predicted zeros vs exact isolated roots, compared in the theta coordinate
    zs = zeros.isolate_zeros(apery_poly(50), iso_tol=1e-9)
    exact_th = sorted(asymptotics.theta_from_x(-m) for m in zs.midpoints())
    worst_th = 0.0
    for th in asymptotics.predicted_zero_thetas(50):
        worst_th = max(worst_th, min(abs(th - e) for e in exact_th))
    if worst_th > 0.02:
        return False, f"predicted zero off by {worst_th:.3g} > 0.02 in theta"
    return True, f"identity ok; gated err n=50/200/400: {e50:.2g}/{e200:.2g}/{e400:.2g}; zeros within {worst_th:.1e}"


def check_zero_counts(n_max: int = 200):
    """Every B_n has exactly n simple negative roots; degree-2 roots in closed form."""
    for n in range(1, n_max + 1):
        c = zeros.count_zeros(n)
        if c != n:
            return False, f"n={n}: certified {c} roots"
    zs = zeros.isolate_zeros(apery_poly(2), iso_tol=1e-12)
    expected = sorted(((-3 - 2 * math.sqrt(2)) / 6, (-3 + 2 * math.sqrt(2)) / 6))
    worst = max(abs(m - e) for m, e in zip(zs.midpoints(), expected))
    if worst > 1e-10:
        return False, f"degree-2 roots off by {worst:.3g} > 1e-10"
    return True, f"all n <= {n_max} have n roots; degree-2 roots within {worst:.1e}"


def check_weak_star():
    """Zero-counting measures converge to the limit CDF; the two supports are
    consistent under the Moebius pushforward."""
    ks200 = zeros.ks_distance(200, "nu")
    ks25 = zeros.ks_distance(25, "nu")
    if ks200 > 0.05:
        return False, f"KS(200) = {ks200:.3g} > 0.05"
    if ks200 >= ks25:
        return False, f"KS not decreasing: KS(25)={ks25:.3g}, KS(200)={ks200:.3g}"
    worst = 0.0
    for x in (-0.1, -0.5, -1.0, -3.0, -10.0):
        y = (1 + x) / (1 - x)
        worst = max(worst, abs(measures.mu_cdf(x) - measures.nu_cdf(y)))
        dens = measures.nu_density(y) * 2.0 / (1 - x) ** 2
        worst = max(worst, abs(measures.mu_density(x) / dens - 1))
    if worst > 1e-8:
        return False, f"pushforward mismatch {worst:.3g} > 1e-8"
    return True, f"KS(25)={ks25:.3g} > KS(200)={ks200:.3g}; pushforward within {worst:.1e}"


def check_potentials():
    """Unit mass, closed-form potentials vs quadrature, equilibrium identity,
    and convergence of the discrete zero potentials."""
    mass_err = abs(measures.nu_mass() - 1.0)
    if mass_err > 1e-10:
        return False, f"nu mass off by {mass_err:.3g} > 1e-10"
    worst_pot = 0.0
    for z, kind in ((2.5, "nu"), (0.3 + 1.2j, "nu"), (3.0, "mu"), (-2 + 1j, "mu")):
        closed = measures.potential_nu(z) if kind == "nu" else measures.potential_mu(z)
        quadv = measures.potential_from_density(z, kind)
        worst_pot = max(worst_pot, abs(closed - quadv))
    if worst_pot > 1e-6:
        return False, f"potential quadrature mismatch {worst_pot:.3g} > 1e-6"
    worst_eq = max(abs(measures.equilibrium_residual(x)) for x in np.linspace(-0.99, 0.99, 50))
    if worst_eq > 1e-10:
        return False, f"equilibrium residual {worst_eq:.3g} > 1e-10"
    target = measures.potential_nu(2.0)
    e50 = abs(measures.potentials_from_zeros(50, 2.0) - target)
    e200 = abs(measures.potentials_from_zeros(200, 2.0) - target)
    if e200 > 0.02 or e200 >= e50:
        return False, f"discrete potential errors e50={e50:.3g}, e200={e200:.3g}"
    return True, (
        f"mass err {mass_err:.1e}; potentials within {worst_pot:.1e}; "
        f"equilibrium within {worst_eq:.1e}; discrete e50={e50:.2g} > e200={e200:.2g}"
    )


CRITERIA = [
    ("exact-cross-check", check_exact_cross),
    ("ratio-limit", check_ratio_limit),
    ("classical-approximation", check_cohen),
    ("leading-term-off-axis", check_leading_offaxis),
    ("quadrature-oracle", check_direct_integral),
    ("saddle-machinery", check_saddle_machinery),
    ("modulus-maximum", check_modulus_max),
    ("oscillatory-regime", check_oscillatory),
    ("zero-counts", check_zero_counts),
    ("weak-star-convergence", check_weak_star),
    ("potential-theory", check_potentials),
]


def run(verbose: bool = True) -> int:
    failures = 0
    for name, fn in CRITERIA:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failures += 1
    if verbose:
        print(f"{len(CRITERIA) - failures}/{len(CRITERIA)} criteria passed")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(run())
