import warnings
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpc, mpf

from zetaforms.asymptotics import (
    PhaseFunction,
    RootFindingError,
    UncertifiedWarning,
    analyze,
    check_condition19,
    closeness_bound,
    coeff_bound_sharp,
    coeff_bound_simple,
    contour_I,
    critical_polynomial,
    critical_roots,
    edge_J,
    find_roots,
    imaginary_axis_roots,
    kappa,
    kappa_at,
    mu0,
    mu1,
    rescaled_sum,
    rescaling_prefactor,
    saddle_integral,
    select_eta,
    select_mu,
    solve_saddle,
    vb_polynomial,
    vertical_J,
)
from zetaforms.asymptotics.saddle import kappa_edge, mu1_log_gap
from zetaforms.exactnum import PrecisionContext
from zetaforms.formbuilder import FormParameters, build_form, eval_series

CTX = PrecisionContext(40)

# frozen from sympy.nroots at 60 digits and direct evaluation of the log terms
MU1_713 = "3.024715362615331545532987203929664779105"
MU1_313 = "3.769761603991421973515114744163357511294"
ETA_713 = "0.2079198103611448338892704760189160661419"
ETA_313 = "0.4594589763275700615881975822930667212964"
KAPPA_313 = "-3.98556158620131160407137419163"
KAPPA_713 = "-15.5649748292683904921772572466"

odd_triples = st.builds(
    lambda b, c, extra: (b * (c - 1) + 1 + 2 * extra, b, c),
    st.sampled_from([1, 3, 5]), st.sampled_from([3, 5, 7]), st.integers(0, 6),
)


@pytest.fixture(autouse=True)
def working_precision():
    # the comparisons below must not round to the default 15 digits
    with mpmath.workdps(60):
        yield


def close(x, y, digits):
    return abs(x - y) <= mpf(10) ** -digits * max(1, abs(y))


# ------------------------------------------------------------- polynomial


def _exact_residual_ok(coeffs, z, digits):
    """|P(z)| < 10^(15-digits) |lead|, decided in integers at the binary value of z.

    With z = (x + iy) / 2^E, Horner on D^d P(z) with D = 2^E stays integral.
    """
    parts = []
    for v in (z.real, z.imag):
        # the mpf is used as is: mpf() would round to the ambient precision
        man, exp = v.man_exp if v != 0 else (0, 0)
        parts.append((-man if v < 0 else man, exp))
    E = -min(exp for _, exp in parts)
    x, y = (man * 2 ** (exp + E) for man, exp in parts)
    d = len(coeffs) - 1
    ar = ai = 0
    for j in range(d, -1, -1):
        ar, ai = ar * x - ai * y + coeffs[j] * 2 ** (E * (d - j)), ar * y + ai * x
    # |P| <= (|Re| + |Im|)
    return (abs(ar) + abs(ai)) * 10 ** (digits - 15) < abs(coeffs[-1]) * 2 ** (E * d)


@given(odd_triples)
@settings(max_examples=40, deadline=None)
def test_critical_polynomial_is_even(abc):
    poly = critical_polynomial(*abc)
    assert poly.is_even()
    assert poly.degree == abc[0] + 2 * abc[1] - 1 or poly.degree % 2 == 0


def test_critical_polynomial_against_sympy():
    tau = sympy.Symbol("tau")
    for a, b, c in [(7, 1, 3), (19, 3, 3), (13, 3, 5)]:
        expr = sympy.expand((tau + c) ** b * (tau - 1) ** (a + b) - (tau - c) ** b * (tau + 1) ** (a + b))
        ref = sympy.Poly(expr, tau).all_coeffs()[::-1]
        assert list(critical_polynomial(a, b, c).coefficients) == [int(v) for v in ref]


def test_find_roots_on_constructed_factors():
    # (x-1)(x-2)(x^2+1)(x+3/2 scaled) = (x-1)(x-2)(x^2+1)(2x+3)
    coeffs = [int(v) for v in sympy.Poly(sympy.expand(
        (sympy.Symbol("x") - 1) * (sympy.Symbol("x") - 2) * (sympy.Symbol("x") ** 2 + 1)
        * (2 * sympy.Symbol("x") + 3)), sympy.Symbol("x")).all_coeffs()[::-1]]
    roots = find_roots(coeffs, CTX)
    expected = [mpc(-1.5), mpc(0, -1), mpc(0, 1), mpc(1), mpc(2)]
    with mpmath.workdps(50):
        for r in expected:
            assert min(abs(z - r) for z in roots) < mpf(10) ** -35


def test_find_roots_rejects_constants():
    with pytest.raises(ValueError):
        find_roots([5], CTX)


@pytest.mark.parametrize("abc", [(3, 1, 3), (7, 1, 3), (19, 3, 3), (33, 5, 3), (145, 1, 21)])
def test_root_residuals_and_symmetry(abc):
    poly = critical_polynomial(*abc)
    roots = critical_roots(poly, CTX)
    assert len(roots) == poly.degree
    for z in roots:
        assert _exact_residual_ok(poly.coefficients, z, CTX.digits)
    tol = mpf(10) ** -20
    for z in roots:
        assert min(abs(w - mpmath.conj(z)) for w in roots) < tol
        assert min(abs(w + z) for w in roots) < tol


def test_mu1_713_matches_published_value():
    m1 = mu1(7, 1, 3, CTX)
    assert abs(m1 - mpf("3.02472")) < mpf("0.5e-5")
    assert close(m1, mpf(MU1_713), 35)
    roots = critical_roots(critical_polynomial(7, 1, 3), CTX)
    in_window = [z for z in roots if abs(z.imag) < 1e-20 and 3 < z.real <= 3.125]
    assert len(in_window) == 1
    assert close(in_window[0].real, m1, 30)


def test_mu1_313_against_frozen_oracle():
    assert close(mu1(3, 1, 3, CTX), mpf(MU1_313), 35)


@pytest.mark.parametrize("b", [1, 3, 5])
def test_mu1_shared_by_the_7b_family(b):
    assert close(mu1(7 * b, b, 3, CTX), mu1(7, 1, 3, CTX), 30)


def test_mu1_log_gap_survives_tiny_gaps():
    # a >> c pushes mu_1 - c far below the resolution of c at low precision
    x = mu1_log_gap(20737, 1, 865, CTX)
    assert x < -30
    with mpmath.workdps(80):
        root = 865 + mpmath.exp(x)
        assert close(kappa_edge(20737, 1, 865, CTX), kappa_at(20737, 1, 865, root), 25)


# ------------------------------------------------------------- selection


def test_select_mu_b1_is_mu1():
    roots = critical_roots(critical_polynomial(7, 1, 3), CTX)
    assert close(select_mu(roots, 1, 3, CTX).real, mu1(7, 1, 3, CTX), 30)


def test_select_mu_b3_has_positive_imaginary_part():
    roots = critical_roots(critical_polynomial(19, 3, 3), CTX)
    mu = select_mu(roots, 3, 3, CTX)
    assert mu.imag > 0
    assert all(z.real <= mu.real + 1e-30 for z in roots if z.imag > 1e-20)


def test_select_mu_conjugate_invariance():
    roots = critical_roots(critical_polynomial(19, 3, 3), CTX)
    conj = [mpmath.conj(z) for z in roots]
    # the rule picks from the upper half plane, which conjugation maps onto itself as a set
    assert close(select_mu(conj, 3, 3, CTX), select_mu(roots, 3, 3, CTX), 25)


def test_select_mu_tie_break_prefers_smaller_imaginary_part():
    roots = [mpc(2, 3), mpc(2, 1), mpc(1, 0.5), mpc(2, -1)]
    assert select_mu(roots, 3, 3, CTX) == mpc(2, 1)


@pytest.mark.parametrize("abc,frozen", [((7, 1, 3), ETA_713), ((3, 1, 3), ETA_313)])
def test_eta_against_imaginary_axis_scan(abc, frozen):
    roots = critical_roots(critical_polynomial(*abc), CTX)
    eta = select_eta(roots, CTX)
    assert eta.real == 0
    scan = imaginary_axis_roots(*abc, ctx=CTX)
    assert close(eta.imag, min(scan), 30)
    assert close(eta.imag, mpf(frozen), 35)
    assert min(abs(z + eta) for z in roots) < 1e-25


def test_eta_exists_for_large_triple():
    roots = critical_roots(critical_polynomial(145, 1, 21), CTX)
    assert select_eta(roots, CTX).imag > 0


# ---------------------------------------------------------------- closeness


def test_closeness_condition():
    assert closeness_bound(7, 1, 3) == Fraction(25, 8)
    assert check_condition19(7, 1, 3, mu1(7, 1, 3, CTX))
    assert check_condition19(19, 3, 3, mu1(19, 3, 3, CTX))
    assert not check_condition19(3, 1, 3, mu1(3, 1, 3, CTX))


@given(odd_triples)
def test_closeness_allowance_shrinks_with_a(abc):
    a, b, c = abc
    assert closeness_bound(a + 2, b, c) <= closeness_bound(a, b, c)


# ---------------------------------------------------------------- kappa


def test_kappa_values():
    assert close(kappa(7, 1, 3, CTX), mpf(KAPPA_713), 25)
    assert abs(kappa(7, 1, 3, CTX) - mpf("-15.57")) < mpf("0.01")
    with pytest.warns(UncertifiedWarning):
        assert close(kappa(3, 1, 3, CTX), mpf(KAPPA_313), 25)


def test_kappa_edge_matches_modulus_formula():
    m1 = mu1(7, 1, 3, CTX)
    assert close(kappa_edge(7, 1, 3, CTX), kappa_at(7, 1, 3, m1), 25)


@pytest.mark.parametrize("abc", [(19, 3, 3), (33, 5, 3), (47, 7, 3), (7, 1, 3), (21, 3, 3), (35, 5, 3)])
def test_kappa_negative_on_certificate_triples(abc):
    with warnings.catch_warnings():
        warnings.simplefilter("error", UncertifiedWarning)
        assert kappa(*abc, CTX) < 0


def test_bounds():
    assert close(coeff_bound_simple(3, 1, 3, CTX), 6 * mpmath.log(3) + 2 * mpmath.log(2), 35)
    for abc in [(3, 1, 3), (7, 1, 3), (19, 3, 3), (13, 3, 5), (145, 1, 21)]:
        assert coeff_bound_sharp(*abc, CTX) <= coeff_bound_simple(*abc, CTX)


def test_coefficient_growth_below_bounds():
    simple = coeff_bound_simple(3, 1, 3, CTX)
    sharp = coeff_bound_sharp(3, 1, 3, CTX)
    top = []
    for n in (5, 10, 15, 20):
        _, form = build_form(FormParameters(3, 1, 3, n))
        for A in [form.A0, *form.As.values()]:
            growth = mpmath.log(abs(mpf(A.numerator) / A.denominator)) / n
            assert growth <= simple + mpf("0.2")
        top.append(sharp - mpmath.log(abs(mpf(form.As[3].numerator) / form.As[3].denominator)) / n)
    assert all(gap > 0 for gap in top)
    assert top[-1] < top[0]


def test_analyze_report():
    rep = analyze(7, 1, 3, CTX)
    assert 1 < rep.mu0 < 3 < rep.mu1
    assert rep.condition19
    assert rep.boundSharp <= rep.boundSimple
    assert rep.eta.real == 0 and rep.eta.imag > 0


# ---------------------------------------------------------------- phase


@given(odd_triples, st.floats(min_value=0.01, max_value=0.99))
@settings(max_examples=40, deadline=None)
def test_phase_real_on_interval(abc, frac):
    a, b, c = abc
    phase = PhaseFunction(a, b, c)
    with mpmath.workdps(30):
        tau = 1 + (c - 1) * mpf(frac)
        for value in (phase.f(tau), phase.f0(tau), phase.g(tau), phase.fprime(tau)):
            assert abs(mpmath.im(value)) < mpf(10) ** -25


def test_sign_of_re_fprime_around_c():
    for a, b, c in [(7, 1, 3), (19, 3, 3)]:
        phase = PhaseFunction(a, b, c)
        gap = mu1(a, b, c, CTX) - c
        with mpmath.workdps(30):
            for k in range(1, 12):
                direction = mpmath.expjpi(mpf(k) / 12)
                assert phase.re_fprime(c + gap / 4 * direction) > 0
                assert phase.re_fprime(c + 2 * gap * direction) < 0


def test_vb_polynomials():
    assert vb_polynomial(1).coefficients == [0, 1]
    assert vb_polynomial(2).coefficients == [1]
    assert vb_polynomial(3).coefficients == [0, 1]
    for b in (1, 3, 5, 7):
        vb = vb_polynomial(b)
        assert all(v == 0 for v in vb.coefficients[0::2])
        assert all(k % 2 == 1 for k in vb.expCoeffs)
        assert all(vb.expCoeffs[k] == vb.expCoeffs[-k] for k in vb.expCoeffs)
        assert vb.degree == max(1, b - 2)
    assert vb_polynomial(1).expCoeffs == {-1: Fraction(1, 2), 1: Fraction(1, 2)}


@pytest.mark.parametrize("b", [1, 3, 5])
def test_cot_b_is_scaled_derivative_of_cot(b):
    z = mpf("0.37")
    with mpmath.workdps(40):
        vb = vb_polynomial(b)
        lhs = vb(mpmath.cos(z)) / mpmath.sin(z) ** b
        rhs = (-1) ** (b - 1) * mpmath.diff(mpmath.cot, z, b - 1) / mpmath.factorial(b - 1)
        assert abs(lhs - rhs) < mpf(10) ** -30


# ---------------------------------------------------------------- saddles


def test_mu0_is_zero_of_fprime():
    m0 = mu0(7, 1, 3, CTX)
    assert 1 < m0 < 3
    with mpmath.workdps(50):
        x = mpf(m0)
        lhs = ((x + 3) / (3 - x)) * ((x - 1) / (x + 1)) ** 8
        assert abs(lhs - 1) < mpf(10) ** -30


@pytest.mark.parametrize("abc,lam", [((7, 3, 3), 1), ((19, 3, 3), 1), ((33, 5, 3), 3)])
def test_saddle_equation_and_conjugacy(abc, lam):
    tau = solve_saddle(lam, *abc, CTX)
    phase = PhaseFunction(*abc)
    assert tau.imag > 0 and tau.real > 0
    assert abs(phase.fprime(tau) - mpc(0, lam * mpmath.pi)) < CTX.tol
    assert close(solve_saddle(-lam, *abc, CTX), mpmath.conj(tau), 30)


def test_saddle_endpoints():
    assert close(solve_saddle(1, 7, 1, 3, CTX).real, mu1(7, 1, 3, CTX), 30)
    assert close(solve_saddle(0, 7, 1, 3, CTX).real, mu0(7, 1, 3, CTX), 30)
    with pytest.raises(ValueError):
        solve_saddle(2, 7, 1, 3, CTX)


def test_J_at_zero_is_real():
    J = saddle_integral(10, 0, 7, 3, 3, CTX)
    assert abs(J.imag) <= abs(J.real) * mpf(10) ** -25


def test_saddle_ratio_improves():
    from zetaforms.asymptotics import saddle_asymptotic_check

    devs = [abs(saddle_asymptotic_check(n, 1, 7, 3, 3, CTX) - 1) for n in (10, 20, 40)]
    assert devs[2] < devs[1] < devs[0]


# ---------------------------------------------------------------- contour checks


@pytest.mark.parametrize("abc,n", [((7, 1, 3), 5), ((3, 1, 3), 4)])
def test_edge_contour_against_vertical_line(abc, n):
    # two independent routes to J_{n,b}: the cut-bank contour and a vertical line in (1, c)
    edge = edge_J(n, *abc, CTX)
    for x0 in (mpf(2), mpf("1.5")):
        line = vertical_J(n, abc[1], *abc, x0=x0, ctx=CTX)
        assert abs(edge - line) <= abs(edge) * mpf(10) ** -20


def test_rescaled_sum_tracks_series_b1():
    # b = 1: the endpoint saddles dominate and the ratio tends to 1 like 1/n
    ratios = []
    for n in (10, 20, 40):
        I = eval_series(FormParameters(3, 1, 3, n), CTX)
        ratios.append(I / (rescaling_prefactor(n, 3, 1, 3) * rescaled_sum(n, 3, 1, 3, CTX)))
    devs = [abs(r - 1) for r in ratios]
    assert devs[2] < devs[1] < devs[0] < mpf("0.01")


def test_rescaled_sum_scaled_error_bounded_b3():
    # b > 1: the sum oscillates, so the error is measured against |J_{n,b}|
    scaled = []
    for n in (10, 20, 40):
        I = eval_series(FormParameters(7, 3, 3, n), CTX)
        pref = rescaling_prefactor(n, 7, 3, 3)
        err = abs(I / pref - rescaled_sum(n, 7, 3, 3, CTX))
        scaled.append(n * err / abs(edge_J(n, 7, 3, 3, CTX)))
    assert max(scaled) < 5


@pytest.mark.parametrize("abcn", [(3, 1, 3, 2), (7, 1, 3, 1)])
def test_contour_matches_series(abcn):
    ctx = PrecisionContext(64)
    params = FormParameters(*abcn)
    ref = eval_series(params, ctx)
    n, c = params.n, params.c
    for M in (n + mpf(1) / 2, mpf(n + c * n) / 2, c * n - mpf(1) / 2):
        assert abs(contour_I(params, M, ctx) - ref) <= abs(ref) * mpf(10) ** -25


def test_contour_rejects_bad_M():
    with pytest.raises(ValueError):
        contour_I(FormParameters(3, 1, 3, 2), 1, CTX)


def test_root_failure_is_reported():
    with pytest.raises(RootFindingError):
        find_roots([1, 0, 1], CTX, max_iter=0)
