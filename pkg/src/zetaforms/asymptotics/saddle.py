"""Root classes of the critical polynomial, the decay rate kappa, the
coefficient-growth bounds, and saddle points of f'(tau) = lambda*pi*i."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import mpmath
from mpmath import mpc, mpf

from ..exactnum import PrecisionContext, _ctx
from ..formbuilder import validate_triple
from .phase import PhaseFunction
from .polynomial import critical_polynomial, critical_roots


class RootSelectionError(ArithmeticError):
    pass


class SaddleError(ArithmeticError):
    pass


class UncertifiedWarning(UserWarning):
    """The closeness condition on mu_1 fails, so kappa is not certified."""


def _tie_tol(ctx: PrecisionContext) -> mpf:
    return mpf(10) ** (-(ctx.digits // 2))


def select_mu(roots: Sequence[mpc], b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpc:
    """The kappa-defining root.

    b = 1: smallest real root above c. b > 1: among roots with Im > 0 the one
    of largest real part; near-ties go to the smaller imaginary part.
    """
    ctx = _ctx(ctx)
    tol = _tie_tol(ctx)
    if b == 1:
        real = [z for z in roots if abs(z.imag) < tol and z.real > c]
        if not real:
            raise RootSelectionError("no real root in (c, inf)")
        return min(real, key=lambda z: z.real)
    upper = [z for z in roots if z.imag > tol]
    if not upper:
        raise RootSelectionError("no root with Im > 0")
    top = max(z.real for z in upper)
    ties = [z for z in upper if top - z.real < tol]
    return min(ties, key=lambda z: (z.imag, z.real))


def select_eta(roots: Sequence[mpc], ctx: Optional[PrecisionContext] = None) -> mpc:
    """Purely imaginary root with Im > 0 of smallest modulus."""
    ctx = _ctx(ctx)
    tol = _tie_tol(ctx)
    axis = [z for z in roots if abs(z.real) < tol and z.imag > tol]
    if not axis:
        raise RootSelectionError("no root on the positive imaginary axis")
    best = min(axis, key=abs)
    return mpc(0, best.imag)


def mu1_log_gap(a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """log(mu_1 - c), where mu_1 is the real root of the critical polynomial in (c, inf).

    On tau > c the polynomial vanishes exactly where
    F(tau) = b log((tau+c)/(tau-c)) - (a+b) log((tau+1)/(tau-1)) does; F runs
    from +inf down to a single minimum and back up to 0-, so the root is
    unique. It is solved for x = log(tau - c), which keeps full relative
    accuracy even when the gap is far below the working precision of c.
    """
    validate_triple(a, b, c)
    ctx = _ctx(ctx)
    with ctx.workdps(20):
        log = mpmath.log

        def F(x):
            delta = mpmath.exp(x)
            return b * (log(2 * c + delta) - x) - (a + b) * (log(c + 1 + delta) - log(c - 1 + delta))

        hi = mpf(0)
        while F(hi) > 0:
            hi += 2
        lo = hi - 4
        while F(lo) < 0:
            lo -= 4
        return mpmath.findroot(F, (lo, hi), solver="anderson")


def mu1(a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """The real root of the critical polynomial in (c, inf); see mu1_log_gap."""
    ctx = _ctx(ctx)
    x = mu1_log_gap(a, b, c, ctx)
    with ctx.workdps(20):
        return c + mpmath.exp(x)


def kappa_edge(a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """Re f_0(mu_1) with log|mu_1 - c| taken from the log-gap solve."""
    ctx = _ctx(ctx)
    x = mu1_log_gap(a, b, c, ctx)
    ab = a + b
    with ctx.workdps(20):
        delta = mpmath.exp(x)
        log = mpmath.log
        return (2 * (ab - b * c) * mpmath.ln2 + b * c * (log(2 * c + delta) + x)
                - ab * (log(c + 1 + delta) + log(c - 1 + delta)))


def mu0(a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """The real zero of f' in (1, c); f' increases strictly there."""
    validate_triple(a, b, c)
    ctx = _ctx(ctx)
    phase = PhaseFunction(a, b, c)
    with ctx.workdps(20):
        lo, hi = mpf(1), mpf(c)
        eps = mpf(10) ** (-(ctx.digits + 15))
        # bisection to a safe bracket, then a bracketing solver
        for _ in range(60):
            mid = (lo + hi) / 2
            if phase.fprime(mid) < 0:
                lo = mid
            else:
                hi = mid
        return mpmath.findroot(phase.fprime, (lo, hi), solver="anderson", tol=eps**2)


def closeness_bound(a: int, b: int, c: int) -> Fraction:
    return c + Fraction(c * c - 1, 4) * min(Fraction(b, 2 * (a + b)), Fraction(1, 3 * c))


def check_condition19(a: int, b: int, c: int, mu_1) -> bool:
    return mu_1 <= mpf(closeness_bound(a, b, c).numerator) / closeness_bound(a, b, c).denominator


def kappa_at(a: int, b: int, c: int, mu) -> mpf:
    """Re f_0(mu) via moduli."""
    return PhaseFunction(a, b, c).re_f0(mu)


def kappa_root(a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None):
    """The root defining kappa; b = 1 skips the full root solve."""
    ctx = _ctx(ctx)
    if b == 1:
        return mu1(a, b, c, ctx)
    roots = critical_roots(critical_polynomial(a, b, c), ctx)
    return select_mu(roots, b, c, ctx)


def kappa(a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """kappa = Re f_0(mu). Warns with UncertifiedWarning when mu_1 is too far from c."""
    ctx = _ctx(ctx)
    with ctx.workdps(10):
        if not check_condition19(a, b, c, mu1(a, b, c, ctx)):
            warnings.warn(f"closeness condition fails for {(a, b, c)}; kappa is uncertified",
                          UncertifiedWarning, stacklevel=2)
        if b == 1:
            return kappa_edge(a, b, c, ctx)
        return kappa_at(a, b, c, kappa_root(a, b, c, ctx))


def coeff_bound_simple(a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    with _ctx(ctx).workdps(10):
        return 2 * b * c * mpmath.log(c) + 2 * (a + b - b * c) * mpmath.ln2


def coeff_bound_sharp(a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    ctx = _ctx(ctx)
    roots = critical_roots(critical_polynomial(a, b, c), ctx)
    with ctx.workdps(10):
        return kappa_at(a, b, c, select_eta(roots, ctx))


def imaginary_axis_roots(a: int, b: int, c: int, ymax: float = 4.0, steps: int = 4000,
                         ctx: Optional[PrecisionContext] = None) -> List[mpf]:
    """Positive y with P(iy) = 0, by sign changes and bisection.

    P is even with real coefficients, so P(iy) = Q(-y^2) is real.
    """
    ctx = _ctx(ctx)
    Q = critical_polynomial(a, b, c).even_part()
    with ctx.workdps(40):
        def h(y):
            x = -(y * y)
            acc = mpf(0)
            for v in reversed(Q):
                acc = acc * x + v
            return acc

        out = []
        prev_y, prev = mpf(0), h(mpf(0))
        for i in range(1, steps + 1):
            y = mpf(ymax) * i / steps
            cur = h(y)
            if cur == 0 or (prev < 0) != (cur < 0):
                out.append(mpmath.findroot(h, (prev_y, y), solver="bisect" if cur == 0 else "anderson"))
            prev_y, prev = y, cur
        return out


@dataclass
class AsymptoticsReport:
    a: int
    b: int
    c: int
    mu0: mpf
    mu1: mpf
    mu: mpc
    eta: Optional[mpc]
    kappa: mpf
    condition19: bool
    boundSimple: mpf
    boundSharp: Optional[mpf]


def analyze(a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None,
            with_eta: bool = True) -> AsymptoticsReport:
    validate_triple(a, b, c)
    ctx = _ctx(ctx)
    with ctx.workdps(10):
        m1 = mu1(a, b, c, ctx)
        cond = check_condition19(a, b, c, m1)
        roots = critical_roots(critical_polynomial(a, b, c), ctx) if (with_eta or b > 1) else None
        mu = m1 if b == 1 else select_mu(roots, b, c, ctx)
        eta = select_eta(roots, ctx) if with_eta else None
        return AsymptoticsReport(
            a=a, b=b, c=c,
            mu0=mu0(a, b, c, ctx), mu1=m1, mu=mpc(mu),
            eta=eta,
            kappa=kappa_edge(a, b, c, ctx) if b == 1 else kappa_at(a, b, c, mu),
            condition19=cond,
            boundSimple=coeff_bound_simple(a, b, c, ctx),
            boundSharp=kappa_at(a, b, c, eta) if eta is not None else None,
        )


# ----------------------------------------------------------------- saddles


def _curve_radius(phase: PhaseFunction, theta, r_hint):
    """Distance from c to the curve Re f'(tau) = 0 along direction theta."""
    c = phase.c
    direction = mpmath.expjpi(theta / mpmath.pi)

    def h(r):
        return phase.re_fprime(c + r * direction)

    lo = r_hint / 8
    while h(lo) <= 0:
        lo /= 2
    hi = r_hint
    while h(hi) > 0:
        hi *= 2
    return mpmath.findroot(h, (lo, hi), solver="anderson")


def solve_saddle(lam, a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpc:
    """The solution of f'(tau) = lambda*pi*i with Re(tau) > 0, for |lambda| <= b.

    lambda = 0 gives mu_0 and lambda = +-b the cut-edge point mu_1 +- i0.
    Otherwise the curve Re f' = 0 is followed in polar angle about c until
    Im f' = |lambda| pi, then Newton polishes; the result is checked for the
    sign of Im against lambda and conjugated for lambda < 0.
    """
    ctx = _ctx(ctx)
    lam = mpf(lam)
    if abs(lam) > b:
        raise ValueError("need |lambda| <= b")
    with ctx.workdps(15):
        if lam == 0:
            return mpc(mu0(a, b, c, ctx))
        if abs(lam) == b:
            return mpc(mu1(a, b, c, ctx))
        phase = PhaseFunction(a, b, c)
        m0, m1 = mu0(a, b, c, ctx), mu1(a, b, c, ctx)
        hint = max(m1 - c, c - m0)
        target = abs(lam) * mpmath.pi

        def im_on_curve(theta):
            r = _curve_radius(phase, theta, hint)
            return (phase.fprime(c + r * mpmath.expjpi(theta / mpmath.pi))).imag - target

        lo, hi = mpf(10) ** -8, mpmath.pi - mpf(10) ** -8
        if not (im_on_curve(lo) > 0 > im_on_curve(hi)):
            raise SaddleError("Im f' along the curve does not bracket lambda*pi")
        with mpmath.workdps(30):
            theta = mpmath.findroot(im_on_curve, (lo, hi), solver="anderson")
        r = _curve_radius(phase, theta, hint)
        guess = c + r * mpmath.expjpi(theta / mpmath.pi)
        tau = mpmath.findroot(lambda z: phase.fprime(z) - mpc(0, target), guess,
                              df=phase.fsecond, solver="newton",
                              tol=mpf(10) ** (-2 * ctx.digits))
        resid = abs(phase.fprime(tau) - mpc(0, target))
        if resid > ctx.tol:
            raise SaddleError(f"saddle residual {resid} above tolerance")
        if not (tau.imag > 0 and tau.real > 0):
            raise SaddleError(f"saddle {tau} violates the sign contract")
        return tau if lam > 0 else mpmath.conj(tau)
