"""Numerical contour integrals: the vertical-line representation of I_n,
the saddle integrals J_{n,lambda}, and their Laplace predictions."""

from __future__ import annotations

from typing import Dict, Optional

import mpmath
from mpmath import mpc, mpf

from ..exactnum import PrecisionContext, _ctx
from ..formbuilder import FormParameters
from .phase import PhaseFunction, vb_polynomial
from .saddle import mu0, mu1, solve_saddle


class QuadratureError(ArithmeticError):
    def __init__(self, message: str, achieved=None):
        super().__init__(message)
        self.achieved = achieved


def _R_complex(params: FormParameters, t):
    value = mpc(params.scale)
    for m, e in params.exponents.items():
        value *= (t + m) ** e
    return value


def contour_I(params: FormParameters, M, ctx: Optional[PrecisionContext] = None) -> mpf:
    """I_n as -(1/2 pi i) times the integral of pi^b cot_b(pi t) R(t) up Re t = M.

    The integrand takes conjugate values at conjugate points, so the line
    integral is twice the real part of the upper half. cot_b is evaluated as
    V_b(cos pi t) / sin^b(pi t). The line integrand can exceed the result by
    many orders, so precision is raised until that cancellation is covered.
    """
    ctx = _ctx(ctx)
    n, c, b = params.n, params.c, params.b
    M = mpf(M)
    if not (n < M < c * n):
        raise ValueError(f"need n < M < cn, got M={M}")
    vb = vb_polynomial(b)
    extra = 25
    for _ in range(6):
        with ctx.workdps(extra):
            pib = mpmath.pi ** b
            peak = [mpf(0)]

            def integrand(y):
                t = mpc(M, y)
                s = mpmath.sinpi(t)
                v = pib * vb(mpmath.cospi(t)) / s**b * _R_complex(params, t)
                peak[0] = max(peak[0], abs(v))
                return v

            points = [0, mpf(1) / 4, 1, 4, 16, 64, mpmath.inf]
            value, err = mpmath.quad(integrand, points, error=True, maxdegree=10)
            result = -value.real / mpmath.pi
            achieved = err / mpmath.pi
            if result == 0:
                lost = extra
            else:
                lost = int(mpmath.ceil(mpmath.log10(peak[0] / abs(result)))) + 1
            if extra - lost >= 15:
                if achieved > mpf(10) ** (-ctx.digits) * abs(result) * 10**5:
                    raise QuadratureError("vertical-line quadrature missed the tolerance", achieved)
                return result
            extra = lost + 25
    raise QuadratureError("cancellation along the vertical line not resolved")


def _J_integrand(phase: PhaseFunction, n: int, lam):
    lam_pi_i = mpc(0, mpf(lam) * mpmath.pi)

    def F(tau):
        return mpmath.exp(n * (phase.f(tau) - lam_pi_i * tau)) * phase.g(tau)

    return F


def saddle_integral(n: int, lam, a: int, b: int, c: int,
                    ctx: Optional[PrecisionContext] = None) -> mpc:
    """J_{n,lambda} by quadrature along a contour through the saddle.

    For lambda > 0: up the vertical ray to mu_0, along the segment from mu_0
    through tau_lambda to mu_0 + e^(i theta) sqrt(mu_0^2 - 1), then the
    horizontal ray to +inf; lambda < 0 mirrors this and lambda = 0 is the
    vertical line through mu_0.
    """
    ctx = _ctx(ctx)
    lam = mpf(lam)
    if abs(lam) >= b:
        raise ValueError("the quadrature check needs |lambda| < b")
    if lam < 0:
        return mpmath.conj(saddle_integral(n, -lam, a, b, c, ctx))
    phase = PhaseFunction(a, b, c)
    with ctx.workdps(15):
        F = _J_integrand(phase, n, lam)
        m0 = mu0(a, b, c, ctx)
        two_pi_i = mpc(0, 2 * mpmath.pi)
        ray = [0, mpf(1) / (4 * n), mpf(1) / n, mpf(4) / n, 1, mpmath.inf]
        if lam == 0:
            # both halves of the vertical line are conjugate to each other
            up = mpmath.quad(lambda s: F(mpc(m0, s)), ray)
            return mpc(0, 1) * 2 * up.real / two_pi_i
        tau = solve_saddle(lam, a, b, c, ctx)
        shift = tau - m0
        u_saddle = abs(shift)
        direction = shift / u_saddle
        rho = max(mpmath.sqrt(m0 * m0 - 1), 2 * u_saddle)
        width = 1 / mpmath.sqrt(n * abs(phase.fsecond(tau)))
        cuts = sorted({mpf(0), rho, u_saddle,
                       *[u_saddle + k * width for k in (-4, -1, 1, 4) if 0 < u_saddle + k * width < rho]})
        down = mpmath.quad(lambda s: F(mpc(m0, -s)), ray)
        segment = mpmath.quad(lambda u: F(m0 + u * direction), cuts) * direction
        corner = m0 + rho * direction
        across = mpmath.quad(lambda x: F(corner + x), [0, 1, 4, mpmath.inf])
        total = mpc(0, 1) * down + segment + across
        return total / two_pi_i


def laplace_prediction(n: int, lam, a: int, b: int, c: int,
                       ctx: Optional[PrecisionContext] = None) -> mpf:
    """e^(n Re f_0(tau)) |g(tau)| / sqrt(2 pi n |f''(tau)|) at the saddle tau_lambda."""
    ctx = _ctx(ctx)
    phase = PhaseFunction(a, b, c)
    with ctx.workdps(15):
        tau = solve_saddle(lam, a, b, c, ctx)
        return (mpmath.exp(n * phase.re_f0(tau)) * abs(phase.g(tau))
                / mpmath.sqrt(2 * mpmath.pi * n * abs(phase.fsecond(tau))))


def saddle_asymptotic_check(n: int, lam, a: int, b: int, c: int,
                            ctx: Optional[PrecisionContext] = None) -> mpf:
    """|J_{n,lambda}| from quadrature divided by its Laplace prediction."""
    ctx = _ctx(ctx)
    with ctx.workdps(15):
        return abs(saddle_integral(n, lam, a, b, c, ctx)) / laplace_prediction(n, lam, a, b, c, ctx)


def _extend_ray(fn, start, threshold, max_log2: int = 400):
    """Integral of fn over [start, end], with end pushed out by factors 2^8
    until end |fn(end)| <= threshold; returns (integral, end).

    Guard digits grow with log2(end) because f is a difference of terms of
    size |tau| log|tau| there.
    """
    total = mpc(0)
    lo = mpf(start)
    while lo * abs(fn(lo)) > threshold:
        k = int(mpmath.log(lo, 2))
        if k > max_log2:
            raise QuadratureError("integrand decays too slowly along the ray", lo * abs(fn(lo)))
        with mpmath.workdps(mpmath.mp.dps + (k + 8) * 31 // 100 + 5):
            total += mpmath.quad(fn, [lo * 2**j for j in range(0, 9, 2)])
        lo = lo * 2**8
    return total, lo


def vertical_J(n: int, lam, a: int, b: int, c: int, x0=None,
               ctx: Optional[PrecisionContext] = None) -> mpc:
    """J_{n,lambda} straight up the vertical line Re tau = x0 (default mu_0).

    Works for the endpoint values lambda = +-b as well, where one half of the
    line only decays algebraically. The line integrand is far larger than the
    result, so the working precision is raised until the observed
    cancellation (peak integrand over result) is covered.
    """
    ctx = _ctx(ctx)
    phase = PhaseFunction(a, b, c)
    x0 = mu0(a, b, c, ctx) if x0 is None else mpf(x0)
    extra = 15
    for _ in range(6):
        with ctx.workdps(extra):
            F = _J_integrand(phase, n, lam)
            peak = [mpf(0)]

            def tracked(s):
                v = F(mpc(x0, s))
                peak[0] = max(peak[0], abs(v))
                return v

            # the integrand oscillates with frequency of order n near the axis;
            # the rays use finite panels because f loses all accuracy to
            # cancellation at the huge nodes an infinite rule would use
            ray = [mpf(k) / n for k in range(0, 4 * n + 1)] + [2.0**k for k in range(3, 17, 2)]
            cutoff = ray[-1]
            up = mpmath.quad(tracked, ray)
            down = mpmath.quad(lambda s: tracked(-s), ray)
            value = (up + down) / (2 * mpmath.pi)
            # both halves decay at least like a power beyond the cutoff
            if value == 0:
                lost = mpmath.mp.dps
            else:
                threshold = abs(value) * mpf(10) ** (-ctx.digits - 1)
                more_up, _ = _extend_ray(lambda s: F(mpc(x0, s)), cutoff, threshold)
                more_down, _ = _extend_ray(lambda s: F(mpc(x0, -s)), cutoff, threshold)
                value += (more_up + more_down) / (2 * mpmath.pi)
                lost = int(mpmath.ceil(mpmath.log10(peak[0] / abs(value)))) + 1
            if extra - lost >= 10:
                return value
            extra = lost + 15
    raise QuadratureError("cancellation along the vertical line not resolved")


def _bank_integrand(phase: PhaseFunction, n: int):
    """e^(n(f - b pi i tau)) g on the upper bank tau = x + i0 of the cut x > c.

    There log(c - tau) = log(x - c) - i pi, and the imaginary part of
    f - b pi i tau is the constant -b pi c, so the integrand does not oscillate.
    """
    a, b, c, ab = phase.a, phase.b, phase.c, phase.a + phase.b
    log = mpmath.log
    ipi = mpc(0, mpmath.pi)

    def F(x):
        if x == c:  # g carries (x - c)^(b/2); nodes can round onto c
            return mpc(0)
        lc = log(x - c) - ipi
        f = ((ab - b * c) * 2 * mpmath.ln2 + b * (x + c) * log(x + c) + b * (c - x) * lc
             + ab * (x - 1) * log(x - 1) - ab * (x + 1) * log(x + 1))
        g = mpmath.exp(mpf(b) / 2 * (log(x + c) + lc) - mpf(ab) / 2 * (log(x + 1) + log(x - 1)))
        return mpmath.exp(n * (f - b * ipi * x)) * g

    return F


def edge_J(n: int, a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpc:
    """J_{n,b}, the endpoint case whose saddle mu_1 sits on the cut.

    The lower half of the vertical line through mu_0 decays
    super-exponentially and is kept. The upper half is swung onto the real
    segment [mu_0, c] followed by the upper bank of the cut, where the
    integrand is free of oscillation; the arc at infinity vanishes because
    the integrand decays like a power of order above one.
    J_{n,-b} is the conjugate.
    """
    ctx = _ctx(ctx)
    phase = PhaseFunction(a, b, c)
    x0 = mu0(a, b, c, ctx)
    m1 = mu1(a, b, c, ctx)
    extra = 15
    for _ in range(6):
        with ctx.workdps(extra):
            F = _J_integrand(phase, n, b)
            bank = _bank_integrand(phase, n)
            peak = [mpf(0)]

            def tracked(fn):
                def h(t):
                    v = fn(t)
                    peak[0] = max(peak[0], abs(v))
                    return v
                return h

            ray = [mpf(k) / n for k in range(0, 4 * n + 1)] + [2.0**k for k in range(3, 17, 2)]
            down = mpmath.quad(tracked(lambda t: F(mpc(x0, -t))), ray)
            steps = 4 * n
            seg = [x0 + (c - x0) * k / steps for k in range(steps + 1)]
            across = mpmath.quad(tracked(lambda x: mpc(0) if x == c else F(x)), seg)
            gap = m1 - c
            width = 1 / mpmath.sqrt(n * abs(phase.fsecond(m1)))
            cuts = sorted({c + gap * mpf(k) / 8 for k in range(1, 8)}
                          | {m1 + k * width for k in (-4, -2, -1, 0, 1, 2, 4) if m1 + k * width > c}
                          | {m1 + gap * 2**k for k in range(0, 8)})
            cuts = [mpf(c)] + cuts
            cutoff = max(cuts[-1], mpf(2) ** 15)
            cuts += [2.0**k for k in range(3, 17, 2) if 2.0**k > cuts[-1]]
            if cuts[-1] < cutoff:
                cuts.append(cutoff)
            up = mpmath.quad(tracked(bank), cuts)
            value = (mpc(0, 1) * down + across + up) / mpc(0, 2 * mpmath.pi)
            if value == 0:
                lost = mpmath.mp.dps
            else:
                threshold = abs(value) * mpf(10) ** (-ctx.digits - 1)
                more_up, _ = _extend_ray(bank, cutoff, threshold)
                more_down, _ = _extend_ray(lambda t: F(mpc(x0, -t)), ray[-1], threshold)
                value += (mpc(0, 1) * more_down + more_up) / mpc(0, 2 * mpmath.pi)
                lost = int(mpmath.ceil(mpmath.log10(peak[0] / abs(value)))) + 1
            if extra - lost >= 10:
                return value
            extra = lost + 15
    raise QuadratureError("cancellation along the edge contour not resolved")


def rescaled_sum(n: int, a: int, b: int, c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """-sum_k c_k J_{n,k} over odd k in [-b, b], with c_k the e^(ik z) coefficients of V_b(cos z).

    The endpoint terms k = +-b use the cut-bank contour, the others the
    contour through their saddle.
    """
    ctx = _ctx(ctx)
    coeffs: Dict[int, object] = vb_polynomial(b).expCoeffs
    with ctx.workdps(15):
        total = mpc(0)
        for k, ck in coeffs.items():
            if abs(k) == b:
                J = edge_J(n, a, b, c, ctx)
                J = J if k > 0 else mpmath.conj(J)
            else:
                J = saddle_integral(n, k, a, b, c, ctx)
            total += mpf(ck.numerator) / ck.denominator * J
        return -total.real


def rescaling_prefactor(n: int, a: int, b: int, c: int) -> mpf:
    return ((-1) ** n * (2 * mpmath.sqrt(mpmath.pi * n)) ** (a + b - b * c) * (2 * mpmath.pi) ** b
            / mpf(n) ** (a - 1))
