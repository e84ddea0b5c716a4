"""Arithmetic normalisers for the linear forms: D_{2n}, the prime-power
product Pi_n and its exponents nu_p, the floor kernel phi_c, the growth
constant varpi_c, and the exact integrality checks on B_{k,j} and A_s."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import mpmath
from mpmath import mpf

from .exactnum import (
    PrecisionContext,
    _ctx,
    digamma_rational,
    euler_gamma,
    is_prime,
    lcm_upto,
    legendre,
    primes_in,
)
from .formbuilder import BKTable, FormParameters, LinearForm


def _check_c(c: int) -> None:
    if c < 3 or c % 2 == 0:
        raise ValueError(f"c must be odd and >= 3, got {c}")


def phi_c(c: int, x: Fraction, y: Fraction) -> int:
    """[cx+y] + [cx-y] - c[x+y] - c[x-y]."""
    x, y = Fraction(x), Fraction(y)
    fl = math.floor
    return fl(c * x + y) + fl(c * x - y) - c * fl(x + y) - c * fl(x - y)


def min_phi_c(c: int, x: Fraction) -> int:
    """min over real y of phi_c(x, y), by the piecewise formula in frac(x)."""
    _check_c(c)
    x = Fraction(x)
    u = x - math.floor(x)
    for l in range(1, (c - 1) // 2 + 1):
        for shift in (Fraction(0), Fraction(1, 2)):
            if shift + Fraction(l - 1, c - 1) <= u < shift + Fraction(l, c):
                return 2 * l - 2
            if shift + Fraction(l, c) <= u < shift + Fraction(l, c - 1):
                return 2 * l - 1
    raise AssertionError(f"fractional part {u} not covered")  # pragma: no cover


def min_phi_c_brute(c: int, x: Fraction) -> int:
    """The same minimum by evaluating phi_c on every piece in y.

    As a function of y, phi_c has period 1 and is piecewise constant with
    jumps only where y is congruent to +-x or +-cx modulo 1. Terms in -y are
    left-continuous, so both the jump points and the open pieces between
    them are sampled.
    """
    x = Fraction(x)
    points = set()
    for base in (x, -x, c * x, -c * x):
        points.add(base - math.floor(base))
    cuts = sorted(points)
    cuts.append(cuts[0] + 1)
    samples = set(points)
    samples.update((lo + hi) / 2 for lo, hi in zip(cuts, cuts[1:]))
    return min(phi_c(c, x, y) for y in samples)


def nu_p(p: int, n: int, c: int) -> int:
    """min over |k| <= n of ord_p (cn+k)!(cn-k)! / ((n+k)!^c (n-k)!^c)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _nu_p(p, n, c)


def _nu_p(p: int, n: int, c: int) -> int:
    best = None
    for k in range(0, n + 1):  # symmetric in k
        v = (legendre(p, c * n + k) + legendre(p, c * n - k)
             - c * legendre(p, n + k) - c * legendre(p, n - k))
        best = v if best is None else min(best, v)
    return best


def nu_p_via_phi(p: int, n: int, c: int) -> int:
    """nu_p through the floor kernel, valid for p > sqrt((c+1)n)."""
    return min(phi_c(c, Fraction(n, p), Fraction(k, p)) for k in range(-n, n + 1))


def pi_primes(n: int, c: int) -> List[int]:
    """Primes with sqrt((c+1)n) < p <= 2n, the bound compared exactly as p^2 > (c+1)n."""
    return [p for p in primes_in(0, 2 * n) if p * p > (c + 1) * n]


@dataclass
class NormalizerReport:
    n: int
    c: int
    D2n: int
    Pi: int
    nuMap: Dict[int, int] = field(default_factory=dict)

    def factorization(self) -> Dict[int, int]:
        return {p: v for p, v in self.nuMap.items() if v}


def pi_n(n: int, c: int) -> NormalizerReport:
    if n < 1:
        raise ValueError("n must be positive")
    _check_c(c)
    nu = {p: _nu_p(p, n, c) for p in pi_primes(n, c)}
    Pi = 1
    for p, v in nu.items():
        Pi *= p**v
    return NormalizerReport(n=n, c=c, D2n=lcm_upto(2 * n), Pi=Pi, nuMap=nu)


def varpi_direct(c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """Limit of log(Pi_n)/n, summing the digamma closed form term by term (O(c^2) work)."""
    _check_c(c)
    ctx = _ctx(ctx)
    with ctx.workdps(10):
        acc = mpf(0)
        for l in range(1, (c - 1) // 2 + 1):
            acc += (2 * digamma_rational(2 * l, c - 1, ctx)
                    + 2 * digamma_rational(2 * l, c, ctx)
                    + mpf(2 * c - 1) / l)
        return -acc + 2 * (c - 1) * (1 - euler_gamma(ctx))


def varpi(c: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """Limit of log(Pi_n)/n in O(c) work.

    The values 2l/(c-1) run over j/q, j = 1..q, with q = (c-1)/2, and the
    multiplication theorem gives sum psi(j/q) = -q(gamma + log q). The even
    numerators 2l/c pair with the odd ones c - 2l by reflection,
    psi(1-x) = psi(x) + pi cot(pi x), and together they form the full set
    j/c, j = 1..c-1, whose digamma sum is -(c-1) gamma - c log c.
    """
    _check_c(c)
    ctx = _ctx(ctx)
    with ctx.workdps(10):
        gamma = euler_gamma(ctx)
        half = (c - 1) // 2
        first = -half * (gamma + mpmath.log(half))
        cot_sum = mpf(0)
        harmonic = mpf(0)
        for l in range(1, half + 1):
            cot_sum += mpmath.cospi(mpf(2 * l) / c) / mpmath.sinpi(mpf(2 * l) / c)
            harmonic += mpf(1) / l
        full = -(c - 1) * gamma - c * mpmath.log(c)
        second = (full - mpmath.pi * cot_sum) / 2
        return -(2 * first + 2 * second + (2 * c - 1) * harmonic) + 2 * (c - 1) * (1 - gamma)


@dataclass
class IntegralityVerdict:
    params: FormParameters
    ok: bool
    failures: List[Tuple[str, object, Fraction]] = field(default_factory=list)
    report: Optional[NormalizerReport] = None
    use_pi: bool = True


def check_lemma1(params: FormParameters, form: LinearForm, table: BKTable,
                 use_pi: bool = True) -> IntegralityVerdict:
    """Exact integrality of Pi^-b D_{2n}^j B_{k,j} and Pi^-b D_{2n}^(a+b-1) A_s.

    Failures are collected and returned, never raised. ``use_pi=False`` checks
    the weaker statement with Pi_n replaced by 1.
    """
    a, b, c, n = params.a, params.b, params.c, params.n
    report = pi_n(n, c)
    Pi = report.Pi if use_pi else 1
    D = report.D2n
    failures = []
    for (k, j), B in sorted(table.entries.items()):
        v = B * Fraction(D**j, Pi**b)
        if v.denominator != 1:
            failures.append(("B", (k, j), v))
    clear = Fraction(D ** (a + b - 1), Pi**b)
    for s, A in [(0, form.A0), *sorted(form.As.items())]:
        v = A * clear
        if v.denominator != 1:
            failures.append(("A", s, v))
    return IntegralityVerdict(params, not failures, failures, report, use_pi)
