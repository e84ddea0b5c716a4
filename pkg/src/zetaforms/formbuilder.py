"""Construction of the rational function R_n(t), its partial-fraction
coefficients B_{k,j}, the linear form sum A_s zeta(s) - A_0 and the value
I_n of the defining series.

R_n(t) = (2n)!^(a+b-bc) * prod_{|m| <= cn} (t+m)^(e_m), with e_m = -a for
|m| <= n and e_m = b for n < |m| <= cn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import mpmath
from mpmath import mpf

from .exactnum import PrecisionContext, _ctx, hurwitz_tail, to_mpf, zeta_odd

DEFAULT_TERM_BUDGET = 10**6


class SeriesBudgetError(ArithmeticError):
    """The series for I_n could not be resolved within the term budget."""


def validate_triple(a: int, b: int, c: int) -> None:
    for name, v in (("a", a), ("b", b), ("c", c)):
        if not isinstance(v, int) or v <= 0 or v % 2 == 0:
            raise ValueError(f"{name} must be a positive odd integer, got {v!r}")
    if c < 3:
        raise ValueError(f"c must be >= 3, got {c}")
    if a <= b * (c - 1):
        raise ValueError(f"need a > b(c-1), got a={a}, b={b}, c={c}")


@dataclass(frozen=True)
class FormParameters:
    a: int
    b: int
    c: int
    n: int

    def __post_init__(self):
        validate_triple(self.a, self.b, self.c)
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    @property
    def exponents(self) -> Dict[int, int]:
        a, b, c, n = self.a, self.b, self.c, self.n
        return {m: (-a if abs(m) <= n else b) for m in range(-c * n, c * n + 1)}

    @property
    def scale(self) -> int:
        """The normalising factor (2n)!^(a+b-bc)."""
        return math.factorial(2 * self.n) ** (self.a + self.b - self.b * self.c)

    @property
    def decay(self) -> int:
        """d with R(t) ~ const * t^-d at infinity."""
        return self.a * (2 * self.n + 1) - 2 * self.b * (self.c - 1) * self.n

    @property
    def odd_s(self) -> List[int]:
        return [s for s in range(self.b + 1, self.a + self.b) if s % 2 == 1]


def eval_R(params: FormParameters, t) -> object:
    """R_n(t) at a point; exact for int/Fraction input, mpmath otherwise."""
    if isinstance(t, (int, Fraction)):
        value = Fraction(params.scale)
        for m, e in params.exponents.items():
            value *= Fraction(t + m) ** e
        return value
    value = mpf(params.scale)
    for m, e in params.exponents.items():
        value *= (t + m) ** e
    return value


def _exp_series(value, logder: List, order: int) -> List:
    """Taylor coefficients f_0..f_{order-1} of F with F(0) = value, F'/F = logder."""
    coeffs = [value]
    for j in range(1, order):
        acc = 0
        for i in range(j):
            acc += coeffs[i] * logder[j - 1 - i]
        coeffs.append(acc / j)
    return coeffs


def taylor_without_pole(params: FormParameters, k: int, order: int) -> List[Fraction]:
    """Exact Taylor coefficients of R(t)(t+k)^a at t = -k, first ``order`` of them."""
    exps = params.exponents
    if exps[k] != -params.a:
        raise ValueError(f"t=-{k} is not a pole of R")
    value = Fraction(params.scale)
    for m, e in exps.items():
        if m != k:
            value *= Fraction(m - k) ** e
    # log-derivative about h = t + k: sum_m e_m / ((m-k) + h)
    logder = []
    for i in range(order - 1):
        acc = Fraction(0)
        for m, e in exps.items():
            if m != k:
                acc += Fraction(e, (m - k) ** (i + 1))
        logder.append(acc if i % 2 == 0 else -acc)
    return _exp_series(value, logder, order)


@dataclass
class BKTable:
    params: FormParameters
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        return self.entries[key]


def residue_table(params: FormParameters) -> BKTable:
    """B_{k,j} for k in [-n, n], j in [0, a-1]."""
    table = BKTable(params)
    n, a = params.n, params.a
    for k in range(0, n + 1):
        coeffs = taylor_without_pole(params, k, a)
        for j, v in enumerate(coeffs):
            table.entries[(k, j)] = v
            # R is odd, hence B_{-k,j} = (-1)^j B_{k,j}
            table.entries[(-k, j)] = v if j % 2 == 0 else -v
    return table


@dataclass
class LinearForm:
    params: FormParameters
    A0: Fraction
    As: Dict[int, Fraction]

    def common_denominator(self) -> int:
        den = self.A0.denominator
        for v in self.As.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        return den


def assemble_linear_form(table: BKTable) -> LinearForm:
    params = table.params
    a, b, n = params.a, params.b, params.n
    sign = 1 if (b - 1) % 2 == 0 else -1

    column = {}
    for j in range(a):
        column[j] = sum((table[(k, j)] for k in range(-n, n + 1)), Fraction(0))

    # zeta(s) with s = a+b-1-j; s <= b and even s must drop out
    for j in range(a):
        s = a + b - 1 - j
        if (s <= b or s % 2 == 0) and column[j] != 0:
            raise ArithmeticError(f"coefficient of zeta({s}) does not vanish: {column[j]}")

    As = {}
    for s in params.odd_s:
        As[s] = sign * math.comb(s - 1, b - 1) * column[a + b - s - 1]

    A0 = Fraction(0)
    for k in range(-n, n + 1):
        if k + n == 0:
            continue
        for j in range(a):
            s = a + b - 1 - j
            B = table[(k, j)]
            if B == 0:
                continue
            harmonic = sum((Fraction(1, l**s) for l in range(1, k + n + 1)), Fraction(0))
            A0 += math.comb(s - 1, b - 1) * B * harmonic
    return LinearForm(params, sign * A0, As)


def _guard_digits(values) -> int:
    biggest = max((abs(v) for v in values), default=Fraction(1))
    if biggest == 0:
        return 10
    return max(10, int(math.log10(biggest.numerator + 1) - math.log10(biggest.denominator)) + 10)


def _derivative_term(params: FormParameters, t, order: int):
    """(1/order!) R^(order)(t) at a point t > cn, in mpmath."""
    exps = params.exponents
    value = eval_R(params, mpf(t))
    if order == 0:
        return value
    logder = []
    for i in range(order):
        acc = mpf(0)
        for m, e in exps.items():
            acc += e / mpf(t + m) ** (i + 1)
        logder.append(acc if i % 2 == 0 else -acc)
    return _exp_series(value, logder, order + 1)[order]


def _infinity_expansion(params: FormParameters, count: int) -> List[mpf]:
    """rho_r with R(t) = scale * sum_r rho_r t^(-d-r), convergent for |t| > n."""
    exps = params.exponents
    # log prod (1 + m u)^e = sum_j (-1)^(j-1) p_j u^j / j, p_j = sum e m^j
    logder = []
    for j in range(1, count):
        p = sum(e * m**j for m, e in exps.items())
        logder.append(mpf((-1) ** (j - 1) * p))  # coefficient of u^(j-1) in the derivative
    return _exp_series(mpf(1), logder, count)


def eval_series(
    params: FormParameters,
    ctx: Optional[PrecisionContext] = None,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> mpf:
    """I_n = sum_{t > n} R^(b-1)(t)/(b-1)!, to about ``ctx.digits`` relative digits.

    Terms with n < t <= cn vanish (zeros of order b). The terms up to a cut T
    are summed directly; the rest uses the expansion of R in powers of 1/t,
    which converges for |t| > n, so that sum_{t >= T} t^-K becomes a Hurwitz
    tail. With radius rho = 1/(2n), Cauchy's estimate bounds the expansion
    coefficients by M(rho) (2n)^r and the neglected part of the tail by twice
    the first neglected bound because T >= 8n makes the ratio at most 1/2.
    """
    ctx = _ctx(ctx)
    b, c, n = params.b, params.c, params.n
    T = max(c * n + 1, 8 * n)
    if T - c * n - 1 > term_budget:
        raise SeriesBudgetError(f"direct part needs {T - c * n - 1} terms > budget {term_budget}")
    extra = 15 + 3 * b
    for _ in range(8):
        total, mass = _series_at(params, ctx, extra, T, term_budget)
        # the terms can cancel heavily (b > 1 sums derivatives), so the
        # working precision must cover log10(sum |terms| / |total|)
        with ctx.workdps(extra):
            lost = (int(mpmath.ceil(mpmath.log10(mass / abs(total)))) + 1
                    if total != 0 else extra)
        if extra - lost >= 10:
            return total
        extra = lost + 15
    raise SeriesBudgetError("cancellation in the series could not be resolved")


def _series_at(params: FormParameters, ctx: PrecisionContext, extra: int, T: int,
               term_budget: int):
    """(I_n, sum of absolute values of all summed pieces) at ctx.digits + extra."""
    a, b, c, n = params.a, params.b, params.c, params.n
    d = params.decay
    order = b - 1
    with ctx.workdps(extra):
        head = mpf(0)
        mass = mpf(0)
        for t in range(c * n + 1, T):
            term = _derivative_term(params, t, order)
            head += term
            mass += abs(term)

        # Cauchy bound on |prod (1+mu)^e| on |u| = 1/(2n)
        rho = mpf(1) / (2 * n)
        log_M = mpf(0)
        for m, e in params.exponents.items():
            if e > 0:
                log_M += e * mpmath.log(1 + abs(m) * rho)
            elif m != 0:
                log_M += e * mpmath.log(1 - abs(m) * rho)
        scale = mpf(params.scale)

        def bound(r):
            K = d + r + order
            return (scale * mpmath.exp(log_M) * (2 * n) ** r * mpmath.binomial(K - 1, order)
                    * 2 * mpf(T) ** (1 - K))

        target_digits = ctx.digits + 5
        count = 16
        while True:
            rhos = _infinity_expansion(params, count)
            tail = mpf(0)
            tail_mass = mpf(0)
            for r, coeff in enumerate(rhos):
                if coeff == 0:
                    continue
                K = d + r
                # [h^order] (t+h)^-K = binom(-K, order) t^(-K-order)
                piece = coeff * mpmath.binomial(-K, order) * hurwitz_tail(K + order, T)
                tail += piece
                tail_mass += abs(piece)
            total = head + scale * tail
            reference = min(abs(total), mpf(1)) if total != 0 else mpf(1)
            if 2 * bound(count) < mpf(10) ** (-target_digits) * reference:
                break
            count *= 2
            if count > term_budget:
                raise SeriesBudgetError("tail expansion did not reach the tolerance within the budget")
        return total, mass + scale * tail_mass


def verify_identity(form: LinearForm, ctx: Optional[PrecisionContext] = None) -> mpf:
    """|I_n - (sum_s A_s zeta(s) - A_0)| with I_n from the series."""
    ctx = _ctx(ctx)
    guard = _guard_digits([form.A0, *form.As.values()])
    inner = PrecisionContext(ctx.digits + guard)
    with inner.workdps(10):
        series = eval_series(form.params, inner)
        rhs = -to_mpf(form.A0)
        for s, A in form.As.items():
            rhs += to_mpf(A) * zeta_odd(s, inner)
        residual = abs(series - rhs)
    return residual


def build_form(params: FormParameters) -> Tuple[BKTable, LinearForm]:
    table = residue_table(params)
    return table, assemble_linear_form(table)
