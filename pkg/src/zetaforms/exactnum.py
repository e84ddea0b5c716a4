"""Exact integers and rationals, primes, factorial valuations, and the
high-precision constants everything else is built on.

Integers are Python ints and rationals are :class:`fractions.Fraction`;
both are exact. Floating values are :mod:`mpmath` numbers evaluated at the
precision carried by a :class:`PrecisionContext`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional

import mpmath
from mpmath import mpf

DEFAULT_DIGITS = 64
CERTIFY_DIGITS = 80
MIN_DIGITS = 20


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal working precision plus the comparison tolerance derived from it."""

    digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < MIN_DIGITS:
            raise ValueError(f"digits must be an integer >= {MIN_DIGITS}, got {self.digits!r}")

    @property
    def tol(self) -> mpf:
        with mpmath.workdps(self.digits + 10):
            return mpf(10) ** (10 - self.digits)

    def workdps(self, extra: int = 0):
        """Context manager raising mpmath to ``digits + extra`` decimal digits."""
        return mpmath.workdps(self.digits + extra)

    @classmethod
    def from_env(cls, default: int = DEFAULT_DIGITS) -> "PrecisionContext":
        value = os.environ.get("ZETAFORMS_DIGITS")
        return cls(int(value)) if value else cls(default)


def _ctx(ctx: Optional[PrecisionContext]) -> PrecisionContext:
    return ctx if ctx is not None else PrecisionContext()


# ---------------------------------------------------------------- primes


@lru_cache(maxsize=8)
def _sieve(limit: int) -> bytes:
    flags = bytearray([1]) * (limit + 1)
    flags[: min(2, limit + 1)] = b"\x00" * min(2, limit + 1)
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return bytes(flags)


def primes_upto(limit: int) -> List[int]:
    if limit < 2:
        return []
    flags = _sieve(int(limit))
    return [i for i in range(2, int(limit) + 1) if flags[i]]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


def primes_in(lo, hi) -> List[int]:
    """Primes p with ``lo < p <= hi`` in ascending order.

    ``lo`` and ``hi`` may be ints, Fractions or floats.
    """
    if lo < 0 or hi < lo:
        raise ValueError(f"need 0 <= lo <= hi, got lo={lo!r}, hi={hi!r}")
    top = math.floor(hi)
    return [p for p in primes_upto(top) if p > lo]


def lcm_upto(n: int) -> int:
    """D_n = lcm(1, 2, ..., n)."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    for p in primes_upto(n):
        q = p
        while q * p <= n:
            q *= p
        result *= q
    return result


def ord_p_factorial(p: int, m: int) -> int:
    """Exponent of the prime ``p`` in ``m!`` (Legendre)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 0:
        raise ValueError("m must be non-negative")
    return legendre(p, m)


def legendre(p: int, m: int) -> int:
    """Unchecked Legendre sum for a known prime ``p``."""
    total, q = 0, p
    while q <= m:
        total += m // q
        q *= p
    return total


def factorize(n: int) -> dict:
    """Trial-division factorization; only used on desk-scale values."""
    if n < 1:
        raise ValueError("n must be positive")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ------------------------------------------------------- zeta and digamma


def hurwitz_tail(s: int, start, ctx: Optional[PrecisionContext] = None) -> mpf:
    """Sum of k**-s over k = start, start+1, ... by Euler-Maclaurin.

    ``s`` is an integer >= 2 and ``start`` a positive number; both must be
    large enough that the asymptotic remainder drops below the target, which
    is checked against the first omitted term. The result is an mpf at the
    current mpmath precision; ``ctx`` only fixes the target accuracy.
    """
    if s < 2:
        raise ValueError("s must be >= 2")
    eps = mpf(10) ** (-(mpmath.mp.dps + 3))
    N = mpf(start)
    head = mpf(0)
    # shift the start upward until the Euler-Maclaurin terms can get small enough
    min_start = (mpmath.mp.dps + s) // 2 + 10
    while N < min_start:
        head += N ** (-s)
        N += 1
    total = N ** (1 - s) / (s - 1) + N ** (-s) / 2
    rising = mpf(s)  # s (s+1) ... (s+2k-2)
    power = N ** (-s - 1)
    scale = abs(total) + abs(head)
    k = 1
    while True:
        term = mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k) * rising * power
        if abs(term) < eps * scale:
            break
        total += term
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= N * N
        k += 1
        if k > 10 * mpmath.mp.dps:
            raise ArithmeticError("Euler-Maclaurin remainder did not reach the target")
    return head + total


def zeta_odd(s: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """zeta(s) for odd s >= 3 at ``ctx.digits``."""
    if s < 3 or s % 2 == 0:
        raise ValueError(f"zeta_odd needs an odd s >= 3, got {s}")
    ctx = _ctx(ctx)
    with ctx.workdps(10):
        value = hurwitz_tail(s, 1)
    return value


@lru_cache(maxsize=256)
def _log_sin_table(q: int, dps: int):
    with mpmath.workdps(dps):
        return tuple(mpmath.log(mpmath.sinpi(mpf(k) / q)) for k in range(1, (q - 1) // 2 + 1))


def digamma_rational(p: int, q: int, ctx: Optional[PrecisionContext] = None) -> mpf:
    """psi(p/q) for 0 < p/q <= 1 by Gauss's digamma theorem."""
    if q <= 0 or p <= 0 or p > q:
        raise ValueError(f"digamma_rational needs 0 < p/q <= 1, got {p}/{q}")
    ctx = _ctx(ctx)
    g = math.gcd(p, q)
    p, q = p // g, q // g
    dps = ctx.digits + 10
    with mpmath.workdps(dps):
        if p == q:
            return -mpmath.euler
        total = -mpmath.euler - mpmath.log(2 * q) - mpmath.pi / 2 * mpmath.cospi(mpf(p) / q) / mpmath.sinpi(mpf(p) / q)
        logs = _log_sin_table(q, dps)
        acc = mpf(0)
        for k, ls in enumerate(logs, start=1):
            acc += mpmath.cospi(mpf(2 * k * p) / q) * ls
        return total + 2 * acc


def euler_gamma(ctx: Optional[PrecisionContext] = None) -> mpf:
    # standard value 0.5772156649...
    with _ctx(ctx).workdps(10):
        return +mpmath.euler


def to_mpf(x: Fraction) -> mpf:
    return mpf(x.numerator) / x.denominator


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x, digits: int) -> str:
    """x to ``digits`` significant digits, rounded half-to-even from its exact binary value."""
    if digits < 1:
        raise ValueError("digits must be positive")
    if not isinstance(x, mpf):  # mpf(mpf) would re-round to the global precision
        x = mpf(x)
    if not mpmath.isfinite(x):
        raise ValueError(f"cannot format {x}")
    if x == 0:
        return "0"
    sign = -1 if x < 0 else 1
    man, exp = int(x.man_exp[0]), int(x.man_exp[1])
    man = sign * abs(man)
    # m * 2^e has an exact decimal expansion of at most this many digits
    with localcontext() as dec:
        dec.prec = len(str(abs(man))) + abs(exp) + digits + 10
        exact = Decimal(man) * Decimal(2) ** exp if exp >= 0 else Decimal(man) * Decimal(5) ** (-exp) / Decimal(10) ** (-exp)
        shift = exact.adjusted() - digits + 1
        rounded = exact.quantize(Decimal(1).scaleb(shift), rounding=ROUND_HALF_EVEN)
    if rounded.adjusted() >= digits or rounded.adjusted() < -30:
        return f"{rounded:E}"
    return f"{rounded:f}"


def decimal_field(x, digits: int) -> dict:
    """JSON shape for a rounded real: the decimal string and the precision it carries."""
    return {"value": format_decimal(x, digits), "digits": digits}
