"""The critical polynomial and a simultaneous-iteration root finder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import mpmath
import numpy as np
from mpmath import mpc, mpf

from ..exactnum import PrecisionContext, _ctx
from ..formbuilder import validate_triple


class RootFindingError(ArithmeticError):
    def __init__(self, message: str, residuals=None):
        super().__init__(message)
        self.residuals = residuals


def poly_mul(p: Sequence[int], q: Sequence[int]) -> List[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def poly_pow(p: Sequence[int], e: int) -> List[int]:
    out = [1]
    for _ in range(e):
        out = poly_mul(out, p)
    return out


def _trim(coeffs: List[int]) -> List[int]:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class CriticalPolynomial:
    a: int
    b: int
    c: int
    coefficients: tuple  # ascending degree, exact ints

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    def is_even(self) -> bool:
        return all(v == 0 for v in self.coefficients[1::2])

    def even_part(self) -> List[int]:
        """Q with P(tau) = Q(tau^2); only meaningful when the polynomial is even."""
        return list(self.coefficients[0::2])

    def __call__(self, z):
        return horner(self.coefficients, z)


def critical_polynomial(a: int, b: int, c: int) -> CriticalPolynomial:
    """(tau+c)^b (tau-1)^(a+b) - (tau-c)^b (tau+1)^(a+b), expanded exactly."""
    validate_triple(a, b, c)
    left = poly_mul(poly_pow([c, 1], b), poly_pow([-1, 1], a + b))
    right = poly_mul(poly_pow([-c, 1], b), poly_pow([1, 1], a + b))
    coeffs = _trim([x - y for x, y in zip(left, right)])
    return CriticalPolynomial(a, b, c, tuple(coeffs))


def horner(coeffs: Sequence, z):
    acc = 0
    for v in reversed(coeffs):
        acc = acc * z + v
    return acc


def _horner_with_derivative(coeffs: Sequence, z):
    p = mpc(0)
    dp = mpc(0)
    for v in reversed(coeffs):
        dp = dp * z + p
        p = p * z + v
    return p, dp


def _fujiwara_bound(coeffs: Sequence[int]) -> float:
    d = len(coeffs) - 1
    lead = abs(coeffs[-1])
    best = 0.0
    for i in range(1, d + 1):
        v = abs(coeffs[d - i])
        if v:
            best = max(best, math.exp((math.log(v) - math.log(lead)) / i))
    return 2.0 * best if best else 1.0


def _initial_guesses(coeffs: Sequence[int]) -> List[complex]:
    d = len(coeffs) - 1
    try:
        with np.errstate(all="raise"):
            big = max(abs(v) for v in coeffs)
            scaled = np.array([v / big for v in reversed(coeffs)], dtype=float)
            guesses = [complex(z) for z in np.roots(scaled)]
        if len(guesses) == d and all(np.isfinite(z) for z in guesses):
            return guesses
    except (FloatingPointError, OverflowError, np.linalg.LinAlgError):
        pass
    radius = _fujiwara_bound(coeffs) / 2
    return [radius * complex(math.cos(2 * math.pi * k / d + 0.4), math.sin(2 * math.pi * k / d + 0.4))
            for k in range(d)]


def working_digits(coeffs: Sequence[int], digits: int) -> int:
    """Digits needed so that |P(z)|/|lead| can be resolved to 10^(15-digits)."""
    R = max(1.0, _fujiwara_bound(coeffs))
    lead = abs(coeffs[-1])
    log_mass = max(math.log10(abs(v)) + i * math.log10(R) for i, v in enumerate(coeffs) if v)
    return digits + max(0, math.ceil(log_mass - math.log10(lead))) + 10


def find_roots(coeffs: Sequence[int], ctx: Optional[PrecisionContext] = None,
               max_iter: int = 1000) -> List[mpc]:
    """All complex roots of an integer polynomial (ascending coefficients).

    Aberth-Ehrlich iteration in mpmath, seeded from a double-precision
    companion-matrix solve when the coefficients fit in a float. Every root is
    accepted only if |P(z)|/|lead| < 10^(15 - digits); otherwise
    RootFindingError carries the residuals.
    """
    ctx = _ctx(ctx)
    coeffs = _trim([int(v) for v in coeffs])
    d = len(coeffs) - 1
    if d < 1:
        raise ValueError("polynomial must have degree >= 1")
    dps = working_digits(coeffs, ctx.digits)
    lead = abs(coeffs[-1])
    with mpmath.workdps(dps):
        mcoeffs = [mpf(v) for v in coeffs]
        z = [mpc(g) for g in _initial_guesses(coeffs)]
        # split coincident seeds so the repulsion term is defined
        for i in range(d):
            for j in range(i):
                if abs(z[i] - z[j]) < mpf(10) ** -12:
                    z[i] += mpc(1e-8 * (i + 1), 1e-8)
        eps = mpf(10) ** (-(dps - 5))
        unit = mpf(2) ** (-mpmath.mp.prec)
        abs_coeffs = [abs(v) for v in mcoeffs]
        done = [False] * d
        for _ in range(max_iter):
            for i in range(d):
                if done[i]:
                    continue
                p, dp = _horner_with_derivative(mcoeffs, z[i])
                # stop once |P| is at the level of its own rounding error
                if abs(p) <= 16 * d * unit * horner(abs_coeffs, abs(z[i])):
                    done[i] = True
                    continue
                w = p / dp if dp != 0 else mpc(eps)
                s = mpc(0)
                for j in range(d):
                    if j != i:
                        s += 1 / (z[i] - z[j])
                step = w / (1 - w * s)
                z[i] -= step
                if abs(step) <= eps * max(1, abs(z[i])):
                    done[i] = True
            if all(done):
                break
        else:
            raise RootFindingError("Aberth iteration did not converge",
                                   [abs(horner(mcoeffs, r)) / lead for r in z])
        residuals = [abs(horner(mcoeffs, r)) / lead for r in z]
        limit = mpf(10) ** (15 - ctx.digits)
        if max(residuals) >= limit:
            raise RootFindingError("root residual above tolerance", residuals)
    return sorted(z, key=lambda r: (float(r.real), float(r.imag)))


def critical_roots(poly: CriticalPolynomial, ctx: Optional[PrecisionContext] = None) -> List[mpc]:
    """Roots of the critical polynomial through its even part Q(tau^2)."""
    ctx = _ctx(ctx)
    if not poly.is_even():
        return find_roots(poly.coefficients, ctx)
    dps = working_digits(list(poly.coefficients), ctx.digits)
    squares = find_roots(poly.even_part(), PrecisionContext(dps))
    lead = abs(poly.leading)
    out = []
    with mpmath.workdps(dps):
        for x in squares:
            r = mpmath.sqrt(x)
            out.extend([r, -r])
        residuals = [abs(horner(poly.coefficients, r)) / lead for r in out]
        if max(residuals) >= mpf(10) ** (15 - ctx.digits):
            raise RootFindingError("root residual above tolerance", residuals)
    return sorted(out, key=lambda r: (float(r.real), float(r.imag)))
