"""Phase function f, its derivatives, f_0, g, and the cot_b polynomials V_b.

All logarithms are principal; on the plane cut along (-inf, 1] and
[c, +inf) this realises the branch that is real on (1, c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List

import mpmath
from mpmath import mpf

from ..formbuilder import validate_triple


@dataclass(frozen=True)
class PhaseFunction:
    a: int
    b: int
    c: int

    def __post_init__(self):
        validate_triple(self.a, self.b, self.c)

    @property
    def _ab(self):
        return self.a + self.b

    def f(self, tau):
        a, b, c, ab = self.a, self.b, self.c, self._ab
        log = mpmath.log
        return ((ab - b * c) * 2 * mpmath.ln2
                + b * (tau + c) * log(tau + c) + b * (c - tau) * log(c - tau)
                + ab * (tau - 1) * log(tau - 1) - ab * (tau + 1) * log(tau + 1))

    def fprime(self, tau):
        b, c, ab = self.b, self.c, self._ab
        log = mpmath.log
        return b * log(tau + c) - b * log(c - tau) + ab * log(tau - 1) - ab * log(tau + 1)

    def fsecond(self, tau):
        b, c, ab = self.b, self.c, self._ab
        return b / (tau + c) + b / (c - tau) + ab / (tau - 1) - ab / (tau + 1)

    def f0(self, tau):
        """f(tau) - tau f'(tau)."""
        a, b, c, ab = self.a, self.b, self.c, self._ab
        log = mpmath.log
        return ((ab - b * c) * 2 * mpmath.ln2 + b * c * log(tau + c) + b * c * log(c - tau)
                - ab * log(tau + 1) - ab * log(tau - 1))

    def g(self, tau):
        b, c, ab = self.b, self.c, self._ab
        return mpmath.exp(mpf(b) / 2 * (mpmath.log(tau + c) + mpmath.log(c - tau))
                          - mpf(ab) / 2 * (mpmath.log(tau + 1) + mpmath.log(tau - 1)))

    def re_fprime(self, tau):
        """log(|tau+c|^b |tau-1|^(a+b) / (|tau-c|^b |tau+1|^(a+b))), branch-free."""
        b, c, ab = self.b, self.c, self._ab
        return (b * (mpmath.log(abs(tau + c)) - mpmath.log(abs(tau - c)))
                + ab * (mpmath.log(abs(tau - 1)) - mpmath.log(abs(tau + 1))))

    def re_f0(self, tau):
        """Re f_0 through moduli only; valid on either bank of the cuts."""
        a, b, c, ab = self.a, self.b, self.c, self._ab
        log = mpmath.log
        return (2 * (ab - b * c) * mpmath.ln2 + b * c * (log(abs(tau + c)) + log(abs(tau - c)))
                - ab * (log(abs(tau + 1)) + log(abs(tau - 1))))


def _poly_derivative(p: List[Fraction]) -> List[Fraction]:
    return [i * p[i] for i in range(1, len(p))] or [Fraction(0)]


def _poly_add(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, v in enumerate(p):
        out[i] += v
    for i, v in enumerate(q):
        out[i] += v
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


@dataclass
class VbPolynomial:
    """sin^b z cot_b z = V_b(cos z), with V_b(cos z) = sum_k expCoeffs[k] e^(ikz)."""

    b: int
    coefficients: List[Fraction]
    expCoeffs: Dict[int, Fraction] = field(default_factory=dict)

    def __call__(self, y):
        coeffs = self.coefficients
        if not isinstance(y, (int, Fraction)):
            coeffs = [mpf(v.numerator) / v.denominator for v in coeffs]
        acc = 0
        for v in reversed(coeffs):
            acc = acc * y + v
        return acc

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def vb_polynomial(b: int) -> VbPolynomial:
    if b < 1:
        raise ValueError("b must be >= 1")
    V = [Fraction(0), Fraction(1)]
    for m in range(1, b):
        # V_{m+1} = y V_m + (1 - y^2) V_m' / m
        shifted = [Fraction(0)] + V
        tail = [v / m for v in _poly_mul([Fraction(1), Fraction(0), Fraction(-1)], _poly_derivative(V))]
        V = _poly_add(shifted, tail)
    exp = {}
    for j, v in enumerate(V):
        if v == 0:
            continue
        # cos^j z = 2^-j sum_i binom(j, i) e^{i(2i-j)z}
        for i in range(j + 1):
            k = 2 * i - j
            exp[k] = exp.get(k, Fraction(0)) + v * Fraction(math.comb(j, i), 2**j)
    exp = {k: v for k, v in sorted(exp.items()) if v != 0}
    return VbPolynomial(b, V, exp)


def cot_b(b: int, z, vb: VbPolynomial = None):
    """cot_b z = V_b(cos z) / sin^b z."""
    vb = vb or vb_polynomial(b)
    return vb(mpmath.cos(z)) / mpmath.sin(z) ** b
