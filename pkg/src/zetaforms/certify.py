"""Certificates for the irrationality criterion and the dimension bound.

A certificate never asserts a strict inequality from round-off: when the
margin is within ten times the working tolerance the verdict is
INCONCLUSIVE. A kappa obtained while the closeness condition on mu_1 fails
is flagged as uncertified, and such a certificate cannot PASS.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import mpmath
from mpmath import mpf

from .arithnorm import varpi
from .asymptotics.polynomial import critical_polynomial
from .asymptotics.saddle import (
    UncertifiedWarning,
    check_condition19,
    kappa_at,
    kappa_edge,
    kappa_root,
    mu1,
)
from .exactnum import CERTIFY_DIGITS, PrecisionContext, decimal_field
from .formbuilder import validate_triple

THEOREM4_SLOPE = Fraction(395, 1000)
DELTA_3 = 2  # the irrationality of zeta(3), cited rather than computed


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class Certificate:
    kind: str  # "irrationality" or "dimension"
    params: Dict[str, int]
    kappa: Optional[mpf]
    varpi: Optional[mpf]
    criterionValue: Optional[mpf] = None
    deltaBound: Optional[mpf] = None
    deltaInteger: Optional[int] = None
    margin: Optional[mpf] = None
    verdict: Verdict = Verdict.INCONCLUSIVE
    certified: bool = True
    window: List[int] = field(default_factory=list)
    provenance: Dict[str, object] = field(default_factory=dict)
    digits: int = CERTIFY_DIGITS
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self, digits: int = 30) -> dict:
        def real(x):
            return None if x is None else decimal_field(x, digits)

        return {
            "kind": self.kind,
            "params": dict(self.params),
            "kappa": real(self.kappa),
            "varpi": real(self.varpi),
            "criterionValue": real(self.criterionValue),
            "deltaBound": real(self.deltaBound),
            "deltaInteger": self.deltaInteger,
            "margin": real(self.margin),
            "verdict": self.verdict.value,
            "certified": self.certified,
            "window": list(self.window),
            "provenance": self.provenance,
            "workingDigits": self.digits,
            "notes": list(self.notes),
        }


def _ctx80(ctx: Optional[PrecisionContext]) -> PrecisionContext:
    return ctx if ctx is not None else PrecisionContext(CERTIFY_DIGITS)


def _band(ctx: PrecisionContext) -> mpf:
    return 10 * ctx.tol


def _verdict(margin, ctx: PrecisionContext, certified: bool = True) -> Verdict:
    """margin > 0 means the claimed inequality holds."""
    if abs(margin) <= _band(ctx):
        return Verdict.INCONCLUSIVE
    if margin < 0:
        return Verdict.FAIL
    return Verdict.PASS if certified else Verdict.INCONCLUSIVE


def zeta_window(a: int, b: int) -> List[int]:
    """Odd s with b < s < a + b."""
    return [s for s in range(b + 1, a + b) if s % 2 == 1]


def _kappa_quiet(a: int, b: int, c: int, ctx: PrecisionContext):
    """(kappa, mu, mu_1, condition holds) without emitting the uncertified warning."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UncertifiedWarning)
        with ctx.workdps(10):
            m1 = mu1(a, b, c, ctx)
            ok = check_condition19(a, b, c, m1)
            mu = kappa_root(a, b, c, ctx)
            k = kappa_edge(a, b, c, ctx) if b == 1 else kappa_at(a, b, c, mu)
            return k, mu, m1, ok


# ------------------------------------------------------------ irrationality


def irrationality_criterion(a: int, b: int, c: int,
                            ctx: Optional[PrecisionContext] = None) -> Certificate:
    """kappa + 2(a+b-1) - b varpi_c < 0 forces an irrational zeta(s), s odd in (b, a+b)."""
    validate_triple(a, b, c)
    ctx = _ctx80(ctx)
    with ctx.workdps(10):
        k, mu, m1, ok = _kappa_quiet(a, b, c, ctx)
        w = varpi(c, ctx)
        value = k + 2 * (a + b - 1) - b * w
        margin = -value
    verdict = _verdict(margin, ctx, ok)
    cert = Certificate(
        kind="irrationality", params={"a": a, "b": b, "c": c},
        kappa=k, varpi=w, criterionValue=value, margin=margin,
        verdict=verdict, certified=ok, digits=ctx.digits,
        window=zeta_window(a, b) if verdict is Verdict.PASS else [],
        provenance={
            "mu": {"re": decimal_field(mpmath.re(mu), 30), "im": decimal_field(mpmath.im(mu), 30)},
            "mu1": decimal_field(m1, 30),
            "condition19": ok,
            "digits": ctx.digits,
        },
    )
    if not ok:
        cert.notes.append("mu_1 violates the closeness condition; kappa is uncertified")
    return cert


def _poly_divmod(num: List[int], den: List[int]) -> Tuple[List[Fraction], List[Fraction]]:
    """Exact division of ascending-coefficient polynomials."""
    num = [Fraction(v) for v in num]
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    lead = Fraction(den[-1])
    for i in range(len(num) - len(den), -1, -1):
        factor = num[i + len(den) - 1] / lead
        q[i] = factor
        for j, v in enumerate(den):
            num[i + j] -= factor * v
    rem = num[: len(den) - 1]
    return q, rem


def theorem2_certificate(b: int, ctx: Optional[PrecisionContext] = None,
                         margin_per_b: Fraction = Fraction(47, 1000)) -> Certificate:
    """The a = 7b, c = 3 family.

    The critical polynomial is X^b - Y^b with X = (t+3)(t-1)^8 and
    Y = (t-3)(t+1)^8, so it is divisible by X - Y and, b being odd, shares
    its real roots; in particular mu_1 does not depend on b. The criterion
    value is checked against -0.047 b, and so is the coarser quantity
    b (Re f_0(mu_1) + 16 - varpi_3) built from the b = 1 phase.
    """
    if b < 1 or b % 2 == 0:
        raise ValueError(f"b must be odd and positive, got {b}")
    ctx = _ctx80(ctx)
    a, c = 7 * b, 3
    cert = irrationality_criterion(a, b, c, ctx)
    _, rem = _poly_divmod(list(critical_polynomial(a, b, c).coefficients),
                          list(critical_polynomial(7, 1, 3).coefficients))
    divisible = all(v == 0 for v in rem)
    with ctx.workdps(10):
        m1_b, m1_1 = mu1(a, b, c, ctx), mu1(7, 1, 3, ctx)
        shared = divisible and abs(m1_b - m1_1) <= ctx.tol * m1_1
        limit = -mpf(margin_per_b.numerator) / margin_per_b.denominator * b
        coarse = b * (kappa_edge(7, 1, 3, ctx) + 16 - cert.varpi)
        margin = limit - cert.criterionValue
        coarse_margin = limit - coarse
        chain = coarse - cert.criterionValue
    verdicts = [_verdict(margin, ctx, cert.certified), _verdict(coarse_margin, ctx),
                _verdict(chain, ctx)]
    if not shared:
        verdict = Verdict.FAIL
    elif Verdict.FAIL in verdicts:
        verdict = Verdict.FAIL
    elif Verdict.INCONCLUSIVE in verdicts:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.PASS
    cert.margin = margin
    cert.verdict = verdict
    cert.window = zeta_window(a, b) if verdict is Verdict.PASS else []
    cert.provenance.update({
        "mu1Shared": shared,
        "divisibleByBaseCase": divisible,
        "marginLimit": decimal_field(limit, 30),
        "coarseValue": decimal_field(coarse, 30),
        "coarseMargin": decimal_field(coarse_margin, 30),
    })
    return cert


# ---------------------------------------------------------------- dimension


def delta_formula(a: int, c: int, kappa, varpi_c):
    """Right-hand side of the dimension estimate for b = 1, as a function of kappa."""
    num = kappa + 2 * a - varpi_c
    den = 2 * c * mpmath.log(c) + 2 * (a - c + 1) * mpmath.ln2 + 2 * a - varpi_c
    return 1 - num / den


def _integer_conclusion(bound, ctx: PrecisionContext) -> Tuple[int, bool]:
    """(largest k with bound > k - 1 guaranteed, whether the rounding was unambiguous)."""
    band = _band(ctx)
    k = int(mpmath.floor(bound - band)) + 1
    clear = int(mpmath.floor(bound + band)) + 1 == k
    return k, clear


def delta_lower_bound(a: int, c: int, ctx: Optional[PrecisionContext] = None,
                      target: Optional[int] = None) -> Certificate:
    """Lower bound for the dimension of the span of 1, zeta(3), ..., zeta(a).

    The real bound is reported together with its integer consequence. With
    ``target`` = k the verdict checks the claim that the dimension is at
    least k, i.e. that the real bound exceeds k - 1.
    """
    validate_triple(a, 1, c)
    ctx = _ctx80(ctx)
    with ctx.workdps(10):
        k, mu, m1, ok = _kappa_quiet(a, 1, c, ctx)
        w = varpi(c, ctx)
        bound = delta_formula(a, c, k, w)
        integer, clear = _integer_conclusion(bound, ctx)
        if target is None:
            margin = bound - (integer - 1)
            verdict = Verdict.PASS if (clear and ok) else Verdict.INCONCLUSIVE
        else:
            margin = bound - (target - 1)
            verdict = _verdict(margin, ctx, ok)
    cert = Certificate(
        kind="dimension", params={"a": a, "b": 1, "c": c},
        kappa=k, varpi=w, deltaBound=bound, deltaInteger=integer, margin=margin,
        verdict=verdict, certified=ok, digits=ctx.digits,
        provenance={"mu1": decimal_field(m1, 30), "condition19": ok, "digits": ctx.digits,
                    "target": target},
    )
    if not ok:
        cert.notes.append("mu_1 violates the closeness condition; kappa is uncertified")
    return cert


def theorem4_c(m: int) -> Tuple[int, int]:
    """(a, c) = (12^m + 1, 2 floor(a / (3 m^2)) + 1)."""
    a = 12**m + 1
    return a, 2 * (a // (3 * m * m)) + 1


def log_scale_check(m: int, ctx: Optional[PrecisionContext] = None) -> Certificate:
    """The dimension at a = 12^m + 1 exceeds m."""
    a, c = theorem4_c(m)
    cert = delta_lower_bound(a, c, ctx, target=m + 1)
    cert.provenance["m"] = m
    return cert


def _odd_grid(lo: int, hi: int, ratio: float = 1.25) -> List[int]:
    out, x = [], float(lo)
    while x <= hi:
        v = int(x) | 1
        if lo <= v <= hi and (not out or v != out[-1]):
            out.append(v)
        x *= ratio
    if out[-1] != hi and hi % 2 == 1:
        out.append(hi)
    return out


def best_c(a: int, ctx: Optional[PrecisionContext] = None, budget: int = 400) -> Tuple[int, mpf, int]:
    """Odd c maximising the dimension bound, by a geometric grid and a local scan.

    Only c meeting the closeness condition are admitted. Returns
    (c, bound, evaluations).
    """
    ctx = ctx or PrecisionContext(30)
    hi = a if a % 2 == 1 else a - 1
    cache: Dict[int, Optional[mpf]] = {}

    def value(c: int):
        if c not in cache:
            if len(cache) >= budget:
                raise RuntimeError(f"c search exceeded its budget of {budget} evaluations")
            k, _, _, ok = _kappa_quiet(a, 1, c, ctx)
            cache[c] = delta_formula(a, c, k, varpi(c, ctx)) if ok else None
        return cache[c]

    grid = _odd_grid(3, hi)
    scored = [(value(c), c) for c in grid]
    admitted = [(v, c) for v, c in scored if v is not None]
    if not admitted:
        raise RuntimeError(f"no odd c in [3, {hi}] satisfies the closeness condition")
    _, centre = max(admitted)
    i = grid.index(centre)
    lo = grid[max(0, i - 1)]
    up = grid[min(len(grid) - 1, i + 1)]
    for c in range(lo, up + 1, 2):
        value(c)
    best = max(((v, c) for c, v in cache.items() if v is not None))
    return best[1], best[0], len(cache)


def theorem4_check(a: int, ctx: Optional[PrecisionContext] = None) -> Certificate:
    """Dimension > 0.395 log a, with the best odd c found by search (desk scale a <~ 2000)."""
    if a < 3 or a % 2 == 0:
        raise ValueError(f"a must be odd and >= 3, got {a}")
    ctx = _ctx80(ctx)
    with ctx.workdps(10):
        rhs = mpf(THEOREM4_SLOPE.numerator) / THEOREM4_SLOPE.denominator * mpmath.log(a)
    if a == 3:
        margin = DELTA_3 - rhs
        return Certificate(
            kind="dimension", params={"a": 3, "b": 1}, kappa=None, varpi=None,
            deltaInteger=DELTA_3, margin=margin, verdict=_verdict(margin, ctx),
            digits=ctx.digits, provenance={"source": "citation", "rhs": decimal_field(rhs, 30)},
        )
    c, _, evaluations = best_c(a)
    cert = delta_lower_bound(a, c, ctx)
    with ctx.workdps(10):
        margin = cert.deltaInteger - rhs
    cert.margin = margin
    cert.verdict = Verdict.INCONCLUSIVE if cert.verdict is not Verdict.PASS else _verdict(margin, ctx)
    cert.provenance.update({"rhs": decimal_field(rhs, 30), "cSearchEvaluations": evaluations,
                            "cChosen": c})
    return cert


def slope_chain_holds() -> bool:
    """0.395 > 2 / (3 (1 + log 2)), so the first inequality implies the second."""
    with mpmath.workdps(50):
        return mpf(THEOREM4_SLOPE.numerator) / THEOREM4_SLOPE.denominator > 2 / (3 * (1 + mpmath.ln2))


# ---------------------------------------------------------------- reproduce


THEOREM1_TRIPLES = ((19, 3, 3), (33, 5, 3), (47, 7, 3))
THEOREM2_BS = (1, 3, 5, 7)
THEOREM3_PAIRS = ((145, 21, 3), (1971, 131, 4))  # (a, c, claimed dimension)


@dataclass
class LineItem:
    label: str
    certificate: Optional[Certificate]
    verdict: Verdict
    detail: str = ""

    def to_dict(self) -> dict:
        return {"label": self.label, "verdict": self.verdict.value, "detail": self.detail,
                "certificate": self.certificate.to_dict() if self.certificate else None}


@dataclass
class Reproduction:
    theorem: int
    items: List[LineItem]

    @property
    def verdict(self) -> Verdict:
        verdicts = [item.verdict for item in self.items]
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.INCONCLUSIVE in verdicts:
            return Verdict.INCONCLUSIVE
        return Verdict.PASS

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "verdict": self.verdict.value,
                "items": [item.to_dict() for item in self.items]}


def _chain_item(label: str, delta: int, a_hi: int, ctx: PrecisionContext) -> LineItem:
    """A dimension >= delta at the start of a range of odd a beats 0.395 log a up to a_hi."""
    with ctx.workdps(10):
        rhs = mpf(THEOREM4_SLOPE.numerator) / THEOREM4_SLOPE.denominator * mpmath.log(a_hi)
        margin = delta - rhs
    verdict = _verdict(margin, ctx)
    return LineItem(label, None, verdict, f"{delta} > 0.395 log {a_hi} = {mpmath.nstr(rhs, 10)}")


def reproduce(theorem: int, ctx: Optional[PrecisionContext] = None,
              extra_m: Tuple[int, ...] = ()) -> Reproduction:
    """Run the published parameter sets of a theorem and collect per-item verdicts.

    Failures of individual items are recorded, never raised.
    """
    ctx = _ctx80(ctx)
    items: List[LineItem] = []

    def run(label, fn):
        try:
            cert = fn()
            items.append(LineItem(label, cert, cert.verdict))
        except Exception as exc:  # collected, reported as a failed line
            items.append(LineItem(label, None, Verdict.FAIL, f"{type(exc).__name__}: {exc}"))
        return items[-1]

    if theorem == 1:
        for a, b, c in THEOREM1_TRIPLES:
            run(f"irrationality a={a} b={b} c={c}", lambda a=a, b=b, c=c: irrationality_criterion(a, b, c, ctx))
    elif theorem == 2:
        for b in THEOREM2_BS:
            run(f"a=7b family b={b}", lambda b=b: theorem2_certificate(b, ctx))
    elif theorem == 3:
        for a, c, k in THEOREM3_PAIRS:
            run(f"dimension a={a} c={c} at least {k}", lambda a=a, c=c, k=k: delta_lower_bound(a, c, ctx, target=k))
    elif theorem == 4:
        items.append(LineItem("0.395 exceeds 2/(3(1+log 2))", None,
                              Verdict.PASS if slope_chain_holds() else Verdict.FAIL))
        dims = {}
        for a, c, k in THEOREM3_PAIRS:
            item = run(f"dimension a={a} c={c} at least {k}",
                       lambda a=a, c=c, k=k: delta_lower_bound(a, c, ctx, target=k))
            dims[a] = k if item.verdict is Verdict.PASS else None
        # the dimension is non-decreasing in a, so each bound covers a range
        items.append(_chain_item("a in [3, 145): dimension 2 (cited)", DELTA_3, 143, ctx))
        for (a, _, k), nxt in zip(THEOREM3_PAIRS, (1971, 24999)):
            if dims[a] is None:
                items.append(LineItem(f"a in [{a}, {nxt})", None, Verdict.FAIL, "base bound missing"))
            else:
                items.append(_chain_item(f"a in [{a}, {nxt}): dimension {k}", k, nxt - 2, ctx))
        for m in (4, *extra_m):
            run(f"dimension at 12^{m}+1 exceeds {m}", lambda m=m: log_scale_check(m, ctx))
    else:
        raise ValueError(f"theorem must be 1, 2, 3 or 4, got {theorem}")
    return Reproduction(theorem, items)
