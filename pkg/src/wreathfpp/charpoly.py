"""Derangement profiles, the characteristic polynomial and the exact FPP classifier.

For a nonempty set ``S`` of permutations of ``{1..d}`` the characteristic
polynomial is

    f_S(x) = sum_{k>=1} D_S(k)/#S * (1 - (1 - x)^k)

where ``D_S(k)`` counts elements of ``S`` with exactly ``k`` fixed points. The
fixed-point proportion of the iterated wreath product over ``S`` is the
largest fixed point of ``f_S`` on ``[0, 1]``; :func:`fpp_of_set` decides it
exactly when it is 0 or 1 and otherwise returns a certified rational bracket.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import InternalInvariantError, ValidationError
from .permgroup import Coset, Perm, PermSet, fixed_point_count, orbit

DEFAULT_PRECISION = 60
DEFAULT_DIGITS = 15

EXACT_ZERO = "ExactZero"
EXACT_ONE = "ExactOne"
EXACT_RATIONAL = "ExactRational"
BRACKET = "Bracket"

# certificate reasons
DERANGEMENT_FREE = "DerangementFree"
SUBCRITICAL_DERIVATIVE = "SubcriticalDerivative"
ROOT_BRACKET = "RootBracket"
COSET_AVERAGE = "CosetAverage"
CLOSED_FORM = "ClosedForm"


def frac_str(q: Fraction) -> str:
    """Serialize a rational as ``"num/den"`` (always with a denominator)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text)


def to_decimal(q: Fraction, digits: int = DEFAULT_DIGITS) -> str:
    """Round ``q`` to ``digits`` significant digits (half-even)."""
    q = Fraction(q)
    if q == 0:
        return "0"
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    val = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    s = format(val, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


@dataclass(frozen=True)
class DerangementProfile:
    """``counts[k]`` = number of elements with exactly ``k`` fixed points."""

    d: int
    counts: tuple
    total: int

    def __post_init__(self):
        if len(self.counts) != self.d + 1:
            raise ValidationError("profile needs d + 1 counts")
        if sum(self.counts) != self.total:
            raise ValidationError("profile counts do not sum to total")
        if any(c < 0 for c in self.counts):
            raise ValidationError("negative count in profile")
        if self.d >= 2 and self.counts[self.d - 1]:
            raise ValidationError("no permutation fixes exactly d - 1 points")

    def __getitem__(self, k: int) -> int:
        return self.counts[k]


def profile(S: PermSet | Coset | Iterable[Perm]) -> DerangementProfile:
    elems = _elements(S)
    if not elems:
        raise ValidationError("profile of an empty set")
    d = elems[0].degree
    counts = [0] * (d + 1)
    for s in elems:
        counts[fixed_point_count(s)] += 1
    return DerangementProfile(d, tuple(counts), len(elems))


def _elements(S) -> list:
    if isinstance(S, Coset):
        return list(S.elements.elements)
    if isinstance(S, PermSet):
        return list(S.elements)
    return list(dict.fromkeys(S))


class RationalPoly:
    """Dense polynomial with :class:`~fractions.Fraction` coefficients, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RationalPoly":
        return RationalPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other):
        other = other if isinstance(other, RationalPoly) else RationalPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPoly([x + y for x, y in zip(a, b)])

    def __neg__(self):
        return RationalPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, RationalPoly) else RationalPoly([other])
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            return RationalPoly([c * Fraction(other) for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def shift_down(self) -> "RationalPoly":
        """``p(x) / x`` for a polynomial with zero constant term."""
        if self.coeffs and self.coeffs[0] != 0:
            raise ValidationError("polynomial is not divisible by x")
        return RationalPoly(self.coeffs[1:])

    def __eq__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RationalPoly({[frac_str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if k and abs(c) == 1:
                coef = "-" if c < 0 else ""
            else:
                coef = str(c) + ("*" if mono else "")
            terms.append(coef + mono)
        return " + ".join(terms).replace("+ -", "- ")


def char_polynomial(p: DerangementProfile) -> RationalPoly:
    """Monomial expansion of ``sum_k D[k]/total * (1 - (1-x)^k)``."""
    if p.total < 1:
        raise ValidationError("profile total must be >= 1")
    coeffs = [Fraction(0)] * (p.d + 1)
    for k in range(1, p.d + 1):
        w = Fraction(p.counts[k], p.total)
        if not w:
            continue
        # 1 - (1-x)^k = -sum_{j>=1} C(k,j) (-x)^j
        for j in range(1, k + 1):
            coeffs[j] -= w * comb(k, j) * (-1) ** j
    return RationalPoly(coeffs)


def derivative_at_zero(p: DerangementProfile) -> Fraction:
    if p.total < 1:
        raise ValidationError("profile total must be >= 1")
    return Fraction(sum(k * c for k, c in enumerate(p.counts)), p.total)


def fixed_point_gap(p: DerangementProfile) -> RationalPoly:
    """``f_S(x)/x - 1``, whose unique root in ``(0, 1)`` (if any) is the FPP."""
    return char_polynomial(p).shift_down() - 1


@dataclass(frozen=True)
class Certificate:
    reason: str
    data: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FppValue:
    """Exact or certified value of a fixed-point proportion.

    For exact kinds ``lo == hi == value``. For ``Bracket`` the true value lies
    in the open interval ``(lo, hi)``.
    """

    kind: str
    lo: Fraction
    hi: Fraction
    decimal: str
    certificate: Certificate
    value: Fraction | None = None

    @property
    def is_exact(self) -> bool:
        return self.kind != BRACKET

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.value if self.is_exact else self.midpoint)

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "value": frac_str(self.value) if self.value is not None else None,
            "decimal": self.decimal,
            "bracket_lo": frac_str(self.lo),
            "bracket_hi": frac_str(self.hi),
            "certificate_reason": self.certificate.reason,
            "certificate": dict(self.certificate.data),
        }

    @classmethod
    def exact(cls, q: Fraction, certificate: Certificate,
              digits: int = DEFAULT_DIGITS) -> "FppValue":
        q = Fraction(q)
        if not 0 <= q <= 1:
            raise ValidationError(f"proportion {q} outside [0, 1]")
        kind = EXACT_ZERO if q == 0 else EXACT_ONE if q == 1 else EXACT_RATIONAL
        return cls(kind, q, q, to_decimal(q, digits), certificate, q)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def fpp_from_profile(p: DerangementProfile, precision: int = DEFAULT_PRECISION,
                     digits: int = DEFAULT_DIGITS) -> FppValue:
    if p.total < 1:
        raise ValidationError("empty set has no fixed-point proportion")
    if precision < 1:
        raise ValidationError("precision must be >= 1 bit")

    if p.counts[0] == 0:
        return FppValue.exact(1, Certificate(DERANGEMENT_FREE, {"derangements": 0}), digits)

    slope = derivative_at_zero(p)
    if slope <= 1:
        return FppValue.exact(
            0, Certificate(SUBCRITICAL_DERIVATIVE, {"derivative_at_zero": frac_str(slope)}),
            digits)

    g = fixed_point_gap(p)
    lo, hi = _initial_bracket(g, precision)
    width = Fraction(1, 2 ** precision)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = _sign(g(mid))
        if s > 0:
            lo = mid
        elif s < 0:
            hi = mid
        else:
            lo, hi = _bracket_exact_root(g, mid, precision)
            break
    glo, ghi = g(lo), g(hi)
    if not (lo < hi and glo > 0 > ghi and hi - lo <= width):
        raise InternalInvariantError("bisection produced an invalid bracket")
    cert = Certificate(ROOT_BRACKET, {
        "g_lo": frac_str(glo),
        "g_hi": frac_str(ghi),
        "precision_bits": precision,
        "derivative_at_zero": frac_str(slope),
    })
    return FppValue(BRACKET, lo, hi, to_decimal((lo + hi) / 2, digits), cert)


def _initial_bracket(g: RationalPoly, precision: int) -> tuple:
    # g(1) = -D[0]/total < 0 and g(0+) = f'(0) - 1 > 0
    hi = Fraction(1)
    x = Fraction(1, 2)
    for _ in range(4 * precision):
        s = _sign(g(x))
        if s > 0:
            return x, hi
        if s == 0:
            return _bracket_exact_root(g, x, precision)
        hi = x
        x /= 2
    raise InternalInvariantError("no point with f(x) > x found while halving from 1/2")


def _bracket_exact_root(g: RationalPoly, r: Fraction, precision: int) -> tuple:
    eps = Fraction(1, 2 ** (precision + 1))
    lo = r - eps if r - eps > 0 else r / 2
    hi = min(r + eps, Fraction(1))
    return lo, hi


def fpp_of_set(S: PermSet | Coset | Iterable[Perm], precision: int = DEFAULT_PRECISION,
               digits: int = DEFAULT_DIGITS) -> FppValue:
    """Fixed-point proportion of the iterated wreath product over ``S``.

    Returns ``ExactOne`` when no element of ``S`` is a derangement,
    ``ExactZero`` when ``f_S'(0) <= 1``, and otherwise a ``Bracket`` of width
    at most ``2**-precision`` around the unique positive fixed point of
    ``f_S``, found by bisection with exact rational sign tests.
    """
    return fpp_from_profile(profile(S), precision, digits)


def mean_fpp(values: Sequence[FppValue], precision: int = DEFAULT_PRECISION,
             digits: int = DEFAULT_DIGITS) -> FppValue:
    """Arithmetic mean of FPP values with exact interval endpoints.

    The mean of brackets each no wider than ``2**-precision`` is itself no
    wider than that, so no re-tightening is needed.
    """
    if not values:
        raise ValidationError("mean of no values")
    k = len(values)
    lo = sum((v.lo for v in values), Fraction(0)) / k
    hi = sum((v.hi for v in values), Fraction(0)) / k
    kinds = {}
    for v in values:
        kinds[v.kind] = kinds.get(v.kind, 0) + 1
    data = {"terms": k, "kinds": kinds}
    if all(v.is_exact for v in values):
        return FppValue.exact(lo, Certificate(COSET_AVERAGE, data), digits)
    if hi - lo > Fraction(1, 2 ** precision):
        raise InternalInvariantError("averaged bracket wider than requested precision")
    return FppValue(BRACKET, lo, hi, to_decimal((lo + hi) / 2, digits),
                    Certificate(COSET_AVERAGE, data))


def coset_average_fixed(A: Coset | PermSet | Iterable[Perm]) -> Fraction:
    """Average number of fixed points ``(1/#A) sum_a #X^a`` on ``{1..d}``."""
    elems = _elements(A)
    if not elems:
        raise ValidationError("empty coset")
    return Fraction(sum(fixed_point_count(a) for a in elems), len(elems))


def star_orbit_count(H: PermSet, g: Perm) -> int:
    """Number of ``H``-orbits on ``Y* = {y : h(y) = g^-1(y) for some h in H}``.

    For ``g`` normalizing ``H`` this equals the average fixed-point count of
    the coset ``gH``.
    """
    ginv = g.inverse()
    ystar = [y for y in range(1, H.degree + 1)
             if any(h(y) == ginv(y) for h in H.elements)]
    seen = set()
    count = 0
    for y in ystar:
        if y not in seen:
            count += 1
            seen |= orbit(H, y)
    return count
