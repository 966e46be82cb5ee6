"""Places, absolute values, Weil heights, radicals, and quality statistics.

Every real-valued computation runs under a fixed high-precision mantissa
(128 bits by default) and is rounded to float only at the boundary.  Finite
absolute values are kept exact as Fractions for as long as possible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import UsageError
from .ring import (
    PrimeIdealData,
    QuadraticElement,
    QuadraticField,
    as_element,
    euler_phi,
    field_norm,
    ideal_factors,
)

DEFAULT_PRECISION = 128  # mantissa bits


@dataclass(frozen=True)
class PlaceValue:
    """The normalized absolute value of one element at one place.

    For a finite place the value is N(P)^(-v), exact.  For an infinite place
    it is |sigma(x)|^weight: weight 1 per real embedding, weight 2 for the
    single complex place (where |sigma(x)|^2 = N(x) is again exact).
    """

    kind: str  # "finite" | "infinite"
    value: object  # Fraction or mpf
    ideal: Optional[PrimeIdealData] = None
    embedding: int = 0
    weight: int = 1

    def log_value(self, precision: int = DEFAULT_PRECISION):
        with mpmath.workprec(precision):
            if isinstance(self.value, Fraction):
                return mpmath.log(self.value.numerator) - mpmath.log(
                    self.value.denominator)
            return mpmath.log(self.value)


def _degree(field: Optional[QuadraticField]) -> int:
    return 1 if field is None else 2


def _infinite_places(g: QuadraticElement, precision: int) -> list[PlaceValue]:
    with mpmath.workprec(precision):
        if g.field is None:
            return [PlaceValue("infinite", abs(Fraction(g.num_a, g.den)))]
        f = g.field
        if f.d < 0:
            # one complex place; the square of the modulus is the norm
            return [PlaceValue("infinite", field_norm(g), weight=2)]
        s = mpmath.sqrt(f.disc)
        out = []
        for i, sgn in enumerate((1, -1)):
            omega = (f.omega_trace + sgn * s) / 2
            val = abs((g.num_a + g.num_b * omega) / g.den)
            out.append(PlaceValue("infinite", val, embedding=i))
        return out


def local_values(x, field: Optional[QuadraticField] = None,
                 precision: int = DEFAULT_PRECISION) -> list[PlaceValue]:
    """Finite places where the absolute value differs from 1, then all
    infinite places."""
    g = as_element(x, field)
    if g.is_zero():
        raise UsageError("zero has no place decomposition")
    out = []
    for P, v in ideal_factors(g):
        out.append(PlaceValue("finite", Fraction(P.norm) ** (-v), ideal=P))
    out.extend(_infinite_places(g, precision))
    return out


def lambda_v(x, place: PlaceValue, field: Optional[QuadraticField] = None,
             precision: int = DEFAULT_PRECISION) -> float:
    """Local height contribution log^+ of the place value, degree-normalized."""
    g = as_element(x, field)
    with mpmath.workprec(precision):
        lv = place.log_value(precision)
        return float(max(lv, mpmath.mpf(0)) / _degree(g.field))


def element_height(x, field: Optional[QuadraticField] = None,
                   precision: int = DEFAULT_PRECISION) -> float:
    """Absolute logarithmic Weil height."""
    g = as_element(x, field)
    if g.is_zero():
        raise UsageError("height of zero is undefined")
    with mpmath.workprec(precision):
        total = mpmath.mpf(0)
        for pv in local_values(g, precision=precision):
            lv = pv.log_value(precision)
            if lv > 0:
                total += lv
        return float(total / _degree(g.field))


def archimedean_height_sum(x, field: Optional[QuadraticField] = None,
                           precision: int = DEFAULT_PRECISION) -> float:
    """Sum of the local contributions over the infinite places only."""
    g = as_element(x, field)
    if g.is_zero():
        raise UsageError("zero has no archimedean contribution")
    with mpmath.workprec(precision):
        total = mpmath.mpf(0)
        for pv in _infinite_places(g, precision):
            total += max(pv.log_value(precision), mpmath.mpf(0))
        return float(total / _degree(g.field))


def log_norm(obj, precision: int = DEFAULT_PRECISION) -> float:
    """log|N(.)| / [K:Q] of a prime ideal or a nonzero element."""
    with mpmath.workprec(precision):
        if isinstance(obj, PrimeIdealData):
            return float(mpmath.log(obj.norm) / _degree(obj.field))
        g = obj if isinstance(obj, QuadraticElement) else as_element(obj)
        if g.is_zero():
            raise UsageError("log-norm of zero is undefined")
        nrm = field_norm(g)
        lv = mpmath.log(abs(nrm.numerator)) - mpmath.log(nrm.denominator)
        return float(lv / _degree(g.field))


def _coerce_triple(xs, field):
    elems = [x for x in xs if isinstance(x, QuadraticElement)]
    if field is None and elems:
        field = elems[0].field
    return [as_element(x, field) for x in xs]


def triple_height(x1, x2, x3, field: Optional[QuadraticField] = None,
                  precision: int = DEFAULT_PRECISION) -> float:
    """Projective height of (x1 : x2 : x3)."""
    xs = _coerce_triple((x1, x2, x3), field)
    nz = [g for g in xs if not g.is_zero()]
    if not nz:
        raise UsageError("the zero triple has no height")
    deg = _degree(nz[0].field)
    vals: dict[str, tuple[PrimeIdealData, list[int]]] = {}
    for i, g in enumerate(nz):
        for P, v in ideal_factors(g):
            row = vals.setdefault(P.label(), (P, [0] * len(nz)))
            row[1][i] = v
    with mpmath.workprec(precision):
        total = mpmath.mpf(0)
        for P, vrow in vals.values():
            m = min(vrow)
            if m:
                total -= m * mpmath.log(P.norm)
        per_place = zip(*(_infinite_places(g, precision) for g in nz))
        for column in per_place:
            total += max(pv.log_value(precision) for pv in column)
        return float(total / deg)


def radical(x1, x2, x3, field: Optional[QuadraticField] = None,
            precision: int = DEFAULT_PRECISION) -> float:
    """Sum of log-norms over the primes where the coordinate valuations
    do not all agree."""
    xs = _coerce_triple((x1, x2, x3), field)
    if any(g.is_zero() for g in xs):
        raise UsageError("radical requires nonzero coordinates")
    deg = _degree(xs[0].field)
    vals: dict[str, tuple[PrimeIdealData, list[int]]] = {}
    for i, g in enumerate(xs):
        for P, v in ideal_factors(g):
            row = vals.setdefault(P.label(), (P, [0, 0, 0]))
            row[1][i] = v
    with mpmath.workprec(precision):
        total = mpmath.mpf(0)
        for P, vrow in vals.values():
            if len(set(vrow)) > 1:
                total += mpmath.log(P.norm)
        return float(total / deg)


def abc_quality(x1, x2, x3, field: Optional[QuadraticField] = None,
                precision: int = DEFAULT_PRECISION) -> float:
    """Height-to-radical ratio of a zero-sum triple.

    A radical of zero with positive height reports math.inf instead of
    raising; callers treat that as the degenerate-quality flag.
    """
    xs = _coerce_triple((x1, x2, x3), field)
    if any(g.is_zero() for g in xs):
        raise UsageError("quality requires nonzero coordinates")
    if not (xs[0] + xs[1] + xs[2]).is_zero():
        raise UsageError("quality is defined for zero-sum triples only")
    h = triple_height(*xs, precision=precision)
    r = radical(*xs, precision=precision)
    if r == 0.0:
        return math.inf if h > 0 else 0.0
    return h / r


@dataclass(frozen=True)
class PhiRatio:
    n: int
    ratio: float   # log-norm of the cyclotomic value over phi(n)
    target: float  # archimedean height sum of the base, the n -> inf limit


def phi_norm_ratio(gamma, n: int, field: Optional[QuadraticField] = None,
                   precision: int = DEFAULT_PRECISION) -> PhiRatio:
    from .certificates import cyclotomic_value  # deferred: two-way dependency
    g = as_element(gamma, field)
    val = cyclotomic_value(g, n)
    if val.is_zero():
        raise UsageError("cyclotomic value vanishes: torsion base")
    ratio = log_norm(val, precision) / euler_phi(n)
    return PhiRatio(n, ratio, archimedean_height_sum(g, precision=precision))


def totient_density(Y: int, delta: float) -> tuple[int, float]:
    """Count of n <= Y with phi(n) >= delta * n, and the guaranteed lower
    bound (6/pi^2 - delta) * Y it must beat."""
    if Y < 1:
        raise UsageError("Y must be >= 1")
    if not 0 < delta < 6 / math.pi ** 2:
        raise UsageError("delta must sit in (0, 6/pi^2)")
    phi = list(range(Y + 1))
    for p in range(2, Y + 1):
        if phi[p] == p:  # p survived untouched, hence prime
            for m in range(p, Y + 1, p):
                phi[m] -= phi[m] // p
    count = sum(1 for m in range(1, Y + 1) if phi[m] >= delta * m)
    return count, (6 / math.pi ** 2 - delta) * Y
