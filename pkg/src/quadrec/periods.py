"""Periods of linear recurrences modulo prime-ideal powers.

A recurrence tuple (a_1..a_m; b_1..b_m) defines x_k = sum b_i a_i^k.  The
closed formula gives the period modulo P^e as the lcm of the multiplicative
orders of the a_i in the residue ring; period_bruteforce iterates the state
vector instead and exists to keep the formula honest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DegenerateInputError, ResourceLimitError, UsageError
from .ring import (
    PrimeIdealData,
    QuadraticElement,
    ResidueElement,
    as_element,
    factorize,
    field_norm,
    kronecker,
    prime_ideals_above,
    qelem,
    quad_valuation,
    quadratic_field,
    reduce,
    residue_pow,
    unit_group_order,
)

Modulus = Union[int, tuple[PrimeIdealData, int]]


@dataclass(frozen=True)
class RecurrenceTuple:
    """Generators a and weights b, all nonzero, generators pairwise distinct."""

    a: tuple[QuadraticElement, ...]
    b: tuple[QuadraticElement, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.a) != len(self.b) or not self.a:
            raise UsageError("need equally many generators and weights, at least one")
        if any(x.is_zero() for x in self.a) or any(x.is_zero() for x in self.b):
            raise UsageError("zero entries are not allowed in a recurrence tuple")
        if len({(x.field, x.num_a, x.num_b, x.den) for x in self.a}) != len(self.a):
            raise UsageError("generators must be pairwise distinct")

    @property
    def order(self) -> int:
        return len(self.a)

    def field(self):
        for x in self.a + self.b:
            if x.field is not None:
                return x.field
        return None


@dataclass(frozen=True)
class PeriodReport:
    modulus: str
    period: int
    per_generator_orders: tuple[tuple[int, str, int], ...]
    method: str  # "formula" | "brute_force"


def fibonacci_tuple() -> RecurrenceTuple:
    """Binet pair: x_k = (phi^k - phibar^k)/sqrt(5) = F_k."""
    K = quadratic_field(5)
    phi = qelem(K, 0, 1)
    phibar = qelem(K, 1, -1)
    inv_sqrt5 = qelem(K, -1, 2, 5)  # (2w-1)/5 = 1/sqrt(5)
    return RecurrenceTuple((phi, phibar), (inv_sqrt5, -inv_sqrt5), "fibonacci")


def lucas_tuple() -> RecurrenceTuple:
    K = quadratic_field(5)
    one = as_element(1, K)
    return RecurrenceTuple((qelem(K, 0, 1), qelem(K, 1, -1)), (one, one), "lucas")


def rational_tuple(roots: Sequence[int], weights: Sequence[int],
                   name: str = "") -> RecurrenceTuple:
    return RecurrenceTuple(
        tuple(as_element(Fraction(r)) for r in roots),
        tuple(as_element(Fraction(w)) for w in weights),
        name or f"({','.join(map(str, roots))};{','.join(map(str, weights))})",
    )


def standard_battery() -> list[RecurrenceTuple]:
    """The fixed five tuples used by the cross-validation suites."""
    return [
        fibonacci_tuple(),
        lucas_tuple(),
        rational_tuple((2, 3), (1, 1)),
        rational_tuple((2, 3, 5), (1, 1, 1)),
        rational_tuple((3,), (2,)),
    ]


def char_coefficients(t: RecurrenceTuple) -> tuple[QuadraticElement, ...]:
    """(c_0..c_{m-1}) with x_{k+m} = sum c_i x_{k+i}, from expanding prod(x - a_i)."""
    poly = [as_element(1, t.field())]
    for root in t.a:
        prev = poly
        poly = [(-root) * prev[0]]
        for k in range(1, len(prev)):
            poly.append(prev[k - 1] - root * prev[k])
        poly.append(prev[-1])
    assert poly[-1].as_fraction() == 1
    return tuple(-c for c in poly[:-1])


def initial_terms(t: RecurrenceTuple) -> tuple[QuadraticElement, ...]:
    """x_0 .. x_{m-1} straight from the closed form."""
    out = []
    pows = list(t.b)
    for _ in range(t.order):
        out.append(sum(pows[1:], pows[0]))
        pows = [p * a for p, a in zip(pows, t.a)]
    return tuple(out)


def is_degenerate(t: RecurrenceTuple, P: PrimeIdealData) -> bool:
    """True iff some generator or weight has nonzero valuation at P."""
    return any(quad_valuation(x, P) != 0 for x in t.a + t.b)


def multiplicative_order(x: ResidueElement) -> int:
    """Smallest k >= 1 with x^k = 1, by stripping primes from the group order.

    The group order is factored as p^((e-1)f) * (p-1) * (p+1 when f=2); the
    cofactors are small, so p^f - 1 itself is never fed to the factorizer.
    """
    if not x.is_unit():
        raise DegenerateInputError("multiplicative order of a non-unit")
    P, e = x.ideal, x.e
    fac = dict(factorize(P.p - 1))
    if P.f == 2:
        for q, a in factorize(P.p + 1).items():
            fac[q] = fac.get(q, 0) + a
    if e > 1:
        fac[P.p] = fac.get(P.p, 0) + (e - 1) * P.f
    k = 1
    for q, a in fac.items():
        k *= q ** a
    # ramified e=1 slips through reduce(); its residue field is still F_p
    assert P.kind == "ramified" or k == unit_group_order((P, e))
    for q in fac:
        while k % q == 0 and residue_pow(x, k // q).is_one():
            k //= q
    return k


def period_formula(t: RecurrenceTuple,
                   factorization: Sequence[tuple[PrimeIdealData, int]]) -> PeriodReport:
    """Period as lcm of generator orders across the prime-power factors."""
    orders = []
    period = 1
    for P, e in factorization:
        if P.kind == "ramified":
            raise DegenerateInputError(
                f"{P.label()} is ramified: the order formula does not apply"
            )
        if is_degenerate(t, P):
            raise DegenerateInputError(
                f"tuple {t.name or t} is degenerate at {P.label()}"
            )
        for j, gen in enumerate(t.a):
            k = multiplicative_order(reduce(gen, (P, e)))
            orders.append((j, f"{P.label()}^{e}", k))
            period = period * k // math.gcd(period, k)
    label = ",".join(f"{P.label()}^{e}" for P, e in factorization) or "(1)"
    return PeriodReport(label, period, tuple(orders), "formula")


# ---------------------------------------------------------------------------
# brute force


def _int_state_period(cs: list[int], xs: list[int], mod: int, budget: int) -> int:
    """First return of the integer state vector; specialized small orders."""
    m = len(cs)
    if m == 1:
        (c,) = cs
        (s,) = xs
        x, k = s, 0
        while True:
            x = c * x % mod
            k += 1
            if x == s:
                return k
            if k >= budget:
                raise ResourceLimitError(f"no return within {budget} steps (mod {mod})")
    if m == 2:
        c0, c1 = cs
        s0, s1 = xs
        a, b, k = s0, s1, 0
        while True:
            a, b = b, (c0 * a + c1 * b) % mod
            k += 1
            if a == s0 and b == s1:
                return k
            if k >= budget:
                raise ResourceLimitError(f"no return within {budget} steps (mod {mod})")
    if m == 3:
        c0, c1, c2 = cs
        s0, s1, s2 = xs
        a, b, c, k = s0, s1, s2, 0
        while True:
            a, b, c = b, c, (c0 * a + c1 * b + c2 * c) % mod
            k += 1
            if a == s0 and b == s1 and c == s2:
                return k
            if k >= budget:
                raise ResourceLimitError(f"no return within {budget} steps (mod {mod})")
    state, start, k = list(xs), tuple(xs), 0
    while True:
        nxt = sum(ci * si for ci, si in zip(cs, state)) % mod
        state = state[1:] + [nxt]
        k += 1
        if tuple(state) == start:
            return k
        if k >= budget:
            raise ResourceLimitError(f"no return within {budget} steps (mod {mod})")


def _pair_state_period(cs: list[tuple[int, int]], xs: list[tuple[int, int]],
                       wt: int, wn: int, mod: int, budget: int) -> int:
    """Same loop on (u, v) coordinates with w^2 = wt*w - wn."""
    state, start, k = list(xs), list(xs), 0
    while True:
        nu, nv = 0, 0
        for (cu, cv), (su, sv) in zip(cs, state):
            nu += cu * su - wn * cv * sv
            nv += cu * sv + su * cv + wt * cv * sv
        state = state[1:] + [(nu % mod, nv % mod)]
        k += 1
        if state == start:
            return k
        if k >= budget:
            raise ResourceLimitError(f"no return within {budget} steps (mod {mod})")


def _to_pair(x: QuadraticElement, mod: int) -> tuple[int, int]:
    if math.gcd(x.den, mod) != 1:
        raise DegenerateInputError(f"denominator {x.den} not invertible mod {mod}")
    dinv = pow(x.den, -1, mod)
    return x.num_a * dinv % mod, x.num_b * dinv % mod


def period_bruteforce(t: RecurrenceTuple, m: Modulus) -> PeriodReport:
    """First-return index of the state (x_k .. x_{k+m-1}); the period oracle.

    Accepts composite rational moduli, including ones hitting ramified primes;
    requires the constant recurrence coefficient to stay invertible so the
    orbit is purely periodic and first return equals minimal period.
    """
    coeffs = char_coefficients(t)
    init = initial_terms(t)
    if isinstance(m, tuple):
        P, e = m
        label = f"{P.label()}^{e}"
        rc = [reduce(c, (P, e)) for c in coeffs]
        rx = [reduce(x, (P, e)) for x in init]
        if not rc[0].is_unit():
            raise DegenerateInputError(f"constant coefficient not a unit mod {label}")
        pe = P.p ** e
        if all(r.v == 0 for r in rc + rx):
            size = pe
            budget = 6 * size * size
            k = _int_state_period([r.u for r in rc], [r.u for r in rx], pe, budget)
        else:
            K = P.field
            size = pe * pe
            budget = 6 * size * size
            k = _pair_state_period(
                [(r.u, r.v) for r in rc], [(r.u, r.v) for r in rx],
                K.omega_trace, K.omega_norm, pe, budget,
            )
        return PeriodReport(label, k, (), "brute_force")
    if m < 1:
        raise UsageError("modulus must be a positive integer")
    if m == 1:
        return PeriodReport("1", 1, (), "brute_force")
    pc = [_to_pair(c, m) for c in coeffs]
    px = [_to_pair(x, m) for x in init]
    K = t.field()
    c0_norm = pc[0][0] if K is None else (
        pc[0][0] ** 2 + K.omega_trace * pc[0][0] * pc[0][1]
        + K.omega_norm * pc[0][1] ** 2
    )
    if math.gcd(c0_norm, m) != 1:
        raise DegenerateInputError(f"constant coefficient not a unit mod {m}")
    if all(v == 0 for _, v in pc + px):
        budget = 6 * m * m
        k = _int_state_period([u for u, _ in pc], [u for u, _ in px], m, budget)
    else:
        budget = 6 * m ** 4
        k = _pair_state_period(pc, px, K.omega_trace, K.omega_norm, m, budget)
    return PeriodReport(str(m), k, (), "brute_force")


# ---------------------------------------------------------------------------
# Fibonacci specialization


def _fib_pair(k: int, m: int) -> tuple[int, int]:
    """(F_k, F_{k+1}) mod m by fast doubling, walking bits high to low."""
    a, b = 0, 1 % m  # F_0, F_1
    for bit in bin(k)[2:]:
        c = a * (2 * b - a) % m   # F_{2j}
        d = (a * a + b * b) % m   # F_{2j+1}
        if bit == "1":
            a, b = d, (c + d) % m
        else:
            a, b = c, d
    return a, b


def _is_fib_period(k: int, m: int) -> bool:
    return _fib_pair(k, m) == (0, 1 % m)


def pisano_prime_power(p: int, e: int) -> int:
    """Pisano period mod p^e.

    For p not in {2, 5}: order of the Fibonacci step matrix mod p found by
    stripping a known multiple (p-1 split, 2(p+1) inert), then lifted one
    power at a time; each lift multiplies the period by p or leaves it.
    The two exceptional primes just iterate, their periods are tiny.
    """
    if p in (2, 5):
        pe = p ** e
        a, b, k = 0, 1, 0
        while True:
            a, b = b, (a + b) % pe
            k += 1
            if (a, b) == (0, 1):
                return k
    sym = kronecker(5, p)
    assert sym != 0
    fac = dict(factorize(p - 1)) if sym == 1 else None
    if fac is None:
        fac = dict(factorize(p + 1))
        fac[2] = fac.get(2, 0) + 1  # multiple is 2(p+1) in the inert case
    k = 1
    for q, a in fac.items():
        k *= q ** a
    assert _is_fib_period(k, p)
    for q in fac:
        while k % q == 0 and _is_fib_period(k // q, p):
            k //= q
    for i in range(2, e + 1):
        if not _is_fib_period(k, p ** i):
            k *= p
            assert _is_fib_period(k, p ** i)
    return k


def pisano(m: int) -> int:
    """Pisano period of m >= 1; the closed formula when every prime factor is
    unramified and non-degenerate for the Binet pair, plain iteration otherwise."""
    if m < 1:
        raise UsageError("pisano is defined for positive integers")
    if m == 1:
        return 1
    fac = factorize(m)
    fib = fibonacci_tuple()
    if 5 in fac:
        # ramified and degenerate at once: only the oracle covers it
        return period_bruteforce(fib, m).period
    K = quadratic_field(5)
    pairs = []
    for p, e in fac.items():
        for P in prime_ideals_above(K, p):
            pairs.append((P, e))
    return period_formula(fib, pairs).period


def divisibility_check(t: RecurrenceTuple, P: PrimeIdealData) -> dict:
    """Assert period(P) | N(P) - 1; returns the verdict, raises if violated."""
    report = period_formula(t, [(P, 1)])
    bound = P.norm - 1
    if bound % report.period != 0:
        from .errors import InvariantBreachError

        raise InvariantBreachError(
            f"period {report.period} does not divide {bound} at {P.label()}"
        )
    return {"prime": P.label(), "period": report.period,
            "bound": bound, "divides": True}
