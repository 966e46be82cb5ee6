"""Wieferich-type predicates over rational primes and quadratic prime ideals.

The Fermat quotient k_p is the first-order term in gamma^(N(P)-1) = 1 + k_p*p
mod P^2; a prime is (gamma-base) Wieferich exactly when k_p = 0.  The Wall
period test and the Fibonacci-entry divisibility test are two deliberately
independent detectors for the Fibonacci case; they must always agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DegenerateInputError, UsageError
from .periods import _is_fib_period, pisano_prime_power
from .ring import (
    PrimeIdealData,
    QuadraticElement,
    QuadraticField,
    as_element,
    is_torsion,
    prime_ideals_above,
    primes_below,
    quad_valuation,
    reduce,
    residue_pow,
)


@dataclass(frozen=True)
class WieferichVerdict:
    p: int
    prime_ideal: PrimeIdealData
    base: str
    k_p: int
    is_wieferich: bool

    def __post_init__(self):
        assert self.is_wieferich == (self.k_p == 0)


@dataclass(frozen=True)
class WallVerdict:
    p: int
    pi_p: int
    pi_p2: int
    equal: bool


def fermat_quotient_residue(gamma, P: PrimeIdealData) -> int:
    """k_p in [0, N(P)) with gamma^(N(P)-1) = 1 + k_p*p mod P^2.

    p itself is the uniformizer at every unramified prime; for inert P the
    quotient lives in the residue field F_{p^2} and is encoded as s + t*p
    from the coordinate pair s + t*w.
    """
    if P.kind == "ramified":
        raise DegenerateInputError(f"{P.label()} is ramified: no Wieferich verdict")
    g = as_element(gamma, P.field)
    if quad_valuation(g, P) != 0:
        raise DegenerateInputError(f"base has nonzero valuation at {P.label()}")
    p = P.p
    y = residue_pow(reduce(g, (P, 2)), P.norm - 1)
    assert (y.u - 1) % p == 0 and y.v % p == 0  # Fermat mod P
    s = (y.u - 1) // p % p
    if P.f == 1:
        return s
    t = y.v // p % p
    return s + t * p


def is_alpha_wieferich(gamma, P: PrimeIdealData) -> bool:
    """True iff gamma^(N(P)-1) = 1 mod P^2; torsion bases qualify trivially."""
    return fermat_quotient_residue(gamma, P) == 0


def verdict(gamma, P: PrimeIdealData) -> WieferichVerdict:
    g = as_element(gamma, P.field)
    k = fermat_quotient_residue(g, P)
    return WieferichVerdict(P.p, P, str(g), k, k == 0)


def is_x_fw_prime(X: Sequence, P: PrimeIdealData) -> bool:
    """True iff every generator satisfies the Wieferich congruence at P."""
    if not X:
        raise UsageError("empty generator list")
    return all(is_alpha_wieferich(x, P) for x in X)


def wall_period_test(p: int) -> WallVerdict:
    """Compare the Fibonacci period mod p and mod p^2.

    The second period is pinned by the first: it either stays or picks up one
    factor of p, so a single entry check at p^2 settles it.
    """
    k1 = pisano_prime_power(p, 1)
    k2 = k1 if _is_fib_period(k1, p * p) else k1 * p
    return WallVerdict(p, k1, k2, k1 == k2)


def _mat_mul2(A, B, m):
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a * e + b * g) % m, (a * f + b * h) % m), \
           ((c * e + d * g) % m, (c * f + d * h) % m)


def wss_divisibility_test(p: int) -> bool:
    """Second Wall-Sun-Sun detector: F_{p - (5/p)} = 0 mod p^2.

    Kept independent of the period machinery on purpose: the Legendre symbol
    and the Fibonacci entry are recomputed here from scratch with a plain
    2x2 matrix power.
    """
    if p in (2, 5):
        raise UsageError("the two exceptional primes carry no verdict here")
    m = p * p
    ls = pow(5, (p - 1) // 2, p)
    n = p - 1 if ls == 1 else p + 1
    R, M = ((1, 0), (0, 1)), ((1, 1), (1, 0))
    k = n
    while k:
        if k & 1:
            R = _mat_mul2(R, M, m)
        M = _mat_mul2(M, M, m)
        k >>= 1
    return R[0][1] % m == 0  # F_n mod p^2


def count_non_wieferich(gamma, bound: int,
                        field: Optional[QuadraticField] = None) -> int:
    """|{prime ideals P, N(P) <= bound, gamma not Wieferich at P}|.

    Degenerate primes count: the congruence gamma^(N-1) = 1 mod P^2 fails
    outright when gamma is not a P-unit.  Ramified primes carry no verdict
    and are skipped entirely.
    """
    g = as_element(gamma, field)
    if is_torsion(g):
        raise UsageError("torsion bases make every prime Wieferich; not counted")
    if bound < 2:
        return 0
    n = 0
    for p in primes_below(int(bound) + 1):
        for P in prime_ideals_above(g.field, p):
            if P.kind == "ramified" or P.norm > bound:
                continue
            if quad_valuation(g, P) != 0:
                n += 1
            elif fermat_quotient_residue(g, P) != 0:
                n += 1
    return n
