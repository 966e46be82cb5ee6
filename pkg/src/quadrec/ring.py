"""Exact arithmetic in quadratic number fields Q(sqrt(d)).

Elements live on the integral basis (1, w), where w = (1+sqrt(d))/2 when
d = 1 mod 4 and w = sqrt(d) otherwise; the ring of integers is exactly the
den = 1 slice.  Plain rationals are the field = None case, which keeps one
code path for sequences over Q and over a quadratic field.

Everything here is immutable and pure; values can be shared freely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import DegenerateInputError, FactorizationError, UsageError

Rational = Union[int, Fraction]

# Trial division handles prime factors below this bound deterministically;
# Pollard rho (Brent variant) takes over beyond it.
TRIAL_LIMIT = 10 ** 6
DEFAULT_RHO_BUDGET = 2_000_000

# Miller-Rabin with these bases is a proven primality test below this bound.
_MR_PROVEN_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# Beyond the proven bound: a fixed wider battery, deterministic but heuristic.
_MR_BASES_WIDE = _MR_BASES + (41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)

_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)  # gaps between 30k+{7,11,13,17,19,23,29,31}


# ---------------------------------------------------------------------------
# integer plumbing


def _vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    assert n != 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    bases = _MR_BASES if n < _MR_PROVEN_BOUND else _MR_BASES_WIDE
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, budget: int) -> int:
    """A proper factor of composite odd n, or FactorizationError on budget."""
    if n % 2 == 0:
        return 2
    r = math.isqrt(n)
    if r * r == n:
        return r
    used = 0
    for c in range(1, 64):
        y, m, g, q = 2, 128, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(m):
                y = (y * y + c) % n
            k = 0
            while k < m and g == 1:
                ys = y
                for _ in range(min(128, m - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            used += 2 * m
            if used > budget:
                raise FactorizationError(
                    f"rho budget {budget} exhausted on cofactor {n}"
                )
            m *= 2
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise FactorizationError(f"no factor of {n} found (parameter sweep exhausted)")


def factorize(n: int, rho_budget: int = DEFAULT_RHO_BUDGET) -> dict[int, int]:
    """Full prime factorization {p: e} of n >= 1.

    Trial division below TRIAL_LIMIT, Pollard rho above; an unfactorable
    cofactor raises FactorizationError rather than returning a guess.
    """
    if n < 1:
        raise ValueError("factorize is defined for positive integers")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        if n % p == 0:
            out[p] = _vp(n, p)
            n //= p ** out[p]
    m, i = 7, 0
    while m * m <= n and m < TRIAL_LIMIT:
        if n % m == 0:
            out[m] = _vp(n, m)
            n //= m ** out[m]
        m += _WHEEL[i]
        i = (i + 1) & 7
    if n > 1:
        if m * m > n:
            out[n] = out.get(n, 0) + 1
        else:
            _factor_large(n, out, rho_budget)
    return dict(sorted(out.items()))


def _factor_large(n: int, out: dict[int, int], budget: int) -> None:
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n, budget)
    assert 1 < d < n
    _factor_large(d, out, budget)
    _factor_large(n // d, out, budget)


def euler_phi(n: int) -> int:
    """Euler totient, from the prime factorization."""
    out = 1
    for p, e in factorize(n).items():
        out *= p ** (e - 1) * (p - 1)
    return out


def primes_below(n: int) -> list[int]:
    """All primes < n, by a byte sieve; fine up to a few times 10^7."""
    if n <= 2:
        return []
    s = bytearray([1]) * n
    s[0] = s[1] = 0
    for p in range(2, math.isqrt(n - 1) + 1):
        if s[p]:
            s[p * p::p] = bytearray(len(range(p * p, n, p)))
    return [i for i in range(n) if s[i]]


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    a = D % p
    if a == 0:
        return 0
    ls = pow(a, (p - 1) // 2, p)
    return 1 if ls == 1 else -1


def _sqrt_mod_prime(a: int, p: int) -> int:
    """Square root of a quadratic residue a modulo an odd prime p."""
    a %= p
    if a == 0:
        return 0
    assert pow(a, (p - 1) // 2, p) == 1, "not a residue"
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# ---------------------------------------------------------------------------
# fields and elements


@dataclass(frozen=True)
class QuadraticField:
    """Q(sqrt(d)) for squarefree d; w satisfies w^2 - omega_trace*w + omega_norm = 0."""

    d: int
    disc: int
    omega_trace: int
    omega_norm: int


_FIELD_CACHE: dict[int, QuadraticField] = {}


def quadratic_field(d: int) -> QuadraticField:
    if d in _FIELD_CACHE:
        return _FIELD_CACHE[d]
    if d in (0, 1):
        raise UsageError(f"d={d} does not define a quadratic field")
    if any(e > 1 for e in factorize(abs(d)).values()):
        raise UsageError(f"d={d} is not squarefree")
    if d % 4 == 1:
        fld = QuadraticField(d, d, 1, (1 - d) // 4)
    else:
        fld = QuadraticField(d, 4 * d, 0, -d)
    _FIELD_CACHE[d] = fld
    return fld


@dataclass(frozen=True)
class QuadraticElement:
    """(num_a + num_b*w) / den, normalized: den > 0, gcd(num_a, num_b, den) = 1."""

    field: Optional[QuadraticField]
    num_a: int
    num_b: int
    den: int

    def __post_init__(self):
        assert self.den > 0
        assert math.gcd(math.gcd(abs(self.num_a), abs(self.num_b)), self.den) == 1
        assert not (self.field is None and self.num_b != 0)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def _make(field: Optional[QuadraticField], na: int, nb: int, den: int) -> "QuadraticElement":
        if den < 0:
            na, nb, den = -na, -nb, -den
        g = math.gcd(math.gcd(abs(na), abs(nb)), den)
        if g > 1:
            na, nb, den = na // g, nb // g, den // g
        if nb == 0 and field is not None:
            pass  # rational value in a named field stays tagged with the field
        return QuadraticElement(field, na, nb, den)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num_a == 0 and self.num_b == 0

    def is_rational(self) -> bool:
        return self.num_b == 0

    def is_integral(self) -> bool:
        return self.den == 1

    def as_fraction(self) -> Fraction:
        if self.num_b != 0:
            raise ValueError("not a rational value")
        return Fraction(self.num_a, self.den)

    @property
    def degree(self) -> int:
        return 2 if self.field is not None else 1

    def with_field(self, field: QuadraticField) -> "QuadraticElement":
        if self.field is not None:
            if self.field != field:
                raise ValueError("element already belongs to a different field")
            return self
        return QuadraticElement._make(field, self.num_a, 0, self.den)

    # -- arithmetic ---------------------------------------------------------

    def _join(self, other: "QuadraticElement") -> Optional[QuadraticField]:
        if self.field is None:
            return other.field
        if other.field is None or other.field == self.field:
            return self.field
        raise ValueError("elements from different fields")

    def __add__(self, other) -> "QuadraticElement":
        other = as_element(other)
        f = self._join(other)
        return QuadraticElement._make(
            f,
            self.num_a * other.den + other.num_a * self.den,
            self.num_b * other.den + other.num_b * self.den,
            self.den * other.den,
        )

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "QuadraticElement":
        return QuadraticElement(self.field, -self.num_a, -self.num_b, self.den)

    def __sub__(self, other):
        return self.__add__(-as_element(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other) -> "QuadraticElement":
        other = as_element(other)
        f = self._join(other)
        t, n = (f.omega_trace, f.omega_norm) if f is not None else (0, 0)
        a1, b1, a2, b2 = self.num_a, self.num_b, other.num_a, other.num_b
        # (a1 + b1 w)(a2 + b2 w) with w^2 = t w - n
        return QuadraticElement._make(
            f,
            a1 * a2 - n * b1 * b2,
            a1 * b2 + a2 * b1 + t * b1 * b2,
            self.den * other.den,
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    def conjugate(self) -> "QuadraticElement":
        if self.field is None:
            return self
        t = self.field.omega_trace
        return QuadraticElement._make(
            self.field, self.num_a + t * self.num_b, -self.num_b, self.den
        )

    def inverse(self) -> "QuadraticElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.num_b == 0:
            sign = 1 if self.num_a > 0 else -1
            return QuadraticElement._make(self.field, sign * self.den, 0, abs(self.num_a))
        c = self.conjugate()
        nr = field_norm(self)  # = self * conjugate, a nonzero rational
        return QuadraticElement._make(
            self.field,
            c.num_a * nr.denominator * (1 if nr > 0 else -1),
            c.num_b * nr.denominator * (1 if nr > 0 else -1),
            c.den * abs(nr.numerator),
        )

    def __truediv__(self, other):
        return self.__mul__(as_element(other).inverse())

    def __rtruediv__(self, other):
        return as_element(other).__mul__(self.inverse())

    def __pow__(self, k: int) -> "QuadraticElement":
        if k < 0:
            return self.inverse() ** (-k)
        base = self
        acc = QuadraticElement(self.field, 1, 0, 1)
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __str__(self) -> str:
        if self.field is None or self.num_b == 0:
            return str(Fraction(self.num_a, self.den))
        s = f"{self.num_a}{'+' if self.num_b >= 0 else '-'}{abs(self.num_b)}*w"
        return f"({s})/{self.den}" if self.den != 1 else f"({s})"


def qelem(field: Optional[QuadraticField], a: Rational, b: Rational = 0,
          den: int = 1) -> QuadraticElement:
    """Element (a + b*w)/den with a, b rational and den a positive integer."""
    fa, fb = Fraction(a), Fraction(b)
    if fb != 0 and field is None:
        raise ValueError("a sqrt coordinate needs a field")
    l = fa.denominator * fb.denominator // math.gcd(fa.denominator, fb.denominator)
    return QuadraticElement._make(
        field,
        fa.numerator * (l // fa.denominator),
        fb.numerator * (l // fb.denominator),
        l * den,
    )


def as_element(v, field: Optional[QuadraticField] = None) -> QuadraticElement:
    if isinstance(v, QuadraticElement):
        return v.with_field(field) if (field is not None and v.field is None) else v
    if isinstance(v, (int, Fraction)):
        return qelem(field, v)
    raise TypeError(f"cannot coerce {type(v).__name__} to a field element")


def sqrt_element(field: QuadraticField) -> QuadraticElement:
    """sqrt(d) itself on the (1, w) basis."""
    if field.d % 4 == 1:
        return qelem(field, -1, 2)  # 2w - 1
    return qelem(field, 0, 1)


def field_norm(x: QuadraticElement) -> Fraction:
    """Product of x over the Galois orbit; the identity map on plain rationals."""
    if x.field is None:
        return Fraction(x.num_a, x.den)
    t, n = x.field.omega_trace, x.field.omega_norm
    a, b = x.num_a, x.num_b
    return Fraction(a * a + t * a * b + n * b * b, x.den * x.den)


def is_torsion(x: QuadraticElement) -> bool:
    """Root-of-unity test; complete for degree <= 2 (finite torsion lists)."""
    if x.field is None:
        return x.as_fraction() in (1, -1)
    if x.den != 1:
        return False
    cands = [(1, 0), (-1, 0)]
    if x.field.d == -1:
        cands += [(0, 1), (0, -1)]  # w = i
    elif x.field.d == -3:
        # w = (1+sqrt(-3))/2 is a primitive 6th root of unity
        cands += [(0, 1), (0, -1), (1, -1), (-1, 1)]
    return (x.num_a, x.num_b) in cands


# ---------------------------------------------------------------------------
# prime ideals


@dataclass(frozen=True)
class PrimeIdealData:
    """A prime of Q (kind 'rational') or of a quadratic field, with splitting data.

    hensel_root is the root of w's minimal polynomial mod p (split/ramified);
    conjugate_flag picks which of the two split primes above p is meant.
    """

    field: Optional[QuadraticField]
    p: int
    kind: str  # rational | split | inert | ramified
    f: int
    hensel_root: Optional[int]
    conjugate_flag: bool = False

    @property
    def norm(self) -> int:
        return self.p ** self.f

    @property
    def ram_index(self) -> int:
        return 2 if self.kind == "ramified" else 1

    def label(self) -> str:
        if self.kind == "rational":
            return str(self.p)
        suffix = {"split": "b" if self.conjugate_flag else "a",
                  "inert": "i", "ramified": "r"}[self.kind]
        return f"{self.p}{suffix}"


def _split_roots(field: QuadraticField, p: int) -> tuple[int, int]:
    """Both roots of w^2 - t w + n mod a split prime p, ascending."""
    t, n = field.omega_trace, field.omega_norm
    if p == 2:
        roots = [r for r in (0, 1) if (r * r - t * r + n) % 2 == 0]
        assert len(roots) == 2
        return roots[0], roots[1]
    s = _sqrt_mod_prime(field.disc % p, p)
    inv2 = (p + 1) // 2
    c1, c2 = (t + s) * inv2 % p, (t - s) * inv2 % p
    assert c1 != c2
    return (c1, c2) if c1 < c2 else (c2, c1)


def splitting_type(field: QuadraticField, p: int) -> PrimeIdealData:
    """The (canonical) prime ideal above p, kind set by the Kronecker symbol."""
    if not is_prime(p):
        raise UsageError(f"p={p} is not prime")
    k = kronecker(field.disc, p)
    if k == 1:
        c1, _ = _split_roots(field, p)
        return PrimeIdealData(field, p, "split", 1, c1, False)
    if k == -1:
        return PrimeIdealData(field, p, "inert", 2, None)
    # ramified: the unique (double) root mod p
    if p == 2:
        c = field.d % 2
    else:
        c = field.omega_trace * ((p + 1) // 2) % p
    return PrimeIdealData(field, p, "ramified", 1, c)


def prime_ideals_above(field: Optional[QuadraticField], p: int) -> tuple[PrimeIdealData, ...]:
    """All primes above p: one for Q, two for split p, one otherwise."""
    if field is None:
        if not is_prime(p):
            raise UsageError(f"p={p} is not prime")
        return (PrimeIdealData(None, p, "rational", 1, None),)
    P = splitting_type(field, p)
    if P.kind != "split":
        return (P,)
    c1, c2 = _split_roots(field, p)
    return (P, PrimeIdealData(field, p, "split", 1, c2, True))


def hensel_root(field: QuadraticField, p: int, e: int, conjugate: bool = False) -> int:
    """Root of w^2 - t w + n mod p^e, lifting the chosen root mod p."""
    if e < 1:
        raise UsageError("exponent must be >= 1")
    P = splitting_type(field, p)
    if P.kind == "inert":
        raise DegenerateInputError(f"p={p} is inert in d={field.d}: no root exists")
    if P.kind == "ramified":
        if e >= 2:
            raise DegenerateInputError(
                f"p={p} ramifies in d={field.d}: the root does not lift past e=1"
            )
        return P.hensel_root
    c1, c2 = _split_roots(field, p)
    c = c2 if conjugate else c1
    t, n = field.omega_trace, field.omega_norm
    k = 1
    while k < e:
        k = min(2 * k, e)
        pk = p ** k
        fprime = (2 * c - t) % pk
        c = (c - (c * c - t * c + n) * pow(fprime, -1, pk)) % pk
    assert (c * c - t * c + n) % p ** e == 0
    return c


def quad_valuation(x: QuadraticElement, P: PrimeIdealData) -> int:
    """Exact valuation of x != 0 at P; additive in products."""
    if x.is_zero():
        raise ValueError("the zero element has no finite valuation")
    p = P.p
    if P.field is not None and x.field is None:
        x = x.with_field(P.field)
    if P.kind == "rational":
        if x.field is not None:
            raise ValueError("rational prime applied to a quadratic element")
        va = _vp(abs(x.num_a), p) if x.num_a else 0
        return va - (_vp(x.den, p) if x.den % p == 0 else 0)
    assert x.field == P.field
    a, b = x.num_a, x.num_b
    er = P.ram_index
    vden = er * (_vp(x.den, p) if x.den % p == 0 else 0)
    if P.kind == "inert":
        va = _vp(abs(a), p) if a else None
        vb = _vp(abs(b), p) if b else None
        vnum = vb if va is None else va if vb is None else min(va, vb)
    else:
        t, n = x.field.omega_trace, x.field.omega_norm
        nrm = abs(a * a + t * a * b + n * b * b)
        m = _vp(nrm, p) if nrm % p == 0 else 0
        if P.kind == "ramified":
            vnum = m  # the single prime above p absorbs the whole norm valuation
        elif m == 0:
            vnum = 0
        else:
            c = hensel_root(x.field, p, m, P.conjugate_flag)
            w = (a + b * c) % p ** m
            vnum = m if w == 0 else _vp(w, p) if w % p == 0 else 0
    return vnum - vden


def ideal_factors(x: QuadraticElement) -> list[tuple[PrimeIdealData, int]]:
    """(P, v_P(x)) over every prime with nonzero valuation, sorted by p."""
    if x.is_zero():
        raise ValueError("zero has no ideal factorization")
    nrm = field_norm(x)
    support = set(factorize(abs(nrm.numerator))) | set(factorize(nrm.denominator))
    out = []
    for p in sorted(support):
        for P in prime_ideals_above(x.field, p):
            v = quad_valuation(x, P)
            if v != 0:
                out.append((P, v))
    return out


# ---------------------------------------------------------------------------
# residue rings O_K / P^e


@dataclass(frozen=True)
class ResidueElement:
    """Element of O_K/P^e: one residue mod p^e, or a coordinate pair u + v*w."""

    ideal: PrimeIdealData
    e: int
    pe: int
    u: int
    v: int = 0

    def _pair(self) -> bool:
        return self.ideal.kind == "inert"

    def _same_ring(self, other: "ResidueElement") -> None:
        if self.ideal != other.ideal or self.e != other.e:
            raise ValueError("residue elements from different rings")

    def one(self) -> "ResidueElement":
        return ResidueElement(self.ideal, self.e, self.pe, 1 % self.pe, 0)

    def is_one(self) -> bool:
        return self.u == 1 % self.pe and self.v == 0

    def __add__(self, other: "ResidueElement") -> "ResidueElement":
        self._same_ring(other)
        return ResidueElement(self.ideal, self.e, self.pe,
                              (self.u + other.u) % self.pe,
                              (self.v + other.v) % self.pe)

    def __mul__(self, other: "ResidueElement") -> "ResidueElement":
        self._same_ring(other)
        pe = self.pe
        if not self._pair():
            return ResidueElement(self.ideal, self.e, pe, self.u * other.u % pe, 0)
        t, n = self.ideal.field.omega_trace, self.ideal.field.omega_norm
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        return ResidueElement(
            self.ideal, self.e, pe,
            (u1 * u2 - n * v1 * v2) % pe,
            (u1 * v2 + u2 * v1 + t * v1 * v2) % pe,
        )

    def is_unit(self) -> bool:
        if not self._pair():
            return math.gcd(self.u, self.ideal.p) == 1
        t, n = self.ideal.field.omega_trace, self.ideal.field.omega_norm
        nrm = (self.u * self.u + t * self.u * self.v + n * self.v * self.v) % self.ideal.p
        return nrm != 0

    def inverse(self) -> "ResidueElement":
        if not self.is_unit():
            raise DegenerateInputError("not a unit in the residue ring")
        pe = self.pe
        if not self._pair():
            return ResidueElement(self.ideal, self.e, pe, pow(self.u, -1, pe), 0)
        t, n = self.ideal.field.omega_trace, self.ideal.field.omega_norm
        nrm = (self.u * self.u + t * self.u * self.v + n * self.v * self.v) % pe
        ninv = pow(nrm, -1, pe)
        # conjugate of u + v w is (u + t v) - v w
        return ResidueElement(self.ideal, self.e, pe,
                              (self.u + t * self.v) * ninv % pe,
                              -self.v * ninv % pe)


def reduce(x, modulus: tuple[PrimeIdealData, int]) -> ResidueElement:
    """Ring homomorphism into O_K/P^e; split primes substitute the lifted root."""
    P, e = modulus
    if e < 1:
        raise UsageError("exponent must be >= 1")
    pe = P.p ** e
    x = as_element(x, P.field)
    if x.field is not None and P.field is None:
        raise ValueError("quadratic element at a rational prime")
    if math.gcd(x.den, P.p) != 1:
        # A p-part in the denominator can cancel against the numerator at one
        # split prime (the conjugate prime absorbs it); everywhere else the
        # element genuinely fails to be integral at P.
        if P.kind == "split":
            return _reduce_split_cancelling(x, P, e)
        raise DegenerateInputError(
            f"denominator {x.den} is not invertible modulo {P.label()}^{e}"
        )
    dinv = pow(x.den, -1, pe)
    if P.kind == "rational":
        return ResidueElement(P, e, pe, x.num_a * dinv % pe, 0)
    if P.kind == "inert":
        return ResidueElement(P, e, pe, x.num_a * dinv % pe, x.num_b * dinv % pe)
    if P.kind == "ramified" and e >= 2:
        raise DegenerateInputError(
            "residue arithmetic past exponent 1 at a ramified prime is unsupported"
        )
    c = hensel_root(P.field, P.p, e, P.conjugate_flag)
    return ResidueElement(P, e, pe, (x.num_a + x.num_b * c) * dinv % pe, 0)


def _reduce_split_cancelling(x: QuadraticElement, P: PrimeIdealData, e: int) -> ResidueElement:
    p = P.p
    vd = _vp(x.den, p)
    c = hensel_root(x.field, p, e + vd, P.conjugate_flag)
    num = (x.num_a + x.num_b * c) % p ** (e + vd)
    if num % p ** vd != 0:
        raise DegenerateInputError(
            f"element has negative valuation at {P.label()}: cannot reduce"
        )
    pe = p ** e
    u = (num // p ** vd) * pow(x.den // p ** vd, -1, pe) % pe
    return ResidueElement(P, e, pe, u, 0)


def residue_pow(x: ResidueElement, k: int) -> ResidueElement:
    """x^k by square and multiply; x^0 is the identity."""
    if k < 0:
        raise ValueError("negative exponent: invert first")
    acc = x.one()
    base = x
    while k:
        if k & 1:
            acc = acc * base
        base = base * base
        k >>= 1
    return acc


def unit_group_order(modulus: tuple[PrimeIdealData, int]) -> int:
    """|(O_K/P^e)^x| = p^((e-1)f) * (p^f - 1) for unramified P."""
    P, e = modulus
    if P.kind == "ramified":
        raise DegenerateInputError(
            "unit group order is only exposed for unramified primes"
        )
    p, f = P.p, P.f
    return p ** ((e - 1) * f) * (p ** f - 1)
