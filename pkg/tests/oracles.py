"""Independent brute-force reference implementations for the test suite.

Everything here trades speed for obviousness; nothing imports from quadrec
except plain data types, so an error in the package cannot leak into its
own oracle.
"""
import math
from fractions import Fraction


def fib_mod(k: int, m: int) -> int:
    """F_k mod m by plain iteration, F_0 = 0, F_1 = 1."""
    a, b = 0, 1
    for _ in range(k):
        a, b = b, (a + b) % m
    return a


def pisano_brute(m: int) -> int:
    """Period of F mod m by scanning for the first return of (0, 1)."""
    assert m >= 2
    a, b, k = 0, 1, 0
    while True:
        a, b = b, (a + b) % m
        k += 1
        if (a, b) == (0, 1):
            return k


def sequence_brute(coeffs, init, m: int, count: int) -> list[int]:
    """First `count` terms of x_{k+r} = sum c_i x_{k+i} (mod m)."""
    xs = [x % m for x in init]
    while len(xs) < count:
        nxt = sum(c * x for c, x in zip(coeffs, xs[-len(coeffs):])) % m
        xs.append(nxt)
    return xs[:count]


def order_brute(a: int, m: int) -> int:
    """Multiplicative order of a mod m by successive powers."""
    assert math.gcd(a, m) == 1
    x, k = a % m, 1
    while x != 1 % m:
        x = x * a % m
        k += 1
    return k


def primes_below(n: int) -> list[int]:
    """Sieve of Eratosthenes."""
    if n <= 2:
        return []
    s = bytearray([1]) * n
    s[0] = s[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if s[p]:
            s[p * p::p] = bytearray(len(s[p * p::p]))
    return [i for i in range(n) if s[i]]


def phi_brute(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def legendre(a: int, p: int) -> int:
    """(a/p) for odd prime p via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def unit_count_brute(p: int, e: int, t: int, n: int, inert: bool) -> int:
    """Count units of O/P^e by exhaustion over representatives.

    Single-coordinate rings count residues coprime to p; inert rings count
    pairs (u, v) whose norm u^2 + t u v + n v^2 is nonzero mod p.
    """
    pe = p ** e
    if not inert:
        return sum(1 for u in range(pe) if u % p != 0)
    cnt = 0
    for u in range(pe):
        for v in range(pe):
            if (u * u + t * u * v + n * v * v) % p != 0:
                cnt += 1
    return cnt


def pair_order_brute(u: int, v: int, p: int, e: int, t: int, n: int) -> int:
    """Order of u + v*w in (O/P^e)^x for an inert prime, by repeated products."""
    pe = p ** e
    cu, cv, k = u % pe, v % pe, 1
    while (cu, cv) != (1, 0):
        cu, cv = (cu * u - n * cv * v) % pe, (cu * v + u * cv + t * cv * v) % pe
        k += 1
        assert k <= pe * pe, "order search ran away"
    return k


def norm_fraction(a: int, b: int, den: int, t: int, n: int) -> Fraction:
    """N((a + b w)/den) straight from the definition."""
    return Fraction(a * a + t * a * b + n * b * b, den * den)
