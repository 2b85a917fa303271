"""Small exact number-theory helpers used across the package."""

from __future__ import annotations

from math import gcd, isqrt

from .errors import InputError

__all__ = [
    "is_prime",
    "factorint",
    "divisors",
    "vp",
    "crt_idempotents",
    "prime_power_parts",
]


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division; inputs here are small."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d <= isqrt(n):
        if n % d == 0:
            return False
        d += 2
    return True


def factorint(n: int) -> dict[int, int]:
    """Prime factorization {p: multiplicity} of n >= 1."""
    if n < 1:
        raise InputError(f"cannot factor non-positive integer {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return dict(sorted(out.items()))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n >= 1."""
    divs = [1]
    for p, a in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(a + 1)]
    return sorted(divs)


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise InputError("valuation of zero is undefined")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_power_parts(m: int) -> list[int]:
    """m >= 2 split into its prime-power components, primes ascending."""
    return [p**a for p, a in factorint(m).items()]


def crt_idempotents(moduli: list[int]) -> list[int]:
    """For pairwise coprime moduli q_1..q_k with product m, return e_1..e_k
    where e_j = 1 mod q_j and e_j = 0 mod q_i for i != j (taken mod m)."""
    m = 1
    for q in moduli:
        m *= q
    out = []
    for q in moduli:
        rest = m // q
        if gcd(rest, q) != 1:
            raise InputError("moduli are not pairwise coprime")
        # rest * inv(rest mod q) is 1 mod q and 0 mod every other modulus
        out.append(rest * pow(rest, -1, q) % m)
    return out
