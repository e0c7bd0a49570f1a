"""Exact elementary number theory for odd square-free moduli.

Provides the Jacobi symbol, the Mobius function, Ramanujan sums, and the
quadratic Gauss sum twisted by the Jacobi symbol, together with a small
immutable record (:class:`FactoredModulus`) that carries the factorization
data every other module needs: prime factors, totient phi, cototient psi,
smallest prime factor, and the number of distinct prime factors.

All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class AdmissibilityError(ValueError):
    """An input modulus is outside the supported domain (even, 1, or not square-free)."""


@dataclass(frozen=True)
class FactoredModulus:
    """An odd square-free integer n > 1 with its factorization data.

    phi = prod (p - 1), psi = n - phi (the number of indices j in [0, n)
    with gcd(j, n) > 1), p_min the smallest prime factor, omega the number
    of distinct prime factors.
    """

    n: int
    prime_factors: tuple[int, ...]
    phi: int
    psi: int
    p_min: int
    omega: int

    def __post_init__(self):
        prod = math.prod(self.prime_factors)
        if prod != self.n:
            raise AdmissibilityError(
                f"prime_factors {self.prime_factors} do not multiply to n={self.n}"
            )


def factor_odd_squarefree(n: int) -> FactoredModulus:
    """Factor an odd square-free n > 1 by trial division.

    Raises AdmissibilityError naming the offending factor when n is even,
    equal to 1, or divisible by a square.
    """
    if n <= 1:
        raise AdmissibilityError(f"n must be an integer > 1, got {n}")
    if n % 2 == 0:
        raise AdmissibilityError(f"n={n} is even (factor 2); only odd moduli are supported")
    factors = []
    rest = n
    d = 3
    while d * d <= rest:
        if rest % d == 0:
            rest //= d
            if rest % d == 0:
                raise AdmissibilityError(f"n={n} is not square-free: {d}^2 divides it")
            factors.append(d)
        else:
            d += 2
    if rest > 1:
        factors.append(rest)
    factors.sort()
    phi = math.prod(p - 1 for p in factors)
    return FactoredModulus(
        n=n,
        prime_factors=tuple(factors),
        phi=phi,
        psi=n - phi,
        p_min=factors[0],
        omega=len(factors),
    )


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (desk-scale inputs)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def jacobi(j: int, n: int) -> int:
    """Jacobi symbol (j|n) for odd n >= 1, via binary quadratic reciprocity.

    Zero exactly when gcd(j, n) > 1; completely multiplicative in j and
    periodic in j with period n.  (j|1) = 1 (empty product).
    """
    if n <= 0 or n % 2 == 0:
        raise AdmissibilityError(f"Jacobi symbol needs positive odd n, got n={n}")
    j %= n
    result = 1
    while j:
        while j % 2 == 0:
            j //= 2
            if n % 8 in (3, 5):
                result = -result
        j, n = n, j
        if j % 4 == 3 and n % 4 == 3:
            result = -result
        j %= n
    return result if n == 1 else 0


def mobius(n: int) -> int:
    """Mobius function: (-1)^omega(n) for square-free n, 0 otherwise."""
    if n < 1:
        raise ValueError(f"mobius needs n >= 1, got {n}")
    if n == 1:
        return 1
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def _phi_of_divisor(g: int, m: FactoredModulus) -> int:
    """Totient of a divisor g of m.n, using m's factor list."""
    return math.prod(p - 1 for p in m.prime_factors if g % p == 0)


def ramanujan_sum(u: int, m: FactoredModulus) -> int:
    """Ramanujan's sum c_n(u) = sum of zeta_n^{ju} over units j mod n.

    For square-free n this equals mu(n/g) * phi(g) with g = gcd(u, n),
    which is what is returned (an exact integer).
    """
    g = math.gcd(u, m.n)
    # n/g is square-free, so mu is just a parity of its factor count.
    comobius = -1 if sum(1 for p in m.prime_factors if g % p != 0) % 2 else 1
    return comobius * _phi_of_divisor(g, m)


def gauss_sum_jacobi(j: int, m: FactoredModulus) -> complex:
    """Closed form of sum_{l=0}^{m-1} (l|m) zeta_m^{jl} for odd square-free m.

    Equals i^((m-1)^2/4) * (j|m) * sqrt(m); the i-power exponent is computed
    exactly as ((m-1)//2)^2 mod 4.
    """
    e = (((m.n - 1) // 2) ** 2) % 4
    i_power = (1, 1j, -1, -1j)[e]
    return i_power * jacobi(j, m.n) * math.sqrt(m.n)
