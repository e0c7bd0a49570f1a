"""Character polynomials, rotations, and Littlewood completion families.

A length-n ternary sequence holds the coefficients of a polynomial
sum_j a_j z^j with a_j in {-1, 0, +1}.  The character polynomial J has
a_j = (j|n) (Jacobi symbol); a completion V is supported exactly on the
indices j with gcd(j, n) > 1, so that J + V has all coefficients in
{-1, +1} (a Littlewood polynomial).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .numbers import AdmissibilityError, FactoredModulus, is_prime, jacobi

KINDS = ("character", "completion", "littlewood", "other")

# 2^psi enumeration guard for exhaustive completion streams.
MAX_ENUM_PSI = 24


@dataclass(frozen=True, eq=False)
class TernarySequence:
    """Immutable coefficient vector over {-1, 0, +1}.

    ``kind`` labels the family the sequence was constructed in (it is kept
    through rotation, so a rotated character polynomial still reports
    kind="character" even though its support has been cyclically shifted).
    """

    coeffs: np.ndarray
    kind: str = "other"

    def __post_init__(self):
        arr = np.ascontiguousarray(self.coeffs, dtype=np.int8)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must form a nonempty 1-d vector")
        bad = np.setdiff1d(np.unique(arr), [-1, 0, 1])
        if bad.size:
            raise ValueError(f"coefficients must lie in {{-1,0,+1}}, found {bad.tolist()}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def n(self) -> int:
        return self.coeffs.size

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coeffs)

    def weight(self) -> int:
        """Number of nonzero coefficients (= squared L2 norm)."""
        return int(np.count_nonzero(self.coeffs))


@dataclass(frozen=True)
class Rotation:
    """Rotation parameter r; only the integer shift floor(n*r) acts on a sequence.

    r is stored as an exact rational so that floor(n*r) has no floating-point
    edge cases (floor, not truncation: r = -1/4, n = 15 gives R = -4).
    """

    r: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))

    def shift(self, n: int) -> int:
        return (n * self.r.numerator) // self.r.denominator

    def __str__(self) -> str:
        return f"{self.r.numerator}/{self.r.denominator}"


def _legendre_table(p: int) -> np.ndarray:
    """Legendre symbols (j|p) for j = 0..p-1 as an int8 lookup table."""
    tab = np.full(p, -1, dtype=np.int8)
    tab[0] = 0
    if p > 2:
        k = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
        tab[(k * k) % p] = 1
    return tab


def character_polynomial(m: FactoredModulus) -> TernarySequence:
    """The degree n-1 polynomial with coefficients (j|n), j = 0..n-1.

    Built from per-prime quadratic-residue tables and multiplicativity,
    which is O(omega * n) instead of n separate symbol computations; the
    table path is cross-checked against :func:`littlewood.numbers.jacobi`
    in the test suite.
    """
    idx = np.arange(m.n, dtype=np.int64)
    coeffs = np.ones(m.n, dtype=np.int8)
    for p in m.prime_factors:
        coeffs *= _legendre_table(p)[idx % p]
    return TernarySequence(coeffs, kind="character")


def rotate(a: TernarySequence, rot: Rotation) -> TernarySequence:
    """Cyclic coefficient shift z^{-floor(nr)} A(z) mod (z^n - 1).

    Output coefficient k equals input coefficient (k + R) mod n with
    R = floor(n*r); kind is preserved as a family label.
    """
    shift = rot.shift(a.n) % a.n
    if shift == 0:
        return a
    return TernarySequence(np.roll(a.coeffs, -shift), kind=a.kind)


def completion_support(m: FactoredModulus) -> np.ndarray:
    """Indices j in [0, n) with gcd(j, n) > 1, ascending; has psi(n) entries."""
    return np.flatnonzero(np.gcd(np.arange(m.n, dtype=np.int64), m.n) > 1)


def completion_constant(m: FactoredModulus, sign: int) -> TernarySequence:
    """Completion with every free coefficient equal to +1 or -1."""
    if sign not in (-1, 1):
        raise ValueError(f"sign must be +-1, got {sign}")
    coeffs = np.zeros(m.n, dtype=np.int8)
    coeffs[completion_support(m)] = sign
    return TernarySequence(coeffs, kind="completion")


def completion_all_ones(m: FactoredModulus) -> TernarySequence:
    """V(z) = sum of z^j over gcd(j, n) > 1: the all-ones completion."""
    return completion_constant(m, +1)


def completion_jacobi_product(m: FactoredModulus) -> TernarySequence:
    """Completion with coefficient (j | n/gcd(j,n)) at each free index j.

    At j = 0 the modulus n/gcd(0,n) is 1 and the empty Jacobi symbol (0|1)
    is +1.  This convention is forced: J + V must have no zero coefficient,
    and +1 is the standard value of an empty symbol.
    """
    coeffs = np.zeros(m.n, dtype=np.int8)
    for j in completion_support(m):
        j = int(j)
        coeffs[j] = jacobi(j, m.n // math.gcd(j, m.n))
    return TernarySequence(coeffs, kind="completion")


def completion_two_prime(p: int, q: int) -> TernarySequence:
    """For n = pq with primes p > q: +1 at jq (0 <= j < p), -1 at jp (1 <= j < q).

    The support is exactly the set of multiples of p or q below n, i.e. the
    free indices of the character polynomial of degree pq - 1.
    """
    if not (is_prime(p) and is_prime(q)):
        raise AdmissibilityError(f"p={p}, q={q} must both be prime")
    if p <= q or q < 3:
        raise AdmissibilityError(f"need odd primes p > q, got p={p}, q={q}")
    n = p * q
    coeffs = np.zeros(n, dtype=np.int8)
    coeffs[np.arange(p) * q] = 1
    coeffs[np.arange(1, q) * p] = -1
    return TernarySequence(coeffs, kind="completion")


def completion_random(m: FactoredModulus, seed: int) -> TernarySequence:
    """Uniformly random completion: each free coefficient +-1 from a seeded PCG64."""
    rng = np.random.default_rng(seed)
    support = completion_support(m)
    coeffs = np.zeros(m.n, dtype=np.int8)
    coeffs[support] = rng.integers(0, 2, size=support.size, dtype=np.int8) * 2 - 1
    return TernarySequence(coeffs, kind="completion")


def enumerate_completions(m: FactoredModulus) -> Iterator[TernarySequence]:
    """Yield all 2^psi(n) completions exactly once, lexicographically.

    Order: sign vectors over the free indices (ascending j) compared with
    -1 < +1 and index 0 most significant; equivalently counter bit
    (psi-1-i) drives the i-th free index, bit value 0 -> -1, 1 -> +1.
    """
    support = completion_support(m)
    psi = support.size
    if psi > MAX_ENUM_PSI:
        raise AdmissibilityError(
            f"psi(n) = {psi} > {MAX_ENUM_PSI}: refusing 2^{psi} exhaustive enumeration"
        )
    template = np.zeros(m.n, dtype=np.int8)
    shifts = psi - 1 - np.arange(psi)
    for code in range(1 << psi):
        coeffs = template.copy()
        coeffs[support] = (((code >> shifts) & 1) * 2 - 1).astype(np.int8)
        yield TernarySequence(coeffs, kind="completion")


def signs_to_bitstring(v: TernarySequence, support: np.ndarray) -> str:
    """Render the signs of v on the given support as '+'/'-' in support order."""
    return "".join("+" if s > 0 else "-" for s in v.coeffs[support])


def complete(j_poly: TernarySequence, v: TernarySequence) -> TernarySequence:
    """Pointwise sum J + V; requires equal length and disjoint supports."""
    if j_poly.kind != "character" or v.kind != "completion":
        raise ValueError(
            f"complete() wants (character, completion), got ({j_poly.kind}, {v.kind})"
        )
    if j_poly.n != v.n:
        raise ValueError(f"length mismatch: {j_poly.n} != {v.n}")
    if np.any((j_poly.coeffs != 0) & (v.coeffs != 0)):
        raise ValueError("supports overlap; V must fill only the zeros of J")
    summed = j_poly.coeffs.astype(np.int8) + v.coeffs
    if np.any(summed == 0):
        raise ValueError("J + V still has zero coefficients; V does not cover the gaps")
    return TernarySequence(summed, kind="littlewood")


def write_sequence(seq: TernarySequence, fh: io.TextIOBase) -> None:
    """Plain-text export: one header line 'n kind', then n entries."""
    fh.write(f"{seq.n} {seq.kind}\n")
    fh.write(" ".join(str(int(c)) for c in seq.coeffs))
    fh.write("\n")


def read_sequence(fh: io.TextIOBase) -> TernarySequence:
    """Inverse of :func:`write_sequence`."""
    header = fh.readline().split()
    if len(header) != 2:
        raise ValueError(f"malformed sequence header: {header!r}")
    n, kind = int(header[0]), header[1]
    coeffs = np.array(fh.readline().split(), dtype=np.int8)
    if coeffs.size != n:
        raise ValueError(f"expected {n} coefficients, found {coeffs.size}")
    return TernarySequence(coeffs, kind=kind)
