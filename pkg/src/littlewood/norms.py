"""L2/L4 norms, merit factors, and the identities that cross-check them.

For a polynomial A(z) = sum a_j z^j with real coefficients, writing
c_u = sum_j a_j a_{j+u} for the aperiodic autocorrelations,

    ||A||_2^2 = c_0,      ||A||_4^4 = c_0^2 + 2 sum_{u>=1} c_u^2,

where the norms are taken on the unit circle with normalized measure.
The integer autocorrelation path is the single source of truth here;
the spectral paths (evaluation at roots of unity, and the Hoholdt-Jensen
decomposition) are validated against it, never the other way around.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numbers import FactoredModulus, gauss_sum_jacobi, ramanujan_sum
from .sequences import (
    Rotation,
    TernarySequence,
    character_polynomial,
    complete,
    completion_all_ones,
    rotate,
)

# Beyond this length sum(c_u^2) may exceed int64; switch to Python ints.
INT64_SAFE_N = 1 << 21

# Pre-rounding residual allowed on the FFT autocorrelation fast path
# (empirically safe for n <= 1e7 in double precision; violations are loud).
FFT_ROUND_GUARD = 1e-3

# n x n matrices and an O(n^3)-equivalent matrix product; configurable upward.
HJ_DEFAULT_MAX_N = 255


class IdentityFailure(Exception):
    """A closed form disagreed with its direct evaluation beyond tolerance."""


class ZeroDenominatorError(ArithmeticError):
    """||A||_4^4 equals ||A||_2^4, so the merit factor is undefined."""


@dataclass(frozen=True)
class AutocorrelationProfile:
    """Exact integer aperiodic autocorrelations c_u, u = 0..n-1."""

    n: int
    c: np.ndarray


@dataclass(frozen=True)
class MeritReport:
    """Norm and merit-factor summary for one sequence at one rotation."""

    n: int
    r: Fraction
    completion: str
    seed: int | None
    l2sq: int
    l4p4_exact: int
    l4p4_dft: float
    F: float
    f_of_r: float
    gap: float | None  # |1/F - (phi/n)^2 / F(J_r)| when a J_r reference applies


@dataclass(frozen=True)
class DecompositionReport:
    """The four terms of the Hoholdt-Jensen expression for ||A||_4^4 / n^2."""

    main_term: float
    B: float
    C: float
    D: float
    total: float


def _autocorr_direct(coeffs: np.ndarray) -> np.ndarray:
    a = coeffs.astype(np.int64)
    return np.correlate(a, a, mode="full")[a.size - 1 :]


def _autocorr_fft(coeffs: np.ndarray) -> tuple[np.ndarray, float]:
    n = coeffs.size
    size = 1 << (2 * n - 1).bit_length()
    spec = np.fft.rfft(coeffs.astype(np.float64), size)
    raw = np.fft.irfft(spec * np.conj(spec), size)[:n]
    rounded = np.rint(raw)
    residual = float(np.max(np.abs(raw - rounded)))
    return rounded.astype(np.int64), residual


def autocorrelation(a: TernarySequence, method: str = "auto") -> AutocorrelationProfile:
    """Exact integer aperiodic autocorrelation profile of a ternary sequence.

    method: 'direct' is the O(n^2) reference; 'fft' is O(n log n) with the
    results rounded to integers under a residual guard of 1e-3; 'auto'
    picks by size and falls back to 'direct' if the guard ever trips.
    """
    if method not in ("auto", "direct", "fft"):
        raise ValueError(f"unknown method {method!r}")
    if method == "direct" or (method == "auto" and a.n <= 1024):
        return AutocorrelationProfile(a.n, _autocorr_direct(a.coeffs))
    c, residual = _autocorr_fft(a.coeffs)
    if residual >= FFT_ROUND_GUARD:
        if method == "fft":
            raise IdentityFailure(
                f"FFT autocorrelation rounding residual {residual:.3e} >= {FFT_ROUND_GUARD}"
            )
        return AutocorrelationProfile(a.n, _autocorr_direct(a.coeffs))
    return AutocorrelationProfile(a.n, c)


def l4_fourth_power_exact(a: TernarySequence) -> int:
    """||A||_4^4 as an exact integer: c_0^2 + 2 sum_{u>=1} c_u^2."""
    c = autocorrelation(a).c
    if a.n <= INT64_SAFE_N:
        tail = int(np.dot(c[1:], c[1:]))
    else:
        tail = sum(int(x) * int(x) for x in c[1:])
    return int(c[0]) ** 2 + 2 * tail


def l4_fourth_power_dft(a: TernarySequence) -> float:
    """||A||_4^4 via values at the 2n-th roots of unity.

    Uses the exact-quadrature identity
    ||A||_4^4 = (1/2n) (sum_j |A(zeta_n^j)|^4 + sum_j |A(-zeta_n^j)|^4),
    computed with two length-n DFTs.  The second DFT evaluates the odd
    2n-th roots through a half-turn twist of the coefficients, which for
    odd n is exactly the -zeta_n^j point set and keeps the quadrature
    exact for even n too (where -zeta_n^j would duplicate points).
    """
    af = a.coeffs.astype(np.float64)
    twist = np.exp(1j * np.pi * np.arange(a.n) / a.n)
    v1 = np.abs(np.fft.fft(af))
    v2 = np.abs(np.fft.fft(af * twist))
    return float((np.sum(v1**4) + np.sum(v2**4)) / (2 * a.n))


def merit_factor(a: TernarySequence) -> float:
    """F(A) = ||A||_2^4 / (||A||_4^4 - ||A||_2^4) from exact integer norms."""
    l2sq = a.weight()
    denom = l4_fourth_power_exact(a) - l2sq * l2sq
    if denom == 0:
        raise ZeroDenominatorError(f"||A||_4^4 = ||A||_2^4 = {l2sq * l2sq}; F undefined")
    return (l2sq * l2sq) / denom


def asymptotic_f(r) -> float:
    """Asymptotic merit-factor profile: 1/(1/6 + 8(|r|-1/4)^2) on (-1/2, 1/2].

    Extended with period 1 to all rationals; ranges over [3/2, 6] with the
    maximum 6 attained at r = +-1/4.  Evaluated in exact rational
    arithmetic before the final float conversion.
    """
    r = Fraction(r)
    r -= math.floor(r + Fraction(1, 2))
    if r == Fraction(-1, 2):
        r = Fraction(1, 2)
    return float(1 / (Fraction(1, 6) + 8 * (abs(r) - Fraction(1, 4)) ** 2))


def build_merit_report(
    a: TernarySequence,
    rot: Rotation,
    completion: str,
    *,
    seed: int | None = None,
    phi: int | None = None,
    inv_f_jr: float | None = None,
    dft_rel_tol: float = 1e-9,
) -> MeritReport:
    """Score one sequence: exact and DFT L4 paths, F, f(r), and the J_r gap.

    The two L4 paths must agree within dft_rel_tol (relative); when phi and
    1/F(J_r) are supplied, gap = |1/F - (phi/n)^2 / F(J_r)|.
    """
    l2sq = a.weight()
    l4_exact = l4_fourth_power_exact(a)
    l4_dft = l4_fourth_power_dft(a)
    if abs(l4_dft - l4_exact) > dft_rel_tol * l4_exact:
        raise IdentityFailure(
            f"L4 paths disagree at n={a.n}: exact={l4_exact}, dft={l4_dft!r}"
        )
    denom = l4_exact - l2sq * l2sq
    if denom == 0:
        raise ZeroDenominatorError(f"n={a.n} {completion}: ||A||_4^4 = ||A||_2^4")
    f_val = (l2sq * l2sq) / denom
    gap = None
    if inv_f_jr is not None and phi is not None:
        gap = abs(1 / f_val - (phi / a.n) ** 2 * inv_f_jr)
    return MeritReport(
        n=a.n,
        r=rot.r,
        completion=completion,
        seed=seed,
        l2sq=l2sq,
        l4p4_exact=l4_exact,
        l4p4_dft=l4_dft,
        F=f_val,
        f_of_r=asymptotic_f(rot.r),
        gap=gap,
    )


def values_at_roots(a: TernarySequence, order: int | None = None) -> np.ndarray:
    """A(zeta_order^k) for k = 0..order-1 (order defaults to n, must be >= n)."""
    order = a.n if order is None else order
    if order < a.n:
        raise ValueError(f"order {order} < length {a.n}")
    return np.conj(np.fft.fft(a.coeffs.astype(np.float64), order))


def hj_decomposition(
    a: TernarySequence, max_n: int = HJ_DEFAULT_MAX_N
) -> DecompositionReport:
    """Hoholdt-Jensen decomposition of ||A||_4^4 / n^2 for odd n.

    Writes the normalized fourth-power norm as a main term
    (2n^2+1)/(3n^5) * Lambda(0,0,0) plus three sums B, C, D over windowed
    products Lambda(j,k,l) of the values A(zeta_n^a); each term is real up
    to rounding noise for real input.  Cost is dominated by two n x n
    complex matrix products, hence the max_n guard (raise it at your own
    risk for O(n^3) work).
    """
    n = a.n
    if n % 2 == 0:
        raise ValueError(f"decomposition needs odd n (even polynomial degree), got n={n}")
    if n > max_n:
        raise ValueError(f"n={n} exceeds cost guard max_n={max_n} (O(n^3) work)")
    ah = values_at_roots(a)
    zeta = np.exp(2j * np.pi * np.arange(n) / n)
    shift = ah[(np.arange(n)[:, None] + np.arange(n)[None, :]) % n]
    p = np.abs(ah) ** 2
    q = ah**2
    # lam1[k, l] = Lambda(0, k, l) = sum_a |A_a|^2 A_{a+k} conj(A_{a+l})
    lam1 = (shift * p[:, None]).T @ np.conj(shift)
    # lam2[k, l] = Lambda(k, 0, l) = sum_a A_a^2 conj(A_{a+k}) conj(A_{a+l})
    lam2 = np.conj(shift).T @ (q[:, None] * np.conj(shift))
    main = (2 * n**2 + 1) / (3 * n**5) * float(np.sum(p**2))

    zk = zeta[1:]
    lam00k = lam1[0, 1:]
    b_sum = (2 / n**5) * np.sum(
        (lam00k + zk * np.conj(lam00k)) / (1 - zk) ** 2 * (1 + zk)
    )

    zkc = zk[:, None]
    zlc = zk[None, :]
    num = 4 * zkc * lam1[1:, 1:] + lam2[1:, 1:] + zkc * zlc * np.conj(lam2[1:, 1:])
    off_diag = ~np.eye(n - 1, dtype=bool)
    c_sum = -(2 / n**5) * np.sum((num / ((1 - zkc) * (1 - zlc)))[off_diag])

    d_sum = (4 / n**5) * np.sum(
        (2 * np.diag(lam1)[1:] + np.conj(zk) * np.diag(lam2)[1:]) / np.abs(1 - zk) ** 2
    )

    total = main + b_sum + c_sum + d_sum
    scale = max(abs(total), 1.0)
    if abs(total.imag) > 1e-8 * scale:
        raise IdentityFailure(f"decomposition total has imaginary residue {total.imag:.3e}")
    return DecompositionReport(
        main_term=main,
        B=float(b_sum.real),
        C=float(c_sum.real),
        D=float(d_sum.real),
        total=float(total.real),
    )


def exp_sum_identity_check(j: int, n: int) -> tuple[float, float]:
    """Both sides of sum_{k=1}^{n-1} zeta_n^{jk} / |1 - zeta_n^k|^2 for |j| <= n.

    Closed form: (n^2/2)(|j|/n - 1/2)^2 - (n^2+2)/24.  Returns (lhs, rhs);
    the caller compares at its tolerance.  The imaginary part of the direct
    sum must vanish (conjugate symmetry) and is asserted below 1e-9.
    """
    if n < 2 or abs(j) > n:
        raise ValueError(f"need n >= 2 and |j| <= n, got j={j}, n={n}")
    k = np.arange(1, n, dtype=np.int64)
    angles = 2 * np.pi * ((j * k) % n) / n
    denom = 2 - 2 * np.cos(2 * np.pi * k / n)
    lhs_c = np.sum(np.exp(1j * angles) / denom)
    if abs(lhs_c.imag) > 1e-9:
        raise IdentityFailure(f"imaginary residue {lhs_c.imag:.3e} at j={j}, n={n}")
    rhs = (n**2 / 2) * (abs(j) / n - 0.5) ** 2 - (n**2 + 2) / 24
    return float(lhs_c.real), float(rhs)


def spectral_values_J(m: FactoredModulus, rot: Rotation) -> np.ndarray:
    """Closed-form J_r(zeta_n^j) = i^((n-1)^2/4) zeta_n^{-jR} (j|n) sqrt(n).

    In particular |J(zeta_n^j)|^2 = n exactly when gcd(j, n) = 1 and 0
    otherwise.  Direct-evaluation comparison lives in verify/tests.
    """
    n = m.n
    e = (((n - 1) // 2) ** 2) % 4
    i_power = (1, 1j, -1, -1j)[e]
    shift = rot.shift(n)
    j = np.arange(n, dtype=np.int64)
    phase = np.exp(-2j * np.pi * ((j * shift) % n) / n)
    return i_power * math.sqrt(n) * phase * character_polynomial(m).coeffs


def interpolation_bound_check(a: TernarySequence) -> tuple[float, float]:
    """Dense-grid circle max of |A| against the 2 log n root-of-unity bound.

    The estimate is the max of |A| over 8n equispaced points (a lower bound
    on the true circle max, the safe direction here); the bound is
    2 log(n) max_k |A(zeta_n^k)|.  For character-family input the rotated
    character bound 2 sqrt(n) log n is asserted as well.  Requires n > 2.
    """
    n = a.n
    if n <= 2:
        raise ValueError(f"bound requires n > 2, got n={n}")
    estimate = float(np.max(np.abs(values_at_roots(a, 8 * n))))
    bound = 2 * math.log(n) * float(np.max(np.abs(values_at_roots(a))))
    if estimate > bound * (1 + 1e-12):
        raise IdentityFailure(f"grid max {estimate} exceeds interpolation bound {bound}")
    if a.kind == "character":
        char_bound = 2 * math.sqrt(n) * math.log(n)
        if estimate > char_bound * (1 + 1e-12):
            raise IdentityFailure(
                f"character circle max {estimate} exceeds 2 sqrt(n) log n = {char_bound}"
            )
    return estimate, bound


def proposition4_gap(
    m: FactoredModulus, v: TernarySequence, rot: Rotation
) -> tuple[float, float]:
    """Merit-factor gap bound for a completion: returns (lhs, rhs), lhs < rhs.

    lhs = |1/F(J_r+V_r) - (phi/n)^2 / F(J_r) - ||V_r||_4^4 / n^2|;
    rhs = 8 p^(-1/2) n^(-1) (log n)^(3/2) ||V_r||_4^2
          + 58 p^(-1/2) (log n)^(7/2),
    with p the smallest prime factor and all norms from the exact path.
    """
    n = m.n
    j_poly = character_polynomial(m)
    jv_r = rotate(complete(j_poly, v), rot)
    j_r = rotate(j_poly, rot)
    v_r = rotate(v, rot)
    l4v = l4_fourth_power_exact(v_r)
    lhs = abs(
        1 / merit_factor(jv_r)
        - (m.phi / n) ** 2 / merit_factor(j_r)
        - l4v / n**2
    )
    log_n = math.log(n)
    rhs = (
        8 / math.sqrt(m.p_min) / n * log_n**1.5 * math.sqrt(l4v)
        + 58 / math.sqrt(m.p_min) * log_n**3.5
    )
    if not lhs < rhs:
        raise IdentityFailure(
            f"merit gap bound violated at n={n}, r={rot}: lhs={lhs} >= rhs={rhs}"
        )
    return lhs, rhs


def ramanujan_direct_check(m: FactoredModulus) -> list[tuple[int, int, complex]]:
    """(u, closed form, direct root-of-unity sum) for every u in [0, n).

    The direct side evaluates sum_{gcd(j,n)=1} zeta_n^{ju} for all u with a
    single DFT of the unit-indicator vector, independent of the closed form.
    """
    n = m.n
    units = (np.gcd(np.arange(n, dtype=np.int64), n) == 1).astype(np.float64)
    direct = np.conj(np.fft.fft(units))
    return [(u, ramanujan_sum(u, m), complex(direct[u])) for u in range(n)]


def gauss_direct_check(m: FactoredModulus) -> list[tuple[int, complex, complex]]:
    """(j, closed form, direct sum) for the Jacobi Gauss sum, all j in [0, n).

    Direct side: sum_l (l|n) zeta_n^{jl} for all j as one DFT of the
    character coefficients (built from residue tables, so a wrong scalar
    Jacobi symbol shows up as a mismatch here).
    """
    direct = values_at_roots(character_polynomial(m))
    return [(j, gauss_sum_jacobi(j, m), complex(direct[j])) for j in range(m.n)]


def spectral_direct_check(m: FactoredModulus, rot: Rotation) -> float:
    """Max |closed form - direct DFT| over all spectral values of J_r."""
    direct = values_at_roots(rotate(character_polynomial(m), rot))
    return float(np.max(np.abs(spectral_values_J(m, rot) - direct)))


def character_sum_check(u: int, m: FactoredModulus) -> tuple[int, int]:
    """sum_j (j|n)((j+u)|n) directly vs the Ramanujan closed form; both exact."""
    c = character_polynomial(m).coeffs.astype(np.int64)
    lhs = int(np.dot(c, np.roll(c, -u % m.n)))
    return lhs, ramanujan_sum(u, m)


def allones_spike_check(m: FactoredModulus) -> list[tuple[int, float]]:
    """Spectral spikes of the all-ones completion at u in {n/p, 2n/p, ...}.

    Each V(zeta_n^u) must equal phi(n)/(p-1) (real) within 1e-9 for
    u = t n/p, t = 1..p-1, with p the smallest prime factor.
    """
    vals = values_at_roots(completion_all_ones(m))
    expected = m.phi / (m.p_min - 1)
    out = []
    for t in range(1, m.p_min):
        u = t * (m.n // m.p_min)
        value = vals[u]
        if abs(value - expected) > 1e-9:
            raise IdentityFailure(
                f"all-ones spike at n={m.n}, u={u}: {value} != {expected}"
            )
        out.append((u, float(value.real)))
    return out
