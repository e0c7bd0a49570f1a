"""Exhaustive scan of all 2^psi Littlewood completions of one character polynomial.

Walking the completions in Gray-code order means each step flips a single
coefficient a_t between -1 and +1, which perturbs every aperiodic
autocorrelation by

    c_u += (a_t' - a_t) * (a_{t+u} + a_{t-u}),   u >= 1,

an O(n) update instead of an O(n log n) recomputation, so the full
2^psi sweep costs O(2^psi * n).  The inner kernel is written in scalar
style and JIT-compiled with numba when available; a vectorized numpy
fallback covers environments without it.  Both are checked against the
brute-force path in the tests.

Reported argmin/argmax sign patterns are deterministic: ties in the norm
are broken toward the lexicographically smallest sign vector over the
free indices in increasing order (with -1 < +1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numbers import FactoredModulus
from .sequences import (
    Rotation,
    character_polynomial,
    complete,
    completion_constant,
    completion_support,
    MAX_ENUM_PSI,
)
from .numbers import AdmissibilityError

# Keep per-completion norms only below this population size.
COLLECT_LIMIT = 1 << 20


def _scan_kernel(a, support, collect, out):
    n = a.shape[0]
    psi = support.shape[0]
    total = 1 << psi
    c = np.zeros(n, dtype=np.int64)
    for u in range(n):
        s = 0
        for j in range(n - u):
            s += a[j] * a[j + u]
        c[u] = s
    tail = np.int64(0)
    for u in range(1, n):
        tail += c[u] * c[u]
    c0sq = c[0] * c[0]
    l4 = c0sq + 2 * tail
    min_l4 = l4
    max_l4 = l4
    min_code = 0
    max_code = 0
    min_rev = 0
    max_rev = 0
    if collect:
        out[0] = l4
    for step in range(1, total):
        x = step
        t = 0
        while x & 1 == 0:
            x >>= 1
            t += 1
        pos = support[t]
        delta = -2 * a[pos]
        for u in range(1, n):
            acc = np.int64(0)
            ip = pos + u
            if ip < n:
                acc += a[ip]
            im = pos - u
            if im >= 0:
                acc += a[im]
            if acc != 0:
                dc = delta * acc
                tail += dc * (2 * c[u] + dc)
                c[u] += dc
        a[pos] = -a[pos]
        l4 = c0sq + 2 * tail
        code = step ^ (step >> 1)
        if collect:
            out[code] = l4
        rev = 0
        for b in range(psi):
            rev = (rev << 1) | ((code >> b) & 1)
        if l4 < min_l4 or (l4 == min_l4 and rev < min_rev):
            min_l4 = l4
            min_code = code
            min_rev = rev
        if l4 > max_l4 or (l4 == max_l4 and rev < max_rev):
            max_l4 = l4
            max_code = code
            max_rev = rev
    return min_l4, min_code, max_l4, max_code


try:
    from numba import njit

    _scan_compiled = njit(cache=True)(_scan_kernel)
except ImportError:  # pragma: no cover - numba is a declared dependency
    _scan_compiled = None


def _bit_reverse(code: int, width: int) -> int:
    rev = 0
    for b in range(width):
        rev = (rev << 1) | ((code >> b) & 1)
    return rev


def _scan_numpy(a, support, collect, out):
    """Vectorized fallback with the same contract as :func:`_scan_kernel`."""
    n = a.shape[0]
    psi = support.shape[0]
    total = 1 << psi
    c = np.correlate(a, a, mode="full")[n - 1 :]
    tail = int(np.dot(c[1:], c[1:]))
    c0sq = int(c[0]) ** 2
    l4 = c0sq + 2 * tail
    min_l4 = max_l4 = l4
    min_code = max_code = 0
    min_rev = max_rev = 0
    if collect:
        out[0] = l4
    c_tail = c[1:]
    for step in range(1, total):
        t = (step & -step).bit_length() - 1
        pos = int(support[t])
        delta = int(-2 * a[pos])
        acc = np.zeros(n - 1, dtype=np.int64)
        if pos < n - 1:
            acc[: n - 1 - pos] += a[pos + 1 :]
        if pos > 0:
            acc[:pos] += a[pos - 1 :: -1]
        dc = delta * acc
        tail += int(np.dot(dc, 2 * c_tail + dc))
        c_tail += dc
        a[pos] = -a[pos]
        l4 = c0sq + 2 * tail
        code = step ^ (step >> 1)
        if collect:
            out[code] = l4
        rev = _bit_reverse(code, psi)
        if l4 < min_l4 or (l4 == min_l4 and rev < min_rev):
            min_l4, min_code, min_rev = l4, code, rev
        if l4 > max_l4 or (l4 == max_l4 and rev < max_rev):
            max_l4, max_code, max_rev = l4, code, rev
    return min_l4, min_code, max_l4, max_code


@dataclass(frozen=True)
class ExhaustiveSummary:
    """Norm extremes over every completion of one (n, r) cell.

    Sign strings follow the free indices in increasing original order,
    '+'/'-' per coefficient; the code-to-sign convention matches the
    scan (bit i drives the i-th free index, set bit = +1).  all_l4 is
    indexed by that code when collected, else None.
    """

    n: int
    r: Fraction
    psi: int
    count: int
    min_l4: int
    min_signs: str
    max_l4: int
    max_signs: str
    all_l4: np.ndarray | None

    def merit_range(self) -> tuple[float, float]:
        """(min F, max F); F is decreasing in the L4 norm."""
        n2 = self.n * self.n
        return n2 / (self.max_l4 - n2), n2 / (self.min_l4 - n2)


def _code_to_signs(code: int, psi: int) -> str:
    return "".join("+" if (code >> i) & 1 else "-" for i in range(psi))


def scan_all_completions(
    m: FactoredModulus, rot: Rotation, collect: bool | None = None
) -> ExhaustiveSummary:
    """Scan every V in the completion family of n and track L4 extremes.

    collect=None keeps per-completion norms when 2^psi <= COLLECT_LIMIT.
    The scan operates on the rotated sequence (J+V)_r = J_r + V_r, so the
    reported norms are those of the rotated completions.
    """
    support = completion_support(m)
    psi = support.size
    if psi > MAX_ENUM_PSI:
        raise AdmissibilityError(
            f"psi(n) = {psi} > {MAX_ENUM_PSI}: exhaustive scan refused"
        )
    total = 1 << psi
    if collect is None:
        collect = total <= COLLECT_LIMIT
    base = complete(character_polynomial(m), completion_constant(m, -1))
    shift = rot.shift(m.n) % m.n
    a = np.roll(base.coeffs.astype(np.int64), -shift)
    support_rot = (support - shift) % m.n
    out = np.empty(total if collect else 1, dtype=np.int64)
    scan = _scan_compiled if _scan_compiled is not None else _scan_numpy
    min_l4, min_code, max_l4, max_code = scan(a, support_rot, collect, out)
    return ExhaustiveSummary(
        n=m.n,
        r=rot.r,
        psi=psi,
        count=total,
        min_l4=int(min_l4),
        min_signs=_code_to_signs(int(min_code), psi),
        max_l4=int(max_l4),
        max_signs=_code_to_signs(int(max_code), psi),
        all_l4=out if collect else None,
    )


def merit_from_l4(l4, n: int):
    """Vectorized F = n^2 / (l4 - n^2) for Littlewood sequences of length n."""
    arr = np.asarray(l4, dtype=np.float64)
    return (n * n) / (arr - n * n)
