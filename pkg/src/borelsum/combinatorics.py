"""Exact combinatorial objects: Stirling numbers, Bell polynomials, d-coefficients.

All quantities here feed cancellation-heavy sums downstream, so they are
computed in exact integer/rational arithmetic and converted to floating
values only at the last step.

The d-coefficients are the expansion coefficients of a fractional power
against the beta-kernel basis,

    1/z^r = Gamma(z)/Gamma(r+z) + sum_{j>=1} d_{r,j} Gamma(z)/Gamma(r+j+z),

    d_{r,j} = ( sum_{1<=p<=j} B_{j,p}(1!/2, 2!/3, ..., l!/(l+1), ...)
                / Gamma(r-p) ) * Gamma(r+j)/j!,

where B_{j,p} are partial exponential Bell polynomials.  For rational r the
gamma factors collapse to rational rising/falling products, so d_{r,j} is an
exact rational; 1/Gamma(r-p) at a pole contributes an exact zero factor.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import mpmath as mp

from .errors import DomainError
from .numerics import PrecisionConfig, as_mpf


class StirlingTable:
    """Triangular table of signed first-kind Stirling numbers s(n, k).

    Convention: prod_{i=0}^{n-1} (x - i) = sum_k s(n, k) x^k, so
    s(n+1, k) = s(n, k-1) - n*s(n, k).  Rows are exact integers, grown on
    demand and immutable once built.
    """

    def __init__(self, n_max: int = 0):
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()
        self.grow(n_max)

    @property
    def n_max(self) -> int:
        return len(self._rows) - 1

    def grow(self, n_max: int) -> None:
        with self._lock:
            while self.n_max < n_max:
                prev = self._rows[-1]
                n = len(self._rows) - 1
                row = [0] * (n + 2)
                for k in range(n + 2):
                    above = prev[k - 1] if 1 <= k <= n + 1 else 0
                    left = prev[k] if k <= n else 0
                    row[k] = above - n * left
                self._rows.append(row)

    def value(self, n: int, k: int) -> int:
        if k < 0 or k > n:
            raise DomainError(f"stirling_first requires 0 <= k <= n, got ({n}, {k})")
        if n > self.n_max:
            self.grow(max(n, 2 * self.n_max))
        return self._rows[n][k]


_STIRLING = StirlingTable()


def stirling_first(n: int, k: int) -> int:
    """Signed Stirling number of the first kind s(n, k), exact."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return _STIRLING.value(n, k)


class BellArguments:
    """Argument sequence for the partial Bell polynomials.

    The fixed sequence of the d-coefficient formula is x_l = l!/(l+1)
    (exact rationals); custom sequences are accepted for testing.
    """

    def __init__(self, values: Sequence[Fraction] | None = None):
        if values is None:
            self._values: list[Fraction] = []
            self._fixed = True
        else:
            self._values = [Fraction(v) for v in values]
            self._fixed = False
        # memo table for B_{j,p} on this argument sequence
        self._bell: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
        self._lock = threading.Lock()

    def x(self, l: int) -> Fraction:
        if l < 1:
            raise DomainError("Bell arguments are indexed from 1")
        if self._fixed:
            while len(self._values) < l:
                i = len(self._values) + 1
                self._values.append(Fraction(factorial(i), i + 1))
        elif l > len(self._values):
            raise DomainError(f"argument sequence has only {len(self._values)} entries")
        return self._values[l - 1]

    def bell(self, j: int, p: int) -> Fraction:
        if p < 1 or p > j:
            raise DomainError(f"bell_partial requires 1 <= p <= j, got ({j}, {p})")
        with self._lock:
            return self._bell_locked(j, p)

    def _bell_locked(self, j: int, p: int) -> Fraction:
        key = (j, p)
        got = self._bell.get(key)
        if got is not None:
            return got
        if p == 0:
            val = Fraction(1) if j == 0 else Fraction(0)
        else:
            # B_{j,p} = sum_i C(j-1, i-1) x_i B_{j-i, p-1}
            val = Fraction(0)
            for i in range(1, j - p + 2):
                inner = self._bell_locked(j - i, p - 1)
                if inner:
                    val += comb(j - 1, i - 1) * self.x(i) * inner
        self._bell[key] = val
        return val


_FIXED_ARGS = BellArguments()


def bell_partial(j: int, p: int, args: BellArguments | None = None) -> Fraction:
    """Partial exponential Bell polynomial B_{j,p} at the fixed sequence
    x_l = l!/(l+1) (or at ``args``), exact rational."""
    return (args or _FIXED_ARGS).bell(j, p)


def _falling(r: Fraction, p: int) -> Fraction:
    """(r-1)(r-2)...(r-p) = Gamma(r)/Gamma(r-p); exactly 0 across a pole."""
    v = Fraction(1)
    for i in range(1, p + 1):
        v *= (r - i)
    return v


def _rising(r: Fraction, j: int) -> Fraction:
    """r(r+1)...(r+j-1) = Gamma(r+j)/Gamma(r)."""
    v = Fraction(1)
    for i in range(j):
        v *= (r + i)
    return v


_D_CACHE: dict[tuple[Fraction, int], Fraction] = {}
_D_LOCK = threading.Lock()


def d_coefficient_exact(r: Fraction | int, j: int) -> Fraction:
    """d_{r,j} as an exact rational (r rational, r > 0).

    The 1/Gamma(r-p) factors are expressed through the falling product
    Gamma(r)/Gamma(r-p) = (r-1)...(r-p), which vanishes exactly when r-p
    hits a nonpositive integer, and Gamma(r+j)/Gamma(r) through the rising
    product, leaving a pure rational.
    """
    r = Fraction(r)
    if r <= 0:
        raise DomainError("d_coefficient requires r > 0")
    if j < 0:
        raise DomainError("j must be nonnegative")
    if j == 0:
        return Fraction(1)
    key = (r, j)
    with _D_LOCK:
        got = _D_CACHE.get(key)
    if got is not None:
        return got
    inner = Fraction(0)
    for p in range(1, j + 1):
        fall = _falling(r, p)
        if fall:
            inner += bell_partial(j, p) * fall
    # inner = sum_p B_{j,p} Gamma(r)/Gamma(r-p), so
    # d = (inner/Gamma(r)) * Gamma(r+j)/j! = inner * rising(r,j) / j!
    val = inner * _rising(r, j) / factorial(j)
    with _D_LOCK:
        _D_CACHE[key] = val
    return val


def d_coefficient(r: Fraction | int, j: int,
                  prec: PrecisionConfig | None = None) -> mp.mpf:
    """d_{r,j} as a floating value at working precision (see the exact form)."""
    return as_mpf(d_coefficient_exact(r, j), prec)


def d_coefficient_row(r: Fraction | int, j_max: int) -> list[Fraction]:
    """[d_{r,0}, ..., d_{r,j_max}], exact.

    Evaluates the same Bell-row combination through its exponential
    generating function: with h(w) = -ln(1-w)/w = sum_k w^k/(k+1),

        sum_p B_{j,p}(1!/2, ...) Gamma(r)/Gamma(r-p) = j! [w^j] h(w)^(r-1),

    so the row comes out of the standard power recurrence for h^alpha in
    O(j_max^2) rational operations instead of O(j_max^3) Bell builds.
    Cross-checked against :func:`d_coefficient_exact` in the test suite.
    """
    r = Fraction(r)
    if r <= 0:
        raise DomainError("d_coefficient_row requires r > 0")
    alpha = r - 1
    # c_n = [w^n] h^alpha:  n c_n = sum_{k=1}^{n} ((alpha+1)k - n) h_k c_{n-k}
    h = [Fraction(1, k + 1) for k in range(j_max + 1)]
    c = [Fraction(1)] + [Fraction(0)] * j_max
    for n in range(1, j_max + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if c[n - k]:
                acc += ((alpha + 1) * k - n) * h[k] * c[n - k]
        c[n] = acc / n
    return [c[j] * _rising(r, j) for j in range(j_max + 1)]
