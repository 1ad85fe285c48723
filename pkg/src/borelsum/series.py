"""Formal series in z^(-1/m), points of the m-sheeted cover, and coefficient maps.

A :class:`FormalSeries` stores finitely many coefficients a_0..a_nmax of
f(z) = sum_n a_n z^(-n/m).  Operations declare the highest index they need
and raise :class:`InsufficientCoefficientsError` rather than zero-pad;
silent truncation would corrupt every error estimate built on top.

A :class:`RamifiedPoint` is (modulus, argument) with the argument kept as a
plain unreduced real; it only acquires the "mod 2*pi*m" meaning through the
power map z^(k/m) = modulus^(k/m) * exp(i k/m * argument).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Union

import mpmath as mp

from .errors import DomainError, InsufficientCoefficientsError
from .numerics import (PrecisionConfig, as_mpc, as_mpf, ensure_finite,
                       working_precision)


@dataclass(frozen=True)
class RamifiedPoint:
    """Point |z| e^(i arg z) of the m-sheeted cover of C*; argument unreduced."""

    modulus: mp.mpf
    argument: mp.mpf

    def __post_init__(self):
        object.__setattr__(self, "modulus", as_mpf(self.modulus))
        object.__setattr__(self, "argument", as_mpf(self.argument))
        if not self.modulus > 0:
            raise DomainError("RamifiedPoint modulus must be positive")

    def projection(self, prec: PrecisionConfig | None = None) -> mp.mpc:
        """The underlying point of C* (argument taken mod 2*pi)."""
        with working_precision(prec):
            return self.modulus * mp.exp(1j * self.argument)

    def rotated(self, theta) -> "RamifiedPoint":
        return RamifiedPoint(self.modulus, self.argument + as_mpf(theta))

    def equivalent(self, other: "RamifiedPoint", m: int, tol=None,
                   prec: PrecisionConfig | None = None) -> bool:
        """Same point of the m-sheeted cover: equal moduli and arguments
        congruent modulo 2*pi*m.

        ``tol`` defaults to roundoff at half the working precision; pass a
        looser value when the arguments were built at lower precision.
        """
        with working_precision(prec) as cfg:
            tolv = as_mpf(tol) if tol is not None else mp.mpf(2) ** -(cfg.mantissa_bits // 2)
            if abs(self.modulus - other.modulus) > tolv * max(1, self.modulus):
                return False
            period = 2 * mp.pi * m
            delta = mp.fmod(self.argument - other.argument, period)
            return min(abs(delta), abs(period - abs(delta))) <= tolv * max(1, period)

    def scaled(self, factor) -> "RamifiedPoint":
        f = as_mpf(factor)
        if not f > 0:
            raise DomainError("scaling factor must be positive")
        return RamifiedPoint(self.modulus * f, self.argument)


@dataclass(frozen=True)
class GrowthEnvelope:
    """Validity data for a Borel transform: |f~(zeta)| <= A e^(B |zeta|).

    ``domain`` records where the bound holds: a strip of half-width ``r``
    around the summation ray ("strip"), the homothety by ``lam`` of the
    log-of-disk region ("region"), or its ramified lift ("ramified").
    Exactly the parameter matching the domain kind must be set.
    """

    A: float
    B: float
    r: float | None = None
    lam: float | None = None
    domain: str = "region"

    def __post_init__(self):
        if not (self.A > 0 and self.B > 0):
            raise DomainError("envelope requires A > 0 and B > 0")
        if self.domain == "strip":
            if self.r is None or not self.r > 0:
                raise DomainError("a strip envelope needs r > 0")
        elif self.domain in ("region", "ramified"):
            if self.lam is None or not self.lam > 0:
                raise DomainError(f"a {self.domain} envelope needs lam > 0")
        else:
            raise DomainError(f"unknown envelope domain {self.domain!r}")


PointLike = Union[RamifiedPoint, mp.mpc, mp.mpf, int, float, complex]


def as_point(z: PointLike, prec: PrecisionConfig | None = None) -> RamifiedPoint:
    """Coerce a complex number to a cover point on the principal sheet."""
    if isinstance(z, RamifiedPoint):
        return z
    with working_precision(prec):
        zc = as_mpc(z)
        if zc == 0:
            raise DomainError("0 is not a point of the punctured cover")
        return RamifiedPoint(abs(zc), mp.arg(zc))


def power(z: RamifiedPoint, k: int, m: int,
          prec: PrecisionConfig | None = None) -> mp.mpc:
    """z^(k/m) on the cover: modulus^(k/m) * exp(i (k/m) argument)."""
    if m < 1:
        raise DomainError("m must be a positive integer")
    with working_precision(prec):
        expo = mp.mpf(k) / m
        return ensure_finite(mp.power(z.modulus, expo) * mp.exp(1j * expo * z.argument))


class FormalSeries:
    """Coefficients a_0..a_nmax of sum_n a_n z^(-n/m), ramification order m."""

    __slots__ = ("m", "coefficients")

    def __init__(self, m: int, coefficients: Iterable):
        if m < 1:
            raise DomainError("ramification order m must be >= 1")
        coeffs = tuple(as_mpc(c) for c in coefficients)
        if not coeffs:
            raise DomainError("a FormalSeries needs at least the constant term")
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "coefficients", coeffs)

    def __setattr__(self, *a):  # immutable value type
        raise AttributeError("FormalSeries is immutable")

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def n_max(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, n: int) -> mp.mpc:
        if n < 0:
            raise DomainError("coefficient index must be nonnegative")
        if n > self.n_max:
            raise InsufficientCoefficientsError(
                f"coefficient a_{n} requested but series stores only up to a_{self.n_max}")
        return self.coefficients[n]

    def require_depth(self, n: int) -> None:
        if n > self.n_max:
            raise InsufficientCoefficientsError(
                f"operation needs coefficients up to a_{n}, series stores a_0..a_{self.n_max}")

    def __repr__(self):
        return f"FormalSeries(m={self.m}, n_max={self.n_max})"


def rotate(f: FormalSeries, theta, prec: PrecisionConfig | None = None) -> FormalSeries:
    """Coefficients of f(z e^(-i theta)): a_n -> a_n e^(i n theta / m).

    Direct substitution (z e^(-i theta))^(-n/m) = z^(-n/m) e^(+i n theta/m)
    fixes the sign of the phase factor.
    """
    with working_precision(prec):
        th = as_mpf(theta)
        phase = [mp.exp(1j * n * th / f.m) for n in range(len(f))]
        return FormalSeries(f.m, (a * p for a, p in zip(f.coefficients, phase)))


def scale(f: FormalSeries, lam, prec: PrecisionConfig | None = None) -> FormalSeries:
    """Homothety coefficients: a_n -> lambda^(n/m - 1) a_n, lambda > 0."""
    with working_precision(prec):
        lv = as_mpf(lam)
        if not lv > 0:
            raise DomainError("lambda must be positive")
        return FormalSeries(
            f.m,
            (mp.power(lv, mp.mpf(n) / f.m - 1) * a
             for n, a in enumerate(f.coefficients)))


def branch_split(f: FormalSeries) -> tuple[mp.mpc, list[FormalSeries]]:
    """Split into the constant a_0 plus m ordinary (m = 1) branch series.

    Branch l (1 <= l <= m) holds a_{l,j} = a_{l + m(j-1)} at index j, so
    f(z) = a_0 + sum_l z^((m-l)/m) f_l(z projected).  Branches keep every
    coefficient the parent stores; depths may differ by one between branches.
    """
    branches = []
    for l in range(1, f.m + 1):
        coeffs = [mp.mpc(0)]
        j = 1
        while l + f.m * (j - 1) <= f.n_max:
            coeffs.append(f.coefficients[l + f.m * (j - 1)])
            j += 1
        branches.append(FormalSeries(1, coeffs))
    return f.coefficients[0], branches


def partial_sum(f: FormalSeries, z: PointLike, N: int,
                prec: PrecisionConfig | None = None) -> mp.mpc:
    """sum_{k=0}^{N} a_k z^(-k/m); requires N <= n_max."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    f.require_depth(N)
    zp = as_point(z, prec)
    with working_precision(prec):
        return ensure_finite(mp.fsum(
            (f.coefficients[k] * power(zp, -k, f.m) for k in range(N + 1)),
            absolute=False))


# ---------------------------------------------------------------------------
# series file format: {"m": int, "coefficients": [["re", "im"], ...]}
# with decimal strings so coefficients survive beyond double precision.
# ---------------------------------------------------------------------------

def series_to_json(f: FormalSeries, dps: int | None = None) -> str:
    digits = dps or int(mp.mp.dps) + 5
    rows = [[mp.nstr(mp.re(c), digits), mp.nstr(mp.im(c), digits)]
            for c in f.coefficients]
    return json.dumps({"m": f.m, "coefficients": rows}, indent=1)


def series_from_json(text: str, prec: PrecisionConfig | None = None) -> FormalSeries:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed series file: {exc}") from exc
    if not isinstance(payload, dict) or "m" not in payload or "coefficients" not in payload:
        raise DomainError('series file must be an object {"m": ..., "coefficients": ...}')
    m = payload["m"]
    rows = payload["coefficients"]
    if not isinstance(m, int) or not isinstance(rows, list):
        raise DomainError("series file has wrong field types")
    with working_precision(prec):
        coeffs = []
        for row in rows:
            if not (isinstance(row, (list, tuple)) and len(row) == 2):
                raise DomainError("each coefficient must be a [re, im] pair")
            coeffs.append(mp.mpc(as_mpf(str(row[0])), as_mpf(str(row[1]))))
    return FormalSeries(m, coeffs)


def load_series(fp: Union[str, IO[str]], prec: PrecisionConfig | None = None) -> FormalSeries:
    if isinstance(fp, str):
        with open(fp, "r", encoding="utf-8") as fh:
            return series_from_json(fh.read(), prec)
    return series_from_json(fp.read(), prec)


def dump_series(f: FormalSeries, fp: Union[str, IO[str]], dps: int | None = None) -> None:
    text = series_to_json(f, dps)
    if isinstance(fp, str):
        with open(fp, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        fp.write(text)
