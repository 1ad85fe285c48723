"""Fractional-power (m > 1) Borel summation: branch and generalized pipelines.

Two independent routes to the same Borel sum:

* branch route: split f into m ordinary series f_l by residue class of the
  index mod m, sum each with the classical factorial series at the
  projected point, reassemble with z^((m-l)/m) prefactors;

* generalized route: expand directly against fractional beta kernels,

      a_0 + lambda sum_{n>=1} Gamma(n/m) Gamma(lambda z) d_n^(lambda)
                              / Gamma(lambda z + n/m),

  where d_n = (a_n + sum_{l+jm=n, l,j>=1} d_{l/m, j} a_l) / Gamma(n/m)
  and the d_{r,j} are the exact rational coefficients from
  :mod:`borelsum.combinatorics`.

The two truncation conventions differ on purpose: branch sums truncate each
branch at the same per-branch depth N, generalized sums truncate at flat
index n <= N, and the flat index runs m times faster.

Neither pipeline checks the analytic hypotheses behind convergence (that
would need the Borel transform's singularity set); instead results carry
divergence diagnostics: term growth past the smallest term flips
``diverging`` and the cancellation condition number is reported.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp

from .classical import (SummationResult, _first_omitted_estimate,
                        check_lambda_permitted, factorial_expansion,
                        least_term_index, r_fact)
from .combinatorics import d_coefficient_exact
from .errors import DomainError, InsufficientCoefficientsError
from .numerics import (PrecisionConfig, as_mpf, ensure_finite, gamma_ratio,
                       working_precision)
from .series import (FormalSeries, GrowthEnvelope, RamifiedPoint, as_point,
                     branch_split, partial_sum, power, rotate, scale)


def branch_sum(f: FormalSeries, lam, z: RamifiedPoint, N: int,
               envelope: GrowthEnvelope | None = None,
               prec: PrecisionConfig | None = None) -> SummationResult:
    """Assemble a_0 + sum_l z^((m-l)/m) * (factorial series of branch l at z projected).

    Each branch is truncated at per-branch depth N; the heuristic error is
    the z-weighted sum of the per-branch first-omitted-term estimates.
    Needs flat coefficients up to a_{l + m(N+1)} for every branch.
    """
    if N < 0:
        raise DomainError("N must be nonnegative")
    z = as_point(z, prec)
    needed = f.m + f.m * (N + 1)
    if needed > f.n_max:
        raise InsufficientCoefficientsError(
            f"branch depth N = {N} needs flat coefficients up to a_{needed}, "
            f"series stores a_0..a_{f.n_max}")
    with working_precision(prec):
        lv = as_mpf(lam)
        check_lambda_permitted(lv, envelope)
        zdot = z.projection(prec)
        if not mp.re(zdot) > 0:
            raise DomainError("branch_sum needs Re(z projected) > 0")
        a0, branches = branch_split(f)
        estimate = mp.mpc(a0)
        heuristic = mp.mpf(0)
        rigorous = mp.mpf(0) if envelope is not None and envelope.lam is not None else None
        cond = mp.mpf(1)
        for l, fl in enumerate(branches, start=1):
            exp_l = factorial_expansion(fl, lv, N + 1, prec)
            part = exp_l.a0 + lv * mp.fsum(
                (gamma_ratio(lv * zdot, n, 1, prec) * exp_l.b[n] for n in range(N + 1)),
                absolute=False)
            weight = power(z, f.m - l, f.m, prec)
            estimate += weight * part
            heuristic += abs(weight) * _first_omitted_estimate(
                exp_l.b[N + 1], lv, zdot, N, prec)
            if rigorous is not None:
                rigorous += abs(weight) * r_fact(lv, envelope.A, envelope.B, N, zdot, prec)
            if exp_l.condition:
                cond = max(cond, max(exp_l.condition[:N + 2]))
        return SummationResult(estimate=ensure_finite(estimate), N=N,
                               method="branch", rigorous_bound=rigorous,
                               heuristic_error=heuristic, condition_number=cond)


def generalized_coefficients(f: FormalSeries, n_max: int | None = None,
                             prec: PrecisionConfig | None = None) -> list[mp.mpc]:
    """Kernel coefficients [d_1, ..., d_{n_max}] of the generalized expansion.

    d_n = (a_n + sum over l + j m = n, l,j >= 1 of d_{l/m, j} a_l) / Gamma(n/m);
    for n <= m the correction sum is empty and d_n = a_n / Gamma(n/m).
    """
    if n_max is None:
        n_max = f.n_max
    f.require_depth(n_max)
    with working_precision(prec):
        out: list[mp.mpc] = []
        for n in range(1, n_max + 1):
            acc = mp.mpc(f.coefficients[n])
            for j in range(1, (n - 1) // f.m + 1):
                l = n - j * f.m
                if l >= 1 and f.coefficients[l] != 0:
                    dr = d_coefficient_exact(Fraction(l, f.m), j)
                    acc += mp.mpf(dr.numerator) / dr.denominator * f.coefficients[l]
            out.append(acc * mp.rgamma(mp.mpf(n) / f.m))
        return out


def _divergence_flag(term_mags: list[mp.mpf]) -> bool:
    """Growing terms past the smallest one signal the series left its
    convergence regime (or never had one)."""
    if len(term_mags) < 4:
        return False
    nonzero = [t for t in term_mags if t > 0]
    if not nonzero:
        return False
    i_min = min(range(len(term_mags)), key=lambda i: term_mags[i] if term_mags[i] > 0 else mp.inf)
    tail = term_mags[-1]
    return i_min < len(term_mags) - 3 and tail > 4 * term_mags[i_min]


def generalized_factorial_sum(f: FormalSeries, lam, z: RamifiedPoint, N: int,
                              envelope: GrowthEnvelope | None = None,
                              prec: PrecisionConfig | None = None) -> SummationResult:
    """Generalized factorial series truncated at flat index n <= N.

    Needs d_{N+1}, hence coefficients up to a_{N+1}, for the
    first-omitted-term estimate.
    """
    if N < 0:
        raise DomainError("N must be nonnegative")
    z = as_point(z, prec)
    f.require_depth(N + 1)
    with working_precision(prec):
        lv = as_mpf(lam)
        check_lambda_permitted(lv, envelope)
        zdot = z.projection(prec)
        if not mp.re(zdot) > 0:
            raise DomainError("generalized_factorial_sum needs Re(z projected) > 0")
        fs = scale(f, lv, prec) if lv != 1 else f
        d = generalized_coefficients(fs, N + 1, prec)
        w = lv * zdot
        terms = [lv * gamma_ratio(w, 0, mp.mpf(n) / f.m, prec) * d[n - 1]
                 for n in range(1, N + 1)]
        estimate = f.coefficients[0] + mp.fsum(terms, absolute=False)
        mags = [abs(t) for t in terms]
        heuristic = abs(lv * gamma_ratio(w, 0, mp.mpf(N + 1) / f.m, prec) * d[N])
        gross = mp.fsum(mags)
        cond = gross / abs(estimate) if estimate != 0 else mp.inf
        return SummationResult(estimate=ensure_finite(estimate), N=N,
                               method="generalized", heuristic_error=heuristic,
                               condition_number=cond,
                               diverging=_divergence_flag(mags))


def rotated_generalized_sum(f: FormalSeries, theta, lam, z: RamifiedPoint, N: int,
                            envelope: GrowthEnvelope | None = None,
                            prec: PrecisionConfig | None = None) -> SummationResult:
    """Sum in the rotated direction: the generalized series of the rotated
    coefficients, evaluated at z e^(i theta)."""
    z = as_point(z, prec)
    with working_precision(prec):
        th = as_mpf(theta)
        result = generalized_factorial_sum(rotate(f, th, prec), lam,
                                           z.rotated(th), N, envelope, prec)
    return SummationResult(estimate=result.estimate, N=result.N,
                           method="generalized-rotated",
                           rigorous_bound=result.rigorous_bound,
                           heuristic_error=result.heuristic_error,
                           condition_number=result.condition_number,
                           diverging=result.diverging)


def least_term_sum_ramified(f: FormalSeries, r, z: RamifiedPoint,
                            prec: PrecisionConfig | None = None) -> SummationResult:
    """Least-term summation: partial sum to flat index m*n with n = floor(r |z|).

    The practical error estimate is
    max_l |a_{l+mn}| * (sum_{i<m} |z|^(i/m)) / (|z|^n Re(z projected)).
    """
    z = as_point(z, prec)
    n = least_term_index(r, z)
    f.require_depth(f.m * n + f.m)
    with working_precision(prec):
        zdot = z.projection(prec)
        if not mp.re(zdot) > 0:
            raise DomainError("least-term summation needs Re(z projected) > 0")
        estimate = partial_sum(f, z, f.m * n, prec)
        peak = max(abs(f.coefficients[l + f.m * n]) for l in range(1, f.m + 1))
        weights = mp.fsum(mp.power(z.modulus, mp.mpf(i) / f.m) for i in range(f.m))
        heuristic = peak * weights / (mp.power(z.modulus, n) * mp.re(zdot))
        return SummationResult(estimate=ensure_finite(estimate), N=f.m * n,
                               method="least-term", heuristic_error=heuristic)


def r_as_ramified(r, C, B, n: int, z: RamifiedPoint, m: int,
                  prec: PrecisionConfig | None = None) -> mp.mpf:
    """Ramified least-term bound

        C e^(B r) (n!/r^n) (sum_{i=0}^{m-1} |z|^(i/m)) / (|z|^n (Re z. - B)).
    """
    if m < 1:
        raise DomainError("m must be a positive integer")
    z = as_point(z, prec)
    with working_precision(prec):
        rv, Cv, Bv = as_mpf(r), as_mpf(C), as_mpf(B)
        if not (rv > 0 and Cv > 0 and Bv > 0):
            raise DomainError("r_as_ramified needs positive r, C, B")
        zdot = z.projection(prec)
        if not mp.re(zdot) > Bv:
            raise DomainError("r_as_ramified needs Re(z projected) > B")
        weights = mp.fsum(mp.power(z.modulus, mp.mpf(i) / m) for i in range(m))
        return ensure_finite(
            Cv * mp.exp(Bv * rv) * mp.factorial(n) / mp.power(rv, n)
            * weights / (mp.power(z.modulus, n) * (mp.re(zdot) - Bv)))
