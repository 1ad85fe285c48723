import warnings
from fractions import Fraction

import mpmath as mp
import pytest

from borelsum import (DomainError, FormalSeries, GrowthEnvelope,
                      InsufficientCoefficientsError, PSI_LAMBDA_SUP,
                      PrecisionConfig, RamifiedPoint, branch_sum,
                      euler_series, example2_series, factorial_expansion,
                      factorial_series_sum, generalized_coefficients,
                      generalized_factorial_sum, laplace_quadrature,
                      least_term_sum_ramified, psi_series, r_as,
                      r_as_ramified, rotated_generalized_sum,
                      stirling_transform, working_precision)
from borelsum.oracle import BUILTIN_EVALUATORS


def test_branch_sum_m1_reduces_to_factorial(workprec, prec):
    f = euler_series(30)
    z = RamifiedPoint(4, 0)
    res_b = branch_sum(f, 1, z, 20, prec=prec)
    e = factorial_expansion(f, 1, prec=prec)
    res_f = factorial_series_sum(e, mp.mpf(4), 20, prec=prec)
    assert abs(res_b.estimate - res_f.estimate) < mp.mpf(2) ** -230
    assert abs(res_b.heuristic_error - res_f.heuristic_error) < mp.mpf(2) ** -230


def test_branch_sum_psi_table_rows(workprec, prec):
    # reference rows: N=14 -> 0.26256292301 (error 0.22e-9),
    #                 N=18 -> 0.2625629228800 (error 0.45e-11)
    f = psi_series(70, prec)
    z = RamifiedPoint(12, 0)
    lam = 2 / mp.log(2)
    r14 = branch_sum(f, lam, z, 14, prec=prec)
    assert abs(r14.estimate - mp.mpf("0.26256292301")) < mp.mpf("1e-11")
    assert mp.mpf("0.11e-9") <= r14.heuristic_error <= mp.mpf("0.44e-9")
    r18 = branch_sum(f, lam, z, 18, prec=prec)
    assert abs(r18.estimate - mp.mpf("0.2625629228800")) < mp.mpf("1e-13")


def test_branch_sum_lambda4_row_with_warning(workprec, prec):
    f = psi_series(70, prec)
    z = RamifiedPoint(12, 0)
    env = GrowthEnvelope(A=1, B=1, lam=PSI_LAMBDA_SUP, domain="ramified")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r14 = branch_sum(f, 4, z, 14, envelope=env, prec=prec)
    assert any("exceeds the envelope" in str(w.message) for w in caught)
    assert abs(r14.estimate - mp.mpf("0.262562922891")) < mp.mpf("1e-12")


def test_branch_sum_insufficient_coefficients(workprec):
    f = psi_series(20)
    with pytest.raises(InsufficientCoefficientsError):
        branch_sum(f, 1, RamifiedPoint(12, 0), 10)


def test_generalized_coefficients_low_indices(workprec, prec):
    # n <= m: empty correction sum, d_n = a_n / Gamma(n/m)
    f = psi_series(9, prec)
    d = generalized_coefficients(f, 9, prec)
    for n in (1, 2, 3):
        want = f.coefficients[n] * mp.rgamma(mp.mpf(n) / 3)
        assert abs(d[n - 1] - want) < mp.mpf(2) ** -230


def test_generalized_coefficients_classical_case(workprec):
    # m = 1, series 1/z^2: d_2 = 1, d_n = 1/(n-1) for n >= 3
    f = FormalSeries(1, [0, 0, 1] + [0] * 9)
    d = generalized_coefficients(f)
    assert abs(d[0]) == 0
    assert abs(d[1] - 1) < mp.mpf(2) ** -240
    for n in range(3, 12):
        assert abs(d[n - 1] - mp.mpf(1) / (n - 1)) < mp.mpf(2) ** -235


def _h_power_row(alpha: Fraction, n_max: int) -> list:
    """Exact coefficients [w^i] of h(w)^alpha, h(w) = -ln(1-w)/w.

    Independent Miller power recurrence, used only as a test oracle.
    """
    h = [Fraction(1, k + 1) for k in range(n_max + 1)]
    c = [Fraction(1)] + [Fraction(0)] * n_max
    for n in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if c[n - k]:
                acc += ((alpha + 1) * k - n) * h[k] * c[n - k]
        c[n] = acc / n
    return c


def _kernel_piece_taylor(f, l: int, j_max: int, prec):
    """Taylor coefficients b_j^(l) (in powers of 1-s) of the l-th piece of
    the kernel decomposition of the Borel transform:

        piece_l(s) = h(w)^(l/m-1) sum_k a_{l+mk} (w h(w))^k / Gamma(l/m + k),
        w = 1 - s,

    so that the flat kernel coefficients satisfy d_{l+mj} = b_j^(l).
    """
    m = f.m
    with working_precision(prec):
        rows = [_h_power_row(Fraction(l, m) + k - 1, j_max) for k in range(j_max + 1)]
        out = []
        for j in range(j_max + 1):
            acc = mp.mpc(0)
            for k in range(j + 1):
                flat = l + m * k
                if flat > f.n_max:
                    break
                c = rows[k][j - k]
                if c:
                    acc += (f.coefficients[flat] * mp.rgamma(mp.mpf(l) / m + k)
                            * mp.mpf(c.numerator) / c.denominator)
            out.append(acc)
        return out


def test_kernel_taylor_matches_stirling_for_m1(workprec, prec):
    # at m = 1 the kernel piece is the classical phi, so its Taylor
    # coefficients are exactly the Stirling-transform output
    f = euler_series(14, prec)
    b_stirling = stirling_transform(f.coefficients[1:], prec)
    b_taylor = _kernel_piece_taylor(f, 1, 10, prec)
    for j in range(11):
        assert abs(b_stirling[j] - b_taylor[j]) < mp.mpf(2) ** -200 * max(1, abs(b_taylor[j]))


def test_reindexing_identity_psi(workprec, prec):
    # d_{l+mj} = b_j^(l) with b from the kernel-piece Taylor expansion
    f = psi_series(24, prec)
    d = generalized_coefficients(f, 24, prec)
    for l in (1, 2, 3):
        b = _kernel_piece_taylor(f, l, 7, prec)
        for j in range(8):
            n = l + 3 * j
            if n <= 24:
                assert abs(d[n - 1] - b[j]) < mp.mpf(2) ** -180 * max(1, abs(b[j]))


def test_reindexing_identity_random(workprec, prec):
    # same identity on pseudo-random complex coefficients, m <= 4, depth <= 24
    rng = mp.mpf("0.37")
    for m in (2, 3, 4):
        coeffs = [mp.mpc(mp.sin(rng * (7 * k + m)), mp.cos(rng * (3 * k - 1)))
                  for k in range(25)]
        f = FormalSeries(m, coeffs)
        d = generalized_coefficients(f, 24, prec)
        for l in range(1, m + 1):
            j_max = (24 - l) // m
            b = _kernel_piece_taylor(f, l, j_max, prec)
            for j in range(j_max + 1):
                n = l + m * j
                assert abs(d[n - 1] - b[j]) < mp.mpf(2) ** -180 * max(1, abs(b[j]))


def test_generalized_m1_matches_factorial(workprec, prec):
    f = FormalSeries(1, [0, 0, 1] + [0] * 50)
    z = RamifiedPoint(3, 0)
    res_g = generalized_factorial_sum(f, 1, z, 41, prec=prec)
    e = factorial_expansion(f, 1, prec=prec)
    res_f = factorial_series_sum(e, mp.mpf(3), 40, prec=prec)
    # flat index n = j + 1 shifts the truncation by one
    assert abs(res_g.estimate - res_f.estimate) / abs(res_f.estimate) < mp.mpf("1e-14")


def test_generalized_psi_table_row(workprec, prec):
    # reference: n = 18 (flat N = 54) -> 0.2625629228786
    f = psi_series(56, prec)
    lam = 2 / mp.log(2)
    res = generalized_factorial_sum(f, lam, RamifiedPoint(12, 0), 54, prec=prec)
    assert abs(res.estimate - mp.mpf("0.2625629228786")) < mp.mpf("1e-13")
    assert res.diverging is False


def test_generalized_divergence_detection(workprec, prec):
    # hypothesis violated: estimates drift and the diagnostic flags it
    f = example2_series(110, prec)
    z = RamifiedPoint(5, 0)
    r10 = generalized_factorial_sum(f, 1, z, 10, prec=prec)
    r100 = generalized_factorial_sum(f, 1, z, 100, prec=prec)
    assert abs(r10.estimate - r100.estimate) > mp.mpf("0.07")
    assert r100.diverging is True


def test_pipeline_agreement_psi(workprec, prec):
    # branch and generalized routes agree within 3x the sum of their
    # error estimates at matching information depth (flat = 3N + 3)
    f = psi_series(70, prec)
    z = RamifiedPoint(12, 0)
    with working_precision(prec):
        for lam in (1, 2 / mp.log(2)):
            for N in (10, 14, 18):
                rb = branch_sum(f, lam, z, N, prec=prec)
                rg = generalized_factorial_sum(f, lam, z, 3 * N + 3, prec=prec)
                gap = abs(rb.estimate - rg.estimate)
                assert gap <= 3 * (rb.heuristic_error + rg.heuristic_error)


def test_convergence_monotonicity_psi(workprec, prec):
    f = psi_series(85, prec)
    z = RamifiedPoint(12, 0)
    lam = 2 / mp.log(2)
    e10 = branch_sum(f, lam, z, 10, prec=prec).heuristic_error
    e25 = branch_sum(f, lam, z, 25, prec=prec).heuristic_error
    assert e25 < e10 / 10


def test_rotated_generalized_theta0(workprec, prec):
    f = example2_series(40, prec)
    z = RamifiedPoint(5, 0)
    r0 = rotated_generalized_sum(f, 0, 1, z, 30, prec=prec)
    rg = generalized_factorial_sum(f, 1, z, 30, prec=prec)
    assert abs(r0.estimate - rg.estimate) < mp.mpf(2) ** -220


def test_rotated_generalized_table5_row(workprec, prec):
    f = example2_series(60, prec)
    with working_precision(prec):
        res = rotated_generalized_sum(f, mp.pi / 3, mp.mpf("0.6"),
                                      RamifiedPoint(5, 0), 50, prec=prec)
        assert abs(mp.re(res.estimate) - mp.mpf("0.2356902")) < mp.mpf("1e-7")
        assert abs(mp.im(res.estimate) - mp.mpf("0.50e-5")) < mp.mpf("1e-7")


def test_least_term_psi(workprec, prec):
    f = psi_series(78, prec)
    res = least_term_sum_ramified(f, 2, RamifiedPoint(12, 0), prec=prec)
    assert res.N == 72
    assert abs(res.estimate - mp.mpf("0.26256292290")) < mp.mpf("1e-11")
    assert mp.mpf("0.115e-9") < res.heuristic_error < mp.mpf("0.46e-9")


def test_least_term_m1_euler_within_bound(workprec, prec):
    f = euler_series(20)
    z = RamifiedPoint(10, 0)
    res = least_term_sum_ramified(f, mp.mpf("0.9"), z, prec=prec)
    oracle = laplace_quadrature(BUILTIN_EVALUATORS["euler"], 0, mp.mpf(10), 1e-16, prec)
    A = 1 / (1 - mp.mpf("0.9"))
    assert abs(res.estimate - oracle) <= r_as(mp.mpf("0.9"), A, mp.mpf("0.1"), 9, mp.mpf(10))


def test_least_term_degenerate(workprec):
    f = euler_series(5)
    res = least_term_sum_ramified(f, mp.mpf("0.05"), RamifiedPoint(2, 0))
    assert res.N == 0
    assert abs(res.estimate - f.coefficients[0]) == 0


def test_least_term_insufficient(workprec):
    f = psi_series(30)
    with pytest.raises(InsufficientCoefficientsError):
        least_term_sum_ramified(f, 2, RamifiedPoint(12, 0))


def test_r_as_ramified(workprec):
    z = RamifiedPoint(7, 0)
    # m = 1 reduces to r_as with C = A
    v1 = r_as_ramified(1, 2, 1, 5, z, 1)
    v2 = r_as(1, 2, 1, 5, mp.mpf(7))
    assert abs(v1 - v2) < mp.mpf(2) ** -220 * v1
    # monotone in C
    assert r_as_ramified(1, 3, 1, 5, z, 2) > r_as_ramified(1, 2, 1, 5, z, 2)
    # two-precision agreement of the plug-in value
    a = r_as_ramified(mp.mpf("1.9"), 1, 1, 22, RamifiedPoint(12, 0), 3,
                      PrecisionConfig(128))
    b = r_as_ramified(mp.mpf("1.9"), 1, 1, 22, RamifiedPoint(12, 0), 3,
                      PrecisionConfig(320))
    assert abs(a - b) / b < mp.mpf(2) ** -100
    with pytest.raises(DomainError):
        r_as_ramified(1, 1, 9, 3, z, 3)  # Re z <= B
