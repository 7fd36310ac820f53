"""Kernel tests: frozen oracle values, identities, and error contracts.

Expected values tagged as derived are computed here by independent brute-force
oracles (direct summation with Euler-Maclaurin tail bounds, classical series)
before being compared against the kernels.
"""

import random

import pytest

from regprod.errors import DomainError, PoleAtNonPositiveInteger, PoleAtOne
from regprod.precision import Precision
from regprod import kernels as K

PREC = Precision(50, 1e-12)
CTX = PREC.ctx


def mpf(x):
    return CTX.mpf(x)


def mpc(re, im=0):
    return CTX.mpc(re, im)


def assert_close(a, b, tol, msg=""):
    a = CTX.mpc(a)
    b = CTX.mpc(b)
    scale = max(abs(a), abs(b), CTX.mpf(1))
    assert abs(a - b) <= tol * scale, f"{msg}: |{a} - {b}| = {abs(a - b)}"


# -- independent oracles -----------------------------------------------------

def euler_gamma_oracle(N=10**4):
    """gamma = lim (H_N - ln N), brute-force partial sum plus E-M tail."""
    h = CTX.mpf(0)
    for k in range(1, N + 1):
        h += CTX.mpf(1) / k
    n = CTX.mpf(N)
    return h - CTX.log(n) - 1 / (2 * n) + 1 / (12 * n**2) - 1 / (120 * n**4) + 1 / (252 * n**6)


def digamma_half_series_oracle(K_cut=10**5):
    """psi(1/2) = -gamma + sum_k (1/(k+1) - 1/(k+1/2)), midpoint-rule tail."""
    acc = CTX.mpf(0)
    for k in range(K_cut + 1):
        acc += CTX.mpf(1) / (k + 1) - CTX.mpf(1) / (k + CTX.mpf(1) / 2)
    a = CTX.mpf(K_cut) + CTX.mpf(1) / 2  # midpoint rule: sum_{k>K} f(k) ~ int_{K+1/2} f
    tail = -CTX.log((a + 1) / (a + CTX.mpf(1) / 2))
    return -euler_gamma_oracle() + acc + tail


def zeta2_direct_oracle(K_cut=10**4):
    """zeta(2) by direct summation with an Euler-Maclaurin tail bound."""
    acc = CTX.mpf(0)
    for k in range(1, K_cut + 1):
        acc += CTX.mpf(1) / (CTX.mpf(k) ** 2)
    n = CTX.mpf(K_cut)
    # sum_{k>K} k^-2 = 1/K - 1/(2K^2) + 1/(6K^3) - 1/(30 K^5) + O(K^-7)
    tail = 1 / n - 1 / (2 * n**2) + 1 / (6 * n**3) - 1 / (30 * n**5)
    return acc + tail


# -- log_gamma / digamma -----------------------------------------------------

def test_log_gamma_trivial_values():
    assert_close(K.log_gamma(1, PREC), 0, mpf("1e-48"), "Gamma(1)=1")
    assert_close(K.log_gamma(mpf("0.5"), PREC), CTX.log(CTX.pi) / 2, mpf("1e-48"), "Gamma(1/2)")
    assert_close(K.log_gamma(4, PREC), CTX.log(6), mpf("1e-48"), "Gamma(4)=6")


def test_log_gamma_poles():
    for bad in (0, -1, -7):
        with pytest.raises(PoleAtNonPositiveInteger):
            K.log_gamma(bad, PREC)


def test_log_gamma_reflection_mod_2pi():
    rng = random.Random(101)
    two_pi = 2 * CTX.pi
    for _ in range(100):
        z = mpc(rng.uniform(-8, 8) + rng.random() * 1e-2 + 1e-3, rng.uniform(-8, 8))
        lhs = K.log_gamma(z, PREC) + K.log_gamma(1 - z, PREC) - (
            CTX.log(CTX.pi) - K._log_sin_pi(CTX, z)
        )
        # residue must be an integer multiple of 2 pi i
        ratio = lhs / (CTX.mpc(0, 1) * two_pi)
        assert abs(ratio.real - CTX.nint(ratio.real)) < mpf("1e-40")
        assert abs(ratio.imag) < mpf("1e-40")


def test_log_gamma_recurrence():
    rng = random.Random(202)
    for _ in range(20):
        z = mpc(rng.uniform(0.2, 6), rng.uniform(-5, 5))
        lhs = K.log_gamma(z + 1, PREC)
        rhs = K.log_gamma(z, PREC) + CTX.log(z)
        assert_close(lhs, rhs, mpf("1e-45"), "Gamma recurrence")


def test_digamma_at_one_vs_bruteforce_limit():
    gamma_ref = euler_gamma_oracle()
    assert_close(K.digamma(1, PREC), -gamma_ref, mpf("1e-25"), "psi(1) = -gamma")


def test_digamma_recurrence_and_half():
    assert_close(K.digamma(2, PREC), 1 + K.digamma(1, PREC), mpf("1e-45"))
    ref = digamma_half_series_oracle()
    assert_close(K.digamma(mpf("0.5"), PREC), ref, mpf("1e-12"), "psi(1/2) series oracle")
    assert_close(
        K.digamma(mpf("0.5"), PREC),
        -2 * CTX.log(2) + K.digamma(1, PREC),
        mpf("1e-45"),
        "duplication identity",
    )


def test_digamma_reflection_region():
    # left half-plane routed through the cotangent reflection
    z = mpc("-2.3", "1.7")
    lhs = K.digamma(1 - z, PREC) - K.digamma(z, PREC)
    i = CTX.mpc(0, 1)
    e = CTX.exp(2 * i * CTX.pi * z)
    cot = i * (e + 1) / (e - 1) if z.imag > 0 else None
    rhs = CTX.pi * cot
    assert_close(lhs, rhs, mpf("1e-45"), "psi reflection")


# -- Hurwitz / Riemann zeta --------------------------------------------------

def test_hurwitz_at_zero_linear_in_x():
    rng = random.Random(303)
    for _ in range(10):
        x = mpf(rng.uniform(0.05, 7.0))
        assert_close(K.hurwitz_zeta(0, x, PREC), CTX.mpf(1) / 2 - x, mpf("1e-45"))
    assert_close(K.riemann_zeta(0, PREC), mpf("-0.5"), mpf("1e-45"))


def test_zeta_two_against_direct_summation():
    ref = zeta2_direct_oracle()
    assert_close(K.riemann_zeta(2, PREC), ref, mpf("1e-25"))
    assert_close(K.riemann_zeta(2, PREC), CTX.pi**2 / 6, mpf("1e-45"))
    assert_close(K.hurwitz_zeta(2, 1, PREC), ref, mpf("1e-25"))


def test_zeta_negative_one():
    assert_close(K.riemann_zeta(-1, PREC), CTX.mpf(-1) / 12, mpf("1e-45"))


def test_zeta_pole_raises():
    with pytest.raises(PoleAtOne):
        K.riemann_zeta(1, PREC)
    with pytest.raises(PoleAtOne):
        K.hurwitz_zeta_ds(1, 2, PREC)
    with pytest.raises(DomainError):
        K.hurwitz_zeta(2, -3, PREC)


def test_hurwitz_forward_shift_identity():
    rng = random.Random(404)
    for _ in range(20):
        s = mpc(rng.uniform(-6, 6), rng.uniform(-6, 6))
        if abs(s - 1) < 0.1:
            s += 1
        x = mpf(rng.uniform(0.1, 5))
        lhs = K.hurwitz_zeta(s, x, PREC) - K.hurwitz_zeta(s, x + 1, PREC)
        assert_close(lhs, x ** (-s), mpf("1e-40"), f"shift identity s={s}")


def test_lerch_formula_derivative_at_zero():
    # d/ds zeta(s,1) at 0 equals ln(1/sqrt(2 pi))
    val = K.hurwitz_zeta_ds(0, 1, PREC)
    assert_close(val, -CTX.log(2 * CTX.pi) / 2, mpf("1e-45"))
    # general x: d/ds zeta(0, x) = log Gamma(x) - (1/2) log(2 pi)
    rng = random.Random(505)
    for _ in range(6):
        x = mpf(rng.uniform(0.2, 6))
        assert_close(
            K.hurwitz_zeta_ds(0, x, PREC),
            K.log_gamma(x, PREC) - CTX.log(2 * CTX.pi) / 2,
            mpf("1e-43"),
        )


def test_hurwitz_ds_matches_richardson_differences():
    rng = random.Random(606)
    h = mpf("1e-5")
    for _ in range(12):
        s = mpc(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if abs(s - 1) < 0.2:
            s += 2
        x = mpf(rng.uniform(0.3, 4))
        d1 = (K.hurwitz_zeta(s + h, x, PREC) - K.hurwitz_zeta(s - h, x, PREC)) / (2 * h)
        d2 = (K.hurwitz_zeta(s + h / 2, x, PREC) - K.hurwitz_zeta(s - h / 2, x, PREC)) / h
        richardson = (4 * d2 - d1) / 3
        ana = K.hurwitz_zeta_ds(s, x, PREC)
        assert abs(ana - richardson) <= mpf("1e-10") * max(1, abs(ana))


# -- Riemann xi --------------------------------------------------------------

def test_xi_special_values():
    assert_close(K.riemann_xi(1, PREC), mpf("0.5"), mpf("1e-45"))
    assert_close(K.riemann_xi(0, PREC), mpf("0.5"), mpf("1e-45"))


def test_xi_functional_equation():
    rng = random.Random(707)
    for _ in range(50):
        s = mpc(rng.uniform(-20, 20), rng.uniform(-20, 20))
        a = K.riemann_xi(s, PREC)
        b = K.riemann_xi(1 - s, PREC)
        assert abs(a - b) <= mpf("1e-10") * max(abs(a), abs(b), mpf(1e-30))


def test_xi_near_first_zero_is_small():
    val = K.riemann_xi(mpc("0.5", "14.134725141734693"), PREC)
    assert abs(val) < mpf("1e-8")


# -- Bessel J ----------------------------------------------------------------

def test_bessel_half_order_closed_form():
    # J_{1/2}(z) = sqrt(2/(pi z)) sin z
    for zf in [0.25, 1.0, 3.141592653589793, 1.5707963267948966, 7.5, 20.0, 35.0, 50.0]:
        z = mpf(zf)
        ref = CTX.sqrt(2 / (CTX.pi * z)) * CTX.sin(z)
        got = K.bessel_j(0.5, z, PREC)
        assert abs(got - ref) <= mpf("1e-12") * max(1, abs(ref)), f"z={zf}"


def test_bessel_trivial_values():
    assert abs(K.bessel_j(0.5, CTX.pi, PREC)) < mpf("1e-40")
    assert_close(K.bessel_j(0.5, CTX.pi / 2, PREC), 2 / CTX.pi, mpf("1e-40"))


def test_bessel_series_asymptotic_crossover():
    # both routes must agree in an overlap window
    for nu in (0.5, 1.0, 2.7):
        for zf in (40.0, 55.0):
            z = mpf(zf)
            a = K._bessel_series(nu, z, PREC)
            b = K._bessel_hankel(nu, z, PREC)
            assert abs(a - b) <= mpf("1e-30") * max(abs(a), abs(b), mpf("1e-10")), (nu, zf)


def test_bessel_derivative_recurrence():
    z = mpf("3.7")
    d = K.bessel_j_dz(1.0, z, PREC)
    h = mpf("1e-8")
    fd = (K.bessel_j(1.0, z + h, PREC) - K.bessel_j(1.0, z - h, PREC)) / (2 * h)
    assert abs(d - fd) <= mpf("1e-13")


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        K.bessel_j(-0.75, 1.0, PREC)
    with pytest.raises(DomainError):
        K.bessel_j_dz(0.5, 0, PREC)
