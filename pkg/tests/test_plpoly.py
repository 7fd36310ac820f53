"""Shift-polynomial jets: closed form vs exact enumeration oracle."""

import random
from fractions import Fraction

import pytest

from regprod.errors import CapExceeded, DomainError
from regprod.precision import Precision
from regprod import plpoly as P

PREC = Precision(50, 1e-12)
CTX = PREC.ctx


def rand_rational(rng, span=4):
    return Fraction(rng.randint(-span * 6, span * 6), rng.randint(1, 6))


def rand_complex(rng, span=2.0):
    return CTX.mpc(rng.uniform(-span, span), rng.uniform(-span, span))


def test_binom_series_coeffs_small():
    assert P.binom_series_coeffs(1) == (Fraction(-1), Fraction(0))
    assert P.binom_series_coeffs(2) == (Fraction(1, 2), Fraction(1, 2))
    assert P.binom_series_coeffs(3) == (Fraction(-1, 3), Fraction(-1, 2))
    with pytest.raises(DomainError):
        P.binom_series_coeffs(0)


def test_binom_series_coeffs_vs_symbolic_expansion():
    # expand prod_{i<l} (-s - i) / l! as an exact polynomial in s
    for ell in range(1, 9):
        poly = [Fraction(1)]  # constant 1
        for i in range(ell):
            # multiply by (-s - i): coefficients shift
            new = [Fraction(0)] * (len(poly) + 1)
            for d, c in enumerate(poly):
                new[d] += c * Fraction(-i)
                new[d + 1] += -c
            poly = new
        fact = Fraction(1)
        for i in range(2, ell + 1):
            fact *= i
        poly = [c / fact for c in poly]
        c1, c2 = P.binom_series_coeffs(ell)
        assert poly[0] == 0
        assert poly[1] == c1
        assert (poly[2] if len(poly) > 2 else Fraction(0)) == c2


def test_jet_invariants_and_trivial_cases():
    jet0 = P.pell_closed_form(0, [Fraction(3), Fraction(-2)])
    assert jet0.as_tuple() == (1, 0, 0)
    z = [Fraction(1, 2), Fraction(-1, 3), Fraction(5)]
    jet1 = P.pell_closed_form(1, z)
    assert jet1.p0 == 0 and jet1.p2 == 0
    assert jet1.p1 == sum(z)
    jet2 = P.pell_closed_form(2, [Fraction(2), Fraction(3)])
    # p1 = (z1^2 + z2^2)/2, p2 = (z1^2+z2^2)/2 + z1 z2
    assert jet2.p1 == Fraction(13, 2)
    assert jet2.p2 == Fraction(13, 2) + 6


def test_bruteforce_example_ell3_ones():
    jet = P.pell_bruteforce(3, [Fraction(1), Fraction(1), Fraction(1)])
    assert jet.p0 == 0
    assert jet.p1 == 1
    assert jet.p2 == Fraction(9, 2)
    closed = P.pell_closed_form(3, [Fraction(1), Fraction(1), Fraction(1)])
    assert closed.as_tuple() == jet.as_tuple()


def test_closed_form_equals_bruteforce_exact_rational():
    rng = random.Random(42)
    for _ in range(60):
        n = rng.randint(1, 5)
        ell = rng.randint(0, 8)
        z = [rand_rational(rng) for _ in range(n)]
        a = P.pell_closed_form(ell, z)
        b = P.pell_bruteforce(ell, z)
        assert a.as_tuple() == b.as_tuple(), (ell, z)


def test_closed_form_equals_bruteforce_float_and_unpruned():
    rng = random.Random(43)
    for _ in range(25):
        n = rng.randint(1, 4)
        ell = rng.randint(0, 7)
        z = [rand_complex(rng) for _ in range(n)]
        a = P.pell_closed_form(ell, z, PREC)
        b = P.pell_bruteforce(ell, z, PREC)
        c = P.pell_bruteforce(ell, z, PREC, prune=False)
        for x, y in zip(a.as_tuple(), b.as_tuple()):
            assert abs(x - y) <= CTX.mpf("1e-40") * (1 + abs(x))
        for x, y in zip(b.as_tuple(), c.as_tuple()):
            assert abs(x - y) <= CTX.mpf("1e-40") * (1 + abs(x))


def test_permutation_symmetry():
    rng = random.Random(44)
    z = [rand_complex(rng) for _ in range(4)]
    perm = [z[2], z[0], z[3], z[1]]
    for ell in (2, 3, 5):
        a = P.pell_closed_form(ell, z, PREC)
        b = P.pell_closed_form(ell, perm, PREC)
        assert abs(a.p1 - b.p1) < CTX.mpf("1e-40")
        assert abs(a.p2 - b.p2) < CTX.mpf("1e-40")


def test_scaling_property():
    rng = random.Random(45)
    z = [rand_complex(rng) for _ in range(3)]
    c = CTX.mpc("1.3", "-0.7")
    for ell in (1, 2, 4, 6):
        base = P.pell_closed_form(ell, z, PREC)
        scaled = P.pell_closed_form(ell, [c * w for w in z], PREC)
        f = c ** ell
        assert abs(scaled.p1 - f * base.p1) <= CTX.mpf("1e-38") * (1 + abs(f * base.p1))
        assert abs(scaled.p2 - f * base.p2) <= CTX.mpf("1e-38") * (1 + abs(f * base.p2))


def test_pell_at_integer_s_elementary_symmetric():
    # at s = -1, binom(1, a) collapses: P_l(-1; z) = (-1)^l e_l(z)
    rng = random.Random(46)
    z = [rand_complex(rng) for _ in range(4)]
    e = [CTX.mpc(1)]
    for w in z:  # build elementary symmetric polynomials incrementally
        new = [CTX.mpc(1)] + [CTX.mpc(0)] * len(e)
        for d in range(1, len(e) + 1):
            new[d] = e[d] if d < len(e) else CTX.mpc(0)
            new[d] += e[d - 1] * w
        e = new
    for ell in range(0, 5):
        got = P.pell_at(ell, -1, z, PREC)
        want = ((-1) ** ell) * e[ell]
        assert abs(got - want) <= CTX.mpf("1e-40") * (1 + abs(want))


def test_pell_at_jet_consistency():
    rng = random.Random(47)
    z = [rand_complex(rng) for _ in range(3)]
    jet = P.pell_closed_form(5, z, PREC)
    s = CTX.mpf("1e-6")
    approx = jet.p0 + jet.p1 * s + jet.p2 * s * s
    exact = P.pell_at(5, s, z, PREC)
    assert abs(exact - approx) < CTX.mpf("1e-16")  # O(s^3) gap


def test_pell_series_matches_enumeration():
    rng = random.Random(48)
    z = [rand_complex(rng) for _ in range(3)]
    s = CTX.mpc("0.37", "-0.21")
    series = P.pell_series_at(s, z, 9, PREC)
    for ell in range(10):
        direct = P.pell_at(ell, s, z, PREC)
        assert abs(series[ell] - direct) <= CTX.mpf("1e-38") * (1 + abs(direct)), ell


def test_caps():
    with pytest.raises(CapExceeded):
        P.pell_bruteforce(13, [1.0])
    with pytest.raises(CapExceeded):
        P.pell_bruteforce(3, [0.1] * 9)
