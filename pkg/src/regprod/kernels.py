"""Special-function kernels at explicit working precision.

Everything downstream (product engines, continuation oracle, sequence
providers) consumes these primitives:

* ``log_gamma``      principal-branch log Gamma via Stirling's asymptotic
                     series with upward recurrence shift, reflection for
                     Re(z) < 1/2,
* ``digamma``        psi(z), same shift/reflect/asymptotic scheme,
* ``hurwitz_zeta``   Euler-Maclaurin continuation of zeta(s, x), valid for
                     all s != 1, with a term-wise analytically differentiated
                     variant ``hurwitz_zeta_ds`` (never numerical differencing,
                     so it can serve as an independent oracle),
* ``riemann_zeta``   zeta(s, 1),
* ``riemann_xi``     (s-1) pi^(-s/2) Gamma(s/2+1) zeta(s), entire,
* ``bessel_j``       J_nu via ascending series below a precision-scaled cutoff
                     and the Hankel asymptotic expansion beyond.

All functions are pure; complex powers and logarithms are principal
(argument in (-pi, pi], stated once in :mod:`regprod.precision`).

Euler-Maclaurin truncation bound used by ``hurwitz_zeta``: with J correction
terms and the summation cutoff X = x + N chosen so that
2*pi*X >= r * (|s| + 2J + 1), the first omitted term is smaller than
2 * |X|^(1-Re s) * r^(-2J); we fix r = 3 and J = ceil(dps * ln 10 / (2 ln 3)),
which pushes the bound below 10^(-dps) with the guard digits included.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, ceil

from .errors import (
    DomainError,
    PoleAtNonPositiveInteger,
    PoleAtOne,
    PrecisionLoss,
)
from .precision import DEFAULT_PRECISION, Precision, ensure_finite, is_int

# ---------------------------------------------------------------------------
# exact integer-combinatorics helpers
# ---------------------------------------------------------------------------

_BERNOULLI: list[Fraction] = [Fraction(1), Fraction(-1, 2)]


def bernoulli_fraction(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2 convention) as an exact Fraction."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        if m % 2 == 1:
            _BERNOULLI.append(Fraction(0))
            continue
        s = Fraction(0)
        for j in range(m):
            s += comb(m + 1, j) * _BERNOULLI[j]
        _BERNOULLI.append(-s / (m + 1))
    return _BERNOULLI[n]


_HARMONIC: list[Fraction] = [Fraction(0)]


def harmonic_fraction(n: int) -> Fraction:
    """Harmonic number H_n as an exact Fraction, with H_0 = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_HARMONIC) <= n:
        k = len(_HARMONIC)
        _HARMONIC.append(_HARMONIC[k - 1] + Fraction(1, k))
    return _HARMONIC[n]


# ---------------------------------------------------------------------------
# log Gamma / digamma
# ---------------------------------------------------------------------------

def _check_gamma_pole(ctx, z):
    if is_int(ctx, z) and ctx.mpc(z).real < 0.5:
        raise PoleAtNonPositiveInteger(f"Gamma pole at z = {z}")


def _log_sin_pi(ctx, z):
    """log sin(pi z), stable for large |Im z| (principal up to 2 pi i)."""
    z = ctx.mpc(z)
    if z.imag == 0:
        return ctx.log(ctx.sin(ctx.pi * z))
    if z.imag < 0:
        return ctx.conj(_log_sin_pi(ctx, ctx.conj(z)))
    # Im z > 0: sin(pi z) = e^{-i pi z} (1 - e^{2 i pi z}) * i/2
    i = ctx.mpc(0, 1)
    return -i * ctx.pi * z + (i * ctx.pi / 2 - ctx.log(2)) + ctx.log(1 - ctx.exp(2 * i * ctx.pi * z))


def _stirling_threshold(dps: int) -> int:
    # first omitted Stirling term ~ e^{-2 pi |z|}; need <= 10^{-dps}
    return max(12, ceil(0.37 * dps) + 2)


def log_gamma(z, prec: Precision = DEFAULT_PRECISION):
    """Principal-branch log Gamma(z); z must not be a non-positive integer."""
    ctx = prec.ctx
    z = ctx.mpc(z)
    _check_gamma_pole(ctx, z)
    if z.real < 0.5:
        # reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
        return ensure_finite(
            prec,
            ctx.log(ctx.pi) - _log_sin_pi(ctx, z) - log_gamma(1 - z, prec),
            "log_gamma",
        )
    M = _stirling_threshold(ctx.dps)
    shift = ctx.mpc(0)
    w = z
    while abs(w) < M:
        shift += ctx.log(w)
        w += 1
    # Stirling series at w
    acc = (w - ctx.mpf(1) / 2) * ctx.log(w) - w + ctx.log(2 * ctx.pi) / 2
    w2 = w * w
    pw = w  # w^(2j-1)
    eps = ctx.mpf(10) ** (-ctx.dps - 2)
    prev = ctx.inf
    for j in range(1, int(3.2 * M) + 4):
        c = bernoulli_fraction(2 * j)
        term = ctx.mpf(c.numerator) / (c.denominator * (2 * j) * (2 * j - 1)) / pw
        if abs(term) >= prev:
            break  # asymptotic series started diverging
        acc += term
        prev = abs(term)
        if prev <= eps * (abs(acc) + 1):
            break
        pw *= w2
    return ensure_finite(prec, acc - shift, "log_gamma")


def gamma(z, prec: Precision = DEFAULT_PRECISION):
    """Gamma(z) = exp(log_gamma(z))."""
    return prec.ctx.exp(log_gamma(z, prec))


def reciprocal_gamma(z, prec: Precision = DEFAULT_PRECISION):
    """1/Gamma(z), entire: exactly 0 at non-positive integers."""
    ctx = prec.ctx
    z = ctx.mpc(z)
    if is_int(ctx, z) and z.real < 0.5:
        return ctx.mpc(0)
    return ctx.exp(-log_gamma(z, prec))


def digamma(z, prec: Precision = DEFAULT_PRECISION):
    """psi(z) = Gamma'(z)/Gamma(z); z must not be a non-positive integer."""
    ctx = prec.ctx
    z = ctx.mpc(z)
    _check_gamma_pole(ctx, z)
    if z.real < 0.5:
        # psi(z) = psi(1-z) - pi cot(pi z), cot via exponentials for stability
        u = ctx.mpc(z)
        if u.imag == 0:
            cot = ctx.cos(ctx.pi * u) / ctx.sin(ctx.pi * u)
        else:
            if u.imag < 0:
                return ctx.conj(digamma(ctx.conj(u), prec))
            i = ctx.mpc(0, 1)
            e = ctx.exp(2 * i * ctx.pi * u)  # |e| < 1 for Im u > 0
            cot = i * (e + 1) / (e - 1)
        return ensure_finite(prec, digamma(1 - z, prec) - ctx.pi * cot, "digamma")
    M = _stirling_threshold(ctx.dps)
    shift = ctx.mpc(0)
    w = z
    while abs(w) < M:
        shift += 1 / w
        w += 1
    acc = ctx.log(w) - 1 / (2 * w)
    w2 = w * w
    pw = w2
    eps = ctx.mpf(10) ** (-ctx.dps - 2)
    prev = ctx.inf
    for j in range(1, int(3.2 * M) + 4):
        c = bernoulli_fraction(2 * j)
        term = ctx.mpf(c.numerator) / (c.denominator * 2 * j) / pw
        if abs(term) >= prev:
            break
        acc -= term
        prev = abs(term)
        if prev <= eps * (abs(acc) + 1):
            break
        pw *= w2
    return ensure_finite(prec, acc - shift, "digamma")


# ---------------------------------------------------------------------------
# Hurwitz / Riemann zeta via Euler-Maclaurin
# ---------------------------------------------------------------------------

def _hurwitz_em(s, x, prec: Precision, want_ds: bool):
    ctx = prec.ctx
    s = ctx.mpc(s)
    x = ctx.mpc(x)
    if x.real <= 0:
        raise DomainError(f"hurwitz_zeta requires Re(x) > 0, got x = {x}")
    if is_int(ctx, s) and abs(s - 1) < ctx.mpf(10) ** (-ctx.dps + 3):
        raise PoleAtOne("hurwitz zeta has its pole at s = 1")
    d = ctx.dps
    ln3 = 1.0986122886681098
    J = int(ceil(d * 2.302585092994046 / (2 * ln3))) + 2
    X_target = max(
        float(abs(s) + 2 * J + 1) / (2 * 3.141592653589793) * 3.0,
        float(x.real) + 1.0,
    )
    N = max(0, int(ceil(X_target - float(x.real))))
    X = x + N

    val = ctx.mpc(0)
    dval = ctx.mpc(0)
    for k in range(N):
        base = x + k
        p = base ** (-s)
        val += p
        if want_ds:
            dval -= ctx.log(base) * p

    logX = ctx.log(X)
    X1s = X ** (1 - s)
    sm1 = s - 1
    val += X1s / sm1
    if want_ds:
        dval += X1s * (-logX / sm1 - 1 / (sm1 * sm1))
    Xms = X ** (-s)
    val += Xms / 2
    if want_ds:
        dval -= logX * Xms / 2

    # Euler-Maclaurin correction terms, Pochhammer and its s-derivative jointly
    P = s           # (s)_{2j-1} at j = 1
    dP = ctx.mpc(1)
    pw = Xms / X    # X^{-s-2j+1} at j = 1
    X2 = 1 / (X * X)
    eps = ctx.mpf(10) ** (-ctx.dps - 2)
    for j in range(1, J + 1):
        c = _bernoulli_over_factorial(ctx, 2 * j)  # B_{2j}/(2j)!
        term = c * P * pw
        val += term
        size = abs(term)
        if want_ds:
            dterm = c * pw * (dP - P * logX)
            dval += dterm
            size = max(size, abs(dterm))
        if size <= eps * (abs(val) + 1) and j > 3:
            break
        a1 = s + 2 * j - 1
        a2 = s + 2 * j
        dP = dP * a1 * a2 + P * (a1 + a2)
        P = P * a1 * a2
        pw *= X2
    if want_ds:
        return val, dval
    return val, None


_BF_CACHE: dict[tuple[int, int], object] = {}


def _bernoulli_over_factorial(ctx, n: int):
    """B_n / n! at context precision (exact Fraction evaluated once per dps)."""
    key = (ctx.dps, n)
    out = _BF_CACHE.get(key)
    if out is None:
        b = bernoulli_fraction(n)
        denom = b.denominator
        for i in range(2, n + 1):
            denom *= i
        out = ctx.mpf(b.numerator) / denom
        _BF_CACHE[key] = out
    return out


def hurwitz_zeta(s, x, prec: Precision = DEFAULT_PRECISION):
    """zeta(s, x) = sum_{k>=0} (x+k)^(-s), continued to all s != 1 (Re x > 0)."""
    val, _ = _hurwitz_em(s, x, prec, want_ds=False)
    return ensure_finite(prec, val, "hurwitz_zeta")


def hurwitz_zeta_ds(s, x, prec: Precision = DEFAULT_PRECISION):
    """d/ds zeta(s, x), every Euler-Maclaurin term differentiated analytically."""
    _, dval = _hurwitz_em(s, x, prec, want_ds=True)
    return ensure_finite(prec, dval, "hurwitz_zeta_ds")


def riemann_zeta(s, prec: Precision = DEFAULT_PRECISION):
    """zeta(s), valid on the whole plane minus s = 1."""
    return hurwitz_zeta(s, 1, prec)


def riemann_xi(s, prec: Precision = DEFAULT_PRECISION):
    """xi(s) = (s-1) pi^(-s/2) Gamma(s/2 + 1) zeta(s); entire, xi(s) = xi(1-s).

    The (s-1) factor absorbs the zeta pole and s/2+1 keeps Gamma pole-free on
    Re(s) >= 1/2; arguments left of the critical line route through the
    functional equation.
    """
    ctx = prec.ctx
    s = ctx.mpc(s)
    if s.real < 0.5:
        s = 1 - s
    tiny = ctx.mpf(10) ** (-(ctx.dps // 2))
    if abs(s - 1) <= tiny:
        # (s-1) zeta(s) = 1 + euler*(s-1) + O((s-1)^2)
        pole_part = 1 + ctx.euler * (s - 1)
    else:
        pole_part = (s - 1) * riemann_zeta(s, prec)
    out = pole_part * ctx.power(ctx.pi, -s / 2) * ctx.exp(log_gamma(s / 2 + 1, prec))
    return ensure_finite(prec, out, "riemann_xi")


# ---------------------------------------------------------------------------
# Bessel J
# ---------------------------------------------------------------------------

def _bessel_series(nu, z, prec: Precision):
    # guard digits scale with |z| to absorb the alternating-series cancellation
    boost = int(0.9 * float(abs(z))) + 10
    ctx = prec.ctx_plus(boost)
    z = ctx.mpc(z)
    nu = ctx.mpf(nu)
    if z == 0:
        return prec.ctx.mpc(0) if nu > 0 else prec.ctx.mpc(1)
    t = ctx.exp(nu * ctx.log(z / 2) - log_gamma(nu + 1, Precision(ctx.dps - 10, prec.target_tol)))
    acc = t
    q = -z * z / 4
    eps = ctx.mpf(10) ** (-ctx.dps)
    k = 0
    while True:
        k += 1
        t *= q / (k * (k + nu))
        acc += t
        if abs(t) <= eps * (abs(acc) + eps):
            break
        if k > 4 * ctx.dps + int(4 * abs(z)) + 100:
            raise PrecisionLoss("bessel series did not converge")
    return prec.ctx.mpc(acc)


def _bessel_hankel(nu, z, prec: Precision):
    ctx = prec.ctx
    z = ctx.mpc(z)
    nu = ctx.mpf(nu)
    mu = 4 * nu * nu
    omega = z - nu * ctx.pi / 2 - ctx.pi / 4
    t = ctx.mpc(1)
    P = ctx.mpc(1)
    Q = ctx.mpc(0)
    eps = ctx.mpf(10) ** (-ctx.dps - 2)
    prev = ctx.inf
    k = 0
    while True:
        k += 1
        t = t * (mu - (2 * k - 1) ** 2) / (k * 8 * z)
        if abs(t) >= prev:
            if prev > prec.target_tol:
                raise PrecisionLoss(
                    f"Hankel expansion floor {prev} above tolerance at |z|={abs(z)}"
                )
            break
        prev = abs(t)
        if k % 2 == 1:
            Q += t if (k % 4 == 1) else -t
        else:
            P += t if (k % 4 == 0) else -t
        if prev <= eps:
            break
    return ctx.sqrt(2 / (ctx.pi * z)) * (ctx.cos(omega) * P - ctx.sin(omega) * Q)


def bessel_j(nu, z, prec: Precision = DEFAULT_PRECISION):
    """Bessel function of the first kind J_nu(z), real order nu >= -1/2.

    Ascending series below a precision-dependent cutoff (with guard digits for
    the cancellation), Hankel asymptotics beyond; |arg z| must stay away from
    pi for the asymptotic route.
    """
    ctx = prec.ctx
    z = ctx.mpc(z)
    nu_f = float(nu)
    if nu_f < -0.5:
        raise DomainError(f"bessel_j requires nu >= -1/2, got {nu}")
    cutoff = max(30.0, 1.2 * prec.working_digits)
    if abs(z) <= cutoff:
        out = _bessel_series(nu, z, prec)
    else:
        if z.real < 0:
            raise DomainError("asymptotic Bessel route requires Re(z) >= 0")
        out = _bessel_hankel(nu, z, prec)
    return ensure_finite(prec, out, "bessel_j")


def bessel_j_dz(nu, z, prec: Precision = DEFAULT_PRECISION):
    """J_nu'(z) = J_(nu-1)(z) - (nu/z) J_nu(z)."""
    ctx = prec.ctx
    z = ctx.mpc(z)
    if z == 0:
        raise DomainError("bessel_j_dz requires z != 0")
    return bessel_j(float(nu) - 1, z, prec) - (ctx.mpf(nu) / z) * bessel_j(nu, z, prec)
