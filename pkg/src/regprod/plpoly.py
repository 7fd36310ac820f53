"""The combinatorial polynomial family behind the shifted-product expansions.

For shifts z = (z_1, ..., z_n) define

    P_l(s; z) = sum_{a_1+...+a_n = l} binom(-s, a_1)...binom(-s, a_n)
                * (-z_1)^{a_1} ... (-z_n)^{a_n},

equivalently the t^l coefficient of prod_j (1 - z_j t)^{-s}.  Downstream code
only ever consumes the first three Taylor coefficients in s at s = 0 (the
"jet"), because these pair against at-most-simple poles of the sequence zeta
function; higher s-coefficients never contribute.

Three independent evaluation routes are provided:

* ``pell_closed_form``  the closed-form jet,
* ``pell_bruteforce``   exact composition enumeration of degree-2 s-jets,
                        serving as the oracle for the closed form,
* ``pell_at``           exact value at general complex s by enumeration, and
  ``pell_series_at``    the same values through the Newton-style power-sum
                        recurrence l P_l = s sum_r q_r P_{l-r} (O(L^2), used
                        where many consecutive l are needed; cross-checked
                        against ``pell_at`` in the test suite).

All routes run either in exact rational mode (Fraction shifts in, Fraction
jet out) or at explicit working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import CapExceeded, DomainError
from .kernels import harmonic_fraction
from .precision import DEFAULT_PRECISION, Precision

ELL_CAP_DEFAULT = 12
N_CAP_DEFAULT = 8


@dataclass(frozen=True)
class ShiftVector:
    """The n complex shifts z = (z_1, ..., z_n), n >= 1, each finite."""

    z: tuple

    def __init__(self, values):
        vals = tuple(values)
        if len(vals) < 1:
            raise DomainError("ShiftVector needs at least one shift")
        object.__setattr__(self, "z", vals)

    def __len__(self):
        return len(self.z)

    def __iter__(self):
        return iter(self.z)

    def as_mpc(self, prec: Precision):
        ctx = prec.ctx
        out = []
        for v in self.z:
            if isinstance(v, Fraction):
                w = ctx.mpc(ctx.mpf(v.numerator) / v.denominator)
            else:
                w = ctx.mpc(v)
            if ctx.isnan(w) or ctx.isinf(w):
                raise DomainError(f"non-finite shift {v}")
            out.append(w)
        return out


@dataclass(frozen=True)
class PellJet:
    """Coefficients (p0, p1, p2) of s^0, s^1, s^2 in P_l(s; z)."""

    ell: int
    p0: object
    p1: object
    p2: object

    def as_tuple(self):
        return (self.p0, self.p1, self.p2)


def _is_rational_vector(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def _coerce(values, prec: Precision | None):
    vals = list(values.z if isinstance(values, ShiftVector) else values)
    if prec is None and _is_rational_vector(vals):
        return [Fraction(v) for v in vals], True
    p = prec or DEFAULT_PRECISION
    return ShiftVector(vals).as_mpc(p), False


def binom_series_coeffs(ell: int):
    """(c1, c2) with binom(-s, l) = c1 s + c2 s^2 + O(s^3), exact Fractions.

    c1 = (-1)^l / l and c2 = (-1)^l H_{l-1} / l, with H_0 = 0.
    """
    if ell < 1:
        raise DomainError("binom_series_coeffs requires ell >= 1 (jet at 0 is (1,0,0))")
    sign = -1 if ell % 2 else 1
    return Fraction(sign, ell), Fraction(sign) * harmonic_fraction(ell - 1) / ell


def pell_closed_form(ell: int, shifts, prec: Precision | None = None) -> PellJet:
    """Closed-form jet: p1 = sum z^l / l; p2 pairs harmonic and cross terms."""
    if ell < 0:
        raise DomainError("ell must be a non-negative integer")
    zs, rational = _coerce(shifts, prec)
    zero = Fraction(0) if rational else (prec or DEFAULT_PRECISION).ctx.mpc(0)
    one = Fraction(1) if rational else (prec or DEFAULT_PRECISION).ctx.mpc(1)
    if ell == 0:
        return PellJet(0, one, zero, zero)
    if ell == 1:
        return PellJet(1, zero, sum(zs, zero), zero)
    powsum = sum((z ** ell for z in zs), zero)
    h = harmonic_fraction(ell - 1)
    hfac = Fraction(h, ell) if rational else _frac_to_ctx(h / ell, prec)
    p1 = powsum / ell if rational else powsum / ell
    p2 = hfac * powsum
    n = len(zs)
    for j1 in range(n):
        for j2 in range(j1 + 1, n):
            for r in range(1, ell):
                term = zs[j1] ** r * zs[j2] ** (ell - r)
                if rational:
                    p2 += term / Fraction(r * (ell - r))
                else:
                    p2 += term / (r * (ell - r))
    return PellJet(ell, zero, p1, p2)


def _frac_to_ctx(f: Fraction, prec: Precision | None):
    ctx = (prec or DEFAULT_PRECISION).ctx
    return ctx.mpf(f.numerator) / f.denominator


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    """All (a_1, ..., a_parts) of non-negative integers with sum = total."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _jet_mul(a, b):
    """Product of two degree-2 truncated jets."""
    return (
        a[0] * b[0],
        a[0] * b[1] + a[1] * b[0],
        a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
    )


def pell_bruteforce(
    ell: int,
    shifts,
    prec: Precision | None = None,
    ell_cap: int = ELL_CAP_DEFAULT,
    n_cap: int = N_CAP_DEFAULT,
    prune: bool = True,
) -> PellJet:
    """Oracle jet: multiply exact degree-2 s-jets of each binomial factor.

    Enumerates every composition a_1 + ... + a_n = l in lexicographic order.
    A composition with q non-zero parts carries a jet divisible by s^q, so
    with ``prune`` the q >= 3 compositions are skipped; this is exact at the
    s^2 truncation (each factor with a_j >= 1 is divisible by s) and does not
    rely on the closed form under test.
    """
    if ell < 0:
        raise DomainError("ell must be a non-negative integer")
    zs, rational = _coerce(shifts, prec)
    n = len(zs)
    if ell > ell_cap or n > n_cap:
        raise CapExceeded(f"bruteforce capped at ell <= {ell_cap}, n <= {n_cap}")
    zero = Fraction(0) if rational else (prec or DEFAULT_PRECISION).ctx.mpc(0)
    one = Fraction(1) if rational else (prec or DEFAULT_PRECISION).ctx.mpc(1)

    # degree-2 jets of binom(-s, a) (-z_j)^a, indexed [j][a]
    factor_jets = []
    for j in range(n):
        row = [(one, zero, zero)]
        for a in range(1, ell + 1):
            c1, c2 = binom_series_coeffs(a)
            w = (-zs[j]) ** a
            if rational:
                row.append((zero, c1 * w, c2 * w))
            else:
                row.append((zero, _frac_to_ctx(c1, prec) * w, _frac_to_ctx(c2, prec) * w))
        factor_jets.append(row)

    p = [zero, zero, zero]
    for comp in _compositions(ell, n):
        if prune and sum(1 for a in comp if a) >= 3:
            continue
        jet = (one, zero, zero)
        for j, a in enumerate(comp):
            if a:
                jet = _jet_mul(jet, factor_jets[j][a])
        p[0] += jet[0]
        p[1] += jet[1]
        p[2] += jet[2]
    return PellJet(ell, p[0], p[1], p[2])


def pell_at(ell: int, s, shifts, prec: Precision = DEFAULT_PRECISION,
            ell_cap: int = 64, n_cap: int = N_CAP_DEFAULT):
    """P_l(s; z) at general complex s by direct composition enumeration."""
    if ell < 0:
        raise DomainError("ell must be a non-negative integer")
    ctx = prec.ctx
    s = ctx.mpc(s)
    zs, _ = _coerce(shifts, prec)
    n = len(zs)
    if ell > ell_cap or n > n_cap:
        raise CapExceeded(f"pell_at capped at ell <= {ell_cap}, n <= {n_cap}")
    # binom(-s, a) = prod_{i<a} (-s - i) / a!
    binoms = [ctx.mpc(1)]
    num = ctx.mpc(1)
    for a in range(1, ell + 1):
        num *= (-s - (a - 1))
        binoms.append(num / _int_factorial(ctx, a))
    powers = [[ctx.mpc(1)] for _ in range(n)]
    for j in range(n):
        for a in range(1, ell + 1):
            powers[j].append(powers[j][-1] * (-zs[j]))
    acc = ctx.mpc(0)
    for comp in _compositions(ell, n):
        term = ctx.mpc(1)
        for j, a in enumerate(comp):
            if a:
                term *= binoms[a] * powers[j][a]
        acc += term
    return acc


def pell_series_at(s, shifts, L: int, prec: Precision = DEFAULT_PRECISION):
    """[P_0, ..., P_L](s; z) via l P_l = s sum_{r=1..l} q_r P_{l-r}.

    q_r are the shift power sums; this is the log-derivative recurrence of
    prod_j (1 - z_j t)^{-s} and agrees with ``pell_at`` exactly.
    """
    ctx = prec.ctx
    s = ctx.mpc(s)
    zs, _ = _coerce(shifts, prec)
    q = [ctx.mpc(0)] * (L + 1)
    for z in zs:
        pw = ctx.mpc(1)
        for r in range(1, L + 1):
            pw *= z
            q[r] += pw
    P = [ctx.mpc(1)]
    for l in range(1, L + 1):
        acc = ctx.mpc(0)
        for r in range(1, l + 1):
            acc += q[r] * P[l - r]
        P.append(s * acc / l)
    return P


_IFACT_CACHE: dict[tuple[int, int], object] = {}


def _int_factorial(ctx, n: int):
    key = (ctx.dps, n)
    v = _IFACT_CACHE.get(key)
    if v is None:
        acc = 1
        for i in range(2, n + 1):
            acc *= i
        v = ctx.mpf(acc)
        _IFACT_CACHE[key] = v
    return v


def power_sums(shifts, L: int, prec: Precision = DEFAULT_PRECISION):
    """q_r = sum_j z_j^r for r = 0..L (q_0 = n)."""
    ctx = prec.ctx
    zs, _ = _coerce(shifts, prec)
    q = [ctx.mpc(len(zs))] + [ctx.mpc(0)] * L
    for z in zs:
        pw = ctx.mpc(1)
        for r in range(1, L + 1):
            pw *= z
            q[r] += pw
    return q
