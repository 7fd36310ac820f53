"""Closed-form regularized-product engine.

Core identity set implemented here, for a regularizable sequence Lambda with
order mu, m = floor(mu), zeta constants Z = (zeta(0), zeta'(0), residues and
finite parts at l = 1..m), and Weierstrass function Delta:

* single shift:

    log D(z) = -zeta'(0) - sum_{l=1..m} FP(l)/l z^l
               - sum_{l=2..m} res(l) H_{l-1}/l z^l + log Delta(z)

* multi shift, form A (via the Weierstrass sum):

    log D(z_1..z_n) = -n zeta'(0) - sum_j sum_l FP(l)/l z_j^l
        - (1/n) sum_j sum_{l>=2} res(l) H_{l-1}/l z_j^l
        - (1/n) sum_{j1<j2} sum_{l>=2} sum_{r=1}^{l-1}
              res(l) z_{j1}^r z_{j2}^{l-r} / (r (l-r))
        + sum_j log Delta(z_j)

* form B: sum_j log D(z_j) plus the discrepancy exponent.  Both forms are
  evaluated on every multi-shift call and must agree; a mismatch raises
  ``FormMismatch``.

The multiplicative-anomaly discrepancy F (form B's exponent) vanishes
identically for mu < 2.  Summation order is fixed (ascending l, then
ascending index) so results are reproducible bit-for-bit at a given
precision.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import (
    DomainError,
    FormMismatch,
    NonMonic,
    RootOnSequence,
    ShiftOnSequence,
    ZeroScale,
)
from .kernels import harmonic_fraction
from .plpoly import ShiftVector
from .precision import DEFAULT_PRECISION, Precision, ensure_finite
from .roots import aberth_roots, cluster_roots


@dataclass(frozen=True)
class ZetaData:
    """Spectral constants consumed by the product formulas.

    ``poles`` maps l in 1..m to (residue, finite part) of the sequence zeta
    function at l; residue 0 means the function is regular there and the
    finite part is simply its value.
    """

    mu: float
    m: int
    zeta0: object
    zeta_prime0: object
    poles: dict

    def __post_init__(self):
        if self.m != int(self.mu // 1):
            raise DomainError(f"m = {self.m} must equal floor(mu) = {int(self.mu // 1)}")
        for ell in range(1, self.m + 1):
            if ell not in self.poles:
                raise DomainError(f"poles table missing l = {ell}")


@dataclass
class SequenceHandle:
    """A regularizable sequence: constants, Weierstrass log, elements, oracle hooks.

    ``log_delta`` evaluates log Delta(z) (closed form when the provider has
    one, otherwise a truncated product with tail completion).  ``elements``
    yields the first K members in the provider's canonical order; no element
    is zero.  ``zeta_fn``/``zeta_int`` expose the provider's zeta function at
    complex/integer arguments for the continuation oracle; ``theta`` is the
    provider's theta model when the sequence admits one.
    """

    name: str
    prec: Precision
    zeta_data: ZetaData
    log_delta: Callable
    elements_fn: Callable
    theta: object = None
    zeta_fn: Optional[Callable] = None
    zeta_int: Optional[Callable] = None
    zeta_ladder: Optional[Callable] = None
    window: int = 10_000
    on_sequence_tol: float = 1e-9
    _elements_cache: list = field(default_factory=list, repr=False)

    def elements(self, K: int):
        if K > len(self._elements_cache):
            self._elements_cache = list(self.elements_fn(K))
        return self._elements_cache[:K]

    def check_off_sequence(self, shifts, error=ShiftOnSequence):
        """Reject shifts within ``on_sequence_tol`` of a windowed element."""
        ctx = self.prec.ctx
        zs = [ctx.mpc(z) for z in shifts]
        if not zs:
            return
        zmax = max(abs(z) for z in zs)
        probe = min(self.window, 64)
        elems = self.elements(probe)
        while elems and abs(elems[-1]) <= zmax + 1 and probe < self.window:
            probe = min(self.window, probe * 4)
            elems = self.elements(probe)
        if elems and abs(elems[-1]) <= zmax and probe >= self.window:
            warnings.warn(
                f"{self.name}: shift modulus {float(zmax):.3g} beyond the "
                f"truncation window; membership only checked within it",
                stacklevel=3,
            )
        tol = ctx.mpf(self.on_sequence_tol)
        for z in zs:
            for lam in elems:
                if abs(lam) > zmax + 1:
                    break
                if abs(z - lam) <= tol * (1 + abs(lam)):
                    raise error(f"shift {z} lies on sequence element {lam}")


@dataclass(frozen=True)
class RegProdResult:
    """A regularized-product evaluation: value = exp(log_value)."""

    log_value: object
    value: object
    route: str
    err_estimate: float


def _h(ctx, n: int):
    f = harmonic_fraction(n)
    return ctx.mpf(f.numerator) / f.denominator


def _shift_exponent_single(seq: SequenceHandle, z, ctx):
    """- sum_l FP(l)/l z^l - sum_{l>=2} res(l) H_{l-1}/l z^l."""
    zd = seq.zeta_data
    acc = ctx.mpc(0)
    zp = ctx.mpc(1)
    for ell in range(1, zd.m + 1):
        zp = zp * z
        res, fp = zd.poles[ell]
        acc -= ctx.mpc(fp) / ell * zp
        if ell >= 2:
            acc -= ctx.mpc(res) * _h(ctx, ell - 1) / ell * zp
    return acc


def log_D_single(seq: SequenceHandle, z, prec: Precision | None = None):
    """log of the regularized product over (lambda_k - z)."""
    prec = prec or seq.prec
    ctx = prec.ctx
    z = ctx.mpc(z)
    seq.check_off_sequence([z])
    out = -ctx.mpc(seq.zeta_data.zeta_prime0) + _shift_exponent_single(seq, z, ctx)
    out += ctx.mpc(seq.log_delta(z))
    return ensure_finite(prec, out, "log_D_single")


def discrepancy(seq: SequenceHandle, shifts, prec: Precision | None = None):
    """Multiplicative-anomaly exponent F between the joint and split products.

    F = (1 - 1/n) sum_j sum_{l=2..m} res(l) H_{l-1}/l z_j^l
        - (1/n) sum_{j1<j2} sum_{l=2..m} sum_{r=1}^{l-1}
              res(l) z_{j1}^r z_{j2}^{l-r} / (r (l-r))

    Identically zero when m <= 1 and when all shifts coincide.
    """
    prec = prec or seq.prec
    ctx = prec.ctx
    zv = ShiftVector(shifts).as_mpc(prec)
    seq.check_off_sequence(zv)
    n = len(zv)
    zd = seq.zeta_data
    acc = ctx.mpc(0)
    if zd.m < 2:
        return acc
    for ell in range(2, zd.m + 1):
        res = ctx.mpc(zd.poles[ell][0])
        if res == 0:
            continue
        coeff = (1 - ctx.mpf(1) / n) * res * _h(ctx, ell - 1) / ell
        for z in zv:
            acc += coeff * z ** ell
        for j1 in range(n):
            for j2 in range(j1 + 1, n):
                for r in range(1, ell):
                    acc -= (
                        res * zv[j1] ** r * zv[j2] ** (ell - r) / (r * (ell - r) * n)
                    )
    return acc


def log_D_multi(
    seq: SequenceHandle,
    shifts,
    prec: Precision | None = None,
    both_forms: bool = False,
    form_tol: float | None = None,
):
    """log of the regularized product over prod_j (lambda_k - z_j).

    Evaluates the Weierstrass-sum form (A) and the split-product-plus-
    discrepancy form (B); returns A after asserting |A - B| within tolerance.
    """
    prec = prec or seq.prec
    ctx = prec.ctx
    zv = ShiftVector(shifts).as_mpc(prec)
    seq.check_off_sequence(zv)
    n = len(zv)
    zd = seq.zeta_data

    form_a = -n * ctx.mpc(zd.zeta_prime0)
    # ascending l, then ascending shift index: fixed reduction order
    for ell in range(1, zd.m + 1):
        res, fp = zd.poles[ell]
        res = ctx.mpc(res)
        fp = ctx.mpc(fp)
        for z in zv:
            zp = z ** ell
            form_a -= fp / ell * zp
            if ell >= 2:
                form_a -= res * _h(ctx, ell - 1) / (ell * n) * zp
        if ell >= 2 and res != 0:
            for j1 in range(n):
                for j2 in range(j1 + 1, n):
                    for r in range(1, ell):
                        form_a -= (
                            res * zv[j1] ** r * zv[j2] ** (ell - r) / (r * (ell - r) * n)
                        )
    for z in zv:
        form_a += ctx.mpc(seq.log_delta(z))

    form_b = discrepancy(seq, zv, prec)
    for z in zv:
        form_b += log_D_single(seq, z, prec)

    scale = max(ctx.mpf(1), abs(form_a), abs(form_b))
    tol = ctx.mpf(form_tol) if form_tol is not None else 100 * ctx.mpf(prec.target_tol)
    gap = abs(form_a - form_b)
    if gap > tol * scale:
        raise FormMismatch(
            f"product forms disagree by {gap} (tol {tol * scale}) for {seq.name}"
        )
    ensure_finite(prec, form_a, "log_D_multi")
    if both_forms:
        return form_a, form_b
    return form_a


def regprod_multi(seq: SequenceHandle, shifts, prec: Precision | None = None) -> RegProdResult:
    """Regularized product of prod_j (lambda_k - z_j), closed-form route."""
    prec = prec or seq.prec
    ctx = prec.ctx
    a, b = log_D_multi(seq, shifts, prec, both_forms=True)
    value = ctx.exp(a)
    err = float(abs(a - b) + ctx.mpf(10) ** (-prec.working_digits + 5)) * max(
        1.0, float(abs(value))
    )
    return RegProdResult(log_value=a, value=value, route="closed_form", err_estimate=err)


def regprod_monic_polys(
    seq: SequenceHandle,
    polys,
    prec: Precision | None = None,
    cluster_radius: float = 1e-8,
    residual_tol: float = 1e-12,
) -> RegProdResult:
    """Regularized product of prod_j phi_j(lambda_k) for monic polynomials.

    ``polys`` is a list of ascending coefficient lists, each with leading
    coefficient exactly 1.  Roots are found by simultaneous iteration,
    multiplicity is recovered by clustering, and the multi-shift product is
    evaluated over the full root multiset.
    """
    prec = prec or seq.prec
    if not polys:
        raise NonMonic("need at least one polynomial")
    omega = []
    for coeffs in polys:
        roots = aberth_roots(coeffs, prec, residual_tol=residual_tol)
        for center, mult in cluster_roots(roots, cluster_radius, prec):
            omega.extend([center] * mult)
    seq.check_off_sequence(omega, error=RootOnSequence)
    return regprod_multi(seq, omega, prec)


def scale_law(seq: SequenceHandle, a, prec: Precision | None = None) -> RegProdResult:
    """Regularized product of the scaled sequence {a lambda_k}.

    RegProd(a lambda_k) = a^(zeta(0)) exp(-zeta'(0)), principal branch of the
    power.
    """
    prec = prec or seq.prec
    ctx = prec.ctx
    a = ctx.mpc(a)
    if a == 0:
        raise ZeroScale("scale factor must be non-zero")
    zd = seq.zeta_data
    log_value = ctx.mpc(zd.zeta0) * ctx.log(a) - ctx.mpc(zd.zeta_prime0)
    value = ctx.exp(log_value)
    return RegProdResult(
        log_value=log_value,
        value=value,
        route="closed_form",
        err_estimate=float(abs(value)) * 10.0 ** (-prec.working_digits + 5),
    )
