"""Numerical analytic continuation of sequence zeta functions.

This module is the independent oracle that cross-validates the closed forms
in :mod:`regprod.regcore`.  Two pillars:

1. Theta-based Mellin continuation.  For theta(t) = sum_k exp(-t lambda_k)
   with small-t expansion theta ~ sum_n c_n t^{i_n} (i_0 = -mu < 0),

       zeta(s) = [ int_0^1 (theta - sum' c_n t^{i_n}) t^{s-1} dt
                   + sum' c_n / (s + i_n) + int_1^inf theta t^{s-1} dt ] / Gamma(s)

   where sum' runs over the subtracted low exponents.  Every provider's
   expansion converges on a disk of radius > 1, so the integral over (0, t0]
   is summed term-by-term analytically and quadrature only sees smooth
   integrands on [t0, 1] and the exponential-decay region beyond.  Panels are
   doubled once at construction and must agree to 10^(-working_digits+8).

2. The multi-shift continuation: with the head/tail split at |lambda| = |z_1|
   (max-modulus shift; boundary ties join the head),

       zeta(s; z) = sum_{|lam| <= |z1|} lam^{-ns} (prod_j (1 - z_j/lam)^{-s}
                                                   - sum_{l<=m} P_l(s;z)/lam^l)
                  + [same summand over |lam| > |z1|]
                  + sum_{l=0..m} P_l(s;z) zeta(ns + l),

   the far part of the middle sum being collapsed through the higher-order
   coefficients: sum_{|lam|>R1} ... = sum_{l=m+1..L} P_l(s;z)
   [zeta(ns+l) - sum_{|lam|<=R1} lam^{-ns-l}], with the O(lam^{-Re(ns)-m-1})
   remainder bounded geometrically from the last included term.

``dzeta_multi_shift_at0`` returns both the analytic assembly of the
s-derivative at 0 (jets of P_l paired against the Laurent data of
zeta(ns+l)) and a Richardson-extrapolated central-difference guard; the
analytic route is authoritative, the numeric route is the guard.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, log, log10
from typing import Callable, Optional

from .errors import (
    DomainError,
    ExpansionTooShort,
    QuadratureNonConvergence,
    RouteMismatch,
    TruncationInsufficient,
)
from .kernels import harmonic_fraction, reciprocal_gamma
from .plpoly import ShiftVector, pell_at, pell_closed_form, pell_series_at, power_sums
from .precision import DEFAULT_PRECISION, Precision, ensure_finite
from .quadrature import panel_points
from .regcore import SequenceHandle, ZetaData


def expansion_depth_needed(prec: Precision, series_radius: float, n_sub_slack: int = 12) -> int:
    """Expansion terms a provider must supply for this precision and radius."""
    return (
        int(ceil((prec.working_digits + 12) * log(10) / log(series_radius)))
        + n_sub_slack
    )


@dataclass
class ThetaModel:
    """theta(t) = sum_k e^{-t lambda_k} plus its small-t expansion data.

    ``expansion`` lists (i_n, c_n) with strictly increasing real exponents and
    i_0 = -mu < 0.  ``series_radius`` is the convergence radius of the
    expansion around t = 0 (must exceed 1 here; true for all providers);
    ``decay`` is the exponential decay rate of theta at +infinity.
    """

    theta: Callable
    expansion: list
    series_radius: float
    decay: float
    _eval_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.expansion:
            raise ExpansionTooShort("empty theta expansion")
        exps = [float(i) for i, _ in self.expansion]
        if exps[0] >= 0:
            raise DomainError(f"leading exponent i_0 = {exps[0]} must be negative")
        for a, b in zip(exps, exps[1:]):
            if b <= a:
                raise DomainError("expansion exponents must be strictly increasing")
        if self.series_radius <= 1.05:
            raise DomainError("theta expansion must converge on a disk of radius > 1.05")
        if self.decay <= 0:
            raise DomainError("theta must decay exponentially at +inf")

    @property
    def n_terms(self) -> int:
        return len(self.expansion)

    @property
    def mu(self) -> float:
        return -float(self.expansion[0][0])

    def coeff_at(self, exponent, ctx):
        """c_n for i_n == exponent (matched within 1e-9), else 0."""
        for i_n, c_n in self.expansion:
            if abs(float(i_n) - float(exponent)) < 1e-9:
                return ctx.mpc(c_n)
        return ctx.mpc(0)

    def evaluator(self, prec: Precision) -> "MellinEvaluator":
        ev = self._eval_cache.get(prec.ctx.dps)
        if ev is None:
            ev = MellinEvaluator(self, prec)
            self._eval_cache[prec.ctx.dps] = ev
        return ev


class MellinEvaluator:
    """Cached split-representation evaluator for one ThetaModel and precision.

    Nodes, weights and theta values are frozen at construction after a
    panel-doubling refinement check, so a ``bracket`` call costs one complex
    power per visited node, and a ``bracket_ladder`` call shares that power
    across every integer offset.
    """

    GL_ORDER = 20
    MIN_RE_S = -2.0
    SUB_CUT = 5.0      # exponents i_n <= SUB_CUT become explicit pole terms
    LEVEL_WIDTH = 4.0  # large-t level width, subdivided into `split` panels

    def __init__(self, tm: ThetaModel, prec: Precision):
        self.tm = tm
        self.prec = prec
        ctx = prec.ctx
        self.ctx = ctx
        self.eps_target = ctx.mpf(10) ** (-prec.working_digits + 8)
        self._zeta_int_cache: dict = {}

        self.pole_terms = [
            (ctx.mpf(i), ctx.mpc(c)) for i, c in tm.expansion if float(i) <= self.SUB_CUT
        ]
        self.n_sub = len(self.pole_terms)

        radius = float(tm.series_radius)
        self.t0 = ctx.mpf(1) if radius > 2.2 else ctx.mpf(radius) / ctx.mpf("2.2")
        needed = expansion_depth_needed(prec, radius, self.n_sub + 4)
        if tm.n_terms < needed:
            raise ExpansionTooShort(
                f"need {needed} expansion terms at {prec.working_digits} digits, "
                f"have {tm.n_terms}"
            )
        self.series_terms = [
            (ctx.mpf(i), ctx.mpc(c)) for i, c in tm.expansion[self.n_sub:]
        ]

        self._split = 2
        self._small_nodes: list = []
        self._large_levels: list = []
        self._large_edge = ctx.mpf(1)
        self._build_small()
        check = self._probe_values()
        self._split = 4
        self._small_nodes = []
        self._large_levels = []
        self._large_edge = ctx.mpf(1)
        self._build_small()
        fine = self._probe_values()
        for v1, v2 in zip(check, fine):
            if abs(v1 - v2) > 10 * self.eps_target * (1 + abs(v2)):
                raise QuadratureNonConvergence(
                    f"panel doubling moved bracket by {abs(v1 - v2)}"
                )

    # -- construction ----------------------------------------------------------

    def _theta_subtracted(self, t):
        """F(t) = theta(t) - sum of pole-term monomials, series route inside."""
        ctx = self.ctx
        if float(t) < 0.9 * self.tm.series_radius:
            acc = ctx.mpc(0)
            for i_n, c_n in self.series_terms:
                acc += c_n * t ** i_n
            return acc
        acc = ctx.mpc(self.tm.theta(t))
        for i_n, c_n in self.pole_terms:
            acc -= c_n * t ** i_n
        return acc

    def _build_small(self):
        if self.t0 >= 1:
            return
        edges = [self.t0]
        while edges[-1] < 1:
            edges.append(min(self.ctx.mpf(1), edges[-1] * 2))
        for a, b in zip(edges, edges[1:]):
            for k in range(self._split):
                lo = a + (b - a) * k / self._split
                hi = a + (b - a) * (k + 1) / self._split
                ts, ws = panel_points(lo, hi, self.GL_ORDER, self.prec)
                for t, w in zip(ts, ws):
                    self._small_nodes.append((t, w, self._theta_subtracted(t)))

    def _extend_large(self, upto):
        ctx = self.ctx
        while self._large_edge < upto:
            a = self._large_edge
            b = a + ctx.mpf(self.LEVEL_WIDTH)
            level = []
            for k in range(self._split):
                lo = a + (b - a) * k / self._split
                hi = a + (b - a) * (k + 1) / self._split
                ts, ws = panel_points(lo, hi, self.GL_ORDER, self.prec)
                for t, w in zip(ts, ws):
                    level.append((t, w, ctx.mpc(self.tm.theta(t))))
            self._large_levels.append((a, level))
            self._large_edge = b

    def _probe_values(self):
        probes = [self.ctx.mpc("0.31"), self.ctx.mpc(self.tm.mu + 1.7),
                  self.ctx.mpc("-0.9", "0.4")]
        return [self.bracket(p) for p in probes]

    # -- evaluation --------------------------------------------------------------

    def _pole_sum(self, s, omit_exponent):
        ctx = self.ctx
        acc = ctx.mpc(0)
        for i_n, c_n in self.pole_terms:
            if omit_exponent is not None and abs(float(i_n) - float(omit_exponent)) < 1e-9:
                continue
            den = s + i_n
            if abs(den) < ctx.mpf(10) ** (-self.prec.working_digits + 2):
                raise DomainError(f"zeta pole at s = {-i_n}")
            acc += c_n / den
        return acc

    def bracket(self, s, omit_exponent=None):
        """Gamma(s) * zeta(s) via the split representation.

        ``omit_exponent`` drops the single pole term with that exponent, for
        finite-part extraction at the corresponding pole.
        """
        return self.bracket_ladder(s, 0, omit_exponents={0: omit_exponent})[0]

    def bracket_ladder(self, s_base, L: int, omit_exponents: dict | None = None):
        """[bracket(s_base + l) for l = 0..L] in one sweep over the nodes.

        Each node contributes w * theta_part * t^(s_base-1) * t^l; the power
        is computed once per node and the t^l ladder is plain multiplication.
        """
        ctx = self.ctx
        s0 = ctx.mpc(s_base)
        omit = omit_exponents or {}
        out = [ctx.mpc(0)] * (L + 1)
        for ell in range(L + 1):
            out[ell] += self._pole_sum(s0 + ell, omit.get(ell))
            if self.t0 >= 1:
                for i_n, c_n in self.series_terms:
                    out[ell] += c_n / (s0 + ell + i_n)
            else:
                t0s = self.t0 ** (s0 + ell)
                for i_n, c_n in self.series_terms:
                    out[ell] += c_n * t0s * self.t0 ** i_n / (s0 + ell + i_n)
        for t, w, F in self._small_nodes:
            base = w * F * t ** (s0 - 1)
            for ell in range(L + 1):
                out[ell] += base
                base *= t

        re_max = float(s0.real) + L
        peak = max(2.0, (re_max - 1.0) / self.tm.decay)
        self._extend_large(peak + 8)
        calm = 0
        idx = 0
        norm = ctx.mpf(1)
        while True:
            if idx >= len(self._large_levels):
                self._extend_large(self._large_edge + 4 * self.LEVEL_WIDTH)
            a, level = self._large_levels[idx]
            top = ctx.mpf(0)
            for t, w, th in level:
                base = w * th * t ** (s0 - 1)
                for ell in range(L + 1):
                    out[ell] += base
                    if abs(base) > top:
                        top = abs(base)
                    base *= t
            idx += 1
            norm = max(norm, abs(out[L]))
            if float(a) > peak:
                calm = calm + 1 if top <= self.eps_target * norm else 0
                if calm >= 2:
                    break
            if idx > 4000:
                raise QuadratureNonConvergence("large-t panel walk did not terminate")
        return out

    def zeta_int(self, ell: int):
        """Memoized zeta at integer argument ell (must be off the pole set)."""
        v = self._zeta_int_cache.get(ell)
        if v is None:
            v = zeta_via_mellin(self.tm, ell, self.prec)
            self._zeta_int_cache[ell] = v
        return v


def zeta_via_mellin(tm: ThetaModel, s, prec: Precision = DEFAULT_PRECISION):
    """zeta_Lambda(s) from the theta model's split Mellin representation."""
    ctx = prec.ctx
    s = ctx.mpc(s)
    ev = tm.evaluator(prec)
    tol = ctx.mpf(10) ** (-prec.working_digits + 2)
    if abs(s.imag) < tol and s.real < tol:
        p = int(ctx.nint(-s.real))
        if abs(s.real + p) < tol:
            # s = -p: the 1/Gamma zero meets the bracket pole term at exponent p;
            # the limit is (-1)^p p! c_p
            c = tm.coeff_at(p, ctx)
            fact = ctx.mpf(1)
            for i in range(2, p + 1):
                fact *= i
            sign = -1 if p % 2 else 1
            return ensure_finite(prec, sign * fact * c, "zeta_via_mellin")
    out = ev.bracket(s) * reciprocal_gamma(s, prec)
    return ensure_finite(prec, out, "zeta_via_mellin")


def zeta_data_via_mellin(tm: ThetaModel, m: int, prec: Precision = DEFAULT_PRECISION) -> ZetaData:
    """Spectral constants from the split representation.

    zeta(0) = c_0; zeta'(0) = A_0 + euler c_0 with A_0 the bracket's finite
    part at 0 (from 1/Gamma(s) = s + euler s^2 + O(s^3)).  Residues come from
    the expansion coefficients, res zeta(l) = c_{-l}/(l-1)!.  Finite parts
    pair the regularized bracket with the local 1/Gamma expansion:
    FP zeta(l) = A_l/(l-1)! - res zeta(l) psi(l), psi(l) = H_{l-1} - euler.
    """
    ctx = prec.ctx
    ev = tm.evaluator(prec)
    mu = tm.mu
    if m != int(mu):
        raise DomainError(f"m = {m} must equal floor(mu) = {int(mu)}")
    if float(tm.expansion[-1][0]) < m + 1:
        raise ExpansionTooShort("expansion must reach past l = m")
    c0 = tm.coeff_at(0, ctx)
    A0 = ev.bracket(0, omit_exponent=0)
    zeta_prime0 = A0 + ctx.euler * c0
    poles = {}
    fact = ctx.mpf(1)
    for ell in range(1, m + 1):
        if ell > 1:
            fact *= ell - 1
        res = tm.coeff_at(-ell, ctx) / fact
        A_ell = ev.bracket(ell, omit_exponent=-ell)
        h = harmonic_fraction(ell - 1)
        psi_ell = ctx.mpf(h.numerator) / h.denominator - ctx.euler
        poles[ell] = (res, A_ell / fact - res * psi_ell)
    return ZetaData(mu=mu, m=m, zeta0=c0, zeta_prime0=zeta_prime0, poles=poles)


# ---------------------------------------------------------------------------
# multi-shift continuation
# ---------------------------------------------------------------------------

def _plan_truncation(seq: SequenceHandle, zs, prec: Precision):
    """Direct-summation radius R1 and tail expansion depth L."""
    ctx = prec.ctx
    zmax = max(abs(z) for z in zs) if zs else ctx.mpf(0)
    elems = seq.elements(2)
    lam_scale = abs(elems[0]) if elems else ctx.mpf(1)
    R1 = max(ctx.mpf("3.2") * (zmax + ctx.mpf("0.25")), 2 * lam_scale)
    q = float(zmax / R1) if zmax > 0 else 0.1
    q = max(q, 0.02)
    target_digits = min(prec.working_digits - 4, int(-log10(prec.target_tol)) + 8)
    L = seq.zeta_data.m + int(ceil(target_digits * log(10) / -log(q))) + 2
    if L > 80:
        raise TruncationInsufficient(
            f"tail depth {L} infeasible (shift/element-radius ratio {q:.3f})"
        )
    return R1, L, q


def _elements_upto(seq: SequenceHandle, R1):
    K = 64
    elems = seq.elements(K)
    while elems and abs(elems[-1]) <= R1:
        if K >= seq.window:
            raise TruncationInsufficient(
                f"window {seq.window} too small to cover |lambda| <= {float(R1):.3g}"
            )
        K = min(seq.window, K * 4)
        elems = seq.elements(K)
    return [lam for lam in elems if abs(lam) <= R1]


def _zeta_ladder(seq: SequenceHandle, s_base, L: int, prec: Precision):
    """[zeta(s_base + l) for l = 0..L] via the provider's fastest route."""
    if seq.zeta_ladder is not None:
        return seq.zeta_ladder(s_base, L)
    if seq.zeta_fn is None:
        raise DomainError(
            f"provider {seq.name} exposes no complex-argument zeta; "
            "the multi-shift continuation is unavailable"
        )
    return [seq.zeta_fn(s_base + ell) for ell in range(L + 1)]


def zeta_multi_shift(
    seq: SequenceHandle,
    s,
    shifts,
    prec: Precision | None = None,
    head_radius=None,
):
    """zeta(s; z) = sum_k prod_j (lambda_k - z_j)^{-s}, continued past the strip.

    Valid for Re(s) > (mu - m - 1)/n; every z_j off the sequence.
    ``head_radius`` overrides the head/tail boundary modulus (default
    max_j |z_j|; boundary ties belong to the head); the value is independent
    of this choice, which the test suite exercises.
    """
    val, _ = _zeta_multi_shift_err(seq, s, shifts, prec or seq.prec, head_radius)
    return val


def _zeta_multi_shift_err(seq, s, shifts, prec, head_radius=None):
    ctx = prec.ctx
    s = ctx.mpc(s)
    zv = ShiftVector(shifts).as_mpc(prec)
    n = len(zv)
    zd = seq.zeta_data
    strip_edge = (zd.mu - zd.m - 1) / n
    if float(s.real) <= strip_edge:
        raise DomainError(f"Re(s) must exceed {strip_edge}")
    seq.check_off_sequence(zv)

    zmax = max(abs(z) for z in zv)
    hr = ctx.mpf(head_radius) if head_radius is not None else zmax
    R1, L, qratio = _plan_truncation(seq, zv, prec)
    R1 = max(R1, 2 * hr)
    elems = _elements_upto(seq, R1)

    m = zd.m
    ns = n * s
    P = pell_series_at(s, zv, L, prec)
    # low orders re-derived by direct composition enumeration; both routes are
    # exact so any gap is an upstream bug
    for ell in range(0, m + 1):
        direct = pell_at(ell, s, zv, prec)
        if abs(direct - P[ell]) > ctx.mpf(10) ** (-prec.working_digits) * (1 + abs(direct)):
            raise RouteMismatch(f"P_{ell} recurrence/enumeration mismatch")

    acc = ctx.mpc(0)
    partials = [ctx.mpc(0)] * (L + 1)
    for lam in elems:
        lam_ns = lam ** (-ns)
        prod = ctx.mpc(1)
        for z in zv:
            prod *= (1 - z / lam) ** (-s)
        sub = ctx.mpc(0)
        lam_pow = ctx.mpc(1)
        for ell in range(0, m + 1):
            sub += P[ell] * lam_pow
            lam_pow /= lam
        acc += lam_ns * (prod - sub)
        pw = lam_ns * lam ** (-(m + 1))
        for ell in range(m + 1, L + 1):
            partials[ell] += pw
            pw /= lam
    zetas = _zeta_ladder(seq, ns, L, prec)
    for ell in range(0, m + 1):
        acc += P[ell] * ctx.mpc(zetas[ell])
    last = ctx.mpf(0)
    for ell in range(m + 1, L + 1):
        term = P[ell] * (ctx.mpc(zetas[ell]) - partials[ell])
        acc += term
        last = abs(term)
    err = last * qratio / (1 - qratio)
    return ensure_finite(prec, acc, "zeta_multi_shift"), err


def weierstrass_log_sum(seq: SequenceHandle, shifts, prec: Precision | None = None,
                        r1_scale: float = 1.0):
    """sum_j log Delta(z_j) as a truncated element sum with collapsed far tail.

    Direct summand per element: sum_j [log(1 - z_j/lam) + sum_{l<=m} z_j^l/(l lam^l)];
    past |lam| = R1 the summand equals -sum_{l>m} q_l/(l lam^l) with
    q_l = sum_j z_j^l, so the far tail collapses against provider integer
    zeta values.  Returns (value, error_bound).  ``r1_scale`` inflates the
    direct-summation window for refinement-agreement checks.
    """
    prec = prec or seq.prec
    ctx = prec.ctx
    zv = ShiftVector(shifts).as_mpc(prec)
    m = seq.zeta_data.m
    if seq.zeta_int is None:
        raise DomainError(f"provider {seq.name} has no integer zeta values")
    R1, L, qratio = _plan_truncation(seq, zv, prec)
    R1 = R1 * ctx.mpf(r1_scale)
    qratio = min(qratio, float(max(abs(z) for z in zv) / R1) if any(abs(z) > 0 for z in zv) else qratio)
    elems = _elements_upto(seq, R1)
    q = power_sums(zv, L, prec)

    wsum = ctx.mpc(0)
    partials = [ctx.mpc(0)] * (L + 1)
    for lam in elems:
        inv = 1 / lam
        for z in zv:
            u = z * inv
            wsum += ctx.log(1 - u)
            upow = u
            for ell in range(1, m + 1):
                wsum += upow / ell
                upow *= u
        pw = inv ** (m + 1)
        for ell in range(m + 1, L + 1):
            partials[ell] += pw
            pw *= inv
    last = ctx.mpf(0)
    for ell in range(m + 1, L + 1):
        term = -(q[ell] / ell) * (ctx.mpc(seq.zeta_int(ell)) - partials[ell])
        wsum += term
        last = abs(term)
    err = float(last * qratio / (1 - qratio)
                + ctx.mpf(10) ** (-prec.working_digits + 8))
    return wsum, err


@dataclass(frozen=True)
class DzetaResult:
    """Both routes for -d/ds zeta(0; z): analytic assembly and numeric guard."""

    analytic: object
    numeric: Optional[object]
    err_analytic: float
    err_numeric: Optional[float]

    @property
    def value(self):
        return self.analytic


def dzeta_multi_shift_at0(
    seq: SequenceHandle,
    shifts,
    prec: Precision | None = None,
    numeric_guard: bool = True,
    h: float = 1e-3,
) -> DzetaResult:
    """-d/ds zeta(0; z) by two routes.

    Analytic: the truncated Weierstrass log-sum
    sum_k [sum_j log(1 - z_j/lam_k) + sum_j sum_{l<=m} z_j^l/(l lam_k^l)]
    (far tail collapsed against provider integer zeta values) minus the jet
    pairing n zeta'(0) + sum_l p1_l FP(l) + (1/n) sum_{l>=2} p2_l res(l).

    Numeric: Richardson-extrapolated central differences of the multi-shift
    continuation at s = 0, steps h, h/2, h/4 (skipped when the provider has
    no complex-argument zeta).  Disagreement beyond the combined error budget
    raises ``RouteMismatch``; the analytic value is authoritative.
    """
    prec = prec or seq.prec
    ctx = prec.ctx
    zv = ShiftVector(shifts).as_mpc(prec)
    n = len(zv)
    zd = seq.zeta_data
    m = zd.m
    seq.check_off_sequence(zv)

    wsum, err_a = weierstrass_log_sum(seq, zv, prec)

    const = n * ctx.mpc(zd.zeta_prime0)
    for ell in range(1, m + 1):
        jet = pell_closed_form(ell, zv, prec)
        res, fp = zd.poles[ell]
        const += jet.p1 * ctx.mpc(fp)
        if ell >= 2:
            const += jet.p2 * ctx.mpc(res) / n
    analytic = wsum - const

    numeric = None
    err_b = None
    if numeric_guard and (seq.zeta_fn is not None or seq.zeta_ladder is not None):
        hs = ctx.mpf(h)
        diffs = []
        for step in (hs, hs / 2, hs / 4):
            fp_, e1 = _zeta_multi_shift_err(seq, step, zv, prec)
            fm_, e2 = _zeta_multi_shift_err(seq, -step, zv, prec)
            diffs.append(((fp_ - fm_) / (2 * step), (e1 + e2) / (2 * step)))
        r1a = (4 * diffs[1][0] - diffs[0][0]) / 3
        r1b = (4 * diffs[2][0] - diffs[1][0]) / 3
        r2 = (16 * r1b - r1a) / 15
        numeric = -r2
        err_b = float(abs(r2 - r1b) + diffs[2][1]
                      + ctx.mpf(10) ** (-prec.working_digits + 10) / hs)
        budget = 10 * (err_a + err_b) + 100 * prec.target_tol * float(
            max(1, abs(analytic))
        )
        if abs(analytic - numeric) > budget:
            raise RouteMismatch(
                f"analytic {analytic} vs numeric {numeric} beyond budget {budget}"
            )
    ensure_finite(prec, analytic, "dzeta_multi_shift_at0")
    return DzetaResult(analytic=analytic, numeric=numeric,
                       err_analytic=err_a, err_numeric=err_b)
