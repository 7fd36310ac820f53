"""Explicit precision plumbing on top of mpmath contexts.

Every public operation in this package takes a :class:`Precision` value; there
is no global mutable precision state.  A :class:`Precision` maps to a cached,
immutable-by-convention ``mpmath`` context whose ``dps`` equals
``working_digits`` plus a small number of guard digits.  Contexts are cached
per digit count, so all computations at the same precision share one context
and arithmetic never crosses context boundaries by accident.

Branch convention, stated once for the whole package: every complex logarithm
and power is principal, with argument in (-pi, pi].
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

from mpmath.ctx_mp import MPContext

from .errors import RegprodError

_CTX_CACHE: dict[int, MPContext] = {}

#: extra digits carried internally so that results are honest at working_digits
GUARD_DIGITS = 10


def context_for(dps: int) -> MPContext:
    """Return the shared mpmath context with exactly ``dps`` decimal digits."""
    ctx = _CTX_CACHE.get(dps)
    if ctx is None:
        ctx = MPContext()
        ctx.dps = dps
        ctx.pretty = False
        _CTX_CACHE[dps] = ctx
    return ctx


@dataclass(frozen=True)
class Precision:
    """Working precision and downstream acceptance tolerance.

    ``working_digits`` is the number of significant decimal digits carried by
    all kernel arithmetic; ``target_tol`` is the tolerance downstream
    comparisons are expected to meet.  The invariant
    ``working_digits >= 2 * (-log10 target_tol)`` guarantees enough headroom
    that kernel round-off never masquerades as a comparison failure.
    """

    working_digits: int = 50
    target_tol: float = 1e-12

    def __post_init__(self):
        if self.working_digits < 2:
            raise RegprodError("working_digits must be a positive integer >= 2")
        if not (0.0 < self.target_tol < 1.0):
            raise RegprodError("target_tol must lie in (0, 1)")
        need = 2.0 * (-math.log10(self.target_tol))
        if self.working_digits < need:
            raise RegprodError(
                f"working_digits={self.working_digits} too small for "
                f"target_tol={self.target_tol:g}; need >= {need:.1f}"
            )

    @property
    def ctx(self) -> MPContext:
        """Context at working precision plus guard digits."""
        return context_for(self.working_digits + GUARD_DIGITS)

    def ctx_plus(self, extra: int) -> MPContext:
        """Context with ``extra`` additional guard digits (cancellation-heavy steps)."""
        return context_for(self.working_digits + GUARD_DIGITS + max(0, extra))

    @property
    def eps(self):
        """10**(-working_digits), as an mpf of this precision."""
        return self.ctx.mpf(10) ** (-self.working_digits)


DEFAULT_PRECISION = Precision()


def to_complex(prec: Precision, value):
    """Coerce ``value`` (int/float/complex/str/mpf/mpc) to this precision's mpc."""
    return prec.ctx.mpc(value)


def to_real(prec: Precision, value):
    """Coerce a real ``value`` to this precision's mpf."""
    return prec.ctx.mpf(value)


def ensure_finite(prec: Precision, value, what: str = "result"):
    """Reject NaN/Inf escaping a public operation (overflow is an error)."""
    ctx = prec.ctx
    if ctx.isnan(value) or ctx.isinf(value):
        raise RegprodError(f"non-finite {what}: {value}")
    return value


def is_int(ctx, x, tol=None) -> bool:
    """True if real/complex ``x`` is within ``tol`` of an integer on the real axis."""
    x = ctx.mpc(x)
    if tol is None:
        tol = ctx.mpf(10) ** (-ctx.dps + 3)
    if abs(x.imag) > tol:
        return False
    return abs(x.real - ctx.nint(x.real)) <= tol
