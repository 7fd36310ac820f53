"""Simultaneous polynomial root finding (Aberth-Ehrlich iteration).

Works on monic polynomials with complex coefficients at explicit working
precision.  Multiple roots converge linearly but, at 50-digit arithmetic,
still collapse far below the multiplicity clustering radius used downstream.
"""

from __future__ import annotations

from .errors import NonMonic, RootFindingFailure
from .precision import DEFAULT_PRECISION, Precision


def _horner_with_derivative(ctx, coeffs, x):
    """p(x), p'(x) for ascending coefficients."""
    p = ctx.mpc(0)
    dp = ctx.mpc(0)
    for c in reversed(coeffs):
        dp = dp * x + p
        p = p * x + c
    return p, dp


def aberth_roots(
    coeffs,
    prec: Precision = DEFAULT_PRECISION,
    residual_tol: float = 1e-12,
    max_iter: int = 500,
):
    """All complex roots of a monic polynomial (ascending coefficient list).

    Raises ``NonMonic`` unless the leading coefficient equals 1 and
    ``RootFindingFailure`` if residuals stay above ``residual_tol`` times the
    local scale (1 + |root|)^degree.
    """
    ctx = prec.ctx
    cs = [ctx.mpc(c) for c in coeffs]
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    if len(cs) < 2:
        raise NonMonic("polynomial must have degree >= 1")
    if abs(cs[-1] - 1) > ctx.mpf(10) ** (-ctx.dps + 5):
        raise NonMonic(f"leading coefficient {cs[-1]} != 1")
    cs[-1] = ctx.mpc(1)
    d = len(cs) - 1

    radius = 1 + max(abs(c) for c in cs[:-1]) if d > 0 else ctx.mpf(1)
    roots = [
        radius * ctx.exp(ctx.mpc(0, 1) * (2 * ctx.pi * k / d + ctx.mpf("0.4")))
        for k in range(d)
    ]
    step_tol = ctx.mpf(10) ** (-(ctx.dps - 6))
    tiny = ctx.mpf(10) ** (-2 * ctx.dps)
    for _ in range(max_iter):
        max_step = ctx.mpf(0)
        for i in range(d):
            x = roots[i]
            p, dp = _horner_with_derivative(ctx, cs, x)
            if p == 0:
                continue
            if abs(dp) < tiny:
                roots[i] = x + ctx.mpf("1e-3") * radius
                max_step = radius
                continue
            newton = p / dp
            s = ctx.mpc(0)
            for j in range(d):
                if j != i:
                    diff = x - roots[j]
                    if abs(diff) < tiny:
                        diff = ctx.mpf(10) ** (-ctx.dps) * radius
                    s += 1 / diff
            denom = 1 - newton * s
            w = newton if denom == 0 else newton / denom
            roots[i] = x - w
            max_step = max(max_step, abs(w) / (1 + abs(x)))
        if max_step < step_tol:
            break
    else:
        if max_step > ctx.mpf("1e-8"):
            raise RootFindingFailure(f"Aberth iteration stalled, step {max_step}")

    for x in roots:
        p, _ = _horner_with_derivative(ctx, cs, x)
        scale = (1 + abs(x)) ** d
        if abs(p) > ctx.mpf(residual_tol) * scale:
            raise RootFindingFailure(f"residual {abs(p)} at root {x}")
    return roots


def cluster_roots(roots, radius, prec: Precision = DEFAULT_PRECISION):
    """Group roots within ``radius``; returns [(centroid, multiplicity)].

    Greedy transitive clustering: adequate because genuine multiple roots
    collapse to spacing far below ``radius`` at working precision, while
    distinct roots of the test corpus stay far above it.
    """
    ctx = prec.ctx
    radius = ctx.mpf(radius)
    remaining = list(roots)
    clusters = []
    while remaining:
        seed = remaining.pop()
        members = [seed]
        changed = True
        while changed:
            changed = False
            for r in list(remaining):
                if any(abs(r - m) <= radius for m in members):
                    members.append(r)
                    remaining.remove(r)
                    changed = True
        centroid = sum(members, ctx.mpc(0)) / len(members)
        clusters.append((centroid, len(members)))
    return clusters
