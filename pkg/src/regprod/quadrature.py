"""Arbitrary-precision Gauss-Legendre panel quadrature.

Nodes and weights are computed by Newton iteration on the Legendre
three-term recurrence at context precision and cached per (order, dps).
Integrators here are deliberately dumb building blocks; adaptivity (panel
layout, refinement agreement) lives with the callers, which know the
analytic structure of their integrands.
"""

from __future__ import annotations

from .errors import QuadratureNonConvergence
from .precision import Precision

_GL_CACHE: dict[tuple[int, int], tuple[list, list]] = {}


def gauss_legendre(n: int, prec: Precision):
    """Nodes and weights of n-point Gauss-Legendre on [-1, 1]."""
    key = (n, prec.ctx.dps)
    cached = _GL_CACHE.get(key)
    if cached is not None:
        return cached
    ctx = prec.ctx
    nodes = []
    weights = []
    tol = ctx.mpf(10) ** (-ctx.dps + 2)
    for i in range(1, n // 2 + n % 2 + 1):
        # Chebyshev-flavored initial guess, then Newton on P_n
        x = ctx.cos(ctx.pi * (i - ctx.mpf(1) / 4) / (n + ctx.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = ctx.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < tol:
                break
        else:
            raise QuadratureNonConvergence("Legendre node Newton stalled")
        p0, p1 = ctx.mpf(1), x
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1)
        w = 2 / ((1 - x * x) * dp * dp)
        nodes.append(x)
        weights.append(w)
    full_nodes = [-x for x in nodes]
    full_weights = list(weights)
    if n % 2 == 1:
        full_nodes = full_nodes[:-1]
        full_weights = full_weights[:-1]
    full_nodes = full_nodes + list(reversed(nodes))
    full_weights = full_weights + list(reversed(weights))
    out = (full_nodes, full_weights)
    _GL_CACHE[key] = out
    return out


def panel_points(a, b, n: int, prec: Precision):
    """Scaled nodes/weights for one panel [a, b]."""
    ctx = prec.ctx
    a = ctx.mpf(a)
    b = ctx.mpf(b)
    xs, ws = gauss_legendre(n, prec)
    mid = (a + b) / 2
    half = (b - a) / 2
    return [mid + half * x for x in xs], [half * w for w in ws]


def integrate_panel(f, a, b, n: int, prec: Precision):
    """Fixed-order Gauss-Legendre on a single panel."""
    ts, ws = panel_points(a, b, n, prec)
    acc = prec.ctx.mpc(0)
    for t, w in zip(ts, ws):
        acc += w * f(t)
    return acc
