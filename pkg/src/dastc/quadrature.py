"""Quadrature rules for integrals over [0, inf)."""

import math

import numpy as np
from scipy import integrate
from scipy.special import roots_legendre

from .exceptions import ConvergenceError

_MAX_DOUBLINGS = 80


def integrate_semi_infinite(f, scale, rtol=1e-10, tail=1e-12):
    """Integrate ``f`` over ``[0, inf)``.

    ``[0, scale]`` is integrated first, then panels ``[U, 2U]`` are appended
    until a panel contributes less than ``tail`` relative to the running
    total. Each panel uses adaptive Gauss-Kronrod (QUADPACK).

    Raises
    ------
    ConvergenceError
        If the tail has not died out after many doublings.
    """
    kw = dict(epsabs=0.0, epsrel=rtol, limit=400)
    total, _ = integrate.quad(f, 0.0, scale, **kw)
    upper = scale
    previous = total
    for _ in range(_MAX_DOUBLINGS):
        panel, _ = integrate.quad(f, upper, 2 * upper, **kw)
        previous, total = total, total + panel
        upper *= 2
        if abs(panel) <= tail * abs(total) or (total == 0 and panel == 0):
            return total
        if not math.isfinite(total):
            break
    raise ConvergenceError("semi-infinite integral did not converge", (previous, total))


def integrate_log_axis(f, center, lo=-40.0, hi=45.0, panel=1.0, nodes=16, rtol=1e-10):
    """Integrate a vectorized ``f`` over ``(0, inf)`` in the variable ``log t``.

    ``t = center * exp(x)`` for ``x`` in ``[lo, hi]``, split into panels of
    width ``panel`` with Gauss-Legendre nodes. Suited to integrands that
    are smooth in ``log t`` and decay at least like a power at both ends,
    such as heavy-tailed densities. The rule is repeated with twice the
    nodes and the two results must agree to ``rtol``.

    Raises
    ------
    ConvergenceError
        If the two rules disagree.
    """
    edges = np.arange(lo, hi + 0.5 * panel, panel)
    a, b = edges[:-1, None], edges[1:, None]

    def rule(k):
        x, w = roots_legendre(k)
        xs = 0.5 * (a + b) + 0.5 * (b - a) * x[None, :]
        t = center * np.exp(xs)
        vals = f(t.ravel()).reshape(t.shape) * t
        return math.fsum((0.5 * (b - a) * vals * w[None, :]).ravel())

    coarse, fine = rule(nodes), rule(2 * nodes)
    if not abs(fine - coarse) <= rtol * abs(fine) + 1e-300:
        raise ConvergenceError("log-axis quadrature did not converge", (coarse, fine))
    return fine
