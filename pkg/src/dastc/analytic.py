"""High-SNR average sum rate: closed forms and quadrature oracles.

At high SNR the average two-way sum rate is approximately

    Rsum = 2 / (3 ln 2) * (I1 + I2 + 2 I3)

with ``I1 = E[ln Z12]``, ``I2 = E[ln Z21]`` (``Zij = gi gj / (gi + 2 gj)``)
and ``I3 = E[ln(1 + T)]``. Every integral has a quadrature oracle valid for
any parameters. ``I1``/``I2`` also have a bivariate Fox-H closed form, and
``I3`` a Meijer-G closed form for symmetric relay links.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import ScenarioConfig
from .distributions import LemmaParams, pdf_T, pdf_Z
from .exceptions import RegionError
from .quadrature import integrate_log_axis, integrate_semi_infinite
from .special import BivariateFoxHSpec, FoxHSpec, bessel_k_scaled, bivariate_fox_h, meijer_g

RATE_SCALE = 2.0 / (3.0 * math.log(2.0))
_KERNELS = ("log", "split")
_METHODS = ("closed", "quadrature", "hybrid")


def _ordering(k):
    if k == 1:
        return (1, 2)
    if k == 2:
        return (2, 1)
    raise ValueError("k must be 1 or 2")


def _alpha_beta(params, k):
    return params.lemma_alpha, params.beta(k)


def _split_integrand(params, k):
    # sum_{u=1,2} sum_{v=0,1} A_v ln z/(1+z) z^u e^{-beta z} K_v(alpha z)
    alpha, beta = _alpha_beta(params, k)
    a0, a1 = alpha * alpha, alpha * beta

    def f(z):
        x = alpha * z
        damp = np.exp(-(alpha + beta) * z)
        bessel = a0 * bessel_k_scaled(0, x) + a1 * bessel_k_scaled(1, x)
        return np.log(z) / (1.0 + z) * (z + z * z) * damp * bessel

    return f


def ik_quadrature(params, k, kernel="log", rtol=1e-10):
    """``E[ln Z]`` for ``Z = g_i g_j / (g_i + 2 g_j)`` with ``(i, j)`` set by ``k``.

    ``kernel="log"`` integrates ``ln z`` against the density directly.
    ``kernel="split"`` uses the expanded ``ln z / (1 + z)`` kernel summed over
    ``u = 1, 2``. The two agree because ``z/(1+z) + z**2/(1+z) = z``.
    """
    if kernel not in _KERNELS:
        raise ValueError(f"kernel must be one of {_KERNELS}")
    order = _ordering(k)
    if kernel == "log":
        def f(z):
            return np.log(z) * pdf_Z(z, params, order)
    else:
        f = _split_integrand(params, k)
    return integrate_semi_infinite(f, 1.0 / params.beta(k), rtol=rtol)


def i1_quadrature(params, kernel="log"):
    """Quadrature oracle for ``I1 = E[ln(g1 g2 / (g1 + 2 g2))]``."""
    return ik_quadrature(params, 1, kernel)


def i2_quadrature(params, kernel="log"):
    """Quadrature oracle for ``I2 = E[ln(g1 g2 / (g2 + 2 g1))]``."""
    return ik_quadrature(params, 2, kernel)


def ik_instance(u, v):
    """Bivariate Fox-H instance of the ``(u, v)`` term of the I1/I2 sum.

    The first variable carries the ``ln z / (1 + z)`` kernel as
    ``G^{2,2}_{3,3}``, the second the ``exp(-x) K_v(x)`` factor as
    ``G^{2,0}_{1,2}``, and the joint factor is ``Gamma(1 + u - s - t)``.
    """
    first = FoxHSpec.meijer(2, 2, [0.0, 0.0, 0.5], [0.0, 0.0, 0.5])
    second = FoxHSpec.meijer(2, 0, [0.5], [float(v), -float(v)])
    return BivariateFoxHSpec(1, [(-float(u), 1.0)], [], first, second)


def ik_closed(params, k, rtol=1e-9):
    """Closed form of ``E[ln Z]`` as a sum of four bivariate Fox-H values.

    ``-pi**1.5 * sum_{u,v} A_v p**(-u-1) H_{u,v}(1/p, 2 alpha/p)`` with
    ``p = beta_k - alpha``.

    Raises
    ------
    RegionError
        If ``beta_k - alpha`` is not positive (within rounding); callers
        should fall back to :func:`ik_quadrature`.
    """
    alpha, beta = _alpha_beta(params, k)
    p = beta - alpha
    if not p > 1e-12 * beta:
        raise RegionError(f"closed form needs beta_{k} > alpha (beta={beta:g}, alpha={alpha:g})")
    weights = (alpha * alpha, alpha * beta)
    terms = []
    for u in (1, 2):
        for v in (0, 1):
            h = bivariate_fox_h(ik_instance(u, v), 1.0 / p, 2.0 * alpha / p, rtol=rtol)
            terms.append(weights[v] * p ** (-u - 1) * h)
    return -math.pi ** 1.5 * math.fsum(terms)


def i1_closed(params):
    return ik_closed(params, 1)


def i2_closed(params):
    return ik_closed(params, 2)


def i3_quadrature(params, rtol=1e-10):
    """``E[ln(1 + T)]`` by integrating against the density of ``T``.

    ``T`` has a ``t**-2`` tail, so the integral runs on a log axis.
    """
    return integrate_log_axis(lambda t: np.log1p(t) * pdf_T(t, params),
                              params.zeta, rtol=rtol)


def i3_instance(n):
    """``G^{3,2}_{3,3}(. | 1, 1, 5/2; 2+n, 2-n, 1)`` for Bessel order ``n``."""
    return FoxHSpec.meijer(3, 2, [1.0, 1.0, 2.5], [2.0 + n, 2.0 - n, 1.0])


def i3_from_constants(xi, zeta, rtol=1e-10):
    """Closed form of I3 from the T-density constants (symmetric links).

    ``sum_n kappa_n zeta**(-2-n) G_n(zeta)`` where ``kappa_n`` strips the
    gamma factors that the Meijer-G representation of the 2F1 restores.
    """
    total = []
    for n, x in enumerate(xi):
        kappa = x * math.gamma(3.5) / (math.gamma(3 + n) * math.gamma(3 - n))
        total.append(kappa * zeta ** (-2 - n) * meijer_g(i3_instance(n), zeta, rtol=rtol))
    return math.fsum(total)


def is_symmetric(params):
    return math.isclose(params.gbar1, params.gbar2, rel_tol=1e-12)


def i3_closed(params):
    """Closed form of I3; requires ``gbar1 == gbar2`` (then ``eta = 0``).

    Raises
    ------
    RegionError
        For asymmetric relay links; use :func:`i3_quadrature` instead.
    """
    if not is_symmetric(params):
        raise RegionError("i3_closed needs gbar1 == gbar2; use i3_quadrature")
    return i3_from_constants(params.xi, params.zeta)


@dataclass(frozen=True)
class SumRateBreakdown:
    """Components (nats) and composed sum rate (bits/s/Hz) with provenance.

    ``components`` holds the method used for ``(i1, i2, i3)``; ``method`` is
    ``"closed"`` or ``"quadrature"`` when all agree, else ``"hybrid"``.
    """

    i1: float
    i2: float
    i3: float
    rsum: float
    method: str
    components: tuple = ()

    @classmethod
    def compose(cls, i1, i2, i3, components):
        methods = set(components)
        method = methods.pop() if len(methods) == 1 else "hybrid"
        return cls(i1, i2, i3, compose_rsum(i1, i2, i3), method, tuple(components))


def compose_rsum(i1, i2, i3):
    return RATE_SCALE * (i1 + i2 + 2.0 * i3)


def _params(config, rho):
    if isinstance(config, LemmaParams):
        return config
    if isinstance(config, ScenarioConfig):
        return LemmaParams.from_channel(config.omegas, rho)
    return LemmaParams.from_channel(tuple(config), rho)


def rsum_quadrature(config, rho):
    """All three integrals by quadrature; valid for any positive parameters."""
    p = _params(config, rho)
    return SumRateBreakdown.compose(i1_quadrature(p), i2_quadrature(p), i3_quadrature(p),
                                    ("quadrature",) * 3)


def rsum_closed(config, rho):
    """Closed-form sum rate, with per-component quadrature fallback.

    A component outside its closed-form region is computed by quadrature and
    the breakdown is tagged ``"hybrid"``.
    """
    p = _params(config, rho)
    values, tags = [], []
    for closed, oracle in ((i1_closed, i1_quadrature), (i2_closed, i2_quadrature),
                           (i3_closed, i3_quadrature)):
        try:
            values.append(closed(p))
            tags.append("closed")
        except RegionError:
            values.append(oracle(p))
            tags.append("quadrature")
    return SumRateBreakdown.compose(*values, tags)
