"""Densities of the composite SNR variables behind the sum-rate integrals.

With independent exponential ``gamma_i`` of means ``gbar_i``:

* ``Z = gamma_i gamma_j / (gamma_i + 2 gamma_j)``, the relay-path term,
* ``W = gamma_1 gamma_2 / (gamma_1 + gamma_2)``,
* ``T = gamma_0 (gamma_1 + gamma_2) / (gamma_1 gamma_2) = gamma_0 / W``.

``LemmaParams`` carries two conventions for the constants of the ``T`` and
``W`` densities. ``"derived"`` is the one re-derived here from the MGF route
and is the default. ``"printed"`` keeps the typeset forms (``2/(gbar1
gbar2)`` inside zeta and eta, no ``gbar0**(3+n)`` in xi, ``(gbar1 +
gbar2)/(gbar1 gbar2)`` on the K1 term of the W density) so that the
normalization and sampling checks can show which one is a density.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import roots_legendre

from .exceptions import DomainError, ParameterError
from .special import bessel_k_scaled, gauss_2f1, gauss_2f1_complement

CONVENTIONS = ("derived", "printed")
_GL_NODES, _GL_WEIGHTS = roots_legendre(12)


@dataclass(frozen=True)
class LemmaParams:
    """Hazard-rate parameters ``gbar_i = 2 rho omega_i`` and derived constants."""

    gbar0: float
    gbar1: float
    gbar2: float
    convention: str = "derived"

    def __post_init__(self):
        for name in ("gbar0", "gbar1", "gbar2"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise ParameterError(f"{name} must be finite and positive")
            object.__setattr__(self, name, v)
        if self.convention not in CONVENTIONS:
            raise ParameterError(f"convention must be one of {CONVENTIONS}")

    @classmethod
    def from_channel(cls, omegas, rho, convention="derived"):
        """Params for mean powers ``omegas`` at linear SNR ``rho``."""
        return cls(*(2.0 * rho * w for w in omegas), convention=convention)

    def gbar(self, i):
        return (self.gbar0, self.gbar1, self.gbar2)[i]

    @property
    def lemma_alpha(self):
        return 2.0 * math.sqrt(2.0 / (self.gbar1 * self.gbar2))

    def beta(self, k):
        """``beta_k = 1/gbar_j + 2/gbar_k`` with ``j`` the other relay link."""
        if k not in (1, 2):
            raise ValueError("k must be 1 or 2")
        j = 3 - k
        return 1.0 / self.gbar(j) + 2.0 / self.gbar(k)

    @property
    def beta1(self):
        return self.beta(1)

    @property
    def beta2(self):
        return self.beta(2)

    def a_coef(self, v, k=1):
        """Weights ``A_0 = alpha**2`` and ``A_1 = alpha beta_k`` of f_Z."""
        alpha = self.lemma_alpha
        return alpha * alpha if v == 0 else alpha * self.beta(k)

    @property
    def _cross(self):
        g1, g2 = self.gbar1, self.gbar2
        if self.convention == "printed":
            return 2.0 / (g1 * g2)
        return 2.0 / math.sqrt(g1 * g2)

    @property
    def zeta(self):
        g0, g1, g2 = self.gbar0, self.gbar1, self.gbar2
        return g0 * (1.0 / g1 + 1.0 / g2 + self._cross)

    @property
    def eta(self):
        g0, g1, g2 = self.gbar0, self.gbar1, self.gbar2
        if g1 == g2 and self.convention == "derived":
            return 0.0
        return g0 * (1.0 / g1 + 1.0 / g2 - self._cross)

    @property
    def varpi(self):
        """Weights of the K0 and K1 terms in the T density integral."""
        g0, g1, g2 = self.gbar0, self.gbar1, self.gbar2
        return (4.0 / (g0 * g1 * g2),
                2.0 * (g1 + g2) / (g0 * (g1 * g2) ** 1.5))

    @property
    def xi(self):
        """Coefficients of the two 2F1 terms of the T density (orders 0, 1)."""
        g0, g1, g2 = self.gbar0, self.gbar1, self.gbar2
        out = []
        for n, w in enumerate(self.varpi):
            c = (math.sqrt(math.pi) * (4.0 / math.sqrt(g1 * g2)) ** n
                 * gamma_fn(3 + n) * gamma_fn(3 - n) / gamma_fn(3.5) * w)
            if self.convention == "derived":
                c *= g0 ** (3 + n)
            out.append(c)
        return tuple(out)


def _positive_arg(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError(f"{name} must be positive")
    return x


def _scalar(out):
    return out[()] if np.ndim(out) == 0 else out


def _z_constants(params, ordering):
    i, j = ordering
    if sorted(ordering) != [1, 2]:
        raise ValueError("ordering must be (1, 2) or (2, 1)")
    alpha = 2.0 * math.sqrt(2.0 / (params.gbar(i) * params.gbar(j)))
    beta = 1.0 / params.gbar(j) + 2.0 / params.gbar(i)
    return alpha, beta


def pdf_Z(z, params, ordering=(1, 2)):
    """Density of ``Z = gamma_i gamma_j / (gamma_i + 2 gamma_j)``.

    ``alpha z exp(-beta z) [alpha K0(alpha z) + beta K1(alpha z)]`` with
    ``(i, j) = ordering``.
    """
    z = _positive_arg(z, "z")
    alpha, beta = _z_constants(params, ordering)
    x = alpha * z
    damp = np.exp(-(alpha + beta) * z)
    return _scalar(alpha * z * damp * (alpha * bessel_k_scaled(0, x)
                                       + beta * bessel_k_scaled(1, x)))


def cdf_Z(z, params, ordering=(1, 2)):
    """``1 - alpha z exp(-beta z) K1(alpha z)``; 0 at ``z = 0``."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("z must be non-negative")
    alpha, beta = _z_constants(params, ordering)
    x = alpha * z
    with np.errstate(invalid="ignore"):
        tail = np.where(z > 0, x * np.exp(-(alpha + beta) * z)
                        * bessel_k_scaled(1, np.where(z > 0, x, 1.0)), 1.0)
    return _scalar(1.0 - tail)


def mgf_inverse_gamma(s, gbar, scale=1):
    """``E[exp(-s * scale / gamma)]`` for exponential ``gamma`` with mean ``gbar``.

    Equals ``x K1(x)`` with ``x = 2 sqrt(scale s / gbar)``.
    """
    if scale not in (1, 2):
        raise ValueError("scale must be 1 or 2")
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("s must be non-negative")
    x = 2.0 * np.sqrt(scale * s / gbar)
    with np.errstate(invalid="ignore"):
        val = np.where(x > 0, x * np.exp(-x) * bessel_k_scaled(1, np.where(x > 0, x, 1.0)), 1.0)
    return _scalar(val)


def _w_constants(params):
    g1, g2 = params.gbar1, params.gbar2
    a = 2.0 / math.sqrt(g1 * g2)
    b = 1.0 / g1 + 1.0 / g2
    return a, b


def pdf_W(w, params):
    """Density of ``W = gamma_1 gamma_2 / (gamma_1 + gamma_2)``."""
    w = _positive_arg(w, "w")
    g1, g2 = params.gbar1, params.gbar2
    a, b = _w_constants(params)
    if params.convention == "derived":
        k1 = (g1 + g2) / math.sqrt(g1 * g2)
    else:
        k1 = (g1 + g2) / (g1 * g2)
    x = a * w
    damp = np.exp(-(a + b) * w)
    return _scalar(2.0 * w / (g1 * g2) * damp
                   * (2.0 * bessel_k_scaled(0, x) + k1 * bessel_k_scaled(1, x)))


def cdf_W(w, params):
    """``1 - a w exp(-b w) K1(a w)`` with ``a = 2/sqrt(g1 g2)``, ``b = 1/g1 + 1/g2``."""
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise DomainError("w must be non-negative")
    a, b = _w_constants(params)
    x = a * w
    with np.errstate(invalid="ignore"):
        tail = np.where(w > 0, x * np.exp(-(a + b) * w)
                        * bessel_k_scaled(1, np.where(w > 0, x, 1.0)), 1.0)
    return _scalar(1.0 - tail)


def pdf_T(t, params):
    """Density of ``T = gamma_0 (gamma_1 + gamma_2) / (gamma_1 gamma_2)``.

    Sum over Bessel orders n = 0, 1 of
    ``xi_n (t + zeta)**(-3-n) 2F1(3+n, n+1/2; 7/2; (t+eta)/(t+zeta))``.
    """
    t = _positive_arg(t, "t")
    zeta, eta = params.zeta, params.eta
    # 1 - arg formed directly; arg itself rounds to 1 for large t.
    comp = (zeta - eta) / (t + zeta)
    near = comp <= 0.5
    total = np.zeros_like(t)
    for n, xi in enumerate(params.xi):
        f = np.empty_like(t)
        f[near] = gauss_2f1_complement(3 + n, n + 0.5, 3.5, comp[near])
        f[~near] = gauss_2f1(3 + n, n + 0.5, 3.5, 1.0 - comp[~near])
        total = total + xi * (t + zeta) ** (-3 - n) * f
    return _scalar(total)


def cdf_from_pdf(pdf, x, scale=1.0):
    """CDF at ``x`` by integrating ``pdf`` from 0.

    The query points are merged with the geometric grid ``scale * 2**k``
    (|k| <= 60) and every gap is integrated with 12-point Gauss-Legendre in
    ``log x``; the pieces are accumulated in order. Mass below
    ``scale * 2**-60`` is taken from one linear panel.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("x must be non-negative")
    flat = x.ravel()
    pos = flat[flat > 0]
    out = np.zeros_like(flat)
    if pos.size:
        grid = scale * 2.0 ** np.arange(-60, 61)
        grid = grid[grid < pos.max()]
        knots = np.unique(np.concatenate([grid, pos]))
        # Linear panel from zero to the first knot.
        half = 0.5 * knots[0]
        head = half * (pdf(half + half * _GL_NODES) @ _GL_WEIGHTS)
        llo, lhi = np.log(knots[:-1]), np.log(knots[1:])
        mid, hw = 0.5 * (llo + lhi), 0.5 * (lhi - llo)
        y = np.exp(mid[:, None] + hw[:, None] * _GL_NODES[None, :])
        pieces = hw * ((pdf(y.ravel()).reshape(y.shape) * y) @ _GL_WEIGHTS)
        cum = np.concatenate([[head], head + np.cumsum(pieces)])
        out[flat > 0] = cum[np.searchsorted(knots, pos)]
    return _scalar(np.minimum(out.reshape(x.shape), 1.0))


def cdf_T(t, params):
    """CDF of ``T`` obtained by integrating :func:`pdf_T`."""
    return cdf_from_pdf(lambda u: pdf_T(u, params), t, params.zeta)


def sample_Z(rng, params, size, ordering=(1, 2)):
    """Draw ``Z`` directly from exponential ``gamma_i``, ``gamma_j``."""
    i, j = ordering
    gi = rng.exponential(params.gbar(i), size)
    gj = rng.exponential(params.gbar(j), size)
    return gi * gj / (gi + 2.0 * gj)


def sample_W(rng, params, size):
    g1 = rng.exponential(params.gbar1, size)
    g2 = rng.exponential(params.gbar2, size)
    return g1 * g2 / (g1 + g2)


def sample_T(rng, params, size):
    g0 = rng.exponential(params.gbar0, size)
    return g0 / sample_W(rng, params, size)
