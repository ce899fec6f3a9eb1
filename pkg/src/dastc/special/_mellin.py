"""Meijer-G and Fox-H functions by Mellin-Barnes contour quadrature.

Conventions
-----------
The one-variable Fox H-function is

    H^{m,n}_{p,q}(z) = 1/(2 pi i) * int_L Theta(s) z^{-s} ds,

    Theta(s) = prod_{j<=m} Gamma(b_j + B_j s) prod_{j<=n} Gamma(1 - a_j - A_j s)
               / [prod_{j>m} Gamma(1 - b_j - B_j s) prod_{j>n} Gamma(a_j + A_j s)]

and the Meijer G-function is the case A_j = B_j = 1. ``L`` is a vertical line
Re(s) = c that leaves the poles of the ``b`` gammas on its left and those of
the ``a`` gammas on its right.

Along such a line the integrand is analytic in a strip and decays
exponentially, so the truncated trapezoidal rule converges geometrically in
the node spacing. Both the spacing and the truncation height are refined
until successive estimates agree.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.special import loggamma

from ..exceptions import ConvergenceError, DomainError, ParameterError

_TAIL = 1e-18
_MAX_HEIGHT = 4096.0
_MAX_HALVINGS = 10
_MAX_GRID = 8_000_000


def _pairs(entries, name):
    out = []
    for entry in entries:
        if len(entry) != 2:
            raise ParameterError(f"{name}: expected (value, coefficient) pairs")
        value, coef = float(entry[0]), float(entry[1])
        if not (coef > 0 and math.isfinite(coef) and math.isfinite(value)):
            raise ParameterError(f"{name}: coefficients must be finite and > 0")
        out.append((value, coef))
    return tuple(out)


@dataclass(frozen=True)
class FoxHSpec:
    """Order indices and coefficient pairs of H^{m,n}_{p,q}.

    Parameters
    ----------
    m, n : int
        Number of ``lower`` / ``upper`` pairs whose gammas sit in the
        numerator.
    upper : sequence of (a_j, A_j)
        The p upper pairs.
    lower : sequence of (b_j, B_j)
        The q lower pairs.
    """

    m: int
    n: int
    upper: tuple
    lower: tuple

    def __post_init__(self):
        object.__setattr__(self, "upper", _pairs(self.upper, "upper"))
        object.__setattr__(self, "lower", _pairs(self.lower, "lower"))
        if not (0 <= self.m <= len(self.lower) and 0 <= self.n <= len(self.upper)):
            raise ParameterError("FoxHSpec requires 0 <= m <= q and 0 <= n <= p")

    @classmethod
    def meijer(cls, m, n, a, b):
        """Spec of G^{m,n}_{p,q}(z | a; b), i.e. all coefficients equal to 1."""
        return cls(m, n, [(x, 1.0) for x in a], [(x, 1.0) for x in b])

    @property
    def p(self):
        return len(self.upper)

    @property
    def q(self):
        return len(self.lower)

    @property
    def is_meijer(self):
        return all(c == 1.0 for _, c in self.upper + self.lower)

    def pole_bounds(self):
        """Rightmost left-family pole and leftmost right-family pole."""
        left = max((-b / B for b, B in self.lower[: self.m]), default=-math.inf)
        right = min(((1 - a) / A for a, A in self.upper[: self.n]), default=math.inf)
        return left, right

    def decay_rate(self):
        """Exponential decay rate of |Theta(c + i t)| as |t| grows."""
        up, lo = self.upper, self.lower
        astar = (sum(A for _, A in up[: self.n]) - sum(A for _, A in up[self.n:])
                 + sum(B for _, B in lo[: self.m]) - sum(B for _, B in lo[self.m:]))
        return 0.5 * math.pi * astar

    def log_kernel(self, s):
        """log Theta(s); -inf where a denominator gamma has a pole."""
        s = np.asarray(s, dtype=complex)
        out = np.zeros_like(s)
        for j, (b, B) in enumerate(self.lower):
            if j < self.m:
                out += loggamma(b + B * s)
            else:
                out -= _log_gamma_den(1 - b - B * s)
        for j, (a, A) in enumerate(self.upper):
            if j < self.n:
                out += loggamma(1 - a - A * s)
            else:
                out -= _log_gamma_den(a + A * s)
        return out


def _log_gamma_den(arg):
    # 1/Gamma vanishes at non-positive integers; return +inf there.
    out = loggamma(arg)
    pole = (arg.imag == 0) & (arg.real <= 0) & (arg.real == np.round(arg.real))
    if np.any(pole):
        out = np.where(pole, np.inf, out)
    return out


@dataclass(frozen=True)
class ContourSpec:
    """Vertical integration line and its discretization.

    Parameters
    ----------
    abscissa : float
        Real part of the line.
    height : float
        Truncation height; the line is cut to |Im s| <= height.
    nodes : int
        Number of nodes on [0, height]; the spacing is height / (nodes - 1).
    adaptive : bool
        If True, ``height`` and ``nodes`` are only starting values and both
        are refined until the estimate converges.
    """

    abscissa: float
    height: float = 16.0
    nodes: int = 129
    adaptive: bool = True

    def __post_init__(self):
        if not (self.height > 0 and math.isfinite(self.height)):
            raise ParameterError("contour height must be positive")
        if not self.nodes >= 2:
            raise ParameterError("contour needs at least two nodes")

    @property
    def step(self):
        return self.height / (self.nodes - 1)

    def check_separates(self, spec):
        """Raise ParameterError unless the line separates ``spec``'s poles."""
        left, right = spec.pole_bounds()
        if not left < self.abscissa < right:
            raise ParameterError(
                f"abscissa {self.abscissa} does not separate poles ({left}, {right})")

    @classmethod
    def for_spec(cls, spec):
        """Default contour: midpoint of the pole gap, checked for separation."""
        left, right = spec.pole_bounds()
        if not left < right:
            raise ParameterError(
                f"no vertical line separates the pole families ({left} >= {right})")
        if math.isinf(left) and math.isinf(right):
            raise ParameterError("H-function with m = n = 0 has no contour")
        if math.isinf(left):
            c = right - 0.5
        elif math.isinf(right):
            c = left + 0.5
        else:
            c = 0.5 * (left + right)
        dist = min(c - left, right - c)
        rate = spec.decay_rate()
        if not rate > 0:
            raise ParameterError("vertical contour does not converge (a* <= 0)")
        height = max(8.0, 45.0 / rate)
        step = min(0.25, dist / 2)
        return cls(c, height, int(math.ceil(height / step)) + 1, True)


def _trapezoid_half_line(f_vals, step):
    # f(conj s) = conj f(s): integral over the full line is 2 Re of the half.
    return step * (0.5 * f_vals[0] + f_vals[1:].sum()).real


def _estimate_1d(spec, log_z, contour, height, nodes):
    t = np.linspace(0.0, height, nodes)
    s = contour.abscissa + 1j * t
    vals = np.exp(spec.log_kernel(s) - s * log_z)
    step = height / (nodes - 1)
    value = _trapezoid_half_line(vals, step) / math.pi
    l1 = step * np.abs(vals).sum() / math.pi
    return value, l1, np.abs(vals)


def _check_arg(z, name="z"):
    z = float(z)
    if not (z > 0 and math.isfinite(z)):
        raise DomainError(f"{name} must be a finite positive real")
    return z


def fox_h(spec, z, contour=None, rtol=1e-10):
    """Fox H-function H^{m,n}_{p,q}(z) by Mellin-Barnes quadrature.

    Parameters
    ----------
    spec : FoxHSpec
    z : float
        Positive argument.
    contour : ContourSpec, optional
        Integration line; defaults to ``ContourSpec.for_spec(spec)``.
    rtol : float
        Relative tolerance of the adaptive refinement.

    Returns
    -------
    float

    Raises
    ------
    ParameterError
        If the contour cannot separate the pole families.
    ConvergenceError
        If refinement is exhausted; carries the last two estimates.
    """
    z = _check_arg(z)
    if contour is None:
        contour = ContourSpec.for_spec(spec)
    else:
        contour.check_separates(spec)
    log_z = math.log(z)
    height, nodes = contour.height, contour.nodes
    if not contour.adaptive:
        return _estimate_1d(spec, log_z, contour, height, nodes)[0]

    step = contour.step
    while True:
        value, l1, mags = _estimate_1d(spec, log_z, contour, height, nodes)
        peak = mags.max()
        if mags[-1] <= _TAIL * peak:
            break
        if height >= _MAX_HEIGHT:
            raise ConvergenceError("fox_h integrand does not decay along the contour",
                                   (value, value))
        height *= 2
        nodes = int(round(height / step)) + 1
    for _ in range(_MAX_HALVINGS):
        nodes = 2 * nodes - 1
        new, l1, _ = _estimate_1d(spec, log_z, contour, height, nodes)
        if abs(new - value) <= rtol * abs(new) + 64 * np.finfo(float).eps * l1:
            return new
        value = new
    raise ConvergenceError("fox_h did not converge", (value, new))


def meijer_g(spec, z, contour=None, rtol=1e-10):
    """Meijer G-function G^{m,n}_{p,q}(z | a; b).

    ``spec`` must have all coefficients equal to 1 (see ``FoxHSpec.meijer``).
    """
    if not spec.is_meijer:
        raise ParameterError("meijer_g needs unit coefficients; use fox_h")
    return fox_h(spec, z, contour=contour, rtol=rtol)


def _joint(entries, name):
    out = []
    for entry in entries:
        if len(entry) == 2:
            entry = (entry[0], entry[1], entry[1])
        if len(entry) != 3:
            raise ParameterError(f"{name}: expected (value, coef) or (value, coef1, coef2)")
        value, c1, c2 = map(float, entry)
        if not (c1 > 0 and c2 > 0 and all(map(math.isfinite, (value, c1, c2)))):
            raise ParameterError(f"{name}: coefficients must be finite and > 0")
        out.append((value, c1, c2))
    return tuple(out)


@dataclass(frozen=True)
class BivariateFoxHSpec:
    """Parameters of the two-variable (generalized) Fox H-function.

    The function is the double Mellin-Barnes integral

        1/(2 pi i)^2 int int Psi(s, t) Theta_1(s) Theta_2(t) z1^{-s} z2^{-t} ds dt

    with ``Theta_1``/``Theta_2`` the one-variable kernels of ``first`` and
    ``second`` and the joint factor

        Psi = prod_{j<=k} Gamma(1 - e_j - E_j s - E'_j t)
              / [prod_{j>k} Gamma(e_j + E_j s + E'_j t)
                 * prod_j Gamma(1 - f_j - F_j s - F'_j t)].

    Joint entries are ``(e, E)`` (same coefficient on both variables) or
    ``(e, E, E')``. In the order notation H^{K,N,N',M,M'}_{E,[A:C],F,[B:D]}:
    K = ``k``, N/N' = ``first.n``/``second.n``, M/M' = ``first.m``/``second.m``,
    E = len(joint_upper), F = len(joint_lower), A/B = ``first.p``/``first.q``,
    C/D = ``second.p``/``second.q``.
    """

    k: int
    joint_upper: tuple
    joint_lower: tuple
    first: FoxHSpec
    second: FoxHSpec

    def __post_init__(self):
        object.__setattr__(self, "joint_upper", _joint(self.joint_upper, "joint_upper"))
        object.__setattr__(self, "joint_lower", _joint(self.joint_lower, "joint_lower"))
        if not 0 <= self.k <= len(self.joint_upper):
            raise ParameterError("BivariateFoxHSpec requires 0 <= k <= E")

    @property
    def orders(self):
        """(K, N, N', M, M')."""
        return (self.k, self.first.n, self.second.n, self.first.m, self.second.m)

    @property
    def group_sizes(self):
        """(E, A, C, F, B, D)."""
        return (len(self.joint_upper), self.first.p, self.second.p,
                len(self.joint_lower), self.first.q, self.second.q)

    def log_joint(self, s, t):
        out = np.zeros(np.broadcast(s, t).shape, dtype=complex)
        for j, (e, E1, E2) in enumerate(self.joint_upper):
            if j < self.k:
                out += loggamma(1 - e - E1 * s - E2 * t)
            else:
                out -= _log_gamma_den(e + E1 * s + E2 * t)
        for f, F1, F2 in self.joint_lower:
            out -= _log_gamma_den(1 - f - F1 * s - F2 * t)
        return out

    def default_contours(self):
        """Pair of contours placed at the Chebyshev centre of the feasible region.

        The feasible abscissae form a polygon: each variable's own pole gap
        plus one half-plane per joint numerator gamma. The centre maximizes
        the horizontal distance to the nearest pole, capped at 1/2.
        """
        rows, rhs = [], []
        bounds = []
        for idx, spec in enumerate((self.first, self.second)):
            left, right = spec.pole_bounds()
            if math.isfinite(left):
                row = [0.0, 0.0, 1.0]
                row[idx] = -1.0
                rows.append(row)
                rhs.append(-left)
            if math.isfinite(right):
                row = [0.0, 0.0, 1.0]
                row[idx] = 1.0
                rows.append(row)
                rhs.append(right)
            lo = left if math.isfinite(left) else (right - 4 if math.isfinite(right) else -4)
            hi = right if math.isfinite(right) else lo + 4
            bounds.append((lo, hi))
        for e, E1, E2 in self.joint_upper[: self.k]:
            rows.append([E1, E2, max(E1, E2)])
            rhs.append(1 - e)
        bounds.append((0.0, 0.5))
        res = optimize.linprog([0.0, 0.0, -1.0], A_ub=rows, b_ub=rhs,
                               bounds=bounds, method="highs")
        if res.status != 0 or res.x[2] <= 1e-9:
            raise ParameterError("no pair of vertical lines separates the poles")
        c1, c2, dist = res.x
        contours = []
        for c, spec in ((c1, self.first), (c2, self.second)):
            rate = max(spec.decay_rate(), 0.25)
            height = max(8.0, 45.0 / rate)
            step = min(0.25, dist / 2)
            contours.append(ContourSpec(float(c), height, int(math.ceil(height / step)) + 1))
        return tuple(contours)

    def check_separates(self, contours):
        c1, c2 = contours
        c1.check_separates(self.first)
        c2.check_separates(self.second)
        for e, E1, E2 in self.joint_upper[: self.k]:
            if not E1 * c1.abscissa + E2 * c2.abscissa < 1 - e:
                raise ParameterError("contours cross the poles of a joint gamma")


def _estimate_2d(spec, log_z1, log_z2, c1, c2, heights, nodes):
    s_im = np.linspace(0.0, heights[0], nodes[0])
    t_im = np.linspace(-heights[1], heights[1], 2 * nodes[1] - 1)
    s = c1 + 1j * s_im
    t = c2 + 1j * t_im
    row = spec.first.log_kernel(s) - s * log_z1
    col = spec.second.log_kernel(t) - t * log_z2
    vals = np.exp(spec.log_joint(s[:, None], t[None, :]) + row[:, None] + col[None, :])
    hs = heights[0] / (nodes[0] - 1)
    ht = heights[1] / (nodes[1] - 1)
    weights = np.ones(nodes[0])
    weights[0] = 0.5
    total = (weights[:, None] * vals).sum()
    scale = hs * ht / (2 * math.pi ** 2)
    mags = np.abs(vals)
    return scale * total.real, scale * (weights[:, None] * mags).sum(), mags


def bivariate_fox_h(spec, z1, z2, contours=None, rtol=1e-9):
    """Two-variable Fox H-function by double Mellin-Barnes quadrature.

    Parameters
    ----------
    spec : BivariateFoxHSpec
    z1, z2 : float
        Positive arguments.
    contours : (ContourSpec, ContourSpec), optional
        Lines for the two variables; defaults to
        ``spec.default_contours()``.
    rtol : float
        Relative tolerance of the adaptive refinement.

    Returns
    -------
    float

    Notes
    -----
    Results for the default contours are memoized per ``(spec, z1, z2,
    rtol)``; the cache is an ``lru_cache`` and safe to share between threads.
    """
    z1 = _check_arg(z1, "z1")
    z2 = _check_arg(z2, "z2")
    if contours is None:
        return _bivariate_cached(spec, z1, z2, rtol)
    spec.check_separates(contours)
    return _bivariate(spec, z1, z2, tuple(contours), rtol)


@functools.lru_cache(maxsize=4096)
def _bivariate_cached(spec, z1, z2, rtol):
    return _bivariate(spec, z1, z2, spec.default_contours(), rtol)


def _check_grid(nodes, value):
    if nodes[0] * (2 * nodes[1] - 1) > _MAX_GRID:
        raise ConvergenceError("bivariate_fox_h needs a grid beyond the size limit",
                               (value, value))


def _bivariate(spec, z1, z2, contours, rtol):
    c1, c2 = contours
    lz1, lz2 = math.log(z1), math.log(z2)
    heights = [c1.height, c2.height]
    nodes = [c1.nodes, c2.nodes]
    args = (spec, lz1, lz2, c1.abscissa, c2.abscissa)
    if not (c1.adaptive and c2.adaptive):
        return _estimate_2d(*args, heights, nodes)[0]

    steps = [c1.step, c2.step]
    value = math.nan
    while True:
        _check_grid(nodes, value)
        value, l1, mags = _estimate_2d(*args, heights, nodes)
        peak = mags.max()
        tail_s = mags[-1, :].max() > _TAIL * peak
        tail_t = max(mags[:, 0].max(), mags[:, -1].max()) > _TAIL * peak
        if not (tail_s or tail_t):
            break
        if (tail_s and heights[0] >= _MAX_HEIGHT) or (tail_t and heights[1] >= _MAX_HEIGHT):
            raise ConvergenceError("bivariate integrand does not decay along the contours",
                                   (value, value))
        for axis, grow in enumerate((tail_s, tail_t)):
            if grow:
                heights[axis] *= 2
                nodes[axis] = int(round(heights[axis] / steps[axis])) + 1
    for _ in range(_MAX_HALVINGS):
        nodes = [2 * nodes[0] - 1, 2 * nodes[1] - 1]
        _check_grid(nodes, value)
        new, l1, _ = _estimate_2d(*args, heights, nodes)
        if abs(new - value) <= rtol * abs(new) + 64 * np.finfo(float).eps * l1:
            return new
        value = new
    raise ConvergenceError("bivariate_fox_h did not converge", (value, new))
