"""Modified Bessel K and the Gauss hypergeometric function 2F1."""

import numpy as np
from scipy import special as sc

from ..exceptions import DomainError, ParameterError

_EPS = np.finfo(float).eps
_MAX_TERMS = 5000


def bessel_k(order, x):
    """Modified Bessel function of the second kind, K_order(x).

    Parameters
    ----------
    order : float
        Real order. Orders 0, 1/2 and 1 are the ones the sum-rate analysis
        uses, but any real order is accepted.
    x : float or array_like
        Positive argument.

    Returns
    -------
    float or ndarray
        K_order(x). Underflows to 0 for very large ``x``.

    Raises
    ------
    DomainError
        If any ``x`` is not strictly positive.
    """
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("bessel_k requires x > 0")
    out = sc.kv(order, x)
    return out[()] if out.ndim == 0 else out


def bessel_k_scaled(order, x):
    """Exponentially scaled K: ``exp(x) * K_order(x)``. No domain check."""
    return sc.kve(order, x)


def _is_nonpositive_int(v):
    return v <= 0 and float(v).is_integer()


def _series(a, b, c, z):
    # Plain Gauss series; caller keeps |z| <= 1/2 unless it terminates.
    z = np.asarray(z, dtype=float)
    total = np.ones_like(z)
    term = np.ones_like(z)
    for k in range(_MAX_TERMS):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1.0))) * z
        total = total + term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    return total


def _near_one_integer(a, b, m, w):
    """2F1(a, b; a+b+m; 1-w) for integer m >= 0, regularized by 1/Gamma(c).

    Logarithmic connection formula for the degenerate case in which
    c - a - b is an integer; ``w = 1 - z`` with 0 < w < 1/2.
    """
    w = np.asarray(w, dtype=float)
    finite = np.zeros_like(w)
    if m > 0:
        term = 1.0
        for k in range(m):
            if k > 0:
                term *= (a + k - 1) * (b + k - 1) / k
            finite = finite + term * sc.factorial(m - k - 1) * (-w) ** k
        finite = finite * sc.rgamma(a + m) * sc.rgamma(b + m)
    logw = np.log(w)
    total = np.zeros_like(w)
    coef = 1.0 / sc.factorial(m)
    power = np.ones_like(w)
    for k in range(_MAX_TERMS):
        if k > 0:
            coef *= (a + m + k - 1) * (b + m + k - 1) / (k * (k + m))
            power = power * w
        psi = (-sc.digamma(k + 1.0) - sc.digamma(k + m + 1.0)
               + sc.digamma(a + k + m) + sc.digamma(b + k + m))
        term = coef * power * (logw + psi)
        total = total + term
        if k > 2 and np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    return finite - (-w) ** m * sc.rgamma(a) * sc.rgamma(b) * total


def _toward_one(a, b, c, w):
    # 2F1 at z = 1 - w, 0 < w < 1/2: expand around z = 1.
    w = np.asarray(w, dtype=float)
    m = c - a - b
    if float(m).is_integer():
        m = int(m)
        if m < 0:
            # Euler's transformation makes the integer gap non-negative.
            return w ** m * _toward_one(c - a, c - b, c, w)
        return sc.gamma(c) * _near_one_integer(a, b, m, w)
    first = sc.gamma(c) * sc.gamma(m) * sc.rgamma(c - a) * sc.rgamma(c - b)
    second = sc.gamma(c) * sc.gamma(-m) * sc.rgamma(a) * sc.rgamma(b)
    out = first * _series(a, b, 1.0 - m, w)
    if second != 0.0:
        out = out + second * w ** m * _series(c - a, c - b, 1.0 + m, w)
    return out


def gauss_2f1(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.

    The power series is summed directly for ``|z| <= 1/2``. For
    ``1/2 < z < 1`` the function is continued with the connection formula
    around ``z = 1`` (including the logarithmic case when ``c - a - b`` is an
    integer), and ``z < -1/2`` is first mapped into ``(1/3, 1)`` with
    Pfaff's transformation.

    Parameters
    ----------
    a, b, c : float
        Real parameters; ``c`` must not be a non-positive integer.
    z : float or array_like
        Real argument(s), all strictly below 1.

    Returns
    -------
    float or ndarray

    Raises
    ------
    ParameterError
        If ``c`` is a non-positive integer.
    DomainError
        If any ``z >= 1``.

    Notes
    -----
    When ``c - a - b`` is within rounding of, but not exactly, an integer the
    non-degenerate connection formula cancels and accuracy degrades.
    """
    if _is_nonpositive_int(c):
        raise ParameterError("gauss_2f1: c must not be a non-positive integer")
    z = np.asarray(z, dtype=float)
    if np.any(~(z < 1.0)):
        raise DomainError("gauss_2f1 requires z < 1")
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        out = _series(a, b, c, z)
        return out[()] if out.ndim == 0 else out

    out = np.empty_like(z)
    inner = np.abs(z) <= 0.5
    upper = z > 0.5
    lower = z < -0.5
    if np.any(inner):
        out[inner] = _series(a, b, c, z[inner])
    if np.any(upper):
        out[upper] = _toward_one(a, b, c, 1.0 - z[upper])
    if np.any(lower):
        zl = z[lower]
        out[lower] = (1.0 - zl) ** (-a) * gauss_2f1(a, c - b, c, zl / (zl - 1.0))
    return out[()] if out.ndim == 0 else out


def gauss_2f1_complement(a, b, c, w):
    """2F1(a, b; c; 1 - w) for ``0 < w <= 1/2``, given ``w`` exactly.

    Avoids the cancellation of forming ``1 - w`` when ``w`` is tiny.
    """
    if _is_nonpositive_int(c):
        raise ParameterError("gauss_2f1: c must not be a non-positive integer")
    w = np.asarray(w, dtype=float)
    if np.any(~((w > 0) & (w <= 0.5))):
        raise DomainError("gauss_2f1_complement requires 0 < w <= 1/2")
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        out = _series(a, b, c, 1.0 - w)
    else:
        out = _toward_one(a, b, c, w)
    return out[()] if out.ndim == 0 else out
