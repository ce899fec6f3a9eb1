import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from dastc.distributions import (
    LemmaParams,
    cdf_T,
    cdf_W,
    cdf_Z,
    cdf_from_pdf,
    mgf_inverse_gamma,
    pdf_T,
    pdf_W,
    pdf_Z,
    sample_T,
    sample_W,
    sample_Z,
)
from dastc.exceptions import DomainError, ParameterError
from dastc.quadrature import integrate_log_axis, integrate_semi_infinite

PARAM_SETS = [(20.0, 20.0, 20.0), (20.0, 40.0, 10.0), (2000.0, 2000.0, 2000.0), (2.0, 32.0, 32.0)]


def total_mass(pdf, params, scale):
    return integrate_semi_infinite(lambda x: pdf(x, params), scale)


def test_constants_symmetric():
    p = LemmaParams(20, 20, 20)
    assert p.lemma_alpha == pytest.approx(2 * math.sqrt(2) / 20)
    assert p.beta1 == p.beta2 == pytest.approx(3 / 20)
    assert p.eta == 0.0
    assert p.zeta == pytest.approx(4.0)
    assert p.a_coef(0) == pytest.approx(p.lemma_alpha ** 2)
    assert p.a_coef(1, 2) == pytest.approx(p.lemma_alpha * p.beta2)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 1e5), st.floats(1e-3, 1e5), st.floats(1e-3, 1e5))
def test_constants_finite_and_positive(g0, g1, g2):
    p = LemmaParams(g0, g1, g2)
    values = [p.lemma_alpha, p.beta1, p.beta2, p.zeta, *p.varpi, *p.xi]
    assert all(math.isfinite(v) and v > 0 for v in values)
    assert p.eta >= 0 and p.zeta > p.eta
    assert (p.eta == 0) == (g1 == g2) or p.eta < 1e-12 * p.zeta


def test_from_channel():
    p = LemmaParams.from_channel((1, 16, 16), 10.0)
    assert (p.gbar0, p.gbar1, p.gbar2) == (20.0, 320.0, 320.0)


def test_param_validation():
    with pytest.raises(ParameterError):
        LemmaParams(0, 1, 1)
    with pytest.raises(ParameterError):
        LemmaParams(1, 1, 1, convention="other")


@pytest.mark.parametrize("g", PARAM_SETS)
@pytest.mark.parametrize("order", [(1, 2), (2, 1)])
def test_pdf_Z_normalizes(g, order):
    p = LemmaParams(*g)
    assert total_mass(lambda z, q: pdf_Z(z, q, order), p, 1 / p.beta1) == pytest.approx(1, abs=1e-6)


@pytest.mark.parametrize("z", [0.5, 1.0, 2.0])
def test_cdf_Z_derivative_is_pdf(z):
    p = LemmaParams(20, 20, 20)
    h = 1e-5
    fd = (cdf_Z(z + h, p) - cdf_Z(z - h, p)) / (2 * h)
    assert fd == pytest.approx(pdf_Z(z, p), abs=1e-6)


def test_cdf_Z_limits_and_monotone():
    p = LemmaParams(20, 40, 10)
    z = np.concatenate([[0.0, 1e-12], np.logspace(-3, 4, 200)])
    f = cdf_Z(z, p)
    assert f[0] == 0 and f[1] < 1e-9 and f[-1] == pytest.approx(1, abs=1e-12)
    assert np.all(np.diff(f) >= -1e-15) and np.all((f >= 0) & (f <= 1))


@pytest.mark.parametrize("pdf", [pdf_Z, pdf_W, pdf_T])
def test_densities_reject_nonpositive(pdf):
    with pytest.raises(DomainError):
        pdf(np.array([1.0, 0.0]), LemmaParams(1, 1, 1))


@pytest.mark.parametrize("g", [(20, 20, 20), (20, 80, 20), (2000, 2000, 2000)])
@pytest.mark.parametrize("order", [(1, 2), (2, 1)])
def test_Z_sampling_matches_cdf(g, order):
    p = LemmaParams(*g)
    z = sample_Z(np.random.default_rng(1), p, 100_000, order)
    assert stats.kstest(z, lambda x: cdf_Z(x, p, order)).pvalue > 0.01


def test_mean_log_Z_quadrature_vs_sampling():
    p = LemmaParams(20, 20, 20)
    z = sample_Z(np.random.default_rng(2), p, 1_000_000)
    quad = integrate_semi_infinite(lambda x: np.log(x) * pdf_Z(x, p), 1 / p.beta1)
    assert quad == pytest.approx(np.log(z).mean(), rel=0.005)


def test_mgf_inverse_gamma():
    assert mgf_inverse_gamma(0.0, 3.0) == 1.0
    assert mgf_inverse_gamma(1e-14, 3.0) == pytest.approx(1.0, abs=1e-6)
    g = np.random.default_rng(3).exponential(5.0, 1_000_000)
    for scale in (1, 2):
        mc = np.exp(-0.7 * scale / g).mean()
        assert mgf_inverse_gamma(0.7, 5.0, scale) == pytest.approx(mc, rel=0.005)
    with pytest.raises(DomainError):
        mgf_inverse_gamma(-1.0, 1.0)


def test_mgf_product_is_mgf_of_inverse_Z():
    # 1/Z = 1/g_j + 2/g_i, so E[exp(-s/Z)] factorizes.
    p = LemmaParams(20, 30, 12)
    rng = np.random.default_rng(4)
    g1, g2 = rng.exponential(30, 1_000_000), rng.exponential(12, 1_000_000)
    mc = np.exp(-(1 / g2 + 2 / g1)).mean()
    prod = mgf_inverse_gamma(1.0, p.gbar2, 1) * mgf_inverse_gamma(1.0, p.gbar1, 2)
    assert prod == pytest.approx(mc, rel=0.005)


@pytest.mark.parametrize("g", PARAM_SETS)
def test_pdf_W_normalizes_and_matches_sampling(g):
    p = LemmaParams(*g)
    assert total_mass(pdf_W, p, p.gbar1) == pytest.approx(1, abs=1e-6)
    w = sample_W(np.random.default_rng(5), p, 100_000)
    assert stats.kstest(w, lambda x: cdf_W(x, p)).pvalue > 0.01


def test_pdf_W_symmetric_reduces_to_harmonic_mean_density():
    # g1 = g2 = g: W = g1 g2 / (g1 + g2) has CDF 1 - (2w/g) K1(2w/g) exp(-2w/g)
    g = 7.0
    p = LemmaParams(1.0, g, g)
    w = np.linspace(0.05, 30, 50)
    h = 1e-6
    fd = (cdf_W(w + h, p) - cdf_W(w - h, p)) / (2 * h)
    np.testing.assert_allclose(pdf_W(w, p), fd, rtol=1e-6, atol=1e-9)
    from scipy.special import k0, k1
    x = 2 * w / g
    expected = (2 / g) * x * np.exp(-x) * (k0(x) + k1(x))
    np.testing.assert_allclose(pdf_W(w, p), expected, rtol=1e-12)


@pytest.mark.parametrize("g", PARAM_SETS)
def test_pdf_T_normalizes(g):
    p = LemmaParams(*g)
    mass = integrate_log_axis(lambda t: pdf_T(t, p), p.zeta)
    assert mass == pytest.approx(1, abs=1e-5)


def test_printed_constants_are_not_a_density():
    for g in PARAM_SETS:
        p = LemmaParams(*g, convention="printed")
        assert abs(integrate_log_axis(lambda t: pdf_T(t, p), p.zeta) - 1) > 0.1
        assert abs(total_mass(pdf_W, p, p.gbar1) - 1) > 0.1


@pytest.mark.parametrize("g", [(20, 20, 20), (20, 40, 10)])
def test_T_sampling_matches_integrated_cdf(g):
    p = LemmaParams(*g)
    t = sample_T(np.random.default_rng(6), p, 100_000)
    assert stats.kstest(t, lambda x: cdf_T(x, p)).pvalue > 0.01


def test_cdf_T_consistent_with_W_route():
    # P(T <= t) = P(g0 <= t W) = E[1 - exp(-t W / g0)], computed with pdf_W.
    p = LemmaParams(3.0, 5.0, 9.0)
    for t in (0.3, 2.0, 15.0):
        ref = 1 - integrate_semi_infinite(lambda w: np.exp(-t * w / p.gbar0) * pdf_W(w, p), p.gbar1)
        assert cdf_T(t, p) == pytest.approx(ref, abs=1e-8)


def test_cdf_from_pdf_preserves_input_order():
    x = np.array([3.0, 0.0, 1.0, 3.0, 0.5])
    f = cdf_from_pdf(lambda u: np.exp(-u), x)
    np.testing.assert_allclose(f, 1 - np.exp(-x), atol=1e-12)


def test_mean_log1p_T_quadrature_vs_sampling():
    p = LemmaParams(20, 20, 20)
    t = sample_T(np.random.default_rng(7), p, 1_000_000)
    quad = integrate_log_axis(lambda x: np.log1p(x) * pdf_T(x, p), p.zeta)
    assert quad == pytest.approx(np.log1p(t).mean(), rel=0.005)


def test_ks_pvalues_are_uniform_across_seeds():
    # A single KS test fails 1% of the time for a correct CDF; across many
    # seeds the p-values must look uniform.
    p = LemmaParams(20, 40, 10)
    pvals = [stats.kstest(sample_Z(np.random.default_rng(s), p, 10_000), lambda x: cdf_Z(x, p)).pvalue
             for s in range(200)]
    assert stats.kstest(pvals, "uniform").pvalue > 0.01
