import cmath
import math

import numpy as np
import pytest

import qgtrace as qg
from conftest import hermitian_from_seed, robin_det


def test_robin_interval_matches_closed_form(robin_pi):
    """d = 1, q = 0, H = diag(1, 2): the 2x2 determinant collapses to
    h0 hl sin(kl)/k - (h0 + hl) cos(kl) - k sin(kl)."""
    for lam in (-6.3, -1.0, 0.7, 3.9, 26.0, 145.2):
        got = qg.phi_lam(robin_pi, None, lam, mode="zero_potential")
        assert got.imag == pytest.approx(0.0, abs=1e-12 * max(1.0, abs(got)))
        assert got.real == pytest.approx(robin_det(lam, 1.0, 2.0, math.pi),
                                         rel=1e-12, abs=1e-12)


def test_free_graph_is_pure_sine_product(decoupled_pair):
    for k in (0.37, 1.9, 5.2, 11.1):
        got = qg.phi(decoupled_pair, None, k, mode="zero_potential")
        want = qg.product_ksin(decoupled_pair, k)
        assert complex(got) == pytest.approx(complex(want), rel=1e-12)


def test_phi_lam_accepts_explicit_coupling(neumann_pi):
    h = np.diag([1.0, 2.0])
    a = qg.phi_lam(neumann_pi, h, 5.0, mode="zero_potential")
    assert a.real == pytest.approx(robin_det(5.0, 1.0, 2.0, math.pi), rel=1e-12)


def test_phi_real_even_conjugate_symmetric(d2_analytic):
    """phi depends on lam only: real on real lam, even in k, and
    phi(conj k) = conj(phi(k)) even for a fully complex coupling."""
    for lam in (0.3, 7.7, 40.1, -3.2):
        v = qg.phi_lam(d2_analytic, None, lam, mode="zero_potential")
        assert abs(v.imag) < 1e-10 * max(1.0, abs(v))
    for k in (1.3, 4.0 + 0.7j, -2.2 + 1.9j):
        plus = qg.phi(d2_analytic, None, k, mode="zero_potential")
        minus = qg.phi(d2_analytic, None, -k, mode="zero_potential")
        conj = qg.phi(d2_analytic, None, complex(k).conjugate(),
                      mode="zero_potential")
        assert complex(plus) == pytest.approx(complex(minus), rel=1e-11)
        assert complex(conj) == pytest.approx(complex(plus).conjugate(), rel=1e-11)


def test_phi_numeric_agrees_with_closed_form_route(d2_analytic):
    # same graph, q = 0: the marched route must land on the trig route
    for lam in (2.0, 33.0, -4.5):
        a = qg.phi_lam(d2_analytic, None, lam, mode="numeric")
        b = qg.phi_lam(d2_analytic, None, lam, mode="zero_potential")
        assert complex(a) == pytest.approx(complex(b), rel=1e-8, abs=1e-10)


def test_phi_expanded_exact_for_single_free_edge(robin_pi):
    """With d = 1 and q = 0 the expansion terminates: it must equal phi
    identically, not just asymptotically."""
    for k in (0.9, 2.6, 7.3, 31.0):
        a = qg.phi_expanded(robin_pi, None, k)
        b = qg.phi(robin_pi, None, k, mode="zero_potential")
        assert complex(a) == pytest.approx(complex(b), rel=1e-11)


def test_phi_expanded_residual_decays(d2_analytic):
    """Cross-edge coupling enters the true phi at order 1/k**2 relative to
    the product; the explicit expanded form must chase it one order
    further."""
    resid = []
    for target in (9.0, 18.0, 36.0):
        k = qg.allowed_level(d2_analytic, target)
        assert qg.allowed_margin(d2_analytic, k) > 0.25
        a = qg.phi_expanded(d2_analytic, None, k)
        b = qg.phi(d2_analytic, None, k, mode="zero_potential")
        scale = abs(qg.product_ksin(d2_analytic, k))
        resid.append(abs(a - b) / scale)
    assert resid[1] < 0.5 * resid[0]
    assert resid[2] < 0.5 * resid[1]


def test_log_ratio_truncation_error_shrinks_like_k2(d2_analytic):
    ks = [10.7, 21.4, 42.8]
    for k in ks:
        assert qg.allowed_margin(d2_analytic, k) > 0.25
    errs = []
    for k in ks:
        num = qg.log_ratio_numeric(d2_analytic, None, k, form="vs_product",
                                   mode="zero_potential")
        exp = qg.log_ratio(d2_analytic, None, k, form="vs_product", epsilon=0.2)
        errs.append(abs(num - exp))
    assert errs[1] < errs[0]
    assert errs[2] < errs[1]
    # quadratic weighting should stay bounded
    assert errs[2] * ks[2] ** 2 < 4.0 * errs[0] * ks[0] ** 2


def test_log_ratio_vs_phi0_reflects_potential_only(d2_numeric):
    """ln(phi / phi_0) carries the potential moments at first order; for a
    potential-free graph it must vanish identically."""
    bare = d2_numeric.zero_potential()
    k = 17.3
    assert qg.allowed_margin(bare, k) > 0.2
    z = qg.log_ratio_numeric(bare, None, k, form="vs_phi0", mode="zero_potential")
    assert abs(z) < 1e-12
    exp = qg.log_ratio(d2_numeric, None, k, form="vs_phi0", epsilon=0.15)
    num = qg.log_ratio_numeric(d2_numeric, None, k, form="vs_phi0",
                               mode="numeric")
    assert abs(num - exp) < 5.0 / k ** 2


def test_log_ratio_guard_rails(d2_analytic, neumann_pi):
    with pytest.raises(qg.ZeroWavenumber):
        qg.log_ratio(d2_analytic, None, 0.0)
    with pytest.raises(qg.ForbiddenRegion):
        # k pi is a sine zero of the length-1 edge at k = 2 pi
        qg.log_ratio(d2_analytic, None, 2.0 * math.pi, epsilon=0.2)
    with pytest.raises(qg.EpsilonTooLarge):
        qg.log_ratio(d2_analytic, None, 10.7, epsilon=2.0)
    with pytest.raises(ValueError):
        qg.log_ratio(d2_analytic, None, 10.7, form="vs_nothing", epsilon=0.2)
    with pytest.raises(qg.SineZero):
        # the sine product vanishes identically at k = 0
        qg.log_ratio_numeric(neumann_pi, None, 0.0, mode="zero_potential")


def test_sine_margin_cap_value():
    from qgtrace.secular import sine_margin_cap
    assert sine_margin_cap(0.3) == pytest.approx(2.0 / math.sin(0.3), rel=1e-14)


def test_phi_seeded_hermitian_reality_off_diagonal():
    rng = np.random.default_rng(19)
    h = hermitian_from_seed(19, 3, scale=0.5)
    edges = tuple(qg.Edge(l) for l in (1.0, math.sqrt(2.0), math.pi / 2.0))
    g = qg.MetricGraph(edges, qg.hermitian_coupling(h))
    lams = rng.uniform(0.5, 60.0, size=6)
    for lam in lams:
        v = qg.phi_lam(g, None, float(lam), mode="zero_potential")
        assert abs(v.imag) < 1e-10 * max(1.0, abs(v))
