import math

import numpy as np
import pytest

import qgtrace as qg
from conftest import hermitian_from_seed


def test_rhs_quadratic_interval(qx2_pi):
    # (q(0) + q(pi))/4 - a/l = pi**2/4 - pi**2/6 = pi**2/12
    assert qg.trace_rhs(qx2_pi) == pytest.approx(math.pi ** 2 / 12.0, rel=1e-14)


def test_rhs_generic_two_edge(d2_numeric):
    """The linear edge drops out, (q0 + qL)/4 = a/l there; what remains is
    the quadratic edge's 1/48."""
    assert qg.trace_rhs(d2_numeric) == pytest.approx(1.0 / 48.0, rel=1e-12)


def test_rhs_zero_for_free_graphs(robin_pi, d2_analytic):
    assert qg.trace_rhs(robin_pi) == 0.0
    assert qg.trace_rhs(d2_analytic) == 0.0


def test_trace_terms_structure(qx2_pi):
    terms = qg.trace_terms(qx2_pi, 10.2)
    assert len(terms) == qg.weyl_count(qx2_pi, terms.level)
    assert not terms.disorder_flag
    assert np.all(np.diff(terms.mu) >= 0)
    # regularized differences decay like 1/n**2 once n is moderate
    assert abs(terms.terms[-1]) < 0.1 * abs(terms.terms[1])
    # slot identity: term = lam_q - lam_0 - 2a/l
    a_over = 2.0 * qx2_pi.moments[0].a / math.pi
    assert np.allclose(terms.terms, terms.lam_q - terms.lam_0 - a_over, atol=1e-12)


def test_uniform_constant_shift_regularizes_to_zero():
    """q_i = c on every edge shifts the whole spectrum by c, so every
    regularized term must vanish and the boundary constant is zero."""
    h = hermitian_from_seed(7, 2)
    c = 0.37
    g = qg.MetricGraph(
        (qg.Edge(1.0, qg.ConstantPotential(c)),
         qg.Edge(math.sqrt(2.0), qg.ConstantPotential(c))),
        qg.hermitian_coupling(h))
    assert qg.trace_rhs(g) == pytest.approx(0.0, abs=1e-15)
    terms = qg.trace_terms(g, 12.0)
    assert np.max(np.abs(terms.terms)) < 1e-8


def test_partial_sum_masks_by_level(qx2_pi):
    terms = qg.trace_terms(qx2_pi, 10.2)
    s = qg.trace_lhs_partial(terms, 5.5)
    assert s == pytest.approx(float(terms.terms[terms.mu < 5.5].sum()))
    full = qg.trace_lhs_partial(terms, terms.level + 1.0)
    assert full == pytest.approx(float(terms.terms.sum()))


def test_contour_matches_direct_difference_sum_numeric(d2_numeric):
    """The tracked rectangle integral equals the straight sum of
    lam(q) - lam(0) over the enclosed pairs."""
    terms = qg.trace_terms(d2_numeric, 12.0)
    direct = float((terms.lam_q - terms.lam_0).sum())
    tc = qg.trace_lhs_contour(d2_numeric, 12.0, level=terms.level)
    assert tc.level == terms.level
    assert abs(tc.value - direct) < 1e-6
    assert tc.err_bound < 1e-3


def test_contour_matches_direct_difference_sum_interval(qx2_pi):
    terms = qg.trace_terms(qx2_pi, 8.0)
    direct = float((terms.lam_q - terms.lam_0).sum())
    tc = qg.trace_lhs_contour(qx2_pi, 8.0, level=terms.level)
    assert abs(tc.value - direct) < 1e-6


def test_contour_rejects_forbidden_level(neumann_pi):
    with pytest.raises(qg.EpsilonTooLarge):
        qg.trace_lhs_contour(neumann_pi, 7.0, level=7.0)


def test_predict_eigenvalue_robin(robin_pi):
    """d = 1: the correction is -(2/l) tr(H); no cross terms exist."""
    pred = qg.predict_eigenvalue(robin_pi, 0, 4)
    assert pred.mu == pytest.approx(4.0)
    assert pred.leading == pytest.approx(16.0)
    assert pred.first_order == pytest.approx(-6.0 / math.pi)
    assert pred.second_order == 0.0
    assert not pred.low_confidence
    eigs = qg.find_eigenvalues(robin_pi, 20.2)
    part = qg.partition(robin_pi, eigs)
    ns, vals = part.subsequence(0)
    defects = []
    for n, lam in zip(ns, vals):
        if n < 3:
            continue
        p = qg.predict_eigenvalue(robin_pi, 0, int(n))
        defects.append(n * n * abs(lam - p.value))
    # n**2-weighted defects stay bounded (the next order is 1/n**2)
    assert max(defects) < 5.0
    assert defects[-1] < 2.0 * defects[0] + 1.0


def test_predict_eigenvalue_needs_positive_index(robin_pi):
    with pytest.raises(qg.CommensurateResonance):
        qg.predict_eigenvalue(robin_pi, 0, 0)


def test_predict_eigenvalue_commensurate_rejected(decoupled_pair):
    # mu = 2 is a sine zero of both edges
    with pytest.raises(qg.CommensurateResonance):
        qg.predict_eigenvalue(decoupled_pair, 0, 2)
    # odd slots of the long edge are fine
    pred = qg.predict_eigenvalue(decoupled_pair, 0, 3)
    assert pred.value == pytest.approx(9.0)


def test_predict_cluster_sum_decoupled(decoupled_pair):
    pred = qg.predict_cluster_sum(decoupled_pair, [(0, 2), (1, 1)])
    assert pred.mu == pytest.approx(2.0)
    assert pred.value == pytest.approx(8.0)
    assert pred.dropped == ((0, 1), (1, 0))
    with pytest.raises(qg.CommensurateResonance):
        qg.predict_cluster_sum(decoupled_pair, [(0, 1), (1, 1)])


def test_cluster_prediction_tracks_seeded_coupling():
    """Commensurate lengths with a dense coupling: per-eigenvalue
    prediction is impossible at even mu, the cluster sum is not."""
    h = hermitian_from_seed(3, 2)
    g = qg.MetricGraph((qg.Edge(math.pi), qg.Edge(math.pi / 2.0)),
                       qg.hermitian_coupling(h))
    eigs = qg.find_eigenvalues(g, 12.2, mode="zero_potential")
    part = qg.partition(g, eigs)
    rows = qg.asymptotic_rows(g, part, n_min=1)
    clusters = [r for r in rows if r["kind"] == "cluster"]
    singles = [r for r in rows if r["kind"] == "single"]
    assert clusters and singles
    for r in rows:
        assert abs(r["defect"]) * max(1.0, r["mu"]) ** 2 < 12.0


def test_asymptotic_rows_generic(d2_analytic):
    eigs = qg.find_eigenvalues(d2_analytic, 14.0, mode="zero_potential")
    part = qg.partition(d2_analytic, eigs)
    rows = qg.asymptotic_rows(d2_analytic, part, n_min=2)
    assert all(r["kind"] == "single" for r in rows)
    assert all(min(r["ns"]) >= 2 for r in rows)
    weighted = [abs(r["defect"]) * r["mu"] ** 2 for r in rows]
    assert max(weighted) < 10.0


def test_convergence_report_fields(d2_numeric):
    rep = qg.convergence_report(d2_numeric, 18.0, n_levels=4, with_contour=True)
    assert rep.rhs == pytest.approx(1.0 / 48.0, rel=1e-12)
    assert rep.levels.size == rep.partial_sums.size == rep.errors.size
    assert rep.levels.size >= 3
    assert np.all(np.diff(rep.levels) > 0)
    assert rep.final_error == rep.errors[-1]
    assert rep.final_error < 0.02
    # tail fit should see roughly 1/K decay
    assert 0.5 < rep.fit_alpha < 1.6
    assert abs(rep.contour_delta) < 1e-6


def test_convergence_report_without_contour(qx2_pi):
    rep = qg.convergence_report(qx2_pi, 12.0, n_levels=3)
    assert math.isnan(rep.contour_value)
    assert rep.errors[-1] < rep.errors[0]
