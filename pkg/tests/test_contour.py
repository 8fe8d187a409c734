import cmath
import math

import numpy as np
import pytest

import qgtrace as qg
from qgtrace.contour import (
    RESIDUE_KINDS,
    product_zero_count,
    standard_residue_loop,
)


def test_closed_polynomial_integrals_vanish():
    """Entire integrands have zero loop integrals; degree 2 is exact for
    the embedded Gauss rule, degree 9 exercises the Kronrod extension."""
    rect = qg.rectangle_path(-1.0, 2.0, -0.5, 1.5)
    for m in (0, 1, 2, 5, 9):
        val = qg.integrate_contour(lambda z, m=m: z ** m, rect, tol=1e-10)
        assert abs(val) < 1e-9


@pytest.mark.parametrize("z0,inside", [
    (0.3 + 0.2j, True),
    (3.0 + 0.0j, False),
    (-0.9 - 0.4j, True),
    (0.0 - 2.0j, False),
])
def test_winding_of_simple_pole(z0, inside):
    rect = qg.rectangle_path(-1.0, 1.0, -0.5, 0.5)
    val = qg.integrate_contour(lambda z: 1.0 / (z - z0), rect, tol=1e-10)
    want = 2j * math.pi if inside else 0.0
    assert abs(val - want) < 1e-9


def test_circle_matches_rectangle_for_analytic_data():
    f = lambda z: z / (z - 0.2j)
    a = qg.integrate_contour(f, qg.circle_path(0.0, 1.0, n=48), tol=1e-10)
    b = qg.integrate_contour(f, qg.rectangle_path(-1.5, 1.5, -1.5, 1.5), tol=1e-10)
    assert abs(a - b) < 1e-8


def test_pole_on_path_detected():
    rect = qg.rectangle_path(-1.0, 1.0, -1.0, 1.0)
    with pytest.raises(qg.PoleOnPath):
        # pole at the midpoint of the right segment
        qg.integrate_contour(lambda z: 1.0 / (z - 1.0), rect, tol=1e-8)


def test_noisy_integrand_refuses_to_converge():
    rng = np.random.default_rng(5)

    def noisy(z):
        return complex(rng.normal(), rng.normal())

    with pytest.raises(qg.QuadratureNotConverged):
        qg.integrate_contour(noisy, qg.rectangle_path(0.0, 1.0, 0.0, 1.0),
                             tol=1e-12)


def test_sine_margin_values():
    assert qg.sine_margin(0.5 * math.pi, 1.0) == pytest.approx(1.0)
    k = 2.0 + 3.0j
    want = math.exp(3.0 * 1.5) / abs(cmath.sin(k * 1.5))
    assert qg.sine_margin(k, 1.5) == pytest.approx(want, rel=1e-12)
    # the figure of merit approaches 2 high above the axis
    assert qg.sine_margin(0.7 + 30.0j, 1.0) == pytest.approx(2.0, rel=1e-8)
    with pytest.raises(qg.SineZero):
        qg.sine_margin(0.0, 1.0)


# ---------------------------------------------------------------------------
# tabulated residues


def test_residue_reference_hand_values():
    ell = 1.3
    assert qg.residue_reference("cot", 3, ell) == pytest.approx(1.0 / ell)
    assert qg.residue_reference("csc", 3, ell) == pytest.approx(-1.0 / ell)
    assert qg.residue_reference("csc", 4, ell) == pytest.approx(1.0 / ell)
    assert qg.residue_reference("cot_over_k", 2, ell) == pytest.approx(
        1.0 / (2.0 * math.pi))
    assert qg.residue_reference("csc_over_k", 5, ell) == pytest.approx(
        -1.0 / (5.0 * math.pi))
    assert qg.residue_reference("cot_sq_over_k", 1, ell) == pytest.approx(
        -1.0 / math.pi ** 2)
    assert qg.residue_reference("csc_sq_over_k", 2, ell) == pytest.approx(
        -1.0 / (2.0 * math.pi) ** 2)
    assert qg.residue_reference("cot_csc_over_k", 2, ell) == pytest.approx(
        -1.0 / (2.0 * math.pi) ** 2)
    # n = 0 rows are length-free numbers
    assert qg.residue_reference("cot_over_k_zero", 0, ell) == 0.0
    assert qg.residue_reference("csc_over_k_zero", 0, ell) == 0.0
    assert qg.residue_reference("cot_sq_over_k_zero", 0, ell) == pytest.approx(-2.0 / 3.0)
    assert qg.residue_reference("cot_csc_over_k_zero", 0, ell) == pytest.approx(-1.0 / 6.0)
    assert qg.residue_reference("csc_sq_over_k_zero", 0, ell) == pytest.approx(1.0 / 3.0)
    assert qg.residue_reference("inv_k_zero", 0, ell) == pytest.approx(1.0)


def test_residue_reference_rejects_incompatible_indices():
    with pytest.raises(qg.IncompatibleIndex):
        qg.residue_reference("cot_over_k", 0, 1.0)
    with pytest.raises(qg.IncompatibleIndex):
        qg.residue_reference("csc_sq_over_k_zero", 2, 1.0)
    with pytest.raises(qg.IncompatibleIndex):
        qg.residue_reference("cot", 1.5, 1.0)
    with pytest.raises(qg.IncompatibleIndex):
        qg.residue_reference("tan_over_k", 1, 1.0)
    with pytest.raises(qg.IncompatibleIndex):
        qg.residue_integrand("tan_over_k", 1.0)


@pytest.mark.parametrize("kind,n", [
    ("cot", 2),
    ("csc", 1),
    ("cot_over_k", 1),
    ("csc_sq_over_k", 3),
    ("cot_sq_over_k_zero", 0),
    ("inv_k_zero", 0),
])
def test_residue_quadrature_matches_table(kind, n):
    """A small loop integral around n pi / l reproduces the closed form."""
    ell = math.sqrt(2.0)
    f = qg.residue_integrand(kind, ell)
    loop = standard_residue_loop(n, ell)
    val = qg.integrate_contour(f, loop, tol=1e-10) / (2j * math.pi)
    want = qg.residue_reference(kind, n, ell)
    assert val.real == pytest.approx(want, abs=1e-10)
    assert abs(val.imag) < 1e-10


def test_residue_kinds_table_is_complete():
    assert len(RESIDUE_KINDS) == 13
    assert len(set(RESIDUE_KINDS)) == 13


# ---------------------------------------------------------------------------
# winding counts against the sine product


def test_product_zero_count_hand_values(neumann_pi, decoupled_pair):
    assert product_zero_count(neumann_pi, 10.5) == 22
    # d = 2: 4 at the origin + 2*(floor(4.669) + floor(4.669/2))
    assert product_zero_count(decoupled_pair, 4.669) == 16


def test_rouche_neumann_interval(neumann_pi):
    rep = qg.rouche_verify(neumann_pi, None, 10.5, mode="zero_potential")
    assert rep.zeros_product == 22
    assert rep.zeros_phi == 22
    assert rep.equal


def test_rouche_robin_interval(robin_pi):
    # 2 negative pairs on the imaginary axis + 2*5 real + none at zero
    rep = qg.rouche_verify(robin_pi, None, 5.5, mode="zero_potential")
    assert rep.zeros_product == 2 + 2 * 5
    assert rep.equal


def test_rouche_decoupled_pair(decoupled_pair):
    level = qg.allowed_level(decoupled_pair, 4.5)
    rep = qg.rouche_verify(decoupled_pair, None, level, mode="zero_potential")
    assert rep.zeros_phi == rep.zeros_product == 16
