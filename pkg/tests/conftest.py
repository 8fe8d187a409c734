"""Shared instances for the test suite.

Everything here is built from explicit numbers so a failing test pins the
blame on the library, not on fixture drift.  The seeded Hermitian helper
must keep its draw order stable: frozen expectations elsewhere depend on
the exact matrix it returns.
"""

import math

import numpy as np
import pytest

import qgtrace as qg

SQRT2 = math.sqrt(2.0)


def hermitian_from_seed(seed, d, scale=0.35):
    """Reproducible dense Hermitian coupling block for 2d endpoints."""
    rng = np.random.default_rng(seed)
    n = 2 * d
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (a + a.conj().T)


def robin_det(lam, h0, hl, ell):
    """Closed-form secular determinant for one edge, q = 0, H = diag(h0, hl).

    Written independently of the package internals so it can act as an
    oracle for both the determinant values and the eigenvalue locations.
    """
    if lam > 0.0:
        k = math.sqrt(lam)
        return (h0 * hl * math.sin(k * ell) / k
                - (h0 + hl) * math.cos(k * ell) - k * math.sin(k * ell))
    if lam == 0.0:
        return h0 * hl * ell - (h0 + hl)
    kap = math.sqrt(-lam)
    return (h0 * hl * math.sinh(kap * ell) / kap
            - (h0 + hl) * math.cosh(kap * ell) + kap * math.sinh(kap * ell))


def robin_reference_spectrum(h0, hl, ell, lam_lo, lam_hi, n_grid=4000):
    """Brentq on the closed form over a sign-scanned grid."""
    from scipy.optimize import brentq

    grid = np.linspace(lam_lo, lam_hi, n_grid)
    vals = np.array([robin_det(x, h0, hl, ell) for x in grid])
    roots = []
    for i in range(n_grid - 1):
        if vals[i] == 0.0:
            roots.append(grid[i])
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(brentq(lambda x: robin_det(x, h0, hl, ell),
                                grid[i], grid[i + 1], xtol=1e-12))
    return np.array(roots)


@pytest.fixture
def neumann_pi():
    """One edge of length pi, free endpoints: lam_n = n**2."""
    edge = qg.Edge(math.pi)
    return qg.MetricGraph((edge,), qg.hermitian_coupling(np.zeros((2, 2))))


@pytest.fixture
def robin_pi():
    edge = qg.Edge(math.pi)
    return qg.MetricGraph((edge,), qg.hermitian_coupling(np.diag([1.0, 2.0])))


@pytest.fixture
def qx2_pi():
    """q(x) = x**2 on [0, pi] with free endpoints; the classical interval
    check with boundary constant pi**2 / 12."""
    edge = qg.Edge(math.pi, qg.PolynomialPotential((0.0, 0.0, 1.0)))
    return qg.MetricGraph((edge,), qg.hermitian_coupling(np.zeros((2, 2))))


@pytest.fixture
def d2_numeric():
    """Two incommensurate edges with polynomial potentials and a dense
    seeded coupling; the workhorse generic instance."""
    e1 = qg.Edge(1.0, qg.PolynomialPotential((0.4, -0.3, 0.25)))
    e2 = qg.Edge(SQRT2, qg.PolynomialPotential((-0.2, 0.5)))
    return qg.MetricGraph((e1, e2), qg.hermitian_coupling(hermitian_from_seed(7, 2)))


@pytest.fixture
def d2_analytic():
    """Same lengths and coupling as d2_numeric but q = 0; exact edge
    solutions, so only the coupling mixes the edges."""
    e1 = qg.Edge(1.0)
    e2 = qg.Edge(SQRT2)
    return qg.MetricGraph((e1, e2), qg.hermitian_coupling(hermitian_from_seed(7, 2)))


@pytest.fixture
def decoupled_pair():
    """Lengths (pi, pi/2), H = 0: two free intervals sharing nothing, with
    heavy eigenvalue collisions at the common sine zeros."""
    edges = (qg.Edge(math.pi), qg.Edge(math.pi / 2.0))
    return qg.MetricGraph(edges, qg.hermitian_coupling(np.zeros((4, 4))))
