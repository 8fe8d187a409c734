"""The secular function det(H M1 + M2) and its large-k structure.

Writing each eigenfunction component as f_j = A_j c_j + B_j s_j, the
coupling condition H Psi + Psi' = 0 becomes the 2d x 2d linear system
[H M1(k) + M2(k)] (A_1, B_1, ..., A_d, B_d)^T = 0, where the edge-j rows
of M1 carry the endpoint values (1, 0) and (c_j(l_j), s_j(l_j)) and those
of M2 the outgoing derivatives (0, 1) and (-c_j'(l_j), -s_j'(l_j)).
Eigenvalues are the zeros of phi = det(H M1 + M2).

phi is even in k (it only depends on lam = k**2), real on the real lam
axis and conjugate-symmetric, phi(conj k) = conj(phi(k)).

phi_expanded gives the explicit large-k form whose leading part is
prod_i(-k sin(k l_i)); log_ratio gives the truncated 1/k and 1/k**2
expansions of ln(phi / prod) and ln(phi / phi_0) that drive both the
per-eigenvalue asymptotics and the trace identity.  These expansions are
only valid away from the zeros of the sine factors; requests inside the
forbidden margins raise ForbiddenRegion.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import sin as _real_sin

import numpy as np

from .basis import DEFAULT_SPECTRUM_TOL, basis_values
from .errors import ForbiddenRegion, SineZero, ZeroWavenumber
from .graphs import HermitianCoupling, resolve_epsilon


@dataclass(frozen=True, eq=False)
class TransferMatrices:
    M1: np.ndarray
    M2: np.ndarray
    lam: complex


def transfer_matrices(graph, lam, mode="numeric", tol=DEFAULT_SPECTRUM_TOL):
    """Assemble M1 (endpoint values) and M2 (outgoing derivatives)."""
    d = graph.d
    M1 = np.zeros((2 * d, 2 * d), dtype=complex)
    M2 = np.zeros((2 * d, 2 * d), dtype=complex)
    for j, edge in enumerate(graph.edges):
        bv = basis_values(edge, lam, mode=mode, tol=tol)
        r0, r1 = 2 * j, 2 * j + 1
        M1[r0, r0] = 1.0
        M2[r0, r1] = 1.0
        M1[r1, r0] = bv.c
        M1[r1, r1] = bv.s
        M2[r1, r0] = -bv.cprime
        M2[r1, r1] = -bv.sprime
    return TransferMatrices(M1=M1, M2=M2, lam=complex(lam))


def _coupling_matrix(graph, H):
    if H is None:
        return graph.hermitian.matrix
    if isinstance(H, HermitianCoupling):
        return H.matrix
    return np.asarray(H, dtype=complex)


def phi_lam(graph, H, lam, mode="numeric", tol=DEFAULT_SPECTRUM_TOL):
    """Secular determinant as a function of lam = k**2."""
    tm = transfer_matrices(graph, lam, mode=mode, tol=tol)
    Hm = _coupling_matrix(graph, H)
    return complex(np.linalg.det(Hm @ tm.M1 + tm.M2))


def phi(graph, H, k, mode="numeric", tol=DEFAULT_SPECTRUM_TOL):
    """Secular determinant at wavenumber k (evaluated through lam = k**2)."""
    k = complex(k)
    return phi_lam(graph, H, k * k, mode=mode, tol=tol)


def product_ksin(graph, k):
    """prod_i (-k sin(k l_i)), the leading factor of phi."""
    k = complex(k)
    out = 1.0 + 0.0j
    for ell in graph.lengths:
        out *= -k * cmath.sin(k * ell)
    return out


def _edge_data(graph, H):
    Hm = _coupling_matrix(graph, H)
    blocks = graph.hermitian.blocks if H is None else HermitianCoupling(Hm, graph.d).blocks
    mom = graph.moments
    a = np.array([m.a for m in mom])
    b = np.array([m.b for m in mom])
    tr = np.array([blocks.tr(i) for i in range(graph.d)])
    det = np.array([blocks.det(i) for i in range(graph.d)])
    reh12 = np.array([blocks.h12(i).real for i in range(graph.d)])
    return blocks, a, b, tr, det, reh12


def phi_expanded(graph, H, k):
    """Explicit large-k expansion of phi.

    Exact for a single free edge (q = 0, d = 1, any 2x2 coupling); in
    general it matches phi up to terms two k-powers below the leading
    product.
    """
    k = complex(k)
    d = graph.d
    ells = graph.lengths
    blocks, a, b, tr, det, reh12 = _edge_data(graph, H)
    sins = np.array([cmath.sin(k * ell) for ell in ells])
    coss = np.array([cmath.cos(k * ell) for ell in ells])
    lead = -k * sins

    def prod_excluding(skip):
        out = 1.0 + 0.0j
        for o in range(d):
            if o not in skip:
                out *= lead[o]
        return out

    total = prod_excluding(())
    for i in range(d):
        single = coss[i] * (a[i] - tr[i]) - 2.0 * reh12[i]
        # own-block second order; the only 1/k**2 content of a lone edge
        second = sins[i] / k * (b[i] + det[i] - a[i] * tr[i])
        total += prod_excluding((i,)) * (single + second)
    for i in range(d):
        for j in range(i + 1, d):
            h11, h12, h21, h22 = blocks.cross(i, j)
            cross2 = abs(h11) ** 2 + abs(h12) ** 2 + abs(h21) ** 2 + abs(h22) ** 2
            pair = (
                coss[i] * coss[j]
                * (a[i] * a[j] - a[i] * tr[j] - a[j] * tr[i] - cross2 + tr[i] * tr[j])
                + coss[i] * (2.0 * (tr[i] - a[i]) * reh12[j]
                             - 2.0 * (h11 * h12.conjugate() + h22 * h21.conjugate()).real)
                + coss[j] * (2.0 * (tr[j] - a[j]) * reh12[i]
                             - 2.0 * (h11 * h21.conjugate() + h22 * h12.conjugate()).real)
                + 4.0 * reh12[i] * reh12[j]
                - 2.0 * (h12 * h21.conjugate() + h11 * h22.conjugate()).real
            )
            total += prod_excluding((i, j)) * pair
    return total


def sine_margin_cap(epsilon):
    """Uniform bound 2/sin(eps) for exp(|Im k| l)/|sin(k l)| on allowed
    contours with margin eps."""
    return 2.0 / _real_sin(epsilon)


def _check_allowed(graph, k, epsilon):
    eps = resolve_epsilon(graph, epsilon)
    cap = sine_margin_cap(eps)
    im = abs(k.imag)
    for i, ell in enumerate(graph.lengths):
        s = cmath.sin(k * ell)
        if s == 0:
            raise SineZero(f"sin(k l) vanishes for edge {i + 1} at k={k!r}")
        margin = cmath.exp(im * ell).real / abs(s)
        if margin > cap:
            raise ForbiddenRegion(
                f"edge {i + 1}: exp(|Im k| l)/|sin(k l)| = {margin:.3g} exceeds "
                f"cap {cap:.3g} for margin eps={eps:.3g}")


def log_ratio(graph, H, k, form="vs_product", epsilon=None):
    """Truncated expansion of a secular log-ratio at wavenumber k.

    form "vs_product": ln(phi / prod_i(-k sin(k l_i))) through 1/k**2.
    form "vs_phi0":    ln(phi / phi_0) through 1/k**2, phi_0 taken with
    the same coupling and zero potential.

    k must keep all sine factors clear of their forbidden intervals for
    the stated margin (epsilon defaults to 0.9 of the geometric bound).
    """
    k = complex(k)
    if k == 0:
        raise ZeroWavenumber("log-ratio expansions are in inverse powers of k")
    _check_allowed(graph, k, epsilon)
    d = graph.d
    ells = graph.lengths
    blocks, a, b, tr, det, reh12 = _edge_data(graph, H)
    sins = np.array([cmath.sin(k * ell) for ell in ells])
    cots = np.array([cmath.cos(k * ell) for ell in ells]) / sins

    if form == "vs_phi0":
        total = 0.0 + 0.0j
        for i in range(d):
            total += -cots[i] * a[i] / k
            total += (a[i] * tr[i] / sins[i] ** 2 - b[i]
                      - 0.5 * a[i] ** 2 * cots[i] ** 2
                      + 2.0 * a[i] * reh12[i] * cots[i] / sins[i]) / (k * k)
        return total
    if form != "vs_product":
        raise ValueError(f"unknown form {form!r}")

    total = 0.0 + 0.0j
    for i in range(d):
        total += (cots[i] * (tr[i] - a[i]) + 2.0 * reh12[i] / sins[i]) / k
        total += (cots[i] ** 2 * (-0.5 * (tr[i] - a[i]) ** 2)
                  + (a[i] * tr[i] - b[i] - det[i])
                  + cots[i] / sins[i] * (-2.0 * (tr[i] - a[i]) * reh12[i])
                  - 2.0 * reh12[i] ** 2 / sins[i] ** 2) / (k * k)
    for i in range(d):
        for j in range(i + 1, d):
            h11, h12, h21, h22 = blocks.cross(i, j)
            cross2 = abs(h11) ** 2 + abs(h12) ** 2 + abs(h21) ** 2 + abs(h22) ** 2
            total += (
                cots[i] * cots[j] * (-cross2)
                + cots[i] / sins[j]
                * (-2.0 * (h11 * h12.conjugate() + h22 * h21.conjugate()).real)
                + cots[j] / sins[i]
                * (-2.0 * (h11 * h21.conjugate() + h22 * h12.conjugate()).real)
                + 1.0 / (sins[i] * sins[j])
                * (-2.0 * (h12 * h21.conjugate() + h11 * h22.conjugate()).real)
            ) / (k * k)
    return total


def log_ratio_numeric(graph, H, k, form="vs_product", mode="numeric",
                      tol=DEFAULT_SPECTRUM_TOL):
    """Principal-branch log of the actual secular ratio at wavenumber k.

    The caller is responsible for staying on contours where the ratio is
    close to one so the principal branch is the continuous one; the
    adaptive contour integrator tracks branches itself and does not use
    this helper.
    """
    k = complex(k)
    num = phi(graph, H, k, mode=mode, tol=tol)
    if form == "vs_product":
        den = product_ksin(graph, k)
    elif form == "vs_phi0":
        den = phi(graph, H, k, mode="zero_potential")
    else:
        raise ValueError(f"unknown form {form!r}")
    if den == 0:
        raise SineZero(f"denominator of the secular ratio vanishes at k={k!r}")
    return cmath.log(num / den)
