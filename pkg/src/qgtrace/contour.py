"""Piecewise-linear contours and adaptive panel quadrature in the k plane.

Closed paths are polygons (rectangles for counting boxes and levels,
many-sided polygons standing in for circles; winding integrals only care
about what a closed path encloses, not its shape).  Each segment is
integrated with 15-point Gauss-Kronrod panels, the embedded 7-point Gauss
rule supplying the error estimate, and panels are bisected until the
budgeted tolerance is met.

residue_reference returns the thirteen tabulated values of
(1/2 pi i) times the loop integral around n pi / l for the integrand
family built from cot(k l), 1/sin(k l) and inverse powers of k; these are
the building blocks that turn the secular log-ratio expansions into
eigenvalue shifts, and they double as self-check targets for the
quadrature engine.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    IncompatibleIndex,
    PoleOnPath,
    QuadratureNotConverged,
    SineZero,
)

# 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule
# (classical QUADPACK values; Gauss nodes are the odd-indexed ones).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
G_WEIGHTS = np.zeros(15)
G_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])

_MAX_PANELS = 400_000


@dataclass(frozen=True)
class ContourPath:
    """Piecewise-linear oriented path; closed paths repeat no vertex."""

    vertices: tuple
    closed: bool = True

    def segments(self):
        v = self.vertices
        pairs = list(zip(v, v[1:]))
        if self.closed:
            pairs.append((v[-1], v[0]))
        return pairs

    def length(self):
        return sum(abs(b - a) for a, b in self.segments())


def rectangle_path(re_lo, re_hi, im_lo, im_hi):
    """Counterclockwise rectangle boundary."""
    return ContourPath(vertices=(
        complex(re_hi, im_lo),
        complex(re_hi, im_hi),
        complex(re_lo, im_hi),
        complex(re_lo, im_lo),
    ))


def circle_path(center, radius, n=24):
    """Counterclockwise polygon standing in for a circle."""
    center = complex(center)
    pts = tuple(center + radius * cmath.exp(2j * math.pi * t / n) for t in range(n))
    return ContourPath(vertices=pts)


def _panel(f, za, zb):
    mid = 0.5 * (za + zb)
    half = 0.5 * (zb - za)
    fk = 0.0 + 0.0j
    fg = 0.0 + 0.0j
    for x, wk, wg in zip(GK_NODES, GK_WEIGHTS, G_WEIGHTS):
        node = mid + half * x
        try:
            val = f(node)
        except ZeroDivisionError:
            raise PoleOnPath(f"integrand divides by zero at {node!r}") from None
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise PoleOnPath(f"integrand not finite at {node!r}")
        fk += wk * val
        if wg:
            fg += wg * val
    return half * fk, abs(half) * abs(fk - fg)


def integrate_contour(f, path, tol=1e-8):
    """Adaptively integrate f along the path to absolute tolerance tol."""
    total_len = path.length()
    if total_len == 0:
        return 0.0 + 0.0j
    result = 0.0 + 0.0j
    npanels = 0
    for za, zb in path.segments():
        stack = [(za, zb)]
        while stack:
            a, b = stack.pop()
            npanels += 1
            if npanels > _MAX_PANELS:
                raise QuadratureNotConverged(
                    f"panel budget {_MAX_PANELS} exhausted at tol={tol:g}")
            val, err = _panel(f, a, b)
            if err <= tol * abs(b - a) / total_len or abs(b - a) < 1e-13 * total_len:
                if err > 10 * tol:
                    raise QuadratureNotConverged(
                        f"panel near {a!r} stalled with error {err:.3e}")
                result += val
            else:
                m = 0.5 * (a + b)
                stack.append((a, m))
                stack.append((m, b))
    return result


def sine_margin(k, ell):
    """exp(|Im k| l) / |sin(k l)|, the contour-bound figure of merit."""
    k = complex(k)
    s = cmath.sin(k * ell)
    if s == 0:
        raise SineZero(f"sin(k l) = 0 at k={k!r}, l={ell:g}")
    return math.exp(abs(k.imag) * ell) / abs(s)


# ---------------------------------------------------------------------------
# Reference residues: (1/2 pi i) * loop integral around n pi / l.

_NONZERO_ROWS = {
    "cot": lambda n, ell: 1.0 / ell,
    "csc": lambda n, ell: (-1.0) ** n / ell,
    "cot_over_k": lambda n, ell: 1.0 / (n * math.pi),
    "csc_over_k": lambda n, ell: (-1.0) ** n / (n * math.pi),
    "cot_sq_over_k": lambda n, ell: -1.0 / (n * math.pi) ** 2,
    "cot_csc_over_k": lambda n, ell: -((-1.0) ** n) / (n * math.pi) ** 2,
    "csc_sq_over_k": lambda n, ell: -1.0 / (n * math.pi) ** 2,
}

_ZERO_ROWS = {
    "cot_over_k_zero": 0.0,
    "csc_over_k_zero": 0.0,
    "cot_sq_over_k_zero": -2.0 / 3.0,
    "cot_csc_over_k_zero": -1.0 / 6.0,
    "csc_sq_over_k_zero": 1.0 / 3.0,
    "inv_k_zero": 1.0,
}

RESIDUE_KINDS = ("cot", "csc",
                 "cot_over_k", "cot_over_k_zero",
                 "csc_over_k", "csc_over_k_zero",
                 "cot_sq_over_k", "cot_sq_over_k_zero",
                 "cot_csc_over_k", "cot_csc_over_k_zero",
                 "csc_sq_over_k", "csc_sq_over_k_zero",
                 "inv_k_zero")


def residue_reference(kind, n, ell):
    """Closed-form value of the tabulated loop integral around n pi / l."""
    if n != int(n):
        raise IncompatibleIndex(f"n={n!r} must be an integer")
    n = int(n)
    if kind in ("cot", "csc"):
        return _NONZERO_ROWS[kind](n, ell)
    if kind in _ZERO_ROWS:
        if n != 0:
            raise IncompatibleIndex(f"kind {kind!r} is the n = 0 row, got n={n}")
        return _ZERO_ROWS[kind]
    if kind in _NONZERO_ROWS:
        if n == 0:
            raise IncompatibleIndex(f"kind {kind!r} needs n != 0; use {kind}_zero")
        return _NONZERO_ROWS[kind](n, ell)
    raise IncompatibleIndex(f"unknown residue kind {kind!r}")


def residue_integrand(kind, ell):
    """The integrand matching residue_reference (without the 1/2 pi i)."""
    base = kind.removesuffix("_zero")

    def cot(k):
        return cmath.cos(k * ell) / cmath.sin(k * ell)

    def csc(k):
        return 1.0 / cmath.sin(k * ell)

    table = {
        "cot": cot,
        "csc": csc,
        "cot_over_k": lambda k: cot(k) / k,
        "csc_over_k": lambda k: csc(k) / k,
        "cot_sq_over_k": lambda k: cot(k) ** 2 / k,
        "cot_csc_over_k": lambda k: cot(k) * csc(k) / k,
        "csc_sq_over_k": lambda k: csc(k) ** 2 / k,
        "inv_k": lambda k: 1.0 / k,
    }
    if base not in table:
        raise IncompatibleIndex(f"unknown residue kind {kind!r}")
    return table[base]


def standard_residue_loop(n, ell, radius_factor=0.25):
    """A loop around n pi / l that keeps all other sine zeros outside."""
    return circle_path(n * math.pi / ell, radius_factor * math.pi / ell)


@dataclass(frozen=True)
class RoucheReport:
    level: float
    zeros_phi: int
    zeros_product: int

    @property
    def equal(self):
        return self.zeros_phi == self.zeros_product


def product_zero_count(graph, level):
    """Zeros of prod_i(-k sin(k l_i)) inside the centered square of
    half-side `level`: a 2d-fold zero at the origin plus the symmetric
    pairs of real sine zeros."""
    floors = np.floor(level * graph.lengths / math.pi).astype(int)
    return int(2 * graph.d + 2 * floors.sum())


def rouche_verify(graph, H, level, mode="auto", tol=None, count_tol=0.02):
    """Compare the winding count of phi on the centered square against the
    closed-form count for the leading sine product."""
    from .spectrum import count_zeros_box  # deferred to avoid an import cycle

    zeros = count_zeros_box(graph, H, (-level, level, -level, level),
                            mode=mode, tol=tol, count_tol=count_tol)
    return RoucheReport(level=float(level), zeros_phi=zeros,
                        zeros_product=product_zero_count(graph, level))
