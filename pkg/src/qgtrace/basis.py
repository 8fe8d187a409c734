"""Fundamental solutions on a single edge.

For the eigenvalue parameter lam = k**2 the two fundamental solutions of
-y'' + q y = lam y on [0, l] are

    c:  c(0) = 1, c'(0) = 0        s:  s(0) = 0, s'(0) = 1.

Everything here works in the lam plane, where the endpoint values are
entire functions and no square-root branch appears; the k-plane value of
any formula is obtained through lam = k**2.  The Wronskian
c(x) s'(x) - c'(x) s(x) is identically one and serves as the built-in
accuracy monitor of the integrator.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import _dop853
from .errors import ToleranceNotMet, ZeroWavenumber
from .graphs import potential_moments

DEFAULT_SPECTRUM_TOL = 1e-12
# contour sweeps integrate thousands of log samples whose noise sits well
# above the per-step tolerance, so they ask the edge integrator for more
DEFAULT_CONTOUR_TOL = 1e-13


@dataclass(frozen=True)
class BasisValues:
    """Endpoint values of the fundamental pair at x = l."""

    c: complex
    cprime: complex
    s: complex
    sprime: complex
    lam: complex

    def wronskian(self):
        return self.c * self.sprime - self.cprime * self.s


def wronskian_defect(values):
    """|c s' - c' s - 1| at the edge endpoint."""
    return abs(values.wronskian() - 1.0)


def cos_kl(lam, ell):
    """cos(k l) as an entire function of lam = k**2."""
    w = cmath.sqrt(complex(lam)) * ell
    if abs(w) < 1e-4:
        w2 = w * w
        return 1.0 - w2 / 2.0 + w2 * w2 / 24.0
    return cmath.cos(w)


def sinc_kl(lam, ell):
    """sin(k l) / k as an entire function of lam = k**2."""
    z = cmath.sqrt(complex(lam))
    w = z * ell
    if abs(w) < 1e-4:
        w2 = w * w
        return ell * (1.0 - w2 / 6.0 + w2 * w2 / 120.0)
    return cmath.sin(w) / z


def basis_zero(ell, lam):
    """Closed form for q = 0: c = cos(kl), s = sin(kl)/k."""
    co = cos_kl(lam, ell)
    si = sinc_kl(lam, ell)
    return BasisValues(c=co, cprime=-lam * si, s=si, sprime=co, lam=complex(lam))


def basis_numeric(edge, lam, tol=DEFAULT_SPECTRUM_TOL):
    """Adaptive high-order integration of the fundamental system.

    tol controls the local error per step (both relative and absolute
    against the solution scale); accepted range is (1e-14, 1e-3).
    """
    if tol is None:
        tol = DEFAULT_SPECTRUM_TOL
    if not 1e-14 < tol < 1e-3:
        raise ValueError(f"tol {tol:g} outside (1e-14, 1e-3)")
    code, data, xs, qs = edge.potential.packed()
    c, cp, s, sp, status, _ = _dop853.integrate_fundamental(
        code, data, xs, qs, float(edge.length), complex(lam), tol, tol)
    if status == _dop853.STATUS_UNDERFLOW:
        raise ToleranceNotMet(
            f"step size underflow on edge of length {edge.length:g} at lam={lam!r}")
    if status == _dop853.STATUS_TOO_MANY_STEPS:
        raise ToleranceNotMet(
            f"step budget exhausted on edge of length {edge.length:g} at lam={lam!r}")
    return BasisValues(c=c, cprime=cp, s=s, sprime=sp, lam=complex(lam))


def basis_values(edge, lam, mode="numeric", tol=DEFAULT_SPECTRUM_TOL):
    """Dispatch between the honest integrator and the q = 0 closed form.

    mode "zero_potential" ignores the stored potential entirely; it is the
    comparison-operator route, exact and cheap.
    """
    if mode == "numeric":
        return basis_numeric(edge, lam, tol)
    if mode == "zero_potential":
        return basis_zero(edge.length, lam)
    raise ValueError(f"unknown mode {mode!r}")


def basis_asymptotic(edge, k):
    """Leading large-k expansion of the endpoint values.

    Uses only the potential moments a, b and the endpoint values of q:

        c   ~ cos(kl) + a sin(kl)/k + cos(kl)/k^2 [ (qL - q0)/4 - a^2/2 ]
        c'  ~ -k sin(kl) + a cos(kl) + b sin(kl)/k
        s   ~ sin(kl)/k - a cos(kl)/k^2 + sin(kl)/k^3 [ (qL + q0)/4 - a^2/2 ]
        s'  ~ cos(kl) + a sin(kl)/k - cos(kl)/k^2 [ (qL - q0)/4 + a^2/2 ]

    The remainders decay faster than the last written term by one power of
    k (uniformly on horizontal strips after multiplying out the
    exp(|Im k| l) growth).
    """
    k = complex(k)
    if k == 0:
        raise ZeroWavenumber("asymptotic endpoint values need k != 0")
    m = potential_moments(edge)
    ell = edge.length
    a, b = m.a, m.b
    dq = 0.25 * (m.qL - m.q0)
    sq = 0.25 * (m.qL + m.q0)
    half_a2 = 0.5 * a * a
    co = cmath.cos(k * ell)
    si = cmath.sin(k * ell)
    c = co + a * si / k + co / k**2 * (dq - half_a2)
    cp = -k * si + a * co + si / k * b
    s = si / k - a * co / k**2 + si / k**3 * (sq - half_a2)
    sp = co + a * si / k - co / k**2 * (dq + half_a2)
    return BasisValues(c=c, cprime=cp, s=s, sprime=sp, lam=k * k)


def integration_stats(edge, lam, tol=DEFAULT_SPECTRUM_TOL):
    """Step count of the adaptive march; handy for tuning and tests."""
    code, data, xs, qs = edge.potential.packed()
    *_, status, nsteps = _dop853.integrate_fundamental(
        code, data, xs, qs, float(edge.length), complex(lam), tol, tol)
    return status, nsteps
