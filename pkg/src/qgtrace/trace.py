"""Regularized trace sums, their closed-form target, and eigenvalue
asymptotics derived from the secular log-ratio.

The heat-kernel-free route taken here needs three ingredients: the paired
spectra of the graph with and without potentials (pairing against the
sine-zero grid), the boundary-value constant the partial sums converge to,
and an independent contour evaluation of the same sum, obtained by
integrating the branch-tracked logarithm of the secular ratio against
2k dk over a flat rectangle sitting on the real axis.  Conjugate symmetry
folds the lower half into an imaginary part, and any constant offset in
the unwrapped phase cancels because k**2 agrees at the two real endpoints.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .basis import DEFAULT_CONTOUR_TOL
from .errors import (
    CommensurateResonance,
    EpsilonTooLarge,
    PoleOnPath,
    QuadratureNotConverged,
)
from .graphs import resolve_epsilon
from .secular import phi_lam
from .spectrum import (
    allowed_level,
    allowed_margin,
    find_eigenvalues,
    level_schedule,
    partition,
)

_MAX_TRACK_EVALS = 400_000
_RESONANCE_SIN_TOL = 1e-12
_LOW_CONFIDENCE_SIN = 1e-3


# ---------------------------------------------------------------------------
# The boundary-value constant and the regularized terms.

def trace_rhs(graph):
    """sum_i (q_i(0) + q_i(l_i)) / 4 - a_i / l_i, the value the regularized
    partial sums approach."""
    total = 0.0
    for edge, mom in zip(graph.edges, graph.moments):
        total += 0.25 * (mom.q0 + mom.qL) - mom.a / edge.length
    return total


@dataclass(frozen=True)
class TraceTerms:
    """Per-slot regularized differences at a fixed validated level."""

    edges: np.ndarray
    ns: np.ndarray
    mu: np.ndarray
    lam_q: np.ndarray
    lam_0: np.ndarray
    terms: np.ndarray
    level: float
    disorder_flag: bool

    def __len__(self):
        return self.terms.size


def trace_terms(graph, kmax, mode="auto", tol=None, epsilon=None):
    """Pair the spectra with and without potentials slot by slot and form
    lam_in(q) - lam_in(0) - 2 a_i / l_i."""
    eigs_q = find_eigenvalues(graph, kmax, mode=mode, tol=tol, epsilon=epsilon)
    bare = graph.zero_potential()
    eigs_0 = find_eigenvalues(bare, kmax, mode="zero_potential", tol=tol,
                              epsilon=epsilon)
    if abs(eigs_q.level - eigs_0.level) > 1e-9:
        eigs_0 = find_eigenvalues(bare, eigs_q.level - 1e-12,
                                  mode="zero_potential", tol=tol,
                                  epsilon=epsilon)
    part_q = partition(graph, eigs_q)
    part_0 = partition(bare, eigs_0)

    key_to_lam0 = {(e, n): lam for e, n, lam
                   in zip(part_0.edges, part_0.ns, part_0.values)}
    lam0 = np.array([key_to_lam0[(e, n)] for e, n
                     in zip(part_q.edges, part_q.ns)])
    a_over_l = np.array([graph.moments[e].a / graph.lengths[e]
                         for e in part_q.edges])
    terms = part_q.values - lam0 - 2.0 * a_over_l
    return TraceTerms(edges=part_q.edges, ns=part_q.ns, mu=part_q.mu,
                      lam_q=part_q.values, lam_0=lam0, terms=terms,
                      level=part_q.level,
                      disorder_flag=part_q.disorder_flag or part_0.disorder_flag)


def trace_lhs_partial(terms, level):
    """Partial sum over the slots whose sine zero lies below the level."""
    mask = terms.mu < level
    return float(terms.terms[mask].sum())


# ---------------------------------------------------------------------------
# Branch-tracked contour evaluation.

def _node(k, w, phase):
    if w == 0 or not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise PoleOnPath(f"secular ratio vanished or blew up at k={k!r}")
    return (math.log(abs(w)) + 1j * phase) * 2.0 * k


class _TrackState:
    """Carries everything the log tracker keeps between segments: phase
    continuity, the evaluation budget, the sample noise scale, and the sum
    of accepted panel error estimates."""

    def __init__(self, w0, p0, noise_w):
        self.w = w0
        self.phase = p0
        self.noise_w = noise_w
        self.evals = 0
        self.err_sum = 0.0


def _track_segment(wfun, za, zb, state, tol_per_len):
    """March the unwrapped log of wfun along one straight segment with
    adaptive Simpson; returns the segment integral and updates state.

    Samples of wfun carry noise (in numeric mode, leftovers of the edge
    integrator), so the Simpson difference of a panel never drops below
    about noise_w * |2k| * h no matter how far it is subdivided.  A plain
    tolerance-proportional-to-h controller then spirals down: rejects
    halve h while borderline acceptances never regrow it.  Acceptance
    therefore gets an explicit noise floor at that scale, and growth after
    acceptance is at least 1.2x so h cannot walk down irreversibly.  If a
    panel still rejects after shrinking 2^26-fold, far below any feature
    the secular ratio can have along an allowed contour, the observed
    error rate is promoted into noise_w as a backstop."""
    seg_len = abs(zb - za)
    if seg_len == 0:
        return 0.0 + 0.0j
    u = (zb - za) / seg_len
    t = 0.0
    h = seg_len / 8.0
    k_cur, w_cur, p_cur = za, state.w, state.phase
    f_cur = _node(k_cur, w_cur, p_cur)
    total = 0.0 + 0.0j

    while t < seg_len * (1.0 - 1e-14):
        h = min(h, seg_len - t)
        if h < 1e-12 * seg_len:
            raise QuadratureNotConverged(
                f"step underflow near k={k_cur!r} while tracking the log")
        ks = [za + (t + f * h) * u for f in (0.25, 0.5, 0.75, 1.0)]
        ws = [wfun(k) for k in ks]
        state.evals += 4
        if state.evals > _MAX_TRACK_EVALS:
            raise QuadratureNotConverged("evaluation budget exhausted on the contour")
        jumps = []
        prev = w_cur
        ok = True
        for w in ws:
            if w == 0 or not (math.isfinite(w.real) and math.isfinite(w.imag)):
                raise PoleOnPath(f"secular ratio vanished or blew up near k={ks[-1]!r}")
            j = cmath.phase(w / prev)
            if abs(j) > 0.9:
                ok = False
                break
            jumps.append(j)
            prev = w
        if ok:
            # a hidden full turn between sample points shows up as a mismatch
            # between the direct jump and the two half-jumps
            d_half1 = cmath.phase(ws[1] / w_cur)
            d_half2 = cmath.phase(ws[3] / ws[1])
            if abs(d_half1 - (jumps[0] + jumps[1])) > 1e-8 \
                    or abs(d_half2 - (jumps[2] + jumps[3])) > 1e-8:
                ok = False
        if not ok:
            h *= 0.5
            continue

        p_q1 = p_cur + jumps[0]
        p_m = p_q1 + jumps[1]
        p_q3 = p_m + jumps[2]
        p_t = p_q3 + jumps[3]
        f_q1 = _node(ks[0], ws[0], p_q1)
        f_m = _node(ks[1], ws[1], p_m)
        f_q3 = _node(ks[2], ws[2], p_q3)
        f_t = _node(ks[3], ws[3], p_t)
        hc = h * u
        s1 = hc / 6.0 * (f_cur + 4.0 * f_m + f_t)
        s2 = hc / 12.0 * (f_cur + 4.0 * f_q1 + 2.0 * f_m + 4.0 * f_q3 + f_t)
        err = abs(s2 - s1) / 15.0
        floor = 0.5 * state.noise_w * max(2.0 * abs(ks[1]), 1.0) * h
        tol_here = max(tol_per_len * h, floor)
        if err > tol_here and h < seg_len * 2.0 ** -26:
            state.noise_w = max(state.noise_w,
                                2.0 * (err / h) / max(2.0 * abs(ks[1]), 1.0))
            tol_here = err
        if err <= tol_here:
            total += s2 + (s2 - s1) / 15.0
            state.err_sum += err
            t += h
            k_cur, w_cur, p_cur, f_cur = ks[3], ws[3], p_t, f_t
            grow = 1.1 * (tol_here / err) ** 0.2 if err > 0 else 3.0
            h *= min(3.0, max(1.2, grow))
        else:
            h *= 0.5
    state.w = w_cur
    state.phase = p_cur
    return total


@dataclass(frozen=True)
class TraceContour:
    """Contour evaluation of sum(lam(q) - lam(0)) below the level.

    err_bound sums the accepted panel error estimates, mapped to the value
    scale; sample noise enters incoherently, so the actual error is usually
    well under this."""

    value: float
    level: float
    integral: complex
    err_bound: float


def _contour_height(graph):
    """Height of the integration rectangle.

    Every zero of the secular ratio lies on the real or imaginary k axis
    (the eigenvalues are real), so the path only has to clear the
    imaginary zeros, whose size is set by the coupling strength and by how
    negative the potentials get.  Staying low also keeps the edge
    solutions small: at large Im k the determinant cancels exponentially
    growing entries and sample noise blows up with it."""
    hnorm = float(np.linalg.norm(graph.hermitian.matrix, 2))
    qneg = 0.0
    for edge in graph.edges:
        xs = np.linspace(0.0, edge.length, 129)
        qneg = max(qneg, float(max(0.0, -np.min(edge.potential.value(xs)))))
    return max(3.0, 2.5 * hnorm + math.sqrt(qneg) + 1.0)


def trace_lhs_contour(graph, kmax, mode="auto", tol=None, quad_tol=1e-8,
                      epsilon=None, level=None, height=None):
    """Evaluate sum over lambda <= K**2 of (lam(q) - lam(0)) by integrating
    the tracked log of phi/phi_0 against 2k dk over the flat rectangle
    K -> K + iT -> -K + iT -> -K; conjugate symmetry folds in the lower
    half, so the closed loop is 2i times the imaginary part and
    value = -Im(J) / (2 pi).  The height T only needs to clear the purely
    imaginary zeros (see _contour_height); any such rectangle encloses
    exactly the eigenvalue pairs below the level.

    quad_tol is the requested absolute budget for the integral.  In numeric
    mode, global error accumulation leaves each log sample with relative
    noise several decades above the per-step tolerance of the edge
    integrator (about 25 * tol**0.75, fit on instrumented runs), so the
    tracker floors its panel acceptance at that scale and the result is as
    good as the noise allows rather than quad_tol.  That is why this
    routine defaults to a tighter edge tolerance than the spectrum code.
    err_bound adds up accepted panel estimates and is pessimistic in the
    noisy regime since the sample noise enters largely incoherently."""
    if level is None:
        level = allowed_level(graph, kmax, epsilon)
    else:
        eps = resolve_epsilon(graph, epsilon)
        if allowed_margin(graph, level) < eps:
            raise EpsilonTooLarge(
                f"level {level:g} sits inside a forbidden strip for epsilon {eps:g}")
    if mode == "auto":
        mode = "zero_potential" if graph.has_zero_potential() else "numeric"
    bare = graph.zero_potential()
    ode_tol = DEFAULT_CONTOUR_TOL if tol is None else tol
    if mode == "numeric":
        sample_noise = max(25.0 * ode_tol ** 0.75, 5e-15)
    else:
        sample_noise = 5e-15
    if height is None:
        height = _contour_height(graph)

    def wfun(k):
        lam = k * k
        num = phi_lam(graph, None, lam, mode=mode, tol=ode_tol)
        den = phi_lam(bare, None, lam, mode="zero_potential", tol=ode_tol)
        if den == 0:
            raise PoleOnPath(f"comparison determinant vanished at k={k!r}")
        return num / den

    n = level
    t = float(height)
    vertices = [complex(n, 0.0), complex(n, t), complex(-n, t), complex(-n, 0.0)]
    w0 = wfun(vertices[0])
    state = _TrackState(w0, cmath.phase(w0), sample_noise)
    total = 0.0 + 0.0j
    tol_per_len = quad_tol / (4.0 * n + 2.0 * t)
    for za, zb in zip(vertices, vertices[1:]):
        total += _track_segment(wfun, za, zb, state, tol_per_len)
    return TraceContour(value=-total.imag / (2.0 * math.pi),
                        level=float(n), integral=total,
                        err_bound=state.err_sum / (2.0 * math.pi))


# ---------------------------------------------------------------------------
# Per-eigenvalue and per-cluster asymptotics.

def _cross_invariants(blocks, i, j):
    if i < j:
        c11, c12, c21, c22 = blocks.cross(i, j)
    else:
        # Hermitian coupling: the (i, j) block is the adjoint of (j, i)
        b11, b12, b21, b22 = blocks.cross(j, i)
        c11, c12 = b11.conjugate(), b21.conjugate()
        c21, c22 = b12.conjugate(), b22.conjugate()
    abs2 = (abs(c11) ** 2 + abs(c12) ** 2 + abs(c21) ** 2 + abs(c22) ** 2)
    re_1122 = 2.0 * (c11 * c12.conjugate() + c22 * c21.conjugate()).real
    re_alt = 2.0 * (c12 * c21.conjugate() + c11 * c22.conjugate()).real
    re_cols = 2.0 * (c11 * c21.conjugate() + c22 * c12.conjugate()).real
    return abs2, re_1122, re_alt, re_cols


@dataclass(frozen=True)
class AsymptoticPrediction:
    edge: int
    n: int
    mu: float
    leading: float
    first_order: float
    second_order: float
    low_confidence: bool
    dropped: tuple = ()

    @property
    def value(self):
        return self.leading + self.first_order + self.second_order


def predict_eigenvalue(graph, edge, n):
    """Two-correction estimate of lam_{edge,n} for large n.

    Raises CommensurateResonance when some other edge has a sine zero at
    the same mu (use predict_cluster_sum for the whole tied group); flags
    low confidence when a sine in the correction is nearly zero without
    being resonant."""
    if n < 1:
        raise CommensurateResonance(
            "asymptotic form needs n >= 1; the mu = 0 slots carry no expansion")
    lengths = graph.lengths
    blocks = graph.hermitian.blocks
    mom = graph.moments
    ell = lengths[edge]
    mu = n * math.pi / ell

    first = (2.0 / ell) * (mom[edge].a - blocks.tr(edge).real
                           - ((-1.0) ** n) * 2.0 * blocks.h12(edge).real)

    second = 0.0
    low = False
    for j in range(graph.d):
        if j == edge:
            continue
        arg = mu * lengths[j]
        s = math.sin(arg)
        if abs(s) < _RESONANCE_SIN_TOL:
            raise CommensurateResonance(
                f"edges {edge} and {j} share the sine zero at mu={mu:g}")
        if abs(s) < _LOW_CONFIDENCE_SIN:
            low = True
        c = math.cos(arg) / s
        abs2, re_1122, re_alt, re_cols = _cross_invariants(blocks, edge, j)
        parity = (-1.0) ** n
        second += (c * abs2 + re_1122 / s
                   + parity * re_alt / s + parity * c * re_cols)
    second *= 2.0 / (n * math.pi)
    return AsymptoticPrediction(edge=edge, n=n, mu=mu, leading=mu * mu,
                                first_order=first, second_order=second,
                                low_confidence=low)


@dataclass(frozen=True)
class ClusterPrediction:
    members: tuple
    mu: float
    value: float
    dropped: tuple
    low_confidence: bool


def predict_cluster_sum(graph, members):
    """Estimate of sum(lam_{i,n_i}) over slots sharing one mu; the
    cross-edge correction skips resonant pairs and records them."""
    lengths = graph.lengths
    blocks = graph.hermitian.blocks
    mom = graph.moments
    mus = [n * math.pi / lengths[i] for i, n in members]
    mu = mus[0]
    if any(abs(m - mu) > 1e-9 * max(1.0, mu) for m in mus):
        raise CommensurateResonance(
            f"cluster members {members!r} do not share one sine zero")
    total = len(members) * mu * mu
    dropped = []
    low = False
    for i, n in members:
        total += (2.0 / lengths[i]) * (mom[i].a - blocks.tr(i).real
                                       - ((-1.0) ** n) * 2.0 * blocks.h12(i).real)
        cross = 0.0
        for j in range(graph.d):
            if j == i:
                continue
            arg = mu * lengths[j]
            s = math.sin(arg)
            if abs(s) < _RESONANCE_SIN_TOL:
                dropped.append((i, j))
                continue
            if abs(s) < _LOW_CONFIDENCE_SIN:
                low = True
            c = math.cos(arg) / s
            abs2, re_1122, re_alt, re_cols = _cross_invariants(blocks, i, j)
            parity = (-1.0) ** n
            cross += (c * abs2 + re_1122 / s
                      + parity * re_alt / s + parity * c * re_cols)
        total += (2.0 / (n * math.pi)) * cross
    return ClusterPrediction(members=tuple(members), mu=mu, value=total,
                             dropped=tuple(dropped), low_confidence=low)


def asymptotic_rows(graph, part, n_min=1):
    """Compare measured subsequences against the predictions, slot groups
    sharing a mu handled as clusters.  Returns a list of dicts ready for
    tabular output."""
    rows = []
    order = np.lexsort((part.edges, part.mu))
    groups = []
    for idx in order:
        mu = part.mu[idx]
        if groups and abs(mu - groups[-1][0]) < 1e-9 * max(1.0, mu):
            groups[-1][1].append(idx)
        else:
            groups.append((mu, [idx]))
    # the n_min cut acts on whole groups: splitting a resonant cluster
    # would compare a partial measured sum against a full-subspace value
    groups = [(mu, idxs) for mu, idxs in groups
              if min(part.ns[i] for i in idxs) >= n_min]
    for mu, idxs in groups:
        if len(idxs) == 1:
            idx = idxs[0]
            edge, n = int(part.edges[idx]), int(part.ns[idx])
            pred = predict_eigenvalue(graph, edge, n)
            rows.append({
                "kind": "single", "edges": (edge,), "ns": (n,), "mu": mu,
                "measured": float(part.values[idx]), "predicted": pred.value,
                "defect": float(part.values[idx]) - pred.value,
                "low_confidence": pred.low_confidence, "dropped": (),
            })
        else:
            members = [(int(part.edges[i]), int(part.ns[i])) for i in idxs]
            pred = predict_cluster_sum(graph, members)
            measured = float(part.values[idxs].sum())
            rows.append({
                "kind": "cluster",
                "edges": tuple(m[0] for m in members),
                "ns": tuple(m[1] for m in members), "mu": mu,
                "measured": measured, "predicted": pred.value,
                "defect": measured - pred.value,
                "low_confidence": pred.low_confidence, "dropped": pred.dropped,
            })
    return rows


# ---------------------------------------------------------------------------
# Convergence study.

@dataclass(frozen=True)
class TraceReport:
    rhs: float
    levels: np.ndarray
    partial_sums: np.ndarray
    errors: np.ndarray
    fit_c: float
    fit_alpha: float
    terms: TraceTerms
    contour_value: float = math.nan
    contour_delta: float = math.nan

    @property
    def final_error(self):
        return float(self.errors[-1]) if self.errors.size else math.nan


def _tail_fit(levels, errors):
    mask = errors > 1e-13
    if mask.sum() < 2:
        return math.nan, math.nan
    slope, intercept = np.polyfit(np.log(levels[mask]), np.log(errors[mask]), 1)
    return float(math.exp(intercept)), float(-slope)


def convergence_report(graph, kmax, n_levels=6, mode="auto", tol=None,
                       epsilon=None, k_lo=None, with_contour=False,
                       quad_tol=1e-8):
    """Partial sums of the regularized terms at a ladder of validated
    levels, their distance to the boundary-value constant, and a power-law
    fit of the tail; optionally an independent contour evaluation at the
    top level."""
    terms = trace_terms(graph, kmax, mode=mode, tol=tol, epsilon=epsilon)
    if k_lo is None:
        k_lo = max(4.0, 2.0 * math.pi / float(np.min(graph.lengths)))
    k_lo = min(k_lo, 0.5 * terms.level)
    levels = np.array(level_schedule(graph, k_lo, terms.level, n_levels,
                                     epsilon=epsilon))
    # the ladder tops out at the level the terms were computed at
    levels = levels[levels <= terms.level + 1e-9]
    if levels.size == 0 or abs(levels[-1] - terms.level) > 1e-9:
        levels = np.append(levels, terms.level)
    rhs = trace_rhs(graph)
    sums = np.array([trace_lhs_partial(terms, lv) for lv in levels])
    errors = np.abs(sums - rhs)
    fit_c, fit_alpha = _tail_fit(levels, errors)

    contour_value = math.nan
    contour_delta = math.nan
    if with_contour:
        tc = trace_lhs_contour(graph, kmax, mode=mode, tol=tol,
                               quad_tol=quad_tol, epsilon=epsilon,
                               level=terms.level)
        contour_value = tc.value
        # the contour sums lam(q) - lam(0); adding back the slot counts of
        # 2 a_i / l_i turns the partial sum into the same quantity
        back = sum((2.0 * graph.moments[i].a / graph.lengths[i])
                   * (math.floor(terms.level * graph.lengths[i] / math.pi) + 1)
                   for i in range(graph.d))
        contour_delta = contour_value - (float(terms.terms.sum()) + back)
    return TraceReport(rhs=rhs, levels=levels, partial_sums=sums,
                       errors=errors, fit_c=fit_c, fit_alpha=fit_alpha,
                       terms=terms, contour_value=contour_value,
                       contour_delta=contour_delta)
