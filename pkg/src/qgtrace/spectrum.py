"""Eigenvalue location, counting, and pairing against the sine-zero grid.

The secular determinant is real on the real lambda axis, so real roots are
found by sign scanning plus Brent refinement.  Counting is validated
globally with an argument-principle integral over a centered square whose
half-side is an allowed level (real parts of sine zeros stay a fixed
distance away), which is what makes the count trustworthy: window-by-window
bookkeeping fails at low k, where couplings push roots across the midpoints
between consecutive sine zeros and may pull several eigenvalues negative.

Multiplicities beyond simple roots are resolved with small counting boxes
around the suspect point.  The box centered at the origin counts each
lambda root twice (k and -k collapse there), every other box counts the
lambda multiplicity directly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .contour import integrate_contour, rectangle_path
from .errors import BoundaryTooClose, CountMismatch, EpsilonTooLarge
from .graphs import resolve_epsilon
from .secular import phi_lam

# Roots with |k| below this radius are resolved by the origin counting box
# and reported as lambda = 0; the scan phases start just outside it.
ORIGIN_RADIUS = 1e-2

_SCAN_PER_WINDOW = 33
_MAX_NEG_WINDOWS = 64


# ---------------------------------------------------------------------------
# Sine-zero grid and allowed levels.

@dataclass(frozen=True)
class MuSequence:
    """Sine-zero grid nu = n pi / l_i, n >= 0, sorted by (value, edge)."""

    values: np.ndarray
    edges: np.ndarray
    ns: np.ndarray

    def __len__(self):
        return self.values.size


def mu_sequence(graph, kmax):
    vals = []
    for i, ell in enumerate(graph.lengths):
        nmax = int(math.floor(kmax * ell / math.pi))
        for n in range(nmax + 1):
            vals.append((n * math.pi / ell, i, n))
    vals.sort(key=lambda t: (t[0], t[1]))
    return MuSequence(values=np.array([v[0] for v in vals]),
                      edges=np.array([v[1] for v in vals], dtype=int),
                      ns=np.array([v[2] for v in vals], dtype=int))


def weyl_count(graph, level):
    """Expected number of eigenvalues with lambda <= level**2 (negatives and
    multiplicities included); equals len(mu_sequence(graph, level))."""
    floors = np.floor(level * graph.lengths / math.pi).astype(int)
    return int(graph.d + floors.sum())


def allowed_margin(graph, k):
    """min_i dist(k * l_i, pi Z); positive margins keep sines bounded away
    from zero on the vertical line Re k = k."""
    args = k * graph.lengths / math.pi
    return float(np.min(np.abs(args - np.round(args))) * math.pi)


def allowed_level(graph, target, epsilon=None, safety=0.9):
    """Smallest scan point >= target whose vertical line clears every
    forbidden strip by the working epsilon; within the window found, the
    point of largest margin is returned."""
    eps = resolve_epsilon(graph, epsilon, safety)
    step = eps / (4.0 * float(np.max(graph.lengths)))
    span = target + 40.0 * math.pi / float(np.min(graph.lengths))
    k = max(target, step)
    best_k, best_m = None, -1.0
    while k < span:
        m = allowed_margin(graph, k)
        if m >= eps:
            if m > best_m:
                best_k, best_m = k, m
        elif best_k is not None:
            return best_k
        k += step
    if best_k is not None:
        return best_k
    raise EpsilonTooLarge(
        f"no allowed level with margin {eps:g} found above {target:g}")


def level_schedule(graph, k_lo, k_hi, count, epsilon=None):
    """Increasing allowed levels at roughly geometric spacing."""
    if count < 2:
        return [allowed_level(graph, k_hi, epsilon)]
    ratio = (k_hi / k_lo) ** (1.0 / (count - 1))
    levels = []
    for p in range(count):
        lv = allowed_level(graph, k_lo * ratio ** p, epsilon)
        if not levels or lv > levels[-1] + 1e-9:
            levels.append(lv)
    return levels


# ---------------------------------------------------------------------------
# Argument-principle counting.

def _resolve_mode(graph, mode):
    if mode == "auto":
        return "zero_potential" if graph.has_zero_potential() else "numeric"
    return mode


def count_zeros_box(graph, H, box, mode="auto", tol=None, count_tol=0.02):
    """Number of zeros of phi(k**2), multiplicity included, inside the
    rectangle box = (re_lo, re_hi, im_lo, im_hi) of the k plane."""
    mode = _resolve_mode(graph, mode)
    path = rectangle_path(*box)

    def phi_of(lam):
        return phi_lam(graph, H, lam, mode=mode, tol=tol)

    # |phi| grows like |k|^d exp(|Im k| sum(l)) along the boundary, so the
    # near-zero test must divide that growth out before comparing samples
    # from the real axis with samples from the top of a tall box
    total_len = float(np.sum(graph.lengths))
    samples = []
    for za, zb in path.segments():
        for t in np.linspace(0.0, 1.0, 25):
            k = za + t * (zb - za)
            w = max(1.0, abs(k)) ** graph.d * math.exp(total_len * abs(k.imag))
            samples.append(abs(phi_of(k * k)) / w)
    samples = np.array(samples)
    scale = np.median(samples[samples > 0]) if np.any(samples > 0) else 0.0
    if scale == 0.0 or samples.min() < 1e-9 * scale:
        raise BoundaryTooClose(
            f"|phi| dips to {samples.min():.3e} of its boundary scale "
            f"{scale:.3e} after growth normalization")

    def integrand(k):
        lam = k * k
        h = 1e-6 * max(1.0, abs(lam))
        dphi = (phi_of(lam + h) - phi_of(lam - h)) / (2.0 * h)
        return dphi * 2.0 * k / phi_of(lam)

    winding = integrate_contour(integrand, path, tol=max(count_tol, 1e-4) * 3.0)
    count = winding / (2j * math.pi)
    nearest = round(count.real)
    if abs(count.real - nearest) > 0.05 or abs(count.imag) > 0.05 or nearest < 0:
        raise BoundaryTooClose(
            f"winding integral {count:.4f} is not close to a nonnegative integer")
    return int(nearest)


def _box_multiplicity(graph, H, center, radius, mode, tol):
    """Count zeros in a small square around a suspected k-plane root,
    shrinking the box when the boundary scan complains."""
    r = radius
    for _ in range(4):
        try:
            return count_zeros_box(
                graph, H,
                (center.real - r, center.real + r, center.imag - r, center.imag + r),
                mode=mode, tol=tol)
        except BoundaryTooClose:
            r *= 0.5
    raise BoundaryTooClose(
        f"could not isolate the root near k={center!r} (last radius {r:g})")


# ---------------------------------------------------------------------------
# Root location.

def _phi_real(graph, H, lam, mode, tol):
    return phi_lam(graph, H, complex(lam), mode=mode, tol=tol).real


def _newton_lambda(graph, H, lam0, mode, tol, max_iter=14):
    """Newton iteration on the (real) determinant in lambda; returns None
    when the iteration stalls or wanders."""
    lam = float(lam0)
    for _ in range(max_iter):
        h = 1e-6 * max(1.0, abs(lam))
        f0 = _phi_real(graph, H, lam, mode, tol)
        fp = (_phi_real(graph, H, lam + h, mode, tol)
              - _phi_real(graph, H, lam - h, mode, tol)) / (2.0 * h)
        if fp == 0.0 or not math.isfinite(fp):
            return None
        step = f0 / fp
        lam -= step
        if not math.isfinite(lam):
            return None
        if abs(step) < 1e-13 * max(1.0, abs(lam)):
            return lam
    return None


def _refine_bracket(graph, H, lam_a, lam_b, mode, tol):
    root = brentq(lambda t: _phi_real(graph, H, t, mode, tol), lam_a, lam_b,
                  xtol=1e-14, rtol=8.9e-16, maxiter=200)
    polished = _newton_lambda(graph, H, root, mode, tol, max_iter=4)
    if polished is not None and abs(polished - root) < 1e-6 * max(1.0, abs(root)):
        return polished
    return root


def _scan_roots(graph, H, k_grid, mode, tol):
    """Sign scan over a k grid; returns simple-root lambdas plus candidate
    minima (k, |phi| scale) where the sign does not change but |phi| dips."""
    lam_grid = k_grid * k_grid
    vals = np.array([_phi_real(graph, H, lam, mode, tol) for lam in lam_grid])
    roots = []
    for j in range(len(k_grid) - 1):
        va, vb = vals[j], vals[j + 1]
        if va == 0.0:
            roots.append(lam_grid[j])
        elif va * vb < 0.0:
            roots.append(_refine_bracket(graph, H, lam_grid[j], lam_grid[j + 1],
                                         mode, tol))
    if vals[-1] == 0.0:
        roots.append(lam_grid[-1])
    minima = []
    absvals = np.abs(vals)
    for j in range(1, len(k_grid) - 1):
        if absvals[j] <= absvals[j - 1] and absvals[j] <= absvals[j + 1]:
            lo = max(0, j - 5)
            hi = min(len(k_grid), j + 6)
            local = absvals[lo:hi].max()
            # an even-order root only dips quadratically at grid resolution,
            # so the pre-filter stays loose; _dip_root applies the real gate
            # after polishing.  Both adjacent products must be positive: a
            # sign change on either side means the bracket pass above already
            # owns the roots around this point.
            if local > 0 and absvals[j] < 0.05 * local \
                    and vals[j - 1] * vals[j] > 0.0 \
                    and vals[j] * vals[j + 1] > 0.0:
                minima.append((k_grid[j], absvals[j]))
    return roots, minima


def _dip_min_lambda(graph, H, lam0, mode, tol):
    """Newton on the derivative: walk to the stationary point of phi
    nearest lam0; returns None when the curvature degenerates."""
    lam = float(lam0)
    for _ in range(30):
        h = 1e-6 * max(1.0, abs(lam))
        fm = _phi_real(graph, H, lam - h, mode, tol)
        f0 = _phi_real(graph, H, lam, mode, tol)
        fp = _phi_real(graph, H, lam + h, mode, tol)
        d1 = (fp - fm) / (2.0 * h)
        d2 = (fp - 2.0 * f0 + fm) / (h * h)
        if d2 == 0.0 or not math.isfinite(d2):
            return None
        step = d1 / d2
        lam -= step
        if abs(step) < 1e-12 * max(1.0, abs(lam)):
            break
    return lam


def _dip_root(graph, H, k_dip, half_width, mode, tol):
    """Chase a |phi| dip without a sign change on the positive axis.

    Returns a list of refined lambdas: one entry when the polished
    critical point is a genuine near-zero (an even-order root, the caller
    counts its multiplicity), two entries when the valley bottom has the
    opposite sign to its shoulders (a close pair of simple roots that the
    grid straddled without sampling between them), and an empty list for
    plain amplitude dips."""
    lam = _dip_min_lambda(graph, H, k_dip * k_dip, mode, tol)
    if lam is None:
        return []
    k_new = math.sqrt(lam) if lam > 0 else 0.0
    if abs(k_new - k_dip) > half_width:
        return []
    dlam = 2.0 * max(k_new, half_width) * half_width
    f_min = _phi_real(graph, H, lam, mode, tol)
    f_lo = _phi_real(graph, H, lam - dlam, mode, tol)
    f_hi = _phi_real(graph, H, lam + dlam, mode, tol)
    lift = max(abs(f_lo), abs(f_hi))
    if lift <= 0.0:
        return []
    if abs(f_min) <= 1e-5 * lift:
        return [lam]
    if f_min * f_lo < 0.0 and f_min * f_hi < 0.0:
        return [_refine_bracket(graph, H, lam - dlam, lam, mode, tol),
                _refine_bracket(graph, H, lam, lam + dlam, mode, tol)]
    return []


def _merge_roots(roots, lam_tol):
    """Collapse near-coincident lambdas; returns (unique sorted, group sizes)."""
    if not roots:
        return [], []
    roots = sorted(roots)
    uniq = [roots[0]]
    sizes = [1]
    for lam in roots[1:]:
        if abs(lam - uniq[-1]) < lam_tol * max(1.0, abs(uniq[-1])):
            sizes[-1] += 1
        else:
            uniq.append(lam)
            sizes.append(1)
    return uniq, sizes


# ---------------------------------------------------------------------------
# The solver.

@dataclass(frozen=True)
class EigenvalueList:
    """Eigenvalues ascending with multiplicity expanded."""

    values: np.ndarray
    multiplicities: np.ndarray
    residuals: np.ndarray
    level: float
    weyl: int
    n_negative: int
    m_zero: int

    @property
    def count(self):
        return self.values.size

    @property
    def k_values(self):
        """k on the closed positive axis or the upper imaginary axis."""
        out = np.empty(self.values.size, dtype=complex)
        for j, lam in enumerate(self.values):
            out[j] = math.sqrt(lam) if lam >= 0 else 1j * math.sqrt(-lam)
        return out


def _negative_eigenvalues(graph, H, mode, tol):
    """Scan lambda = -kappa**2 window by window; stops after the first
    window with neither a sign change nor a deep minimum."""
    window = math.pi / float(np.min(graph.lengths))
    found = []
    kappa0 = ORIGIN_RADIUS
    for w in range(_MAX_NEG_WINDOWS):
        ka = kappa0 + w * window
        kb = ka + window
        grid = np.linspace(ka, kb, _SCAN_PER_WINDOW)
        lam_grid = -grid * grid
        vals = np.array([_phi_real(graph, H, lam, mode, tol) for lam in lam_grid])
        hits = []
        for j in range(len(grid) - 1):
            if vals[j] == 0.0:
                hits.append(lam_grid[j])
            elif vals[j] * vals[j + 1] < 0.0:
                # brentq wants an increasing interval; lambda decreases with kappa
                hits.append(_refine_bracket(graph, H, lam_grid[j + 1], lam_grid[j],
                                            mode, tol))
        absvals = np.abs(vals)
        spacing = grid[1] - grid[0]
        dips = 0
        for j in range(1, len(grid) - 1):
            if not (absvals[j] <= absvals[j - 1] and absvals[j] <= absvals[j + 1]):
                continue
            # same-sign triple only: a sign change on either side means the
            # bracket pass above already owns the roots around this point
            if vals[j - 1] * vals[j] <= 0.0 or vals[j] * vals[j + 1] <= 0.0:
                continue
            # |phi| grows fast along kappa, so gate the dip against its
            # neighborhood rather than the whole window maximum
            lo = max(0, j - 5)
            hi = min(len(grid), j + 6)
            local = absvals[lo:hi].max()
            if local <= 0.0 or absvals[j] > 0.05 * local:
                continue
            lam = _dip_min_lambda(graph, H, -grid[j] * grid[j], mode, tol)
            if lam is None or lam >= 0.0:
                continue
            kappa = math.sqrt(-lam)
            if abs(kappa - grid[j]) > spacing:
                continue
            dlam = 2.0 * max(kappa, spacing) * spacing
            f_min = _phi_real(graph, H, lam, mode, tol)
            f_lo = _phi_real(graph, H, lam - dlam, mode, tol)
            f_hi = _phi_real(graph, H, lam + dlam, mode, tol)
            lift = max(abs(f_lo), abs(f_hi))
            if lift <= 0.0:
                continue
            if abs(f_min) <= 1e-5 * lift:
                mult = _box_multiplicity(graph, H, 1j * kappa,
                                         0.45 * spacing, mode, tol)
                if mult > 0:
                    hits.extend([lam] * mult)
                    dips += 1
            elif f_min * f_lo < 0.0 and f_min * f_hi < 0.0:
                # a straddled pair of simple roots the grid never sampled
                # between; resolve the two brackets exactly
                hits.append(_refine_bracket(graph, H, lam - dlam, lam,
                                            mode, tol))
                hits.append(_refine_bracket(graph, H, lam, lam + dlam,
                                            mode, tol))
                dips += 1
        found.extend(hits)
        if not hits and dips == 0:
            return sorted(found)
    raise CountMismatch(
        f"negative scan still finding roots after {_MAX_NEG_WINDOWS} windows")


def _zero_multiplicity(graph, H, mode, tol):
    """Multiplicity of lambda = 0 via a small origin box; the box counts
    each lambda root twice (the k and -k copies coincide there)."""
    phi0 = abs(phi_lam(graph, H, 0.0, mode=mode, tol=tol))
    near = max(abs(phi_lam(graph, H, ORIGIN_RADIUS ** 2, mode=mode, tol=tol)),
               abs(phi_lam(graph, H, -ORIGIN_RADIUS ** 2, mode=mode, tol=tol)))
    sign_flip = (phi_lam(graph, H, ORIGIN_RADIUS ** 2, mode=mode, tol=tol).real
                 * phi_lam(graph, H, -(ORIGIN_RADIUS ** 2), mode=mode, tol=tol).real) < 0
    if phi0 > 1e-6 * max(near, 1e-300) and not sign_flip:
        return 0
    r = ORIGIN_RADIUS
    count = count_zeros_box(graph, H, (-r, r, -r, r), mode=mode, tol=tol)
    if count % 2:
        raise BoundaryTooClose(
            f"origin box count {count} is odd; a root straddles the boundary")
    return count // 2


def _positive_eigenvalues(graph, H, level, mode, tol):
    """All roots with ORIGIN_RADIUS < k <= level, as (lambda, mult) pairs."""
    lengths = graph.lengths
    max_ell = float(np.max(lengths))
    min_ell = float(np.min(lengths))

    mus = mu_sequence(graph, level)
    pos = [(m, e, n) for m, e, n in zip(mus.values, mus.edges, mus.ns) if m > 0]

    # cluster sine zeros that sit too close to chase independently
    clusters = []
    gap_floor = 0.2 * math.pi / max_ell
    for m, e, n in pos:
        if clusters and m - clusters[-1][-1][0] < gap_floor:
            clusters[-1].append((m, e, n))
        else:
            clusters.append([(m, e, n)])

    # size of the zeroth-order shifts decides where predictions take over
    moments = graph.moments
    blocks = graph.hermitian.blocks
    shifts = np.array([
        (2.0 / lengths[i]) * (abs(moments[i].a) + abs(blocks.tr(i))
                              + 2.0 * abs(blocks.h12(i)))
        for i in range(graph.d)])
    gaps = [clusters[j + 1][0][0] - clusters[j][-1][0] for j in range(len(clusters) - 1)]
    min_gap = min(gaps) if gaps else math.pi / max_ell
    k_lo = min(level, max(3.0 * math.pi / min_ell,
                          4.0 * float(shifts.max()) / max(min_gap, 1e-3)))

    roots = []

    # dense scan below k_lo
    if k_lo > ORIGIN_RADIUS:
        npts = max(64, int(math.ceil((k_lo - ORIGIN_RADIUS) / (math.pi / (40.0 * max_ell)))))
        grid = np.linspace(ORIGIN_RADIUS, min(k_lo, level), npts)
        simple, minima = _scan_roots(graph, H, grid, mode, tol)
        for lam in simple:
            roots.append((lam, 1))
        half = 0.5 * (grid[1] - grid[0])
        for k_dip, _ in minima:
            hits = _dip_root(graph, H, k_dip, 4.0 * half, mode, tol)
            if len(hits) == 2:
                # a resolved straddled pair: two simple roots, no box needed
                roots.extend((lam, 1) for lam in hits if lam > 0)
                continue
            for lam in hits:
                mult = _box_multiplicity(graph, H, complex(math.sqrt(max(lam, 0.0))),
                                         2.0 * half, mode, tol)
                if mult > 0:
                    roots.append((lam, mult))

    # prediction-led hunt per cluster above k_lo
    for ci, cluster in enumerate(clusters):
        lo_mu = cluster[0][0]
        hi_mu = cluster[-1][0]
        if hi_mu <= k_lo or lo_mu > level:
            continue
        g_prev = 0.5 * (lo_mu - clusters[ci - 1][-1][0]) if ci > 0 else 0.5 * lo_mu
        g_next = 0.5 * (clusters[ci + 1][0][0] - hi_mu) if ci + 1 < len(clusters) \
            else 0.5 * math.pi / max_ell
        w_lo = max(lo_mu - g_prev, k_lo)
        w_hi = min(hi_mu + g_next, level)
        if w_hi <= w_lo:
            continue

        hits = []
        for m, e, n in cluster:
            a_i = moments[e].a
            tr_i = blocks.tr(e)
            reh12 = blocks.h12(e).real
            lam_pred = m * m + (2.0 / lengths[e]) * (
                a_i - tr_i - ((-1.0) ** n) * 2.0 * reh12)
            lam = _newton_lambda(graph, H, lam_pred, mode, tol)
            if lam is not None and lam > 0:
                k_root = math.sqrt(lam)
                if w_lo <= k_root <= w_hi:
                    hits.append(lam)

        uniq, sizes = _merge_roots(hits, 1e-9)
        expected = len(cluster)
        if len(hits) < expected or any(s > 1 for s in sizes):
            # fall back to a window scan; coincidences get a counting box
            grid = np.linspace(w_lo, w_hi, max(8 * expected, 24))
            simple, minima = _scan_roots(graph, H, grid, mode, tol)
            uniq, sizes = _merge_roots(simple, 1e-9)
            half = grid[1] - grid[0]
            for k_dip, _ in minima:
                hits = _dip_root(graph, H, k_dip, 4.0 * half, mode, tol)
                if len(hits) == 2:
                    for lam in hits:
                        if lam > 0:
                            uniq.append(lam)
                            sizes.append(1)
                    continue
                for lam in hits:
                    if lam <= 0:
                        continue
                    mult = _box_multiplicity(graph, H, complex(math.sqrt(lam)),
                                             half, mode, tol)
                    if mult > 0:
                        uniq.append(lam)
                        sizes.append(mult)
        for lam, size in zip(uniq, sizes):
            if size == 1:
                roots.append((lam, 1))
            else:
                mult = _box_multiplicity(graph, H, complex(math.sqrt(lam)),
                                         max(1e-4, 0.01 * math.pi / max_ell),
                                         mode, tol)
                roots.append((lam, max(mult, 1)))

    # drop anything the level excludes, dedupe across phases
    roots = [(lam, m) for lam, m in roots
             if 0 < lam <= level * level * (1 + 1e-12)]
    merged = {}
    for lam, m in sorted(roots):
        for seen in merged:
            if abs(lam - seen) < 1e-9 * max(1.0, abs(seen)):
                merged[seen] = max(merged[seen], m)
                break
        else:
            merged[lam] = m
    return sorted(merged.items())


def find_eigenvalues(graph, kmax, mode="auto", tol=None, epsilon=None):
    """All eigenvalues with lambda <= K**2, where K is the first allowed
    level at or above kmax; the total is validated against the closed-form
    count for the sine product (they agree once K is allowed)."""
    mode = _resolve_mode(graph, mode)
    level = allowed_level(graph, kmax, epsilon)
    target = weyl_count(graph, level)

    H = None
    neg = _negative_eigenvalues(graph, H, mode, tol)
    m_zero = _zero_multiplicity(graph, H, mode, tol)
    pos = _positive_eigenvalues(graph, H, level, mode, tol)

    total = len(neg) + m_zero + sum(m for _, m in pos)
    if total != target:
        # one refinement round: rescan the positive axis more finely
        dense = []
        grid = np.linspace(ORIGIN_RADIUS, level,
                           max(256, int(level / (math.pi / (80.0 * float(np.max(graph.lengths))))) + 1))
        simple, minima = _scan_roots(graph, H, grid, mode, tol)
        half = grid[1] - grid[0]
        for lam in simple:
            dense.append((lam, 1))
        for k_dip, _ in minima:
            hits = _dip_root(graph, H, k_dip, 4.0 * half, mode, tol)
            if len(hits) == 2:
                dense.extend((lam, 1) for lam in hits if lam > 0)
                continue
            for lam in hits:
                if lam <= 0:
                    continue
                mult = _box_multiplicity(graph, H, complex(math.sqrt(lam)), half,
                                         mode, tol)
                if mult > 0:
                    dense.append((lam, mult))
        merged = {}
        for lam, m in sorted(dense + pos):
            for seen in merged:
                if abs(lam - seen) < 1e-9 * max(1.0, abs(seen)):
                    merged[seen] = max(merged[seen], m)
                    break
            else:
                merged[lam] = m
        pos = sorted((lam, m) for lam, m in merged.items()
                     if 0 < lam <= level * level * (1 + 1e-12))
        total = len(neg) + m_zero + sum(m for _, m in pos)
    if total != target:
        raise CountMismatch(
            f"found {total} eigenvalues up to level {level:.6g}, expected {target} "
            f"({len(neg)} negative, {m_zero} at zero, {sum(m for _, m in pos)} positive)")

    values = list(neg) + [0.0] * m_zero
    mults = [1] * len(neg) + [m_zero] * m_zero
    for lam, m in pos:
        values.extend([lam] * m)
        mults.extend([m] * m)
    values = np.array(values)
    mults = np.array(mults, dtype=int)
    order = np.argsort(values, kind="stable")
    values = values[order]
    mults = mults[order]
    residuals = np.array([abs(phi_lam(graph, H, lam, mode=mode, tol=tol))
                          for lam in values])
    return EigenvalueList(values=values, multiplicities=mults,
                          residuals=residuals, level=float(level),
                          weyl=target, n_negative=len(neg), m_zero=m_zero)


# ---------------------------------------------------------------------------
# Pairing eigenvalues with the sine-zero grid.

@dataclass(frozen=True)
class Partition:
    """Eigenvalues paired one-to-one, ascending, with the sine-zero grid.

    Entry j pairs values[j] with the slot (edges[j], ns[j]) at
    mu[j] = ns[j] * pi / l_{edges[j]}.  disorder_flag marks spectra whose
    negative and zero eigenvalues overflow the d slots at mu = 0, where the
    pairing is a bookkeeping convention rather than an asymptotic statement.
    """

    values: np.ndarray
    mu: np.ndarray
    edges: np.ndarray
    ns: np.ndarray
    level: float
    disorder_flag: bool

    def subsequence(self, edge):
        mask = self.edges == edge
        order = np.argsort(self.ns[mask])
        return self.ns[mask][order], self.values[mask][order]

    def __len__(self):
        return self.values.size


def partition(graph, eigs):
    """Pair the j-th smallest eigenvalue with the j-th smallest sine zero."""
    from .errors import LengthMismatch

    mus = mu_sequence(graph, eigs.level)
    if len(mus) != eigs.count:
        raise LengthMismatch(
            f"{eigs.count} eigenvalues against {len(mus)} grid slots at level "
            f"{eigs.level:.6g}")
    flag = (eigs.n_negative + eigs.m_zero) > graph.d
    return Partition(values=eigs.values.copy(), mu=mus.values.copy(),
                     edges=mus.edges.copy(), ns=mus.ns.copy(),
                     level=eigs.level, disorder_flag=flag)
