"""Metric graphs with self-adjoint vertex couplings, flower-model form.

Conventions used throughout the package:

* A graph has d edges, edge j identified with the interval [0, l_j].
* Endpoint slots are ordered (start_1, end_1, start_2, end_2, ...), so in
  0-based indexing slot 2*j is the start and slot 2*j + 1 the end of edge j.
* Boundary traces: Psi collects the endpoint values of a function, Psi'
  the outgoing derivatives (f'(0) at a start, -f'(l) at an end).
* All vertices are merged into a single vertex carrying one 2d x 2d
  unitary U; the coupling condition is (U - I) Psi + i (U + I) Psi' = 0.
  Whenever -1 is not an eigenvalue of U this is equivalent to
  H Psi + Psi' = 0 with the Hermitian matrix H = -i (U + I)^{-1} (U - I).

The potential on an edge is real-valued; supported forms are zero,
constant, polynomial in x, and a table of samples joined by linear
interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    EpsilonTooLarge,
    GraphSpecError,
    MinusOneInSpectrum,
    NonHermitianInput,
    NonUnitaryBlock,
    OverlappingEndpoints,
    SizeMismatch,
)

HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-10
MINUS_ONE_GAP = 1e-10

# integer codes used to hand a potential to the compiled integrator
P_ZERO, P_CONST, P_POLY, P_TABLE = 0, 1, 2, 3

_EMPTY = np.zeros(0, dtype=np.float64)


class Potential:
    """Base class; a real potential on one edge, evaluated on [0, l]."""

    kind = "abstract"

    def value(self, x):
        raise NotImplementedError

    def integral(self, x0, x1):
        """Exact integral of the potential over [x0, x1]."""
        raise NotImplementedError

    def packed(self):
        """(code, data, xs, qs) arrays consumed by the compiled integrator."""
        raise NotImplementedError

    def is_zero(self):
        return False


class ZeroPotential(Potential):
    kind = "zero"

    def value(self, x):
        if np.ndim(x):
            return np.zeros(np.shape(x))
        return 0.0

    def integral(self, x0, x1):
        return 0.0

    def packed(self):
        return P_ZERO, _EMPTY, _EMPTY, _EMPTY

    def is_zero(self):
        return True

    def __repr__(self):
        return "ZeroPotential()"


class ConstantPotential(Potential):
    kind = "constant"

    def __init__(self, value):
        self.c = float(value)

    def value(self, x):
        if np.ndim(x):
            return np.full(np.shape(x), self.c)
        return self.c

    def integral(self, x0, x1):
        return self.c * (x1 - x0)

    def packed(self):
        return P_CONST, np.array([self.c]), _EMPTY, _EMPTY

    def is_zero(self):
        return self.c == 0.0

    def __repr__(self):
        return f"ConstantPotential({self.c!r})"


class PolynomialPotential(Potential):
    """q(x) = sum_m coeffs[m] * x**m with ascending coefficients."""

    kind = "polynomial"

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise GraphSpecError("polynomial coefficients must be a non-empty 1-d sequence")

    def value(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def integral(self, x0, x1):
        anti = np.concatenate([[0.0], self.coeffs / np.arange(1, self.coeffs.size + 1)])
        return (np.polynomial.polynomial.polyval(x1, anti)
                - np.polynomial.polynomial.polyval(x0, anti))

    def packed(self):
        return P_POLY, self.coeffs, _EMPTY, _EMPTY

    def is_zero(self):
        return not np.any(self.coeffs)

    def __repr__(self):
        return f"PolynomialPotential({self.coeffs.tolist()!r})"


class TablePotential(Potential):
    """Sampled potential, linearly interpolated between strictly increasing
    abscissae.  The table must cover the whole edge."""

    kind = "table"

    def __init__(self, xs, qs):
        self.xs = np.asarray(xs, dtype=float)
        self.qs = np.asarray(qs, dtype=float)
        if self.xs.ndim != 1 or self.xs.shape != self.qs.shape or self.xs.size < 2:
            raise GraphSpecError("table potential needs matching xs/qs with at least two samples")
        if not np.all(np.diff(self.xs) > 0):
            raise GraphSpecError("table abscissae must be strictly increasing")

    def value(self, x):
        return np.interp(x, self.xs, self.qs)

    def integral(self, x0, x1):
        inside = self.xs[(self.xs > x0) & (self.xs < x1)]
        knots = np.concatenate([[x0], inside, [x1]])
        return float(np.trapezoid(np.interp(knots, self.xs, self.qs), knots))

    def packed(self):
        return P_TABLE, _EMPTY, self.xs, self.qs

    def __repr__(self):
        return f"TablePotential(n={self.xs.size})"


@dataclass(frozen=True, eq=False)
class Edge:
    length: float
    potential: Potential = field(default_factory=ZeroPotential)

    def __post_init__(self):
        object.__setattr__(self, "length", float(self.length))


@dataclass(frozen=True)
class PotentialMoments:
    """Endpoint data and integral moments of one edge potential.

    a = (1/2) * integral of q over the edge,
    b = (q(l) + q(0))/4 + (integral of q)**2 / 8,
    so that b - a**2/2 = (q(l) + q(0))/4.
    """

    a: float
    b: float
    q0: float
    qL: float
    integral: float


def potential_moments(edge):
    q = edge.potential
    total = q.integral(0.0, edge.length)
    q0 = float(q.value(0.0))
    qL = float(q.value(edge.length))
    a = 0.5 * total
    b = 0.25 * (qL + q0) + 0.125 * total * total
    return PotentialMoments(a=a, b=b, q0=q0, qL=qL, integral=total)


@dataclass(frozen=True, eq=False)
class CouplingSpec:
    """Vertex coupling given in one of three equivalent ways.

    kind == "hermitian": matrix is H itself (2d x 2d Hermitian).
    kind == "unitary":   matrix is the full vertex unitary U (2d x 2d).
    kind == "vertices":  blocks is a list of (U_v, endpoints) pairs with
                         1-based endpoint slots partitioning {1, ..., 2d}.
    """

    kind: str
    matrix: np.ndarray | None = None
    blocks: tuple | None = None


def hermitian_coupling(H):
    return CouplingSpec(kind="hermitian", matrix=np.asarray(H, dtype=complex))


def unitary_coupling(U):
    return CouplingSpec(kind="unitary", matrix=np.asarray(U, dtype=complex))


def vertex_coupling(blocks):
    frozen = tuple((np.asarray(U, dtype=complex), tuple(int(e) for e in eps))
                   for U, eps in blocks)
    return CouplingSpec(kind="vertices", blocks=frozen)


def assemble_flower_unitary(vertex_couplings, d):
    """Assemble the merged 2d x 2d vertex unitary from per-vertex blocks.

    vertex_couplings is a sequence of (U_v, endpoints) pairs; endpoints are
    1-based slots into the (start_1, end_1, start_2, end_2, ...) ordering.
    The endpoint lists must partition {1, ..., 2d} exactly.
    """
    n = 2 * d
    U = np.zeros((n, n), dtype=complex)
    seen = set()
    for idx, (Uv, endpoints) in enumerate(vertex_couplings):
        Uv = np.asarray(Uv, dtype=complex)
        m = len(endpoints)
        if Uv.shape != (m, m):
            raise SizeMismatch(
                f"vertex {idx}: block shape {Uv.shape} does not match {m} endpoints")
        defect = np.abs(Uv.conj().T @ Uv - np.eye(m)).max()
        if defect > UNITARITY_TOL:
            raise NonUnitaryBlock(f"vertex {idx}: unitarity defect {defect:.3e}")
        for e in endpoints:
            if not 1 <= e <= n:
                raise OverlappingEndpoints(f"vertex {idx}: endpoint {e} outside 1..{n}")
            if e in seen:
                raise OverlappingEndpoints(f"endpoint {e} assigned to more than one vertex")
            seen.add(e)
        rows = np.asarray(endpoints, dtype=int) - 1
        U[np.ix_(rows, rows)] = Uv
    if len(seen) != n:
        missing = sorted(set(range(1, n + 1)) - seen)
        raise OverlappingEndpoints(f"endpoints {missing} not assigned to any vertex")
    return U


@dataclass(frozen=True, eq=False)
class HermitianCoupling:
    """The matrix H of the coupling condition H Psi + Psi' = 0."""

    matrix: np.ndarray
    d: int

    @cached_property
    def blocks(self):
        return BlockEntries(self.matrix)


def coupling_hermitian(spec, d=None):
    """Reduce a CouplingSpec to the Hermitian form, or fail loudly.

    Unitary input requires -1 to stay clear of the spectrum of U (gap
    larger than 1e-10); Dirichlet-type couplings are rejected here.
    """
    if spec.kind == "hermitian":
        H = np.asarray(spec.matrix, dtype=complex)
        if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] % 2:
            raise SizeMismatch(f"coupling matrix shape {H.shape} is not (2d, 2d)")
        scale = max(1.0, np.abs(H).max())
        defect = np.abs(H - H.conj().T).max()
        if defect > HERMITICITY_TOL * scale:
            raise NonHermitianInput(f"Hermiticity defect {defect:.3e}")
        H = 0.5 * (H + H.conj().T)
        dd = H.shape[0] // 2
        if d is not None and dd != d:
            raise SizeMismatch(f"coupling is for {dd} edges, graph has {d}")
        return HermitianCoupling(matrix=H, d=dd)
    if spec.kind == "unitary":
        U = np.asarray(spec.matrix, dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] % 2:
            raise SizeMismatch(f"vertex unitary shape {U.shape} is not (2d, 2d)")
        n = U.shape[0]
        defect = np.abs(U.conj().T @ U - np.eye(n)).max()
        if defect > UNITARITY_TOL:
            raise NonUnitaryBlock(f"unitarity defect {defect:.3e}")
        gap = np.abs(np.linalg.eigvals(U) + 1.0).min()
        if gap <= MINUS_ONE_GAP:
            raise MinusOneInSpectrum(
                f"-1 lies in the spectrum of the vertex unitary (gap {gap:.3e}); "
                "no Hermitian coupling matrix exists for this condition")
        eye = np.eye(n)
        H = -1j * np.linalg.solve(U + eye, U - eye)
        H = 0.5 * (H + H.conj().T)
        return coupling_hermitian(hermitian_coupling(H), d)
    if spec.kind == "vertices":
        if d is None:
            raise GraphSpecError("edge count is required to assemble vertex blocks")
        U = assemble_flower_unitary(spec.blocks, d)
        return coupling_hermitian(unitary_coupling(U), d)
    raise GraphSpecError(f"unknown coupling kind {spec.kind!r}")


class BlockEntries:
    """2x2 block accessors for the Hermitian coupling matrix.

    Edge indices are 0-based here; edge i owns slots 2i (start) and
    2i + 1 (end).  For a pair i < j the four cross entries are
    h11 = H[2i, 2j], h12 = H[2i, 2j+1], h21 = H[2i+1, 2j],
    h22 = H[2i+1, 2j+1].
    """

    def __init__(self, H):
        self.H = np.asarray(H, dtype=complex)
        self.d = self.H.shape[0] // 2

    def h11(self, i):
        return self.H[2 * i, 2 * i]

    def h12(self, i):
        return self.H[2 * i, 2 * i + 1]

    def h22(self, i):
        return self.H[2 * i + 1, 2 * i + 1]

    def tr(self, i):
        return (self.h11(i) + self.h22(i)).real

    def det(self, i):
        return (self.h11(i) * self.h22(i)).real - abs(self.h12(i)) ** 2

    def cross(self, i, j):
        if not i < j:
            raise ValueError("cross blocks are defined for i < j")
        H = self.H
        return (H[2 * i, 2 * j], H[2 * i, 2 * j + 1],
                H[2 * i + 1, 2 * j], H[2 * i + 1, 2 * j + 1])

    def cross_abs2(self, i, j):
        h11, h12, h21, h22 = self.cross(i, j)
        return abs(h11) ** 2 + abs(h12) ** 2 + abs(h21) ** 2 + abs(h22) ** 2


@dataclass(frozen=True, eq=False)
class MetricGraph:
    edges: tuple
    coupling: CouplingSpec

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def d(self):
        return len(self.edges)

    @cached_property
    def lengths(self):
        return np.array([e.length for e in self.edges])

    @cached_property
    def hermitian(self):
        return coupling_hermitian(self.coupling, self.d)

    @cached_property
    def moments(self):
        return tuple(potential_moments(e) for e in self.edges)

    def zero_potential(self):
        """The comparison graph: same lengths and coupling, q = 0."""
        return MetricGraph(
            edges=tuple(Edge(e.length, ZeroPotential()) for e in self.edges),
            coupling=self.coupling)

    def has_zero_potential(self):
        return all(e.potential.is_zero() for e in self.edges)


def epsilon_bound(graph):
    """Largest admissible sine-zero margin for this set of edge lengths.

    Forbidden intervals (n pi/l_i - eps/l_i, n pi/l_i + eps/l_i) have total
    density 2 eps sum_i(1/l_i) per unit of k; keeping that below half the
    tightest zero spacing pi/max(l) requires
    eps < pi / (4 max_j(l_j) sum_i(1/l_i)).
    """
    ells = graph.lengths
    return float(np.pi / (4.0 * ells.max() * np.sum(1.0 / ells)))


def resolve_epsilon(graph, epsilon=None, safety=0.9):
    """Validate a margin against the geometric bound, or pick the default."""
    bound = epsilon_bound(graph)
    if epsilon is None:
        return safety * bound
    epsilon = float(epsilon)
    if epsilon >= bound:
        raise EpsilonTooLarge(
            f"eps={epsilon:g} exceeds the bound {bound:g}; forbidden intervals "
            "would swallow entire gaps between sine zeros")
    if epsilon <= 0:
        raise EpsilonTooLarge(f"eps={epsilon:g} must be positive")
    return epsilon


@dataclass(frozen=True)
class Diagnostic:
    code: str
    where: str
    message: str

    def __str__(self):
        return f"{self.code} at {self.where}: {self.message}"


def validate_graph(graph):
    """Collect structural problems without raising.

    Returns a list of Diagnostic records; an empty list means the graph is
    usable by the solvers.
    """
    found = []

    def flag(code, where, message):
        found.append(Diagnostic(code=code, where=where, message=message))

    for i, edge in enumerate(graph.edges):
        where = f"edge {i + 1}"
        if not np.isfinite(edge.length) or edge.length <= 0:
            flag("NonPositiveLength", where, f"length {edge.length!r} must be positive")
            continue
        pot = edge.potential
        if isinstance(pot, TablePotential):
            if pot.xs[0] > 0.0 or pot.xs[-1] < edge.length:
                flag("TableDomainMismatch", where,
                     f"table covers [{pot.xs[0]:g}, {pot.xs[-1]:g}], "
                     f"edge needs [0, {edge.length:g}]")
            if not np.all(np.isfinite(pot.qs)):
                flag("NonFiniteValue", where, "table contains non-finite samples")
        elif isinstance(pot, PolynomialPotential):
            if not np.all(np.isfinite(pot.coeffs)):
                flag("NonFiniteValue", where, "polynomial has non-finite coefficients")
        elif isinstance(pot, ConstantPotential):
            if not np.isfinite(pot.c):
                flag("NonFiniteValue", where, "constant potential is non-finite")

    try:
        graph.hermitian
    except NonHermitianInput as exc:
        flag("NonHermitianCoupling", "coupling", str(exc))
    except NonUnitaryBlock as exc:
        flag("NonUnitaryCoupling", "coupling", str(exc))
    except MinusOneInSpectrum as exc:
        flag("MinusOneInSpectrum", "coupling", str(exc))
    except (SizeMismatch, OverlappingEndpoints, GraphSpecError) as exc:
        flag(type(exc).__name__, "coupling", str(exc))
    return found
