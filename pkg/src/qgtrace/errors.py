"""Exception types raised by the solver layers.

Every error that callers are expected to catch derives from QGraphError so
that the CLI can map failures onto exit codes without string matching.
"""


class QGraphError(Exception):
    """Base class for all package errors."""


class GraphSpecError(QGraphError):
    """A graph description file (or dict) is malformed or incomplete."""


class OverlappingEndpoints(QGraphError):
    """Vertex endpoint lists overlap or fail to cover every endpoint."""


class SizeMismatch(QGraphError):
    """A matrix block has the wrong shape for its endpoint list."""


class NonUnitaryBlock(QGraphError):
    """A vertex scattering block is not unitary within tolerance."""


class MinusOneInSpectrum(QGraphError):
    """The vertex unitary has -1 as an eigenvalue; the coupling cannot be
    written with a finite Hermitian matrix against the derivative trace."""


class NonHermitianInput(QGraphError):
    """A matrix that must be Hermitian is not, beyond tolerance."""


class ToleranceNotMet(QGraphError):
    """The adaptive integrator could not reach the requested local error."""


class ZeroWavenumber(QGraphError):
    """An expansion in inverse powers of k was requested at k = 0."""


class ForbiddenRegion(QGraphError):
    """k sits too close to a zero of one of the sine factors, where the
    inverse-power expansions and contour bounds are invalid."""


class EpsilonTooLarge(QGraphError):
    """The requested margin exceeds the bound that keeps gaps between the
    forbidden intervals around sine zeros open."""


class BoundaryTooClose(QGraphError):
    """A contour or box boundary passes too close to a zero of the secular
    function for the winding integral to be trusted."""


class QuadratureNotConverged(QGraphError):
    """Adaptive panel subdivision hit its depth limit before reaching the
    requested tolerance."""


class CountMismatch(QGraphError):
    """The number of located eigenvalues disagrees with the lattice count
    d + sum_i floor(K * l_i / pi) at an allowed level."""


class LengthMismatch(QGraphError):
    """Two sequences that must pair one-to-one have different lengths."""


class CommensurateResonance(QGraphError):
    """A single-point asymptotic prediction was requested where another
    edge's sine vanishes at the same point; use the cluster form."""


class IncompatibleIndex(QGraphError):
    """A reference residue row was requested with an index n outside the
    row's validity (n = 0 rows versus n != 0 rows)."""


class SineZero(QGraphError):
    """sin(k*l) vanishes exactly where a margin or ratio was requested."""


class PoleOnPath(QGraphError):
    """The integrand is singular (or numerically enormous) on the path."""
