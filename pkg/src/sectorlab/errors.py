"""Exception types shared across sector-lab modules."""


class SectorLabError(Exception):
    """Base class for all sector-lab errors."""


class InvalidParameterError(SectorLabError, ValueError):
    """An argument violates an operation's precondition."""


class FileFormatError(SectorLabError, ValueError):
    """A complex/rep/scenario file could not be parsed."""


class NotConnectedError(SectorLabError):
    """The underlying graph of a complex is not connected."""


class DisconnectedConfigurationSpaceError(SectorLabError):
    """A configuration-space builder produced a disconnected move graph."""

    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = components


class BackendUnavailableError(SectorLabError):
    """No group backend can reduce words for the given presentation."""


class PossiblyInfiniteGroupError(SectorLabError):
    """Coset enumeration exceeded its bound without closing."""


class InvalidRepresentationError(SectorLabError):
    """Matrices fail unitarity or do not satisfy the relators."""


class InvalidRegionError(SectorLabError):
    """A region does not satisfy the requirements of the operation."""


class ConvergenceFailureError(SectorLabError):
    """An iterative eigensolver did not converge."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class TruncationTooSmallError(SectorLabError):
    """A truncated cover has no interior vertex."""


class DecompositionFailureError(SectorLabError):
    """Cover spectrum does not match the predicted sector decomposition."""


class NumericalFailureError(SectorLabError):
    """A numerically computed object violates a structural requirement."""


class UnsupportedGroupError(SectorLabError):
    """Character-table machinery cannot handle the given group."""
