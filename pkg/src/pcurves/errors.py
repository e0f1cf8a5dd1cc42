"""Exception types shared across the package."""


class PCurvesError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PCurvesError):
    """Input data violates a structural invariant (bad surface, cover, orbit...).

    ``location`` optionally points into the offending document, e.g.
    ``orbits[2].winding``.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class DegeneracyError(PCurvesError):
    """A perturbed asymptotic operator has spectrum at the requested point."""

    def __init__(self, message, kernel_winding=None):
        self.kernel_winding = kernel_winding
        super().__init__(message)


class MissingDataError(PCurvesError):
    """Declared data required by an operation was not provided."""


class ConsistencyError(PCurvesError):
    """Independently computed quantities disagree; the input data is not
    realizable by an actual holomorphic curve."""


class SpectralError(PCurvesError):
    """The numerical spectral oracle failed to produce reliable output."""
