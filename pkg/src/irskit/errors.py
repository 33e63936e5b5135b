"""Exception hierarchy shared by all irskit modules."""


class IrskitError(Exception):
    """Base class for all domain errors raised by irskit."""


class InvalidInput(IrskitError, ValueError):
    """A scalar argument violates its precondition (sign, range, count)."""


class InvalidGeometry(IrskitError, ValueError):
    """A geometric object violates its invariants (gaps, overlaps, layering)."""


class EvanescentOrder(IrskitError):
    """The requested diffraction order does not propagate (|sin| > 1)."""


class PhaseUnreachable(IrskitError):
    """A target reflection phase lies outside the covered phase span.

    Attributes:
        span_deg: (lo, hi) unwrapped phase span covered by the curve, degrees.
        cell_index: index of the failing cell when raised during supercell
            synthesis, else None.
    """

    def __init__(self, message, span_deg=None, cell_index=None):
        super().__init__(message)
        self.span_deg = span_deg
        self.cell_index = cell_index


class TableInvalid(IrskitError):
    """A phase-table file failed validation.

    Attributes:
        row: 1-based line number of the offending row, or None.
    """

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class InterpolationOutOfRange(IrskitError):
    """A patch size falls outside the sampled range of a phase curve."""


class LayoutInvalid(IrskitError, ValueError):
    """A panel layout cannot be realized (patch does not fit its cell)."""


class UndefinedDirectivity(IrskitError):
    """Directivity requested for an identically zero pattern."""
