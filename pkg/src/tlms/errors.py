"""Exception hierarchy shared by every module of the package."""


class TlmsError(Exception):
    """Base class for all errors raised by tlms."""


class DimensionError(TlmsError):
    pass


class DegenerateInputError(TlmsError):
    pass


class NotCompleteError(TlmsError):
    pass


class FanMismatchError(TlmsError):
    pass


class UnsupportedWeightsError(TlmsError):
    pass


class UnsupportedError(TlmsError):
    pass


class InconsistentSplittingError(TlmsError):
    pass


class InvalidMultiSectionError(TlmsError):
    """Raised when an operation needs a valid multi-section and gets one that is not."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class SizeMismatchError(TlmsError):
    pass


class RegularityError(TlmsError):
    pass


class SupportError(TlmsError):
    pass


class NilpotencyError(TlmsError):
    pass


class RankMismatchError(TlmsError):
    pass


class InvalidMorphismError(TlmsError):
    pass


class NotIndecomposableError(TlmsError):
    pass


class SeparabilityError(TlmsError):
    pass


class ArrangementError(TlmsError):
    pass


class ObstructionError(TlmsError):
    """The consistency loop cannot be closed; ``defect`` is the loop product minus identity."""

    def __init__(self, message, defect=None):
        super().__init__(message)
        self.defect = defect


class ParseError(TlmsError):
    def __init__(self, message, line=0, column=0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
