"""Exception hierarchy shared by every gatesep module."""


class GateSepError(Exception):
    """Base class for all errors raised by gatesep."""


class ShapeError(GateSepError, ValueError):
    """Matrix dimensions do not fit the requested operation."""


class SizeError(ShapeError):
    """A dimension exceeds the configured maximum."""


class ContractError(GateSepError, ValueError):
    """An input violates a precondition (non-Hermitian, non-unitary, ...)."""


class NonHermitianError(ContractError):
    pass


class NonUnitaryError(ContractError):
    pass


class CriterionViolation(GateSepError):
    """A tensor term has more than one non-scalar factor."""

    def __init__(self, message, term_indices=(), factor_indices=()):
        super().__init__(message)
        self.term_indices = list(term_indices)
        self.factor_indices = list(factor_indices)


class NotSeparableError(GateSepError):
    """The operator-Schmidt oracle found Schmidt rank > 1 across a cut."""

    def __init__(self, message, spectrum=None, cut_index=None):
        super().__init__(message)
        self.spectrum = spectrum
        self.cut_index = cut_index


class BorderlineError(NotSeparableError):
    """The Schmidt ratio sits inside the tolerance band; no confident verdict."""


class ReconstructionError(GateSepError):
    """A synthesized factorization failed its residual post-condition."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ParseError(GateSepError, ValueError):
    """Malformed input file; carries 1-based line and column."""

    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)
