"""Exception taxonomy shared by all modules."""


class KirbyCalcError(Exception):
    """Base class for every error this package raises on purpose."""


class DimensionError(KirbyCalcError, ValueError):
    """Matrix or vector shapes do not fit the requested operation."""


class CapacityError(KirbyCalcError, ValueError):
    """Input is too large for an exhaustive desk-scale search."""


class PreconditionError(KirbyCalcError, ValueError):
    """A stated hypothesis of the operation fails on the given input."""


class InternalCheckError(KirbyCalcError, RuntimeError):
    """A post-condition that theory guarantees did not verify; a bug."""


class VerificationError(KirbyCalcError, ValueError):
    """A value-preservation check failed on a concrete witness class."""

    def __init__(self, message, witness=None):
        self.witness = witness
        if witness is not None:
            message = f"{message} (witness class {witness})"
        super().__init__(message)


class FormatError(KirbyCalcError, ValueError):
    """Malformed text input; carries line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
