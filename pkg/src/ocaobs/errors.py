"""Exception types. Every error carries a stable ``code`` used by the CLI."""


class OcaError(Exception):
    code = "E_GENERIC"


class StructuralError(OcaError, ValueError):
    """An automaton or word violates a structural invariant."""

    code = "E_STRUCTURE"


class AlphabetMismatch(StructuralError):
    code = "E_ALPHABET"


class NotAnEncoding(OcaError, ValueError):
    """A visibly word is not the encoding of any observability word.

    ``position`` is 1-based and points at the offending symbol, or at the
    first symbol of an unfinished block of trailing counter operations.
    """

    code = "E_NOT_ENCODING"

    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"not an encoding at position {position}: {reason}")


class CapacityError(OcaError, RuntimeError):
    code = "E_CAPACITY"


class CertificationError(OcaError, RuntimeError):
    code = "E_NOT_CERTIFIED"


class CapInstability(OcaError, RuntimeError):
    code = "E_CAP_UNSTABLE"


class NotNormalized(OcaError, ValueError):
    code = "E_NOT_NORMALIZED"


class Cancelled(OcaError):
    code = "E_CANCELLED"


class ParseError(OcaError, ValueError):
    """Syntax or semantic error in a text format, with 1-based line/column."""

    code = "E_PARSE"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line else (f"col {col}: " if col else "")
        super().__init__(where + message)
