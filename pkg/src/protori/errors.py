"""Exception hierarchy shared by all modules."""


class ProtoriError(Exception):
    """Base class; the CLI turns any subclass into an error verdict."""

    code = "error"


class ZeroInput(ProtoriError, ValueError):
    code = "zero_input"


class MixedRadixMismatch(ProtoriError, ValueError):
    code = "mixed_radix_mismatch"


class InsufficientPrecision(ProtoriError, ValueError):
    code = "insufficient_precision"


class NotInDual(ProtoriError, ValueError):
    code = "not_in_dual"


class IllFormedHom(ProtoriError, ValueError):
    code = "ill_formed_hom"


class CompositionMismatch(ProtoriError, ValueError):
    code = "composition_mismatch"


class DimensionMismatch(ProtoriError, ValueError):
    code = "dimension_mismatch"


class NotAMember(ProtoriError, ValueError):
    code = "not_a_member"


class ZeroVector(ProtoriError, ValueError):
    code = "zero_vector"


class NotIdempotentOnA(ProtoriError, ValueError):
    code = "not_idempotent_on_group"


class ParseError(ProtoriError):
    code = "parse_error"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class SemanticError(ProtoriError):
    code = "semantic_error"
