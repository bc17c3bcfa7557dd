"""Exception hierarchy.

Every error carries a short machine code (``E_RING``, ``E_ARITY`` ...) so
the command line front end and tests can dispatch on it without string
matching.
"""


class ForgeError(Exception):
    code = "E_FORGE"

    def __init__(self, message="", **context):
        super().__init__(message)
        self.context = context

    def __str__(self):
        base = super().__str__()
        return f"{self.code}: {base}" if base else self.code


class RingError(ForgeError):
    code = "E_RING"


class RingMapError(ForgeError):
    code = "E_RINGMAP"


class DimensionError(ForgeError):
    code = "E_DIM"


class ArityError(ForgeError):
    code = "E_ARITY"


class TruncationError(ForgeError):
    code = "E_TRUNC"


class DegreeError(ForgeError):
    code = "E_DEGREE"


class AntisymmetryError(ForgeError):
    code = "E_ANTISYM"


class ModuleAxiomError(ForgeError):
    code = "E_MODULE"


class SetupError(ForgeError):
    code = "E_SETUP"


class OperadKindError(ForgeError):
    code = "E_OPERAD"


class ScopeError(ForgeError):
    code = "E_SCOPE"


class ChainError(ForgeError):
    code = "E_CHAIN"


class JacobiError(ForgeError):
    code = "E_JACOBI"


class ObstructedError(ForgeError):
    code = "E_OBSTRUCTED"


class ParseError(ForgeError):
    code = "E_PARSE"

    def __init__(self, message="", line=0, column=0):
        super().__init__(f"line {line}, column {column}: {message}", line=line, column=column)
        self.line = line
        self.column = column


class ValidationError(ForgeError):
    code = "E_VALIDATE"

    def __init__(self, message="", line=None, column=None, **context):
        if line:
            where = f"line {line}" + (f", column {column}" if column else "")
            message = f"{where}: {message}"
        super().__init__(message, line=line, column=column, **context)
