"""Exception hierarchy shared across the solver."""


class DelphiError(Exception):
    """Base class for all errors raised by this package."""


# --- terms ---

class SortMismatch(DelphiError):
    pass


class EvalError(DelphiError):
    pass


class BadPosition(DelphiError):
    pass


# --- frontend ---

class ParseError(DelphiError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class ValueSyntaxError(ParseError):
    pass


class SortError(DelphiError):
    pass


class DuplicateOracleDefinition(DelphiError):
    pass


class UnknownLogic(DelphiError):
    pass


class UnsupportedFragment(DelphiError):
    """Input is well-formed but falls outside the supported fragment."""


# --- oracle runtime ---

class OracleError(DelphiError):
    pass


class OracleCrash(OracleError):
    pass


class OracleTimeout(OracleError):
    pass


class MalformedResponse(OracleError):
    pass


class FunctionalViolation(OracleError):
    """A definitional oracle returned two different outputs for one input."""


# --- SMT backend ---

class BackendError(DelphiError):
    pass


class BackendCrash(BackendError):
    pass


class BackendTimeout(BackendError):
    pass


class ModelParseError(BackendError):
    pass


# --- engines ---

class IterationLimit(DelphiError):
    pass


class InternalProgressFailure(DelphiError):
    """A refuted model recurred without any new assumption or constraint."""


class BudgetExhausted(DelphiError):
    """Enumeration stopped at its size budget without exhausting the language."""


class ExternalSolverError(DelphiError):
    pass


class UnknownTemplate(DelphiError):
    pass


class RankMismatch(DelphiError):
    pass
