"""Exception types shared across the package."""


class EqdiscoError(Exception):
    """Base class for all package errors."""


# --- expression grammar ---

class ParseError(EqdiscoError):
    """Malformed expression text. Carries the character position of the fault."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
        self.message = message


class ValidationError(EqdiscoError):
    """Structurally well-formed expression that violates the problem schema."""


class ArityError(EqdiscoError):
    """Row or parameter vector length does not match the expression."""


# --- fitting / data ---

class SchemaError(EqdiscoError):
    """Dataset columns do not match the expected variable schema."""


class RangeError(EqdiscoError):
    """Sampling range or input value outside a generator's valid domain."""


class NonNumericCell(EqdiscoError):
    def __init__(self, row: int, col: str, value: str):
        super().__init__(f"non-numeric value {value!r} at row {row}, column {col!r}")
        self.row = row
        self.col = col


class RowCountMismatch(UserWarning):
    """Loaded file row count differs from the catalog's expected count (non-fatal)."""


class CatalogError(EqdiscoError):
    """Unknown benchmark problem name."""


# --- metrics ---

class LengthMismatch(EqdiscoError):
    """Paired vectors have different lengths."""


class DegenerateTarget(EqdiscoError):
    """Target vector carries no usable signal for the requested metric."""


class UnknownVariable(EqdiscoError):
    """Named input column does not exist in the dataset."""


# --- generators / backends ---

class MissingBinding(EqdiscoError):
    def __init__(self, placeholder: str):
        super().__init__(f"missing or empty binding for placeholder {{{placeholder}}}")
        self.placeholder = placeholder


class TransportError(EqdiscoError):
    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} (after {attempts} attempt(s))")
        self.attempts = attempts


class HttpStatusError(EqdiscoError):
    def __init__(self, code: int, body: str = ""):
        super().__init__(f"HTTP status {code}: {body[:200]}")
        self.code = code


class EmptyCompletion(EqdiscoError):
    """Endpoint answered with no usable assistant text."""


class NoExpressionFound(EqdiscoError):
    """Completion contained no fenced block and no parseable line."""


class BackendError(EqdiscoError):
    """A generation or analysis backend failed after exhausting retries."""


# --- run orchestration ---

class ConfigError(EqdiscoError):
    """Run configuration file is missing, malformed, or inconsistent."""


class IoError(EqdiscoError):
    """Run artifact could not be read or written."""


class MissingLog(EqdiscoError):
    """Run directory lacks the iteration log needed for reporting."""


class VersionMismatch(EqdiscoError):
    """Checkpoint was written by an incompatible version."""


class CorruptCheckpoint(EqdiscoError):
    """Checkpoint payload does not match its recorded checksum."""
