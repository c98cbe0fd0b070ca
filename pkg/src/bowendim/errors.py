"""Exception types shared across the package."""


class BowendimError(Exception):
    """Base class for all package errors."""


class InputError(BowendimError):
    """Malformed argument: unknown letter, bad word, invalid range."""


class ConfigurationError(BowendimError):
    """Request exceeds what the materialized schedule can answer."""


class IntegrityError(BowendimError):
    """The schedule itself is inconsistent (empty pruned alphabet, bad incidence)."""


class BudgetError(BowendimError):
    """An enumeration would exceed the configured word/point budget."""


class BuildError(BowendimError):
    """A system builder rejected its inputs (image escapes codomain, nesting broken)."""


class CertificationError(BowendimError):
    """A certified bound could not be produced (no contracting block, missing K)."""


class BracketingError(BowendimError):
    """Bisection endpoints do not straddle a sign change."""


class UnsupportedError(BowendimError):
    """The requested operation does not apply to this system class."""


class SchemaError(BowendimError):
    """Config file violates the documented schema; carries the offending field path."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
