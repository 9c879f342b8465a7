"""
Exception hierarchy shared by the Dyck-pattern syzygy toolkit.

Validation errors map to CLI exit code 2, consistency errors to exit code 3.
"""


class DyckresError(Exception):
    """Base class for every error raised by this package."""
    pass


# ---------------------------
# Validation (bad input)
# ---------------------------

class ValidationError(DyckresError):
    """Raised when user-supplied data fails validation."""
    pass


class MalformedPartition(ValidationError):
    """Raised when a part is negative or the parts increase."""
    pass


class NotDyck(ValidationError):
    """Raised when a box sequence is not a Dyck path."""
    pass


class OverlapError(ValidationError):
    """Raised when paths overlap each other or the base partition."""
    pass


class TooManyRows(ValidationError):
    """Raised when a partition has more nonzero parts than allowed."""
    pass


class BadShape(ValidationError):
    """Raised when the superalgebra shape violates m >= n >= 1."""
    pass


class NotACorner(ValidationError):
    """Raised when a row index does not carry a corner of the partition."""
    pass


class BadArgs(ValidationError):
    """Raised when numeric arguments are out of range."""
    pass


# ---------------------------
# Internal consistency
# ---------------------------

class ConsistencyError(DyckresError):
    """Raised when a computed value contradicts an invariant."""
    pass


class NotAPartition(ConsistencyError):
    """Raised when a box set that must be a Young diagram is not one."""
    pass


class NegativeMultiplicity(ConsistencyError):
    """Raised when inverting Kac classes yields a negative multiplicity."""
    pass


# ---------------------------
# Storage
# ---------------------------

class StorageError(DyckresError):
    """Raised when configuration, cache or golden-file operations fail."""
    pass
