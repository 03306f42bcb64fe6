"""Exception hierarchy shared by all curation components."""


class CurationError(Exception):
    """Base class for expected, user-facing failures."""


class ConflictError(CurationError):
    """A write collided with existing state (duplicate id, stale revision)."""


class NotFoundError(CurationError):
    """The referenced document, collection, or file does not exist."""


class ProtocolError(CurationError):
    """An operation was attempted out of order (e.g. a version-label gap)."""


class IntegrityError(CurationError):
    """Stored state violates a structural invariant and cannot be processed."""


class LeaseViolationError(CurationError):
    """A task submission arrived from a non-assignee or after lease expiry."""


class FormatError(CurationError):
    """An input file does not match the expected on-disk format."""


class PreconditionError(CurationError):
    """An operation's stated precondition does not hold (use a flag to force)."""


class ValidationError(CurationError):
    """A domain object violates its type invariants."""
