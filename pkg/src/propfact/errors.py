"""Exception types shared across the package.

Exit-code mapping for the CLI: InputFormatError -> 2, CapExceeded -> 3.
"""


class PropfactError(Exception):
    """Base class for all package-specific errors."""


class InputFormatError(PropfactError):
    """Malformed graph6 string, adjacency text, or property file."""


class CapExceeded(PropfactError):
    """A configured resource bound (order cap, cross-pair cap, k cap) was hit."""


class PreconditionError(PropfactError):
    """An operation was called outside its contract (e.g. non-member graph)."""


class FlagInconsistency(PropfactError):
    """A closure flag claimed for a property was contradicted during a search.

    Raised when a downstream search relies on a flag (e.g. strictness must be
    reachable for induced-hereditary properties) and the search outcome is
    impossible under that flag.
    """
