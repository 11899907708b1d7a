"""Exception types shared across the toolkit."""


class ReldivError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(ReldivError):
    """Malformed or inconsistent configuration (group, subgroup, CLI input)."""


class BudgetExceededError(ReldivError):
    """An enumeration or search hit its element/pair/step budget.

    Partial results are refused; callers should raise the budget or shrink
    the request.
    """


class NeedsLargerRadiusError(ReldivError):
    """The requested quantity cannot be certified from the given atlas."""


class AtlasFormatError(ReldivError):
    """An atlas file is not readable as such (bad magic or truncated)."""


class AtlasVersionError(AtlasFormatError):
    """An atlas file was written by an incompatible format version."""


class AtlasChecksumError(AtlasFormatError):
    """An atlas file failed checksum validation."""


class RewriteError(ReldivError):
    """Invalid rewriting system (bad rule shape or non-decreasing rule)."""


class CheckFailureError(ReldivError):
    """A recipe-level acceptance check did not hold."""
