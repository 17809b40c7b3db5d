"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A configuration or contract precondition was violated."""


class ValidityRangeError(ValueError):
    """A bound was queried below the x for which its inequality is proven.

    The message names the source inequality; callers must not treat this as
    a value of the bound.
    """


class ResourceError(RuntimeError):
    """An allocation failed; the message carries the required byte count."""
