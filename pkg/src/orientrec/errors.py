"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should
raise the most specific type that applies.
"""


class DataError(Exception):
    """A file or payload could not be read, parsed, or validated."""


class NumericError(ValueError):
    """A numeric parameter is out of its valid domain, or a numeric
    routine failed (singular system, infeasible size, ...)."""
