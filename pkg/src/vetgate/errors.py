"""Exception hierarchy.

Data failures (:class:`ValidationError`) and programmer mistakes
(:class:`UsageError`) are kept apart so callers can catch the former
without masking the latter.
"""


class VetgateError(Exception):
    pass


class ValidationError(VetgateError):
    """Raised by the assert family when a check fails."""

    def __init__(self, message, *, label=None, reason=None):
        super().__init__(message)
        self.label = label
        self.reason = reason


class UsageError(VetgateError, ValueError):
    """Malformed spec, rule, or value construction."""


class RuleParseError(UsageError):

    def __init__(self, position, expected, found, rule=None):
        self.position = position
        self.expected = expected
        self.found = found
        self.rule = rule
        super().__init__(
            f'invalid rule at position {position}: expected {expected}, found {found}')


class ColumnParseError(VetgateError, ValueError):
    """A text cell could not be parsed as the requested type."""

    def __init__(self, index, text, tag):
        self.index = index
        self.text = text
        self.tag = tag
        super().__init__(f'cell {index} cannot be parsed as {tag}: {text!r}')


class VerdictMismatch(VetgateError):
    """Benchmark implementations disagree on a scenario input."""
