class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured point budget."""


class ValidationError(ValueError):
    """A named precondition failed; `rule` identifies it."""

    def __init__(self, rule, message):
        super().__init__(message)
        self.rule = rule
        self.message = message
