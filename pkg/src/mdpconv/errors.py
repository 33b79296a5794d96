class IntegrityError(RuntimeError):
    """A received stream contradicts the parity checks: it was not produced by
    an erasure-only channel."""


class BudgetExceeded(RuntimeError):
    """An exhaustive check would exceed its configured work budget."""
