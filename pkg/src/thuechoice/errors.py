class BudgetExceeded(RuntimeError):
    """A guarded search or campaign ran past its allowance."""


class InvariantBreach(AssertionError):
    """Something the construction guarantees did not hold; always a bug."""
