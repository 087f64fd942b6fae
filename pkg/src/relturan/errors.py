"""Exception types shared by the library and the command line."""


class InputError(ValueError):
    """Invalid argument or malformed data."""


class GuardError(RuntimeError):
    """A resource guard refused the computation."""


class BudgetExceeded(GuardError):
    """Exact search stopped early; carries the best bounds seen so far."""

    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class CertificateViolation(AssertionError):
    """A claimed F-free subgraph contains a forbidden copy."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
