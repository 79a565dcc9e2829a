"""Exception types shared across the library."""


class DegenerateClassError(ValueError):
    """A class-specific formula was applied at (or too close to) a degeneracy.

    Carries the name of the violated inequality so callers can tell a cubic
    degeneracy from a transversely isotropic one.
    """

    def __init__(self, message: str, quantity: str | None = None):
        super().__init__(message)
        self.quantity = quantity


class RootPairingError(RuntimeError):
    """Roots of a binary form could not be matched into antipodal pairs."""
