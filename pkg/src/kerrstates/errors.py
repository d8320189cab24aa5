"""Exception types shared across the package."""


class NonConvergenceError(ArithmeticError):
    """A series failed to meet its tolerance within the term budget."""


class PoleError(ArithmeticError):
    """A hypergeometric denominator parameter hit a nonpositive integer."""


class TruncationError(RuntimeError):
    """A certified Fock-space truncation could not be reached under the cap."""
