"""Exception types shared across the toolkit.

Names follow the error contracts of the public operations; all of them
derive from RmlkitError so callers can catch everything in one clause.
ZeroDivisionError (field inversion of zero) is deliberately the builtin.
"""


class RmlkitError(Exception):
    pass


class DependentBasis(RmlkitError, ValueError):
    """A sequence of field elements or vectors was required to be a basis."""


class InvalidParameter(RmlkitError, ValueError):
    """A construction parameter violates its precondition (e.g. gcd(s, m) != 1)."""


class InvalidDelta(RmlkitError, ValueError):
    """Twist element fails the relative-norm condition."""


class NotPrimitiveElement(RmlkitError, ValueError):
    """Element does not generate the extension field over the base field."""


class UnsupportedShape(RmlkitError, ValueError):
    """Operation undefined for these code dimensions (e.g. MRD test with n > m)."""


class DegenerateSubspace(RmlkitError, ValueError):
    """Subspace has smaller dimension than the operation requires."""


class ResourceBudgetExceeded(RmlkitError, RuntimeError):
    """Exhaustive computation would exceed the configured budget.

    Carries the work estimate so callers can report it.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
