"""Shared exception types."""


class HypothesisNotMet(ValueError):
    """A stated mathematical precondition of an operation fails."""


class NonInvertibleGenerator(ValueError):
    """A proposed GL2 generator is singular mod p."""


class GroupTooLarge(ValueError):
    """Input group exceeds a declared size cap (e.g. dense H^2)."""


class UnsupportedParameter(ValueError):
    """Parameter outside the declared scope (e.g. exhaustive scan, p != 3)."""


class EtaleFailure(ValueError):
    """A root is not simple mod p, so Hensel lifting does not apply."""


class NoSquareRoot(ValueError):
    """sqrt attempted on a p-adic non-square."""


class PrecisionExhausted(RuntimeError):
    """Working p-adic precision was insufficient to decide the computation."""


class PolicyExhausted(RuntimeError):
    """No depth within the approximation policy produced a verified result."""
