"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class InvalidModelError(DomainError):
    """The pair (a, b) defines a singular model (b = 0 or a^2 - 4b = 0)."""


class FullTwoTorsionError(InvalidModelError):
    """a^2 - 4b is a perfect square, so the curve has full rational 2-torsion."""


class UnsupportedConfigurationError(DomainError):
    """A sign configuration with no case in the rank-variation tables."""


class ResourceLimitError(RuntimeError):
    """A configured size cap (factorization bound, support cap) was exceeded."""


class PrecisionError(RuntimeError):
    """The p-adic search hit its depth bound without a decision; treat as a bug."""
