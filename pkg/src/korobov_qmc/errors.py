"""Semantic exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates an operation's precondition."""


class DataError(DomainError):
    """Sampled or loaded data is unusable (non-finite values, bad format)."""


class InvariantViolation(ArithmeticError):
    """A mathematical bound or identity that must hold was found violated."""
