"""Shared exception types."""


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class SamplingError(ValueError):
    """A pointwise evaluation produced a non-finite value."""


class QuadratureError(RuntimeError):
    """A quadrature rule failed its internal consistency check."""
