"""Exception types shared across the package.

Plain ``ValueError`` is used for malformed arguments (wrong shapes, values out
of range).  The classes below mark conditions a caller may want to handle
separately from bad input.
"""

__all__ = [
    "ModelViolationError",
    "CapacityError",
    "DegenerateCircuitError",
    "ResampleSignal",
]


class ModelViolationError(ValueError):
    """The supplied matrix or state breaks a physical constraint.

    Raised e.g. when a transfer matrix has a singular value above 1 + 1e-9,
    i.e. it amplifies instead of attenuating.
    """


class CapacityError(RuntimeError):
    """A resource ceiling would be exceeded (never truncate silently).

    Raised by the brute-force oracle beyond its photon/mode caps, by the
    tensor-network evolution when the bond dimension would pass the configured
    maximum, and by the thermal sampler when the required constellation order
    is beyond the supported quadrature size.
    """


class DegenerateCircuitError(ValueError):
    """The circuit is degenerate for the requested operation.

    Raised e.g. when every transmission eigenvalue is zero, so the loss
    factorization has no leading channel to normalize against.
    """


class ResampleSignal(RuntimeError):
    """A single draw became numerically untrustworthy and should be retried.

    Raised by the chain-rule sampler if the accumulated prefix probability
    underflows (< 1e-300).
    """
