"""Exception types shared across the package."""


class ToolkitError(Exception):
    """Base class for all package errors."""


class StateError(ToolkitError, ValueError):
    """Input is not a physical state (normalization, hermiticity, trace, positivity)."""


class FormatError(ToolkitError, ValueError):
    """Malformed serialized input (JSON layout, shapes, encodings)."""


class DomainError(ToolkitError, ValueError):
    """Parameter outside the operation's domain."""


class RegimeError(DomainError):
    """Closed form requested outside the parameter regime where it is defined."""


class ParametrizationError(DomainError):
    """Mixture parametrization is invalid (e.g. a non-isometric column matrix)."""


class RestrictionError(DomainError):
    """Operation precondition on the measurement set is violated."""


class DecompositionError(ToolkitError, ValueError):
    """Pure-state mixture does not reconstruct the target density matrix."""


class CompletenessError(ToolkitError, ValueError):
    """Measurement operator set does not satisfy the completeness relation."""


class AnnihilatedBranchError(ToolkitError, ValueError):
    """Measurement branch has vanishing probability on this state."""
