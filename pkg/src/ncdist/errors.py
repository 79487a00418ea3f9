"""Exception hierarchy shared by all modules."""


class NcdistError(Exception):
    """Base class for library errors."""


class InvalidInput(NcdistError, ValueError):
    """Malformed or out-of-domain argument."""


class NotCausallyRelated(NcdistError):
    """Lorentzian quantity requested for a pair that is not p < q."""


class InstanceTooLarge(NcdistError):
    """Exhaustive oracle asked to run beyond its cap."""


class SingularForm(NcdistError, ValueError):
    """Gram form is not invertible."""
