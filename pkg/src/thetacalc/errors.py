class DomainError(ValueError):
    """Raised when an operation is asked for mathematically invalid input.

    Distinct from usage errors (bad flags, malformed text): a DomainError means
    the request was well-formed but the data violates a precondition, e.g. a
    missing graph edge, a weight vector that does not encode a stratum, or a
    filtration with zero norm.
    """
