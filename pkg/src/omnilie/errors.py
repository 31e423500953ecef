class InputError(ValueError):
    """Malformed input: shape or patch mismatch, parse failure, bad index."""


class StructuralError(Exception):
    """A precondition of a construction does not hold (e.g. a map is not skew)."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness
