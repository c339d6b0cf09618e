"""Exception types shared across the package."""


class InputError(ValueError):
    """An input document (layout JSON or graph JSON) is malformed or invalid."""


class ContractViolation(ValueError):
    """A caller broke an API precondition (bad color range, mismatched sizes, ...)."""
