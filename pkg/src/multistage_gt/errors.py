"""Exception types raised by the package."""


class GroupTestingError(Exception):
    pass


class InputError(GroupTestingError, ValueError):
    """Bad argument: index out of range, invalid weight, malformed pool."""


class ConstructionError(GroupTestingError, ValueError):
    """A code or parameter set cannot be built as requested."""


class ContractError(GroupTestingError, RuntimeError):
    """An internal invariant or caller contract was violated."""
