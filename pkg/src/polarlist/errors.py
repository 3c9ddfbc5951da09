"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """A caller-supplied value violates an operation's precondition."""


class EmptyConstraintsError(InvalidArgument):
    """Row reduction was asked to process a matrix with no nonzero rows."""


class ResourceError(RuntimeError):
    """A list size or workload exceeds the configured memory budget."""
