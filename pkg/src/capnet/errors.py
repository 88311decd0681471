"""Exception types shared across the package."""


class InstanceFormatError(ValueError):
    """Raised when instance or label-cover JSON violates the schema.

    `field` names the offending entry, e.g. "edges[3][2]".
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class CapabilityError(RuntimeError):
    """Input exceeds a documented size cap of an exact routine."""


class InfeasibleError(RuntimeError):
    """No edge selection can meet the requirements.  Carries a witness cut."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class DisconnectedError(RuntimeError):
    """Enumeration relative to the minimum cut is undefined at min cut zero."""


class IterationLimitError(RuntimeError):
    """Cutting-plane loop hit its round cap.  Carries the constraint pool."""

    def __init__(self, message, pool=None):
        self.pool = pool
        super().__init__(message)
