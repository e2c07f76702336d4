"""Exception types shared across the package."""


class RbsatError(Exception):
    """Base class for all package errors."""


class ParamError(RbsatError, ValueError):
    """Invalid or degenerate model parameters."""


class NoSwapPairError(RbsatError):
    """No value pair admits the requested symmetry exchange."""


class NoSelfUnsatConstraintError(RbsatError):
    """No constraint of the given variable has a near-solution witness."""


class BudgetExceededError(RbsatError):
    """An analysis needed more search nodes than the budget allowed."""


class OracleGuardError(RbsatError):
    """The brute-force enumeration guard was exceeded."""


class DimacsError(RbsatError, ValueError):
    """Malformed DIMACS CNF input."""


class SchemaError(RbsatError, ValueError):
    """Persisted experiment data does not match the documented schema."""
