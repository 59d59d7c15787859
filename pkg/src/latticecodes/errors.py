"""Exception hierarchy shared by every module of the package."""


class LatticeCodesError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(LatticeCodesError, ValueError):
    """Vectors or subspaces with incompatible ambient dimensions."""


class FieldError(LatticeCodesError, ValueError):
    """Invalid field size, modulus or element."""


class BudgetExceeded(LatticeCodesError):
    """An enumeration or search would exceed its configured limit."""

    def __init__(self, what, limit, requested=None):
        self.what = what
        self.limit = limit
        self.requested = requested
        msg = f"{what} exceeds budget of {limit}"
        if requested is not None:
            msg += f" (requested {requested})"
        super().__init__(msg)


class NotAPosetError(LatticeCodesError, ValueError):
    """The cover relation contains a cycle."""


class NotALatticeError(LatticeCodesError, ValueError):
    """Some pair lacks a unique join or meet, or there is no O/I."""

    def __init__(self, message, pair=None):
        self.pair = pair
        super().__init__(message)


class ConsistencyError(LatticeCodesError, AssertionError):
    """Two independent decision routes disagreed; indicates a bug or corrupted tables."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class PreconditionError(LatticeCodesError, ValueError):
    """An operation was called on an input outside its domain."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class RankError(PreconditionError):
    """Vectors expected to be independent are not."""


class PartitionError(PreconditionError):
    """Blocks do not form a partition of the index set."""


class MembershipError(LatticeCodesError, KeyError):
    """Operand is not a codeword of the code."""

    def __str__(self):
        return str(self.args[0]) if self.args else "not a codeword"
