"""Exception hierarchy shared by all modules.

Three broad families matter to callers (and to the CLI exit codes):
``UsageError`` for malformed inputs, ``SolverError`` for failures of an
otherwise well-posed computation, and ``PreconditionError`` for calls whose
mathematical hypotheses do not hold.
"""


class NetequilError(Exception):
    """Base class for every error raised by this package."""


class UsageError(NetequilError):
    """Malformed input: bad files, bad vectors, bad flags."""


class SolverError(NetequilError):
    """A solver failed on a well-posed problem (divergence, exhaustion)."""


class PreconditionError(NetequilError):
    """A documented mathematical precondition does not hold."""


# --- matgraph -------------------------------------------------------------

class DimensionMismatch(UsageError):
    pass


class NonNegativityViolated(PreconditionError):
    pass


class NoConvergence(SolverError):
    def __init__(self, kmax, message=""):
        self.kmax = kmax
        super().__init__(message or f"no convergence within {kmax} iterations")


class NotIrreducible(PreconditionError):
    pass


class RemoveAll(UsageError):
    pass


class Singular(SolverError):
    """Pivot breakdown in Gaussian elimination; ``pivot`` is the 1-based step."""

    def __init__(self, pivot, message=""):
        self.pivot = pivot
        super().__init__(message or f"singular system at pivot {pivot}")


# --- netmodel -------------------------------------------------------------

class InvalidParameter(UsageError):
    def __init__(self, field, why):
        self.field = field
        self.why = why
        super().__init__(f"invalid parameter {field!r}: {why}")


class NotInvertible(PreconditionError):
    pass


# --- solver ---------------------------------------------------------------

class NotContracting(SolverError):
    """Banach solving was requested without the contraction certificate."""


class MaxIterations(SolverError):
    def __init__(self, kmax, message=""):
        self.kmax = kmax
        super().__init__(message or f"not converged after {kmax} iterations")


class NotMonotone(PreconditionError):
    pass


class NoLattice(PreconditionError):
    pass


class PreconditionViolated(PreconditionError):
    pass


class NoEquilibriumFound(SolverError):
    """Every fictitious-default guess was exhausted: multiplicity or numeric failure."""


class ResidualTooLarge(PreconditionError):
    pass


class UnhandledSingularity(PreconditionError):
    """Singular linear system outside the irreducible Perron case."""


# --- keyplayer ------------------------------------------------------------

class NotConvergent(PreconditionError):
    pass


class NotStable(PreconditionError):
    pass


# --- oracle ---------------------------------------------------------------

class TooLarge(PreconditionError):
    def __init__(self, n, limit):
        self.n = n
        self.limit = limit
        super().__init__(f"n = {n} exceeds the supported limit {limit}")
