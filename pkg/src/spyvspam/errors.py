"""Exception hierarchy shared by the solver, the oracles and the CLI."""


class SpyVsSpamError(Exception):
    """Base class for all package errors."""


class ValidationError(SpyVsSpamError, ValueError):
    """Invalid parameters, distributions or dimensions."""


class NoStructuralCandidate(SpyVsSpamError):
    """No defender vector of the structured families is feasible."""


class SingularSystemError(SpyVsSpamError):
    """The attacker indifference system is numerically singular."""


class InvalidAttackerStrategy(SpyVsSpamError):
    """The indifference system produced a vector that is not a distribution."""


class SolverError(SpyVsSpamError):
    """Both the structural path and the oracle fallback failed."""


class LPError(SpyVsSpamError):
    """Simplex failure: iteration cap hit, infeasible or unbounded program."""
