"""Nash equilibria of the spy-versus-spammer intruder classification game."""

from .errors import (
    InvalidAttackerStrategy,
    LPError,
    NoStructuralCandidate,
    SingularSystemError,
    SolverError,
    SpyVsSpamError,
    ValidationError,
)
from .game import (
    GameMatrices,
    GameParams,
    MixedStrategy,
    SpammerModel,
    attacker_cost,
    build_matrices,
    build_spammer_binomial,
    defendability,
    defender_payoff,
    tail_phi,
)
from .oracle import (
    LpSolution,
    VerificationReport,
    best_response,
    solve_defendability_lp,
    support_enumeration_ne,
    verify_ne,
)
from .solver import (
    CandidateDefenderStrategy,
    EquilibriumResult,
    enumerate_candidates,
    solve_attacker,
    solve_defender,
    solve_ne,
)

__version__ = "0.1.0"
