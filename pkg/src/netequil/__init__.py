"""netequil: equilibria of interactive networks ``x = f(xW + eps)``.

Solvers with uniqueness certificates for contracting and non-contracting
networks, a finite fictitious-default search for bounded-identity clearing
systems, multiplicity detection along Perron directions, brute-force
enumeration oracles, and the key-player impact measure.
"""

__version__ = "0.1.0"

from .errors import NetequilError, PreconditionError, SolverError, UsageError
from .matgraph import (
    ChainFailure,
    ChainWitness,
    Condensation,
    contraction_modulus,
    is_acyclic,
    linear_solve,
    perron_vector,
    principal_submatrix,
    scc_condensation,
    spectral_radius,
    weakly_chained_check,
)
from .netmodel import (
    BankruptcyCost,
    ClampedAffine,
    CrossHoldings,
    EisenbergNoe,
    GeneralizedEN,
    GlobalLocalGame,
    InputOutput,
    InterbankGame,
    MaturityEN,
    Network,
    Production,
    RogersVeraart,
    RogersVeraartNet,
    SimpleGame,
    bounded_identity_network,
    build_network,
    closed_form_equilibrium,
    network_metadata,
)
from .solver import (
    ABOVE,
    BELOW,
    MultiplicityCertificate,
    SolveReport,
    Unique,
    classify,
    lp_verify,
    linear_system_solvability,
    multiplicity_probe,
    solve_algorithm1,
    solve_banach,
    solve_tarski,
    uniqueness_certificate,
    verify_equilibrium,
)
from .keyplayer import ImpactReport, impact_measure, katz_centrality, stability_certificate
from .oracle import (
    ContinuousUniform,
    DiscreteUniform,
    EquilibriumSet,
    Xorshift64Star,
    enumerate_equilibria,
    grid_search,
    multiplicity_rate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
