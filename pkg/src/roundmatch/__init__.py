"""Multi-round bipartite matching of agents to time-shared resources.

Feasibility (one matching per round, every agent satisfied), total-benefit
maximization for valid benefit functions (including utilitarian and
fairness-maximizing families), satisfied-agent maximization, and budgeted
advice generation over labeled restrictions graphs.
"""

from .advice import (
    AdvicePlan,
    AnnealConfig,
    RelaxationCandidate,
    agmrm_feasible,
    anneal_advice,
    candidate_relaxations,
    evaluate_plan,
    exact_advice,
)
from .benefits import (
    BenefitProfile,
    ValidityReport,
    check_validity,
    profiles_for,
    rawlsian,
    satisfied_agents,
    utilitarian,
)
from .errors import (
    CapExceededError,
    InputValidationError,
    InternalConsistencyError,
    RoundmatchError,
)
from .instance import (
    AgentSpec,
    CompatibilityGraph,
    MultiRoundSolution,
    ResourceSpec,
    RestrictionEdge,
    RestrictionsGraph,
    derive_compatibility,
    label_free,
    min_satisfaction_ratio,
    satisfaction,
    validate_solution,
)
from .maxsa import MaxsaResult, solve_maxsa_exact, solve_maxsa_heuristic
from .maxtb import build_maxtb_graph, saturate, solve_maxtb
from .mrm import build_mrm_graph, solve_mrm

__version__ = "0.1.0"
