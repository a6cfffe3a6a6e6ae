"""Strong and periodically strong detectability of bounded labeled Petri nets."""

from .basis import (
    BasisMarkingSet,
    ConsistencyEstimator,
    Explanation,
    basis_marking_set,
    consistent_markings,
    minimal_explanations,
    unobservable_reach,
)
from .brg import Brg, BrgState, alpha_flag, build_brg, run_relation
from .detectability import (
    MarkedStateSet,
    SimpleCycle,
    VerdictReport,
    check_assumptions,
    check_lpn,
    check_periodic_strong_detectability,
    check_strong_detectability,
    confusion_word,
    marked_states,
    simple_cycles,
    states_reachable_from_cycles,
)
from .errors import (
    BudgetExceededError,
    DomainError,
    FiringError,
    InapplicableAssumptionsError,
    InconclusiveError,
    ParseError,
    PetriDetectError,
    StructuralError,
    UnsupportedStructureError,
)
from .fixtures import load_fixture, random_lpn, random_valid_lpn
from .io import emit_dot, emit_net, parse_net, read_net
from .net import (
    LabeledPetriNet,
    PetriNet,
    ReachabilityGraph,
    enabled,
    fire,
    fire_sequence,
    is_acyclic,
    is_deadlock_free,
    marking_str,
    reachability_graph,
    tu_induced_subnet,
)
from .oracle import (
    ObserverAutomaton,
    bounded_falsifier,
    build_observer,
    oracle_periodic_strong_detectability,
    oracle_strong_detectability,
)
from .verifier import VerifierNet, acyclicity_transfer_check, build_verifier, vn_language_check

__version__ = "0.1.0"

__all__ = [
    "acyclicity_transfer_check",
    "alpha_flag",
    "basis_marking_set",
    "BasisMarkingSet",
    "bounded_falsifier",
    "Brg",
    "BrgState",
    "BudgetExceededError",
    "build_brg",
    "build_observer",
    "build_verifier",
    "check_assumptions",
    "check_lpn",
    "check_periodic_strong_detectability",
    "check_strong_detectability",
    "confusion_word",
    "ConsistencyEstimator",
    "consistent_markings",
    "DomainError",
    "emit_dot",
    "emit_net",
    "enabled",
    "Explanation",
    "fire",
    "fire_sequence",
    "FiringError",
    "InapplicableAssumptionsError",
    "InconclusiveError",
    "is_acyclic",
    "is_deadlock_free",
    "LabeledPetriNet",
    "load_fixture",
    "marked_states",
    "MarkedStateSet",
    "marking_str",
    "minimal_explanations",
    "ObserverAutomaton",
    "oracle_periodic_strong_detectability",
    "oracle_strong_detectability",
    "parse_net",
    "ParseError",
    "PetriDetectError",
    "PetriNet",
    "random_lpn",
    "random_valid_lpn",
    "reachability_graph",
    "ReachabilityGraph",
    "read_net",
    "run_relation",
    "simple_cycles",
    "SimpleCycle",
    "states_reachable_from_cycles",
    "StructuralError",
    "tu_induced_subnet",
    "unobservable_reach",
    "UnsupportedStructureError",
    "VerdictReport",
    "VerifierNet",
    "vn_language_check",
    "__version__",
]
