"""Chip-firing dynamics and feedback-arc-set reductions on directed graphs."""

from .acyclic import (
    EXACT_SOLVER_CAP,
    ROOTED_ENUM_CAP,
    RootedAcyclicSet,
    count_maximum_rooted,
    cut_stretch,
    enumerate_rooted_maximal,
    exact_memory_estimate,
    is_sinkable,
    max_acyclic_exact,
    maximal_extend,
    min_fas_exact,
    min_fas_heuristic,
    rootify,
)
from .chipfire import (
    POLICIES,
    Configuration,
    Odometer,
    add,
    config_to_json,
    config_to_text,
    fire,
    is_active,
    parse_configuration,
    stabilize,
    zero_config,
)
from .digraph import (
    Arc,
    ArcSet,
    Digraph,
    VertexSet,
    acyclic_order,
    cuts,
    degrees,
    global_sink,
    is_acyclic_set,
    is_eulerian,
    is_strongly_connected,
    parse_digraph,
    reach,
)
from .errors import (
    ArcfireError,
    CapExceededError,
    ConfigParseError,
    GraphParseError,
    InfeasibleParameterError,
    NotRecurrentError,
    PreconditionError,
)
from .eulerianize import (
    EulerianizedInstance,
    eulerianize,
    lifted_to_text,
    recover_minfas,
    recover_witness,
)
from .generate import (
    random_configuration,
    random_digraph,
    random_eulerian_digraph,
    random_global_sink_digraph,
)
from .recurrence import (
    ENUMERATION_CAP,
    FiringGraph,
    ReducedLaplacian,
    burning_config,
    burning_sequence,
    canonical_recurrent,
    config_from_arcset,
    enumerate_minimal_recurrent,
    enumerate_recurrent,
    firing_graph,
    group_add,
    group_order,
    is_minimal_recurrent,
    is_recurrent,
    is_stable,
    minrec_brute,
    minrec_exact,
    minrec_witness,
    neutral_config,
    reduced_laplacian,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "ArcSet",
    "ArcfireError",
    "CapExceededError",
    "ConfigParseError",
    "Configuration",
    "Digraph",
    "ENUMERATION_CAP",
    "EXACT_SOLVER_CAP",
    "EulerianizedInstance",
    "FiringGraph",
    "GraphParseError",
    "InfeasibleParameterError",
    "NotRecurrentError",
    "Odometer",
    "POLICIES",
    "PreconditionError",
    "ROOTED_ENUM_CAP",
    "ReducedLaplacian",
    "RootedAcyclicSet",
    "VertexSet",
    "acyclic_order",
    "add",
    "burning_config",
    "burning_sequence",
    "canonical_recurrent",
    "config_from_arcset",
    "config_to_json",
    "config_to_text",
    "count_maximum_rooted",
    "cut_stretch",
    "cuts",
    "degrees",
    "enumerate_minimal_recurrent",
    "enumerate_recurrent",
    "enumerate_rooted_maximal",
    "eulerianize",
    "exact_memory_estimate",
    "fire",
    "firing_graph",
    "global_sink",
    "group_add",
    "group_order",
    "is_acyclic_set",
    "is_active",
    "is_eulerian",
    "is_minimal_recurrent",
    "is_recurrent",
    "is_sinkable",
    "is_stable",
    "is_strongly_connected",
    "lifted_to_text",
    "max_acyclic_exact",
    "maximal_extend",
    "min_fas_exact",
    "min_fas_heuristic",
    "minrec_brute",
    "minrec_exact",
    "minrec_witness",
    "neutral_config",
    "parse_configuration",
    "parse_digraph",
    "random_configuration",
    "random_digraph",
    "random_eulerian_digraph",
    "random_global_sink_digraph",
    "reach",
    "recover_minfas",
    "recover_witness",
    "reduced_laplacian",
    "rootify",
    "stabilize",
    "zero_config",
]
