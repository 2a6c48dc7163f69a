"""Maximum-matching phase framework, oracles, replacers, and instance families."""

from .graph import (
    AltPath,
    Graph,
    GraphFormatError,
    Matching,
    augment,
    boundary_edges,
    is_alternating,
    is_augmenting,
    read_graph,
    read_matching,
    read_path,
    subpath,
    validate_replacement,
    write_graph,
    write_matching,
    write_path,
)
from .engine import (
    GreedyLex,
    PhaseTrace,
    Plan,
    PlanError,
    Scripted,
    SeededRandom,
    SizeLimitError,
    exact_phase,
    hopcroft_karp_phase,
    phase_bound_report,
    read_plan,
    read_trace,
    run_phase_framework,
    shortest_aug_length,
    verify_trace,
    write_plan,
    write_trace,
)
from .oracles import (
    OracleLimitError,
    OracleLimits,
    brute_force_nu,
    check_disjoint_packing,
    check_hk_inequality,
    enumerate_shortest_aug_paths,
    min_replaceability,
)

__all__ = [name for name in dir() if not name.startswith("_")]
