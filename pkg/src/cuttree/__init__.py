"""cuttree: max-flows, canonical min-cuts and structure trees for finite
capacitated networks, with Gomory-Hu extraction and periodic-strip support."""

from .netcore import (
    CornerData,
    Cut,
    Network,
    NetworkError,
    canonical_edge,
    capacity,
    coboundary,
    corners,
    is_nested,
    is_tight,
    load_network,
    load_network_dimacs,
    load_network_json,
    network_to_json,
)
from .flow import (
    ConnectivityTable,
    FlowAssignment,
    all_pairs_connectivity,
    flow_to_json,
    flow_value_across_cut,
    max_flow,
    min_cut_largest,
    min_cut_smallest,
    verify_flow,
)
from .cutring import (
    CutFamily,
    OracleLimitError,
    count_min_cuts,
    crossing_count,
    enumerate_all_cuts,
    in_ring,
    is_thin,
    min_cut_value_oracle,
    oracle_dump,
    tight_cuts_through_edge,
    uncross,
)
from .structure import (
    NestedSystem,
    StructureError,
    StructureTree,
    build_canonical_tree,
    canonical_system,
    check_automorphism_invariance,
    gomory_hu_extract,
    level_up,
    nu_map,
    tree_from_json,
    tree_from_nested,
    verify_tree_flow_equality,
)
from .strips import (
    EndPoint,
    StripNetwork,
    Truncation,
    end_flow_certificate,
    load_strip_json,
    parse_strip_endpoint,
    separation_level,
    truncate,
    windowed_tree,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
