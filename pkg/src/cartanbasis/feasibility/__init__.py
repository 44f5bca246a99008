"""Synthesis-depth theory: mirror points, two-layer feasibility and chamber regions."""

from .monodromy import inequality_table, n_variant_sets, two_layer_feasible
from .regions import (
    CRITERION1,
    CRITERION2,
    PE_REGION,
    REGIONS,
    S_CNOT2,
    S_SWAP3,
    ConvexRegion,
    Hit,
    Region,
    SelectionCriterion,
    SwapLayers,
    Tetrahedron,
    cnot_two_layer,
    dump_regions,
    first_hit,
    load_regions,
    mirror_point,
    on_two_layer_swap_segments,
    region_from_json,
    region_volume,
    swap3_by_theory,
    swap_min_layers,
)
