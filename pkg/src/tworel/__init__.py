"""Two-terminal reliability polynomials of multigraphs, their roots and dynamics."""

from .dynamics import attractor, connectivity, critical_points, forward_orbit, inverse_orbit
from .multigraph import (
    FamilySpec,
    GraphError,
    Multigraph,
    bundle_graph,
    contract_edge,
    cycle_graph,
    delete_edge,
    family_graph,
    from_edge_list,
    normal_key,
    path_graph,
    subdivide,
    substitute_gadget,
    theta_graph,
)
from .polynomial import P, FForm, Polynomial, format_polynomial, from_fform, root_bounds, to_fform
from .reliability import (
    ReliabilityEngine,
    classify_origin,
    compose_gadget,
    find_root_near_disk0,
    lift_roots_disk1,
    trel,
    trel_family,
)
from .rootfinder import LeftHalfPlane, OutsideDisk, RealInterval, all_roots, region_filter
from .stability import cycle_left_halfplane_witness, hermite_biehler, real_root_census

__version__ = "0.1.0"

__all__ = [
    "P",
    "Polynomial",
    "FForm",
    "format_polynomial",
    "to_fform",
    "from_fform",
    "root_bounds",
    "Multigraph",
    "GraphError",
    "FamilySpec",
    "from_edge_list",
    "delete_edge",
    "contract_edge",
    "subdivide",
    "substitute_gadget",
    "normal_key",
    "cycle_graph",
    "theta_graph",
    "bundle_graph",
    "path_graph",
    "family_graph",
    "ReliabilityEngine",
    "trel",
    "trel_family",
    "compose_gadget",
    "classify_origin",
    "find_root_near_disk0",
    "lift_roots_disk1",
    "all_roots",
    "region_filter",
    "LeftHalfPlane",
    "OutsideDisk",
    "RealInterval",
    "hermite_biehler",
    "cycle_left_halfplane_witness",
    "real_root_census",
    "critical_points",
    "forward_orbit",
    "inverse_orbit",
    "attractor",
    "connectivity",
]
