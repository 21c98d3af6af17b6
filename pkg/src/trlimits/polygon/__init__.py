"""Newton polygons: corners, edge data, admissibility and deformations inside a class."""

from .admissibility import (
    EdgeSequenceReport,
    GammaVerdict,
    check_nondegenerate,
    edge_admissibility,
    edge_locally_admissible,
    gamma_admissibility,
    pair_globalisable,
)
from .corners import (
    CORNERS,
    CornerDiagram,
    EdgeLocal,
    check_corner_identity,
    corner_counts,
    corner_edges,
    corner_points,
    edge_from_slope,
    edge_local,
    genus_bound,
    interior_count,
    puiseux_parameters,
)
from .deformation import (
    RsMaximal,
    add_vertex,
    addible_vertices,
    diagonal_polygon,
    is_addible,
    is_removable,
    maximal_polygon,
    minimal_polygons,
    removable_vertices,
    remove_vertex,
    rs_delta_max,
)
from .lattice import (
    LatticePoint,
    LatticePolygon,
    MaximalEdge,
    build_polygon,
    convex_hull,
    newton_polygon,
    polynomial_support,
)
from .report import polygon_report
from .svg import PolygonPicture, polygon_svg
from .triangles import (
    farey_triangle_test,
    is_elementary_by_slopes,
    is_elementary_triangle,
    triangle_slopes,
)

__all__ = [
    "CORNERS",
    "CornerDiagram",
    "EdgeLocal",
    "EdgeSequenceReport",
    "GammaVerdict",
    "LatticePoint",
    "LatticePolygon",
    "MaximalEdge",
    "PolygonPicture",
    "RsMaximal",
    "add_vertex",
    "addible_vertices",
    "build_polygon",
    "check_corner_identity",
    "check_nondegenerate",
    "convex_hull",
    "corner_counts",
    "corner_edges",
    "corner_points",
    "diagonal_polygon",
    "edge_admissibility",
    "edge_from_slope",
    "edge_local",
    "edge_locally_admissible",
    "farey_triangle_test",
    "gamma_admissibility",
    "genus_bound",
    "interior_count",
    "is_addible",
    "is_elementary_by_slopes",
    "is_elementary_triangle",
    "is_removable",
    "maximal_polygon",
    "minimal_polygons",
    "newton_polygon",
    "pair_globalisable",
    "polygon_report",
    "polygon_svg",
    "polynomial_support",
    "puiseux_parameters",
    "removable_vertices",
    "remove_vertex",
    "rs_delta_max",
    "triangle_slopes",
]
