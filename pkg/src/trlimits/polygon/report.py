"""JSON-ready summaries of a Newton polygon."""

from __future__ import annotations

from typing import Any

from trlimits.errors import DomainError

from .admissibility import gamma_admissibility
from .corners import check_corner_identity
from .deformation import addible_vertices, maximal_polygon, minimal_polygons, removable_vertices
from .lattice import LatticePolygon

SCHEMA_VERSION = 1


def _points(points: Any) -> list[list[int]]:
    return [list(p) for p in sorted(points)]


def polygon_report(polygon: LatticePolygon, *, minimal_limit: int = 256) -> dict[str, Any]:
    """Vertices, edges, corners, genus bound, admissibility and the deformation data.

    Sections that do not apply (a long diagonal has no maximal polygon, a segment
    no area) are reported as ``None`` with a note.
    """

    report: dict[str, Any] = {"schema": SCHEMA_VERSION, "polygon": polygon.describe(), "notes": []}
    if not polygon.is_inscribed():
        report["notes"].append("polygon is not inscribed in its bounding rectangle")
        return report
    diagram = check_corner_identity(polygon)
    report["corners"] = diagram.describe()
    report["genus"] = diagram.interior
    report["area"] = str(polygon.pick_area()) if polygon.dimension == 2 else None
    report["gamma_admissibility"] = gamma_admissibility(polygon).describe()
    report["removable"] = _points(removable_vertices(polygon))
    try:
        report["addible"] = _points(addible_vertices(polygon))
        report["maximal_polygon"] = [list(v) for v in maximal_polygon(polygon).vertices]
    except DomainError as exc:
        report["addible"] = None
        report["maximal_polygon"] = None
        report["notes"].append(str(exc))
    report["minimal_polygons"] = [
        [list(v) for v in p.vertices] for p in minimal_polygons(polygon, limit=minimal_limit)
    ]
    return report


__all__ = ["SCHEMA_VERSION", "polygon_report"]
