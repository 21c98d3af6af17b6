"""Static SVG pictures of Newton polygons with their corner regions shaded."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .corners import CORNERS, corner_points
from .lattice import LatticePolygon

CORNER_FILL = {
    "00": "#f4c7c3",
    "0oo": "#c6dafc",
    "oo0": "#b7e1cd",
    "oooo": "#fce8b2",
}


class PolygonPicture:
    """Lays a polygon out on a lattice grid; ``render`` returns the SVG document."""

    def __init__(self, polygon: LatticePolygon, *, title: str | None = None, scale: int | None = None, margin: int = 20):
        self.polygon = polygon
        dx, dy = polygon.bidegree
        self.columns = dx + 1
        self.rows = dy + 1
        if scale is None:
            scale = max(24, 480 // max(self.rows, self.columns))
        self.scale = scale
        self.margin = margin
        self.width = (self.columns - 1) * scale + 2 * margin
        self.height = (self.rows - 1) * scale + 2 * margin
        self.title = title

    @staticmethod
    def gridfill(i: int) -> str:
        return "#f0f0f0" if i else "#d0d0d0"

    def point(self, pair: tuple[int, int]) -> tuple[int, int]:
        i, j = pair
        return (self.margin + i * self.scale, self.height - self.margin - j * self.scale)

    def _grid(self) -> list[str]:
        lines = []
        for j in range(self.rows):
            _, y = self.point((0, j))
            lines.append(f'<line x1="0" y1="{y}" x2="{self.width}" y2="{y}" stroke="{self.gridfill(j)}"/>')
        for i in range(self.columns):
            x, _ = self.point((i, 0))
            lines.append(f'<line x1="{x}" y1="0" x2="{x}" y2="{self.height}" stroke="{self.gridfill(i)}"/>')
        return lines

    def _corners(self) -> list[str]:
        if not self.polygon.is_inscribed():
            return []
        half = self.scale // 3
        shapes = []
        for corner in CORNERS:
            for p in sorted(corner_points(self.polygon, corner)):
                x, y = self.point(p)
                shapes.append(
                    f'<rect x="{x - half}" y="{y - half}" width="{2 * half}" height="{2 * half}" '
                    f'fill="{CORNER_FILL[corner]}" class="corner-{corner}"/>'
                )
        return shapes

    def _hull(self) -> list[str]:
        coords = " ".join(f"{x},{y}" for x, y in map(self.point, self.polygon.vertices))
        if self.polygon.dimension == 2:
            return [f'<polygon points="{coords}" fill="#e8eaf6" fill-opacity="0.6" stroke="#1a237e" stroke-width="2"/>']
        return [f'<polyline points="{coords}" fill="none" stroke="#1a237e" stroke-width="2"/>']

    def _dots(self) -> list[str]:
        r = 2 + self.scale // 20
        dots = []
        for p in sorted(self.polygon.lattice_points):
            x, y = self.point(p)
            color = "black" if p in self.polygon.support else "#9e9e9e"
            dots.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="{color}"/>')
        return dots

    def render(self) -> str:
        body = self._grid() + self._corners() + self._hull() + self._dots()
        head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}">'
        if self.title:
            body.insert(0, f"<title>{escape(self.title)}</title>")
        return "\n".join([head, *body, "</svg>"]) + "\n"


def polygon_svg(polygon: LatticePolygon, *, title: str | None = None, scale: int | None = None, margin: int = 20) -> str:
    return PolygonPicture(polygon, title=title, scale=scale, margin=margin).render()


__all__ = ["PolygonPicture", "polygon_svg"]
