"""SVG rendering of covering lattices in the usual figure style.

One polygon per rhombic face, solid covering edges, dashed primal edges,
filled/open circles for primal/dual vertices and dotted polylines for
disorder strings.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence, Union

from .types import CoveringLattice

_STYLE = """
  .face { fill: #f4f1e8; stroke: #444; stroke-width: 0.02; }
  .covering { stroke: #444; stroke-width: 0.02; }
  .primal-edge { stroke: #888; stroke-width: 0.02; stroke-dasharray: 0.1 0.06; }
  .string { stroke: #b03030; stroke-width: 0.03; stroke-dasharray: 0.02 0.07; }
  circle.primal { fill: #222; }
  circle.dual { fill: #fff; stroke: #222; stroke-width: 0.02; }
"""


def export_svg(
    lat: CoveringLattice,
    path: Union[str, Path],
    strings: Optional[Sequence[Sequence[int]]] = None,
    margin: float = 0.6,
) -> None:
    """Write the patch to an SVG file.

    strings, when given, are dual-vertex id paths drawn dotted on top.
    """
    xs = [v.z.real for v in lat.vertices]
    ys = [v.z.imag for v in lat.vertices]
    x0, x1 = min(xs) - margin, max(xs) + margin
    y0, y1 = min(ys) - margin, max(ys) + margin
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0:.4f} {-y1:.4f} {x1 - x0:.4f} {y1 - y0:.4f}">',
        f"<style>{_STYLE}</style>",
    ]
    for face in lat.faces:
        pts = " ".join(f"{c.z.real:.6f},{-c.z.imag:.6f}" for c in face.corners)
        parts.append(f'<polygon class="face" points="{pts}"/>')
    for pe in lat.primal_edges:
        a = lat.vertex(pe.p1).z
        b = lat.vertex(pe.p2).z
        parts.append(
            f'<line class="primal-edge" x1="{a.real:.6f}" y1="{-a.imag:.6f}" '
            f'x2="{b.real:.6f}" y2="{-b.imag:.6f}"/>'
        )
    if strings:
        for string in strings:
            for a_id, b_id in zip(string, string[1:]):
                a = lat.vertex(a_id).z
                b = lat.vertex(b_id).z
                parts.append(
                    f'<line class="string" x1="{a.real:.6f}" y1="{-a.imag:.6f}" '
                    f'x2="{b.real:.6f}" y2="{-b.imag:.6f}"/>'
                )
    for v in lat.vertices:
        parts.append(
            f'<circle class="{v.kind}" cx="{v.z.real:.6f}" cy="{-v.z.imag:.6f}" r="0.07"/>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts))
