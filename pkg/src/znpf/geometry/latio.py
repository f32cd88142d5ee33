"""Lattice JSON persistence.

Schema: an object with arrays "vertices" [{id, kind, re, im}], "edges"
[[primal_id, dual_id]], "primal_edges" [[p1, p2]] and "boundary"
[dual_id, ...].  Faces and angles are not stored; they are recomputed from
the covering edges on load and re-validated.

Obtuse patches are a known limitation: a negative opening angle encodes a
combinatorial orientation that plain coordinates cannot express, so loading
recovers such faces with the positive geometric angle instead.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path
from typing import Union

from ..errors import LatticeFormatError
from .types import (
    CoveringLattice,
    PrimalEdge,
    VertexRecord,
    boundary_duals,
    orient_face,
)


def lattice_to_dict(lat: CoveringLattice) -> dict:
    return {
        "vertices": [
            {"id": v.id, "kind": v.kind, "re": v.z.real, "im": v.z.imag}
            for v in lat.vertices
        ],
        "edges": [[p, d] for (p, d) in lat.edges],
        "primal_edges": [[pe.p1, pe.p2] for pe in lat.primal_edges],
        "boundary": sorted(lat.boundary),
    }


def lattice_from_dict(data: dict) -> CoveringLattice:
    """Rebuild a lattice, recomputing faces from the covering edges."""
    try:
        vertices = tuple(
            VertexRecord(int(v["id"]), str(v["kind"]), complex(float(v["re"]), float(v["im"])))
            for v in data["vertices"]
        )
        raw_edges = [tuple(int(x) for x in e) for e in data["edges"]]
        raw_primal = [tuple(int(x) for x in e) for e in data["primal_edges"]]
        raw_boundary = [int(x) for x in data.get("boundary", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise LatticeFormatError(f"malformed lattice description: {exc}") from exc
    by_id = {v.id: v for v in vertices}
    if len(by_id) != len(vertices):
        raise LatticeFormatError("vertex ids are not unique")
    for pid, did in raw_edges:
        if pid not in by_id or did not in by_id:
            raise LatticeFormatError(f"edge ({pid},{did}) references unknown vertex")
        if by_id[pid].kind != "primal" or by_id[did].kind != "dual":
            raise LatticeFormatError(f"edge ({pid},{did}) must join primal to dual")

    neighbours: dict[int, set[int]] = {}
    for pid, did in raw_edges:
        neighbours.setdefault(pid, set()).add(did)

    faces = []
    primal_edges = []
    for p1, p2 in raw_primal:
        if by_id.get(p1, None) is None or by_id.get(p2, None) is None:
            raise LatticeFormatError(f"primal edge ({p1},{p2}) references unknown vertex")
        shared = sorted(neighbours.get(p1, set()) & neighbours.get(p2, set()))
        if len(shared) != 2:
            raise LatticeFormatError(
                f"primal edge ({p1},{p2}) must have exactly two flanking duals, got {shared}"
            )
        face = orient_face(by_id[p1], by_id[shared[0]], by_id[p2], by_id[shared[1]])
        face.validate(strict=face.alpha > 0)
        idx = len(faces)
        faces.append(face)
        a, b = face.primal_pair
        primal_edges.append(PrimalEdge(a, b, idx))

    edges = tuple(sorted(set(raw_edges)))
    declared = frozenset(raw_boundary)
    for d in declared:
        if by_id.get(d) is None or by_id[d].kind != "dual":
            raise LatticeFormatError(f"boundary id {d} is not a dual vertex")
    boundary = declared if declared else boundary_duals(vertices, edges, faces)
    lat = CoveringLattice(
        vertices=vertices,
        edges=edges,
        faces=tuple(faces),
        primal_edges=tuple(primal_edges),
        boundary=boundary,
    )
    lat.validate(strict=all(f.alpha > 0 for f in faces))
    return lat


def save_lattice(lat: CoveringLattice, path: Union[str, Path]) -> None:
    if any(f.alpha <= 0 for f in lat.faces):
        warnings.warn(
            "patch has non-positive opening angles; their crossed orientation "
            "is not representable in the file format and will load as the "
            "positive geometric angle",
            stacklevel=2,
        )
    Path(path).write_text(json.dumps(lattice_to_dict(lat), indent=1))


def load_lattice(path: Union[str, Path]) -> CoveringLattice:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise LatticeFormatError(f"not valid JSON: {exc}") from exc
    return lattice_from_dict(data)
