"""JSON serialization of tables, graphs, and realizations.

Rationals serialize as strings "p/q" (or "p" when the denominator is 1).
Object identifiers serialize as strings: coordinates joined by commas,
covectors by semicolons.
"""

from __future__ import annotations

import json
from typing import Any

from ._rational import rat, rat_str
from .arrangement import Affine, RootSystemTable, Spherical, Truncated
from .cartan import CartanGraph, GeneralizedCartanMatrix
from .errors import ParseError
from .realization import Realization


def covector_to_json(cov) -> list[str]:
    return [rat_str(c) for c in cov]


def covector_from_json(data) -> tuple:
    return tuple(rat(c) for c in data)


def key_to_str(key) -> str:
    if isinstance(key, tuple) and key and isinstance(key[0], tuple):
        return ";".join(",".join(rat_str(c) for c in cov) for cov in key)
    return str(key)


def table_to_json(table: RootSystemTable) -> dict:
    return {
        "rank": table.rank,
        "cone": table.cone.to_json(),
        "reduced": table.reduced,
        "roots": [covector_to_json(r) for r in table.roots],
    }


def table_from_json(data: dict) -> RootSystemTable:
    try:
        rank = int(data["rank"])
        cone_data = data.get("cone", "spherical")
        if cone_data == "spherical":
            cone = Spherical()
        elif isinstance(cone_data, dict) and "affine" in cone_data:
            cone = Affine(covector_from_json(cone_data["affine"]))
        elif isinstance(cone_data, dict) and "truncated" in cone_data:
            cone = Truncated(int(cone_data["truncated"]))
        else:
            raise ParseError(f"unknown cone spec {cone_data!r}")
        roots = [covector_from_json(r) for r in data["roots"]]
        seed = data.get("seed")
        seed_hint = covector_from_json(seed) if seed else None
        reduced = data.get("reduced")
        return RootSystemTable(rank, roots, cone=cone, reduced=reduced, seed_hint=seed_hint)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed table JSON: {exc}") from exc


def graph_to_json(graph: CartanGraph, depth: int | None = None) -> dict:
    if graph.is_explicit:
        objects = list(graph.objects)
        truncated = graph.truncated
    else:
        if depth is None:
            depth = 8
        dist, _, closed = graph.ball(graph.base, depth)
        objects = sorted(dist, key=lambda o: (dist[o], key_to_str(o)))
        truncated = not closed
    ids = {obj: key_to_str(obj) for obj in objects}
    payload: dict[str, Any] = {
        "rank": graph.rank,
        "base": ids[graph.base] if graph.base in ids else key_to_str(graph.base),
        "objects": [
            {"id": ids[obj], "cartan": [list(row) for row in graph.matrix(obj).rows]}
            for obj in objects
        ],
        "edges": [],
    }
    for obj in objects:
        for i in range(graph.rank):
            nxt = graph.rho(i, obj)
            if nxt is not None and nxt in ids:
                payload["edges"].append({"i": i, "from": ids[obj], "to": ids[nxt]})
    if truncated:
        payload["truncated"] = True
    return payload


def graph_from_json(data: dict) -> CartanGraph:
    try:
        matrices = {
            entry["id"]: GeneralizedCartanMatrix.from_rows(entry["cartan"])
            for entry in data["objects"]
        }
        edges = {(e["from"], int(e["i"])): e["to"] for e in data["edges"]}
        base = data.get("base") or data["objects"][0]["id"]
        return CartanGraph.explicit(matrices, edges, base, truncated=bool(data.get("truncated")))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed graph JSON: {exc}") from exc


def realization_to_json(re: Realization) -> dict:
    return {
        "rank": re.rank,
        "depth": re.depth,
        "complete": re.complete,
        "objects": [
            {
                "id": key_to_str(re.canon[obj]),
                "basis": [covector_to_json(b) for b in re.bases[obj]],
            }
            for obj in re.order
        ],
        "roots": [covector_to_json(r) for r in re.table.roots],
        "certified_interior": sorted(key_to_str(re.canon[obj]) for obj in re.certified),
    }


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)
