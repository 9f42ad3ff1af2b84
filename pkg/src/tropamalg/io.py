"""JSON reading and writing for matroids, fans, lattice maps and verdicts.

Weights are decimal strings; subsets are lists of labels.  Output is
canonically ordered so that files diff cleanly.
"""

from __future__ import annotations

import json
import os
from typing import Any

from .errors import MalformedFan, MalformedInput, MalformedLatticeMap
from .fan import AnyFan, FlagFan, WeightedChainFan
from .groundset import GroundSet
from .matroid import Matroid, matroid_from_flats


def _need(obj: Any, key: str, kind: type):
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedInput(f"missing key {key!r}", witness=key)
    val = obj[key]
    if not isinstance(val, kind):
        raise MalformedInput(f"key {key!r} has the wrong type", witness=key)
    return val


def _groundset(obj) -> GroundSet:
    labels = _need(obj, "groundset", list)
    return GroundSet(str(x) for x in labels)


def _subset(g: GroundSet, labels) -> int:
    if not isinstance(labels, list):
        raise MalformedInput("a subset must be a list of labels", witness=labels)
    m = g.mask(str(x) for x in labels)
    if len(set(map(str, labels))) != len(labels):
        raise MalformedInput("repeated label in a subset", witness=labels)
    return m


def _weight(w) -> int:
    if isinstance(w, bool) or not isinstance(w, (str, int)):
        raise MalformedInput("weights must be decimal strings", witness=w)
    try:
        return int(w)
    except ValueError:
        raise MalformedInput("weights must be decimal strings", witness=w) from None


# -- matroids --------------------------------------------------------------

def matroid_from_json(obj) -> Matroid:
    g = _groundset(obj)
    flats = [_subset(g, F) for F in _need(obj, "flats", list)]
    if not flats:
        raise MalformedInput("empty flat list", witness="flats")
    return matroid_from_flats(g, flats)


def matroid_to_json(M: Matroid) -> dict:
    g = M.groundset
    flats = sorted(M.flats, key=lambda F: (M.rank_of[F], g.sort_key(F)))
    return {"groundset": list(g.labels), "flats": [list(g.subset(F)) for F in flats]}


# -- fans ------------------------------------------------------------------

def flagfan_from_json(obj) -> FlagFan:
    g = _groundset(obj)
    verts = [_subset(g, v) for v in _need(obj, "vertices", list)]
    if len(set(verts)) != len(verts):
        raise MalformedFan("repeated vertex", witness=None)
    if 0 not in verts or g.full not in verts:
        raise MalformedFan("∅ and E must be vertices", witness=None)
    edges = {}
    for e in _need(obj, "edges", list):
        a, b = _need(e, "from", int), _need(e, "to", int)
        if not (0 <= a < len(verts) and 0 <= b < len(verts)):
            raise MalformedFan("edge refers to a missing vertex", witness=[a, b])
        if (verts[a], verts[b]) in edges:
            raise MalformedFan("repeated edge", witness=[a, b])
        edges[(verts[a], verts[b])] = _weight(_need(e, "weight", (str, int)))
    return FlagFan(g, edges)


def flagfan_to_json(X: FlagFan) -> dict:
    g = X.groundset
    verts = X.vertices
    pos = {v: i for i, v in enumerate(verts)}
    return {"groundset": list(g.labels),
            "vertices": [list(g.subset(v)) for v in verts],
            "edges": [{"from": pos[a], "to": pos[b], "weight": str(w)} for a, b, w in X.edges()]}


def chainfan_from_json(obj) -> WeightedChainFan:
    g = _groundset(obj)
    chains = {}
    for c in _need(obj, "chains", list):
        levels = tuple(_subset(g, L) for L in _need(c, "levels", list))
        if levels in chains:
            raise MalformedFan("repeated chain", witness=_need(c, "levels", list))
        chains[levels] = _weight(_need(c, "weight", (str, int)))
    return WeightedChainFan(g, chains)


def chains_to_json(g: GroundSet, chains) -> list:
    items = sorted(chains.items() if isinstance(chains, dict) else chains,
                   key=lambda cw: [g.sort_key(F) for F in cw[0]])
    return [{"levels": [list(g.subset(F)) for F in c], "weight": str(w)} for c, w in items]


def chainfan_to_json(C: WeightedChainFan) -> dict:
    return {"groundset": list(C.groundset.labels), "chains": chains_to_json(C.groundset, C.chains)}


def fan_from_json(obj) -> AnyFan:
    if isinstance(obj, dict) and "chains" in obj:
        return chainfan_from_json(obj)
    return flagfan_from_json(obj)


def fan_to_json(X: AnyFan) -> dict:
    return flagfan_to_json(X) if isinstance(X, FlagFan) else chainfan_to_json(X)


# -- lattice maps ----------------------------------------------------------

def _matroid_ref(ref, base_dir: str) -> Matroid:
    if isinstance(ref, str):
        return matroid_from_json(load_json(os.path.join(base_dir, ref)))
    return matroid_from_json(ref)


def latticemap_from_json(obj, base_dir: str = "."):
    from .correspondence import LatticeMap

    src = _matroid_ref(_need(obj, "source", (str, dict)), base_dir)
    tgt = _matroid_ref(_need(obj, "target", (str, dict)), base_dir)
    mapping = {}
    for item in _need(obj, "map", list):
        F = _subset(src.groundset, _need(item, "flat", list))
        G = _subset(tgt.groundset, _need(item, "image", list))
        if F in mapping:
            raise MalformedLatticeMap("flat listed twice", witness=list(src.labels(F)))
        mapping[F] = G
    return LatticeMap(src, tgt, mapping)


def latticemap_to_json(f) -> dict:
    M1, M2 = f.source, f.target
    g1, g2 = M1.groundset, M2.groundset
    items = sorted(f.map.items(), key=lambda kv: (M1.rank_of[kv[0]], g1.sort_key(kv[0])))
    return {"source": matroid_to_json(M1), "target": matroid_to_json(M2),
            "map": [{"flat": list(g1.subset(F)), "image": list(g2.subset(G))} for F, G in items]}


# -- files -----------------------------------------------------------------

def load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj, path: str | None = None) -> str:
    text = json.dumps(obj, indent=1, ensure_ascii=False)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
