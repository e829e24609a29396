"""File formats: JSON for the finite algebra, binary + sidecar for fields.

Groupoid files are JSON with explicit tables, or one of the shorthand
forms ``{"pair": n}``, ``{"group": ...}``, ``{"action": ...}``,
``{"gauge": ...}``.  Sampled fields are little-endian float64 binaries
holding the upper-triangular entries per point (row-major over points),
described by a ``<name>.json`` sidecar; analytic field specs carry
coefficient tables for constant/linear/quadratic entries instead.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .bibundles import Bibundle
from .gauge import (GridSpec, SampledBivectorField, SampledTwoFormField)
from .groups import FiniteGroup
from .groupoids import (FiniteGroupoid, PrincipalBundleData, action_groupoid,
                        gauge_groupoid, group_as_groupoid, pair_groupoid)
from .tss import LabeledSurfaceGraph


def sha256_digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# groups and groupoids

def group_from_dict(data) -> FiniteGroup:
    elements = [str(e) for e in data["elements"]]
    table = []
    for row in data["table"]:
        out = []
        for v in row:
            out.append(elements.index(v) if isinstance(v, str) else int(v))
        table.append(out)
    return FiniteGroup(elements, table)


def groupoid_from_dict(data) -> FiniteGroupoid:
    if "pair" in data:
        return pair_groupoid(int(data["pair"]))
    if "group" in data:
        return group_as_groupoid(group_from_dict(data["group"]))
    if "action" in data:
        spec = data["action"]
        group = group_from_dict(spec["group"])
        act = {(g, x): y for g, x, y in spec["act"]}
        return action_groupoid(group, [str(x) for x in spec["objects"]], act)
    if "gauge" in data:
        spec = data["gauge"]
        bundle = PrincipalBundleData(
            total=tuple(str(e) for e in spec["total"]),
            base=tuple(str(b) for b in spec["base"]),
            projection={str(e): str(b) for e, b in spec["projection"].items()},
            group=group_from_dict(spec["group"]),
            action={(e, g): f for e, g, f in spec["action"]},
        )
        return gauge_groupoid(bundle)
    arrows = [a["id"] for a in data["arrows"]]
    src = {a["id"]: a["src"] for a in data["arrows"]}
    tgt = {a["id"]: a["tgt"] for a in data["arrows"]}
    comp = {(g, h): k for g, h, k in data["comp"]}
    return FiniteGroupoid(data["objects"], arrows, src, tgt,
                          data["units"], data["inv"], comp)


def groupoid_to_dict(g: FiniteGroupoid) -> dict:
    return {
        "objects": list(g.objects),
        "arrows": [{"id": a, "src": g.objects[g.src[i]], "tgt": g.objects[g.tgt[i]]}
                   for i, a in enumerate(g.arrows)],
        "comp": [[g.arrows[i], g.arrows[j], g.arrows[k]]
                 for (i, j), k in sorted(g.comp.items())],
        "units": {x: g.arrows[g.unit[i]] for i, x in enumerate(g.objects)},
        "inv": {a: g.arrows[g.inv[i]] for i, a in enumerate(g.arrows)},
    }


def load_groupoid(path) -> FiniteGroupoid:
    with open(path, encoding="utf-8") as fh:
        return groupoid_from_dict(json.load(fh))


def save_groupoid(g: FiniteGroupoid, path) -> None:
    Path(path).write_text(json.dumps(groupoid_to_dict(g), sort_keys=True, indent=1),
                          encoding="utf-8")


# ---------------------------------------------------------------------------
# bibundles

def bibundle_from_dict(data, base_dir=".") -> Bibundle:
    def side(spec):
        if isinstance(spec, str):
            return load_groupoid(Path(base_dir) / spec)
        return groupoid_from_dict(spec)

    left = side(data["left"])
    right = side(data["right"])
    left_act = {(g, x): y for g, x, y in data["leftAct"]}
    right_act = {(x, g): y for x, g, y in data["rightAct"]}
    return Bibundle(left, right, [str(x) for x in data["carrier"]],
                    data["J1"], data["J2"], left_act, right_act)


def bibundle_to_dict(s: Bibundle) -> dict:
    j1, j2, left_act, right_act = s.as_dicts()
    return {
        "left": groupoid_to_dict(s.left),
        "right": groupoid_to_dict(s.right),
        "carrier": list(s.carrier),
        "J1": j1,
        "J2": j2,
        "leftAct": [[g, x, y] for (g, x), y in sorted(left_act.items())],
        "rightAct": [[x, g, y] for (x, g), y in sorted(right_act.items())],
    }


def load_bibundle(path) -> Bibundle:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        return bibundle_from_dict(json.load(fh), base_dir=path.parent)


def save_bibundle(s: Bibundle, path) -> None:
    Path(path).write_text(json.dumps(bibundle_to_dict(s), sort_keys=True, indent=1),
                          encoding="utf-8")


# ---------------------------------------------------------------------------
# labeled surface graphs

def tss_from_dict(data) -> LabeledSurfaceGraph:
    vertices = [v["id"] for v in data["vertices"]]
    genus = {v["id"]: int(v["genus"]) for v in data["vertices"]}
    edges = [(e["tail"], e["head"], float(e["period"])) for e in data["edges"]]
    return LabeledSurfaceGraph(vertices, genus, edges, data.get("volume"))


def tss_to_dict(g: LabeledSurfaceGraph) -> dict:
    data = {
        "vertices": [{"id": v, "genus": g.genus[i]}
                     for i, v in enumerate(g.vertices)],
        "edges": [{"tail": g.vertices[t], "head": g.vertices[h], "period": p}
                  for (t, h, p) in g.edges],
    }
    if g.volume is not None:
        data["volume"] = g.volume
    return data


def load_tss(path) -> LabeledSurfaceGraph:
    with open(path, encoding="utf-8") as fh:
        return tss_from_dict(json.load(fh))


def save_tss(g: LabeledSurfaceGraph, path) -> None:
    Path(path).write_text(json.dumps(tss_to_dict(g), sort_keys=True, indent=1),
                          encoding="utf-8")


# ---------------------------------------------------------------------------
# sampled fields

_FIELD_CLASSES = {"bivector": SampledBivectorField, "two_form": SampledTwoFormField}


def _sidecar_path(path) -> Path:
    path = Path(path)
    return path if path.suffix == ".json" else Path(str(path) + ".json")


def _data_path(path) -> Path:
    path = Path(path)
    return Path(str(path)[: -len(".json")]) if str(path).endswith(".json") else path


def save_field(field, path, kind: str) -> None:
    """Write the binary payload at ``path`` and the sidecar at ``path.json``."""
    if kind not in _FIELD_CLASSES:
        raise ValueError(f"unknown field kind {kind!r}")
    grid = field.grid
    d = grid.dimension
    iu, ju = np.triu_indices(d, 1)
    flat = field.values[..., iu, ju].reshape(-1)
    Path(path).write_bytes(flat.astype("<f8").tobytes())
    sidecar = {
        "dimension": d,
        "origin": list(grid.origin),
        "spacing": grid.spacing,
        "shape": list(grid.shape),
        "kind": kind,
    }
    _sidecar_path(path).write_text(json.dumps(sidecar, sort_keys=True, indent=1),
                                   encoding="utf-8")


def _field_from_analytic(spec):
    grid_spec = spec["grid"]
    grid = GridSpec(int(grid_spec["dimension"]),
                    tuple(float(v) for v in grid_spec["origin"]),
                    float(grid_spec["spacing"]),
                    tuple(int(v) for v in grid_spec["shape"]))
    kind = spec.get("kind", "bivector")
    cls = _FIELD_CLASSES[kind]
    return cls.from_polynomials(grid, spec["entries"]), kind


def load_field(path):
    """Load a field from a binary+sidecar pair or an analytic JSON spec.

    Returns ``(field, kind)``.
    """
    path = Path(path)
    if path.suffix == ".json":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if "analytic" in data:
            return _field_from_analytic(data["analytic"])
        sidecar = data
        data_path = _data_path(path)
    else:
        with open(_sidecar_path(path), encoding="utf-8") as fh:
            sidecar = json.load(fh)
        data_path = path
    grid = GridSpec(int(sidecar["dimension"]),
                    tuple(float(v) for v in sidecar["origin"]),
                    float(sidecar["spacing"]),
                    tuple(int(v) for v in sidecar["shape"]))
    kind = sidecar.get("kind", "bivector")
    d = grid.dimension
    n_upper = d * (d - 1) // 2
    flat = np.frombuffer(data_path.read_bytes(), dtype="<f8")
    expected = grid.n_points() * n_upper
    if flat.size != expected:
        raise ValueError(f"field payload has {flat.size} floats, expected {expected}")
    upper = flat.reshape(*grid.shape, n_upper)
    values = np.zeros((*grid.shape, d, d))
    iu, ju = np.triu_indices(d, 1)
    values[..., iu, ju] = upper
    values[..., ju, iu] = -upper
    return _FIELD_CLASSES[kind](grid, values), kind


# ---------------------------------------------------------------------------
# kind detection for ``validate``

def detect_kind(path) -> str:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (UnicodeDecodeError, json.JSONDecodeError):
        if _sidecar_path(path).exists():
            return "field"
        raise ValueError(f"cannot determine the kind of {path}") from None
    if not isinstance(data, dict):
        raise ValueError(f"cannot determine the kind of {path}")
    if "vertices" in data:
        return "tss"
    if "carrier" in data:
        return "bibundle"
    if {"objects", "pair", "group", "action", "gauge"} & set(data):
        return "groupoid"
    if "analytic" in data or {"dimension", "shape", "spacing"} <= set(data):
        return "field"
    raise ValueError(f"cannot determine the kind of {path}")
