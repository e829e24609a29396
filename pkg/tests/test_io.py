import json

import numpy as np
import pytest

from moritakit.bibundles import identity_bibundle, validate_bibundle
from moritakit.gauge import GridSpec, SampledBivectorField
from moritakit.groupoids import groupoid_isomorphic, pair_groupoid, validate
from moritakit.io import (bibundle_to_dict, detect_kind, groupoid_to_dict,
                          load_bibundle, load_field, load_groupoid, load_tss,
                          save_bibundle, save_field, save_groupoid, save_tss,
                          sha256_digest, tss_to_dict)
from moritakit.tss import LabeledSurfaceGraph

from support import corpus_groupoids


def test_groupoid_roundtrip(tmp_path):
    for name, g in corpus_groupoids()[:8]:
        path = tmp_path / f"{name.replace('/', '_')}.json"
        save_groupoid(g, path)
        loaded = load_groupoid(path)
        assert loaded == g, name
        assert validate(loaded).ok


def test_groupoid_shorthands(tmp_path):
    (tmp_path / "pair.json").write_text(json.dumps({"pair": 3}))
    assert load_groupoid(tmp_path / "pair.json") == pair_groupoid(3)

    table = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    (tmp_path / "grp.json").write_text(json.dumps(
        {"group": {"elements": ["e", "r", "rr"], "table": table}}))
    g = load_groupoid(tmp_path / "grp.json")
    assert g.n_objects == 1 and g.n_arrows == 3 and validate(g).ok

    # table entries may also be element names
    (tmp_path / "grp2.json").write_text(json.dumps(
        {"group": {"elements": ["e", "s"], "table": [["e", "s"], ["s", "e"]]}}))
    g2 = load_groupoid(tmp_path / "grp2.json")
    assert validate(g2).ok and g2.n_arrows == 2

    (tmp_path / "act.json").write_text(json.dumps({"action": {
        "group": {"elements": ["e", "s"], "table": [[0, 1], [1, 0]]},
        "objects": ["1", "2"],
        "act": [["e", "1", "1"], ["e", "2", "2"],
                ["s", "1", "2"], ["s", "2", "1"]]}}))
    act = load_groupoid(tmp_path / "act.json")
    assert groupoid_isomorphic(act, pair_groupoid(2)) is not None

    (tmp_path / "gauge.json").write_text(json.dumps({"gauge": {
        "total": ["e0", "e1"], "base": ["b"],
        "projection": {"e0": "b", "e1": "b"},
        "group": {"elements": ["e", "s"], "table": [[0, 1], [1, 0]]},
        "action": [["e0", "e", "e0"], ["e0", "s", "e1"],
                   ["e1", "e", "e1"], ["e1", "s", "e0"]]}}))
    gg = load_groupoid(tmp_path / "gauge.json")
    assert gg.n_objects == 1 and gg.n_arrows == 2


def test_bibundle_roundtrip(tmp_path):
    s = identity_bibundle(pair_groupoid(2))
    save_bibundle(s, tmp_path / "ib.json")
    loaded = load_bibundle(tmp_path / "ib.json")
    assert loaded.carrier == s.carrier
    assert loaded.left_act == s.left_act
    assert loaded.right_act == s.right_act
    assert validate_bibundle(loaded).ok


def test_bibundle_with_groupoid_references(tmp_path):
    g = pair_groupoid(2)
    save_groupoid(g, tmp_path / "g.json")
    data = bibundle_to_dict(identity_bibundle(g))
    data["left"] = "g.json"
    data["right"] = "g.json"
    (tmp_path / "ref.json").write_text(json.dumps(data))
    loaded = load_bibundle(tmp_path / "ref.json")
    assert loaded.left == g and loaded.right == g


def test_tss_roundtrip(tmp_path):
    g = LabeledSurfaceGraph(["n", "s"], {"n": 0, "s": 1},
                            [("n", "s", 1.5), ("s", "n", 0.5)], volume=2.0)
    save_tss(g, tmp_path / "t.json")
    loaded = load_tss(tmp_path / "t.json")
    assert loaded.edges == g.edges
    assert loaded.genus == g.genus
    assert loaded.volume == 2.0
    # volume stays optional
    data = tss_to_dict(LabeledSurfaceGraph(["v"], {"v": 1}, []))
    assert "volume" not in data


def test_field_roundtrip(tmp_path):
    grid = GridSpec(3, (0.0, -1.0, 0.5), 0.25, (4, 3, 5))
    field = SampledBivectorField.from_entry_functions(grid, {
        (0, 1): lambda x, y, z: x + 2 * y,
        (1, 2): lambda x, y, z: z * z,
        (0, 2): lambda x, y, z: np.sin(x)})
    save_field(field, tmp_path / "pi.field", "bivector")
    loaded, kind = load_field(tmp_path / "pi.field")
    assert kind == "bivector"
    assert loaded.grid == grid
    assert np.array_equal(loaded.values, field.values)
    # loading via the sidecar path works too
    again, _ = load_field(tmp_path / "pi.field.json")
    assert np.array_equal(again.values, field.values)


def test_analytic_field_spec(tmp_path):
    spec = {"analytic": {"kind": "two_form",
                         "grid": {"dimension": 2, "origin": [0, 0],
                                  "spacing": 0.5, "shape": [3, 3]},
                         "entries": [{"i": 0, "j": 1, "const": 1.0,
                                      "linear": [2.0, 0.0],
                                      "quadratic": [[0, 1], [0, 0]]}]}}
    (tmp_path / "b.json").write_text(json.dumps(spec))
    field, kind = load_field(tmp_path / "b.json")
    assert kind == "two_form"
    # value at (x, y) = (1.0, 0.5): 1 + 2x + xy = 3.5
    assert field.values[2, 1, 0, 1] == pytest.approx(3.5)
    assert field.values[2, 1, 1, 0] == pytest.approx(-3.5)


def test_detect_kind(tmp_path):
    save_groupoid(pair_groupoid(2), tmp_path / "g.json")
    assert detect_kind(tmp_path / "g.json") == "groupoid"
    save_bibundle(identity_bibundle(pair_groupoid(2)), tmp_path / "s.json")
    assert detect_kind(tmp_path / "s.json") == "bibundle"
    save_tss(LabeledSurfaceGraph(["v"], {"v": 1}, []), tmp_path / "t.json")
    assert detect_kind(tmp_path / "t.json") == "tss"
    grid = GridSpec(2, (0.0, 0.0), 0.5, (3, 3))
    save_field(SampledBivectorField.constant(grid, np.zeros((2, 2))),
               tmp_path / "f.field", "bivector")
    assert detect_kind(tmp_path / "f.field") == "field"
    assert detect_kind(tmp_path / "f.field.json") == "field"


def test_digest_is_stable(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{}")
    assert sha256_digest(p) == sha256_digest(p)
    assert sha256_digest(p).startswith("sha256:")


def test_groupoid_dict_is_canonical():
    g = pair_groupoid(2)
    assert groupoid_to_dict(g) == groupoid_to_dict(load_groupoid_roundtrip(g))


def load_groupoid_roundtrip(g):
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "g.json"
        save_groupoid(g, path)
        return load_groupoid(path)
