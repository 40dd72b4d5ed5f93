import io
import json
import subprocess
import sys

import pytest

from polyjc.cli import dispatch


def run(argv, env_cfg=None):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(argv, out, err)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip().startswith("{") else text), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)

    return _write


def test_keller_check(write):
    m = write("m.json", {"vars": ["x", "y"], "components": ["x+y^2", "y"]})
    code, doc, _ = run(["keller", "check", "--map", m])
    assert code == 0 and doc["status"] == "ok" and doc["keller"] is True
    m = write("n.json", {"vars": ["x", "y"], "components": ["x^2", "y"]})
    code, doc, _ = run(["keller", "check", "--map", m])
    assert code == 1 and doc["jacobian_determinant"] == "2*x"


def test_keller_invert_and_chain(write):
    m = write("m.json", {"vars": ["x", "y"], "components": ["x+y^2", "y+(x+y^2)^3"]})
    code, doc, _ = run(["keller", "invert", "--map", m])
    assert code == 0
    inv = write("g.json", doc["inverse"])
    code, doc, _ = run(["keller", "chain", "--map", m, "--inverse", inv])
    assert code == 0 and doc["chain_rule"] == "1"


def test_keller_invert_cap_exit_code(write):
    m = write("m.json", {"vars": ["x", "y"], "components": ["x+y^2", "y+(x+y^2)^3"]})
    code, doc, _ = run(["keller", "invert", "--map", m, "--cap", "2"])
    assert code == 3 and doc["status"] == "cap"


def test_keller_misc(write):
    a = write("a.json", [[0, 1], [0, 0]])
    code, doc, _ = run(["keller", "druzkowski", "--matrix", a])
    assert code == 0 and doc["map"]["components"] == ["x", "x^3 + y"] and doc["rank"] == 1
    code, doc, _ = run(["keller", "newton", "--poly", "y^2 - x^3"])
    assert code == 0 and doc["triangle"] is True
    code, doc, _ = run(["keller", "newton", "--poly", "x + y + x^2*y^2"])
    assert code == 1
    code, doc, _ = run(["keller", "topparts", "--f", "(x+y)^2", "--g", "(x+y)^3"])
    assert code == 0 and doc["jac_zero"] and doc["proportional"]


def test_lnd_commands(write):
    d = write("d.json", {"vars": ["x", "y"], "images": ["0", "x"]})
    assert run(["lnd", "length", "--derivation", d, "--poly", "y^2"])[1]["length"] == 2
    code, doc, _ = run(["lnd", "nilpotent", "--derivation", d])
    assert code == 0 and doc["verdict"] == "locally_nilpotent"
    code, doc, _ = run(["lnd", "exp", "--derivation", d, "--poly", "y"])
    assert code == 0 and doc["exp"] == "x*t + y"
    code, doc, _ = run(["lnd", "rentschler", "--derivation", d, "--f", "x", "--g", "y+x"])
    assert code == 0
    s = write("s.json", {"vars": ["x", "y"], "images": ["0", "1"]})
    code, doc, _ = run(["lnd", "slice", "--derivation", s, "--slice", "y", "--poly", "x+y^2"])
    assert doc["coefficients"] == ["x", "0", "1"]
    loop = write("l.json", {"vars": ["x", "y"], "images": ["y", "x"]})
    code, doc, _ = run(["lnd", "nilpotent", "--derivation", loop])
    assert code == 1 and doc["verdict"] == "not_nilpotent"


def test_graph_pi1_single_vertex(write):
    t = write("g.json", {"vertices": [{"id": "v", "w": -5}], "edges": [], "ordering": ["v"]})
    code, doc, _ = run(["graph", "pi1", "--tree", t, "--abelian", "--subgroups", "5"])
    assert code == 0 and doc["torsion"] == [5]
    assert doc["subgroup_counts"] == [1, 0, 0, 0, 1]


def test_graph_commands(write):
    code, doc, _ = run(["graph", "abelian", "--pseudo-plane", "3,1"])
    assert doc["torsion"] == [9]
    t = write("c.json", {"vertices": [{"id": "a", "w": -2}, {"id": "b", "w": -2}], "edges": [["a", "b"]]})
    code, doc, _ = run(["graph", "form", "--tree", t])
    assert doc["det"] == 3 and doc["negative_definite"] is True
    assert run(["graph", "pic", "--fibers", "1:4"])[1]["torsion"] == [4]
    assert run(["graph", "genus", "--m1", "2", "--m2", "5"])[1]["genus"] == 2
    code, doc, _ = run(["graph", "enumerate", "--mode", "euler_zero", "--bounds", "m_max=12,r_max=6"])
    assert doc["count"] == 4
    f = write("f.json", {"components": [[-2, 1], [-2, 1], [-1, 2]], "edges": [[0, 2], [1, 2]],
                         "section": [0], "excluded": [2]})
    assert run(["graph", "section", "--fiber", f])[1]["alpha"] == "1/2"
    assert run(["graph", "canon", "--kind", "pseudo_plane", "--params", "r=2"])[1]["index"] == "0"
    assert run(["graph", "lines", "--n", "3", "--d", "2", "--dprime", "2"])[1]["lines"] == 4


def test_case_commands(write):
    code, doc, _ = run(["case", "family", "--family", "quadric_xyz", "--params", "n=2"])
    assert code == 0 and doc["unramified"] == "yes"
    code, doc, _ = run(["case", "family", "--family", "quadric_xyz", "--params", "n=2", "--plain"])
    assert code == 1 and doc["unramified"] == "no"
    cf = write("case.json", {"family": "xrz_yd", "params": {"d": 2, "r": 3, "n": 2}})
    assert run(["case", "family", "--case-file", cf])[0] == 0
    h = write("h.json", doc["hom"])
    assert run(["case", "hom", "--hom", h])[1]["well_defined"] is True
    assert run(["case", "dickson", "--n", "3"])[1]["g"] == "t^3 - 3*t"
    code, doc, _ = run(["case", "pq", "--d", "2", "--r", "3"])
    assert code == 0 and doc["charts"][0]["p"] == "1/8*x^2*a1^2 - 1/2*x^2*a2 - 1/2*x*a1 + 1"
    code, doc, _ = run(["case", "sigma", "--case", "prop1427", "--params", "d=2,r=3,a=1"])
    assert code == 0 and doc["ok"] is True
    code, doc, _ = run(["case", "iso", "--d", "3", "--r", "4", "--a", "4,8", "--b", "1,1"])
    assert code == 0 and doc["c"] == "2"


@pytest.mark.parametrize("table", ["platonic", "euler_zero", "pi1_orders"])
def test_reproduce_tables(table):
    code, doc, _ = run(["reproduce", table])
    assert code == 0 and doc["diff"] == []


def test_reproduce_cover_table_reports_cell_diff():
    code, doc, _ = run(["reproduce", "example1421"])
    # r = 3 cells agree; the r = 4 q cells differ from the printed -c2^2 x
    assert code == 1
    assert {d["cell"] for d in doc["diff"]} == {"r=4 root=1 q", "r=4 root=-1 q"}


def test_error_exit_codes(write, capsys):
    m = write("bad.json", {"vars": ["x", "y"], "components": ["x +", "y"]})
    code, doc, err = run(["keller", "check", "--map", m])
    assert code == 2 and doc["status"] == "error" and "PolySyntaxError" in err
    code, doc, _ = run(["keller", "check", "--map", "/nonexistent.json"])
    assert code == 2
    with pytest.raises(SystemExit) as e:
        dispatch(["keller", "frobnicate"], io.StringIO(), io.StringIO())
    assert e.value.code == 2


def test_text_emit():
    code, text, _ = run(["case", "dickson", "--n", "2", "--emit", "text"])
    assert code == 0 and "g: t^2 - 2" in text


def test_config_file_caps(write, tmp_path, monkeypatch):
    cfg = tmp_path / "caps.conf"
    cfg.write_text("# caps\ninvert.cap = 2\n")
    monkeypatch.setenv("POLYJC_CONFIG", str(cfg))
    m = write("m.json", {"vars": ["x", "y"], "components": ["x+y^2", "y+(x+y^2)^3"]})
    assert run(["keller", "invert", "--map", m])[0] == 3
    assert run(["keller", "invert", "--map", m, "--cap", "64"])[0] == 0


def test_deterministic_output(write):
    m = write("m.json", {"vars": ["x", "y", "z"], "components": ["x+y^2", "y+z^3", "z"]})
    outs = set()
    for _ in range(3):
        buf = io.StringIO()
        dispatch(["keller", "invert", "--map", m], buf, io.StringIO())
        outs.add(buf.getvalue())
    assert len(outs) == 1


def test_input_round_trips(write):
    from polyjc.casebook import RingHom
    from polyjc.fibration import FiberSpec, WeightedTree
    from polyjc.keller import PolyMap
    from polyjc.lnd import Derivation

    F = PolyMap.from_json({"vars": ["x", "y"], "components": ["y^2 + x", "1/3*y"]})
    assert PolyMap.from_json(F.to_json()) == F
    D = Derivation.from_json({"vars": ["x", "y"], "images": ["0", "x^2"]})
    assert Derivation.from_json(D.to_json()) == D
    T = WeightedTree.from_json({"vertices": [{"id": "a", "w": 0}, {"id": "b", "w": -3}], "edges": [["a", "b"]]})
    assert WeightedTree.from_json(T.to_json()) == T
    S = FiberSpec.from_json({"components": [[-1, 1]], "section": [0]})
    assert FiberSpec.from_json(S.to_json()) == S
    _, doc, _ = run(["case", "family", "--family", "twisted_x2u", "--params", "n=2"])
    H = RingHom.from_json(doc["hom"])
    assert RingHom.from_json(H.to_json()) == H


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "polyjc", "graph", "genus", "--m1", "2", "--m2", "3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["genus"] == 1
