import argparse
import json
import subprocess
import sys

import pytest

from leibniz import lbz
from leibniz.algcore import StructureTable
from leibniz.cli import RunConfig, build_parser, main
from leibniz.errors import BadParams
from leibniz.exactfield import GF, Q
from leibniz.families import abelian, diamond, sl2


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, L in {
        "diamond": diamond(Q),
        "diamond5": diamond(GF(5)),
        "abelian2": abelian(2, GF(5)),
        "abelian3": abelian(3, GF(2)),
        "sl2": sl2(GF(7)),
        "broken": StructureTable.from_products(Q, ("a", "b"), {("b", "b"): {"b": 1}}),
    }.items():
        paths[name] = str(tmp_path / f"{name}.lbz")
        lbz.dump(L, paths[name])
    bad = tmp_path / "bad.lbz"
    bad.write_text("{ not json")
    paths["bad"] = str(bad)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check(files, capsys):
    code, out, _ = run(capsys, "check", files["diamond"])
    assert code == 0 and "convention: right" in out
    code, out, _ = run(capsys, "check", files["broken"])
    assert code == 1 and "witness: x=b, y=b, z=b; defect = b" in out
    code, _, err = run(capsys, "check", files["bad"])
    assert code == 2 and err.startswith("error:")
    code, out, _ = run(capsys, "check", files["broken"], "--format", "json")
    doc = json.loads(out)
    assert doc["holds"] is False and doc["witness"] == ["b", "b", "b"]


def test_check_variant(files, capsys):
    assert run(capsys, "check", files["diamond"], "--variant", "left")[0] == 1
    assert run(capsys, "check", files["sl2"], "--variant", "symmetric")[0] == 0


def test_inv(files, capsys):
    code, out, _ = run(capsys, "inv", files["diamond"], "--kernel")
    assert code == 0 and "I = span{a}" in out
    code, out, _ = run(capsys, "inv", files["sl2"], "--radical")
    assert "R = 0" in out and "N = 0" in out
    code, out, _ = run(capsys, "inv", files["abelian3"], "--all", "--format", "json")
    doc = json.loads(out)
    flags = doc["flags"]
    assert flags["is_nilpotent"] and flags["is_solvable"] and flags["quasi_abelian_class"] == "abelian"


def test_lattice_outputs(files, capsys):
    code, out, _ = run(capsys, "lattice", files["diamond5"], "--dot")
    assert code == 0 and out.startswith("// convention: right\ndigraph lattice {")
    code, out, _ = run(capsys, "lattice", files["diamond5"], "--json")
    assert len(json.loads(out)["nodes"]) == 4
    code, out, _ = run(capsys, "lattice", files["diamond"])
    assert code == 2


def test_iso(files, capsys):
    code, out, _ = run(capsys, "iso", files["diamond5"], files["diamond5"], "--lattice")
    assert code == 0 and "isomorphisms: 2" in out
    code, _, _ = run(capsys, "iso", files["diamond5"], files["abelian2"], "--lattice")
    assert code == 1
    code, out, _ = run(capsys, "iso", files["diamond5"], files["diamond5"], "--algebra")
    assert code == 0 and "1 0\n  0 1" in out
    assert run(capsys, "iso", files["diamond5"], files["abelian2"], "--algebra")[0] == 1


def test_family(capsys, tmp_path):
    code, out, _ = run(capsys, "family", "cyclic", "--n", "3", "--alphas", "0,1", "--field", "GF(3)")
    L = lbz.loads(out)
    assert code == 0 and L.dim == 3 and L.field == GF(3)
    code, out, _ = run(capsys, "family", "diamond", "--convention", "left")
    assert lbz.loads(out).convention == "left"
    target = tmp_path / "h.lbz"
    code, out, _ = run(capsys, "family", "heisenberg", "--out", str(target))
    assert code == 0 and out == "" and lbz.load(target).dim == 3
    assert run(capsys, "family", "sl2", "--field", "GF(2)")[0] == 2


def test_atlas_small(capsys):
    code, out, _ = run(capsys, "atlas", "--dims", "2", "--primes", "2")
    assert code == 0 and "kernel-basic" in out
    code, out2, _ = run(capsys, "atlas", "--dims", "2", "--primes", "2", "--jobs", "2")
    assert out == out2
    code, out, _ = run(capsys, "atlas", "--dims", "2", "--field", "GF(3)", "--format", "structured")
    doc = json.loads(out)
    assert code == 0 and doc["header"]["fields"] == ["GF(3)"]
    assert run(capsys, "atlas", "--dims", "2", "--primes", "11")[0] == 2


def test_flags_beat_environment():
    parser = build_parser()
    env = {"LEIBNIZ_SEED": "5", "LEIBNIZ_MAX_DIM": "4", "LEIBNIZ_CONVENTION": "left"}
    cfg = RunConfig.from_args(parser.parse_args(["atlas"]), env)
    assert (cfg.seed, cfg.max_dim, cfg.convention) == (5, 4, "left")
    cfg = RunConfig.from_args(parser.parse_args(["atlas", "--seed", "9", "--convention", "right"]), env)
    assert (cfg.seed, cfg.max_dim, cfg.convention) == (9, 4, "right")
    cfg = RunConfig.from_args(parser.parse_args(["atlas"]), {})
    assert cfg == RunConfig()
    assert cfg.caps() == {"max_dim": 6, "max_p": 7, "max_lattice_nodes": 5000, "max_gl_order": 10**6,
                          "rational_height": 3}
    with pytest.raises(BadParams):
        RunConfig.from_args(parser.parse_args(["atlas"]), {"LEIBNIZ_SEED": "x"})


def test_caps_flags(files, capsys):
    assert run(capsys, "inv", files["sl2"], "--max-p", "5")[0] == 2
    assert run(capsys, "inv", files["abelian3"], "--max-dim", "2")[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_outputs_are_deterministic(files, capsys):
    outs = {run(capsys, "inv", files["sl2"], "--all", "--format", "json")[1] for _ in range(2)}
    assert len(outs) == 1


def test_console_script(files):
    res = subprocess.run([sys.executable, "-m", "leibniz.cli", "check", files["diamond"]],
                         capture_output=True, text=True)
    assert res.returncode == 0
