import io
import json

import pytest

from henon_escape.cli import default_R, main, parse_complex
from henon_escape.dynamics import parse_map_spec
from henon_escape.persist import read_orbit


@pytest.mark.parametrize("text, value", [("1+1i", 1 + 1j), ("-3+0.5i", -3 + 0.5j), ("0.1i", 0.1j),
                                         ("2", 2), ("1+i", 1 + 1j), ("1-2j", 1 - 2j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_default_R():
    assert default_R(parse_map_spec("a=2;f=1,1")) == 0.7


def test_rouche_auto(capsys):
    code = main(["rouche", "--map", "a=2;f=1,1", "--c", "1+1i", "--auto-M"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["type"] == "rouche" and out["verdict"] == "pass"
    assert out["values"]["winding_h0"] == out["values"]["winding_h1"] == 1


def test_rouche_negative_real_is_precondition(capsys):
    assert main(["rouche", "--c", "-1", "--auto-M", "--R", "5"]) == 3


def test_growth_linear(capsys):
    assert main(["growth", "--map", "a=2;f=0", "--z", "4", "--w", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "pass"


def test_usage_errors(capsys):
    assert main(["growth", "--bogus"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["orbit", "--map", "a=0.5;f=0", "--z", "1", "--w", "1"]) == 2
    assert main(["growth", "--z", "4"]) == 2


def test_precondition_exit(capsys):
    assert main(["limitfn", "--z", "0", "--w", "0", "--R", "5"]) == 3
    assert main(["invariance", "--R", "0.3"]) == 3


def test_invariance_and_absorb(capsys):
    assert main(["invariance", "--R", "5", "--samples", "200"]) == 0
    assert main(["absorb", "--z", "6", "--w", "6", "--R", "5"]) == 0
    assert main(["absorb", "--z", "-100", "--w", "-100", "--R", "5", "--n-max", "50"]) == 1


def test_limitfn(capsys):
    assert main(["limitfn", "--z", "6", "--w", "6", "--R", "5"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert abs(rec["re_h1"] * rec["re_h2"] - 2) < 1e-10


def test_conjcheck(capsys):
    assert main(["conjcheck", "--R", "5", "--samples", "100"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["values"]["sandwich"] == "pass"


def test_orbit_dump(tmp_path):
    out = tmp_path / "orbit.csv"
    assert main(["orbit", "--z", "6", "--w", "6", "--n", "10", "--R", "5", "--limits",
                 "--out", str(out)]) == 0
    orbit, rows = read_orbit(io.StringIO(out.read_text()))
    assert len(orbit) == 11 and rows[0]["N_used"] >= 8


def test_render(tmp_path):
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    args = ["render", "--R", "5", "--size", "32,24", "--n-max", "30", "--shade"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["render", "--R", "5"]) == 2
