import io
import json
import math

from henon_escape import Certificate, Point, iterate_orbit, limit_pair, u_n_diagnostics
from henon_escape.persist import ORBIT_COLUMNS, dump_orbit, dumps_orbit, read_certificate, read_orbit, write_certificate


def test_csv_header_and_first_row(exp_map):
    orbit = iterate_orbit(exp_map, Point(6 + 1j, 7), 5)
    lines = dumps_orbit(orbit).splitlines()
    assert lines[0] == ",".join(ORBIT_COLUMNS)
    first = lines[1].split(",")
    assert first[:5] == ["0", "6", "1", "7", "0"]


def test_csv_roundtrip_exact(exp_map):
    orbit = iterate_orbit(exp_map, Point(5.123456789 + 0.1j, 6.3 - 2.7j), 30)
    back, rows = read_orbit(io.StringIO(dumps_orbit(orbit)))
    assert back.points == orbit.points


def test_json_lines_roundtrip(exp_map):
    orbit = iterate_orbit(exp_map, Point(5.5, 6.25 + 1j), 12)
    back, rows = read_orbit(io.StringIO(dumps_orbit(orbit, fmt="json")), fmt="json")
    assert back.points == orbit.points
    assert math.isnan(rows[0]["u_n"])


def test_u_n_column_matches_diagnostics(exp_map):
    P = Point(6, 6)
    orbit = iterate_orbit(exp_map, P, 25)
    _, rows = read_orbit(io.StringIO(dumps_orbit(orbit)))
    u = u_n_diagnostics(exp_map, P, 25)
    assert [r["u_n"] for r in rows[1:]] == u


def test_pairs_columns(exp_map):
    orbit = iterate_orbit(exp_map, Point(6, 6), 3)
    pairs = [limit_pair(exp_map, Q, 5.0) for Q in orbit.points]
    _, rows = read_orbit(io.StringIO(dumps_orbit(orbit, pairs)))
    assert rows[0]["re_h1"] == pairs[0].h1.value.real
    assert rows[2]["N_used"] == pairs[2].N_used


def test_certificate_roundtrip():
    cert = Certificate(type="invariance", map="a=2.0;f=1.0,1.0", params={"R": 5.0},
                       samples=3, values={"min_margin": 0.5, "z": 1 + 2j}, verdict="pass", seed=4)
    buf = io.StringIO()
    write_certificate(cert, buf)
    d = json.loads(buf.getvalue())
    assert {"type", "map", "params", "samples", "values", "verdict", "seed", "tool_version"} <= set(d)
    assert d["values"]["z"] == [1.0, 2.0]
    back = read_certificate(io.StringIO(buf.getvalue()))
    assert back.verdict == "pass" and back.seed == 4
