"""Orbit dumps (CSV / JSON lines) and certificate files."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import IO, List, Optional, Sequence, Tuple

from .certificate import Certificate
from .dynamics import Orbit, Point
from .series import LimitPair

__all__ = ["ORBIT_COLUMNS", "PAIR_COLUMNS", "orbit_rows", "dump_orbit", "read_orbit",
           "write_certificate", "read_certificate", "dumps_orbit"]

ORBIT_COLUMNS = ["n", "re_z", "im_z", "re_w", "im_w", "norm", "re_ratio", "im_ratio", "u_n"]
PAIR_COLUMNS = ["re_h1", "im_h1", "err_h1", "re_h2", "im_h2", "err_h2", "N_used"]


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def orbit_rows(orbit: Orbit, pairs: Optional[Sequence[Optional[LimitPair]]] = None) -> List[dict]:
    rows = []
    ratios = orbit.ratio
    for n, P in enumerate(orbit.points):
        row = {
            "n": n,
            "re_z": P.z.real,
            "im_z": P.z.imag,
            "re_w": P.w.real,
            "im_w": P.w.imag,
            "norm": P.norm,
            "re_ratio": ratios[n].real,
            "im_ratio": ratios[n].imag,
            "u_n": -P.z.real / n if n else math.nan,
        }
        if pairs is not None:
            pair = pairs[n] if n < len(pairs) else None
            if pair is None:
                row.update({k: None for k in PAIR_COLUMNS})
            else:
                row.update(pair.to_record())
        rows.append(row)
    return rows


def dump_orbit(orbit: Orbit, sink: IO[str], pairs=None, fmt: str = "csv") -> None:
    """Write one row per orbit point; floats carry 17 significant digits."""
    rows = orbit_rows(orbit, pairs)
    columns = ORBIT_COLUMNS + (PAIR_COLUMNS if pairs is not None else [])
    if fmt == "csv":
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row[c] is None else _fmt(row[c]) for c in columns])
    elif fmt == "json":
        for row in rows:
            record = {}
            for c in columns:
                v = row[c]
                if isinstance(v, float) and not math.isfinite(v):
                    v = repr(v)
                record[c] = v
            sink.write(json.dumps(record) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _parse_value(text: str):
    if text == "":
        return None
    if text.lstrip("-").isdigit():
        return int(text)
    return float(text)


def read_orbit(source: IO[str], fmt: str = "csv") -> Tuple[Orbit, List[dict]]:
    """Parse a dump back into an Orbit plus the raw rows."""
    if fmt == "csv":
        reader = csv.DictReader(source)
        rows = [{k: _parse_value(v) for k, v in r.items()} for r in reader]
    elif fmt == "json":
        rows = []
        for line in source:
            if line.strip():
                rec = json.loads(line)
                rows.append({k: float(v) if isinstance(v, str) else v for k, v in rec.items()})
    else:
        raise ValueError(f"unknown format {fmt!r}")
    points = tuple(
        Point(complex(r["re_z"], r["im_z"]), complex(r["re_w"], r["im_w"])) for r in rows
    )
    return Orbit(points), rows


def write_certificate(cert: Certificate, sink: IO[str]) -> None:
    sink.write(cert.to_json() + "\n")


def read_certificate(source: IO[str]) -> Certificate:
    return Certificate.from_dict(json.load(source))


def dumps_orbit(orbit: Orbit, pairs=None, fmt: str = "csv") -> str:
    buf = io.StringIO()
    dump_orbit(orbit, buf, pairs, fmt)
    return buf.getvalue()
