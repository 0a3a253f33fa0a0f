"""Command-line front end.

Exit codes: 0 success / certificate pass, 1 certificate fail, 2 usage error,
3 precondition error.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from typing import List, Optional

from .certificate import Certificate, to_jsonable
from .certification import (
    absorbing_membership,
    growth_check,
    invariance_check,
    rouche_certificate,
    rouche_certificate_auto,
)
from .dynamics import Point, admissible_R, format_map_spec, in_region, iterate_orbit, parse_map_spec
from .errors import NotAbsorbed, PreconditionError, ToleranceUnreachable
from .linearization import conjugacy_residual, phi_n, phi_n_composed, sandwich_phi_W
from .persist import dump_orbit
from .render import PLANES, SliceSpec, render_slice
from .sampling import sample_region
from .series import delta_bound, limit_pair

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3
DEFAULT_MAP = "a=2;f=1,1"


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Accept ``1+1i``, ``-3+0.5i``, ``0.1i``, ``2`` and Python's ``1+1j``."""
    s = text.strip().replace(" ", "")
    s = re.sub(r"(?<![0-9.])[ij]", "1j", s).replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def _floats(text: str, count: int) -> List[float]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != count:
        raise UsageError(f"expected {count} comma-separated numbers, got {text!r}")
    return [float(p) for p in parts]


def default_R(m) -> float:
    """Admissible R for eps = 0.1, rounded up to one decimal."""
    return math.ceil(admissible_R(m, 0.1) * 10) / 10


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", default=DEFAULT_MAP, help='map spec, e.g. "a=2;f=1,1" or "a=2;f=0"')
    p.add_argument("--R", type=float, default=None, help="half-plane threshold (default: admissible)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="json")


def _point_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--z", required=required)
    p.add_argument("--w", required=required)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="henon-escape",
                                     description="Escaping Fatou components of transcendental Hénon maps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="dump a forward orbit")
    _common(p)
    _point_args(p)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--limits", action="store_true", help="add h1, h2 columns for points in W_R")
    p.set_defaults(format="csv")

    p = sub.add_parser("limitfn", help="certified h1, h2 at a point")
    _common(p)
    _point_args(p)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("conjcheck", help="functional equation, two-route phi_n and sandwich checks")
    _common(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--threshold", type=float, default=1e-9)

    p = sub.add_parser("invariance", help="forward invariance of W_R")
    _common(p)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("growth", help="growth sandwich for log||F^n||/n")
    _common(p)
    _point_args(p, required=False)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--n-max", type=int, default=60)

    p = sub.add_parser("rouche", help="Rouché certificate for c in h1(W_R)")
    _common(p)
    p.add_argument("--c", required=True)
    p.add_argument("--M", type=float, default=10.0)
    p.add_argument("--auto-M", action="store_true")
    p.add_argument("--boundary-samples", type=int, default=256)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("absorb", help="membership in the absorbing set")
    _common(p)
    _point_args(p)
    p.add_argument("--n-max", type=int, default=100)

    p = sub.add_parser("render", help="escape-time slice as a PPM image")
    _common(p)
    p.add_argument("--plane", choices=PLANES, default="re_z_re_w")
    p.add_argument("--window", default="-10,10,-10,10", help="min_x,max_x,min_y,max_y")
    p.add_argument("--size", default="256,256", help="width,height")
    p.add_argument("--fixed", default="0,0", help="the two frozen real coordinates")
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--shade", action="store_true", help="shade members by arg h1 at entry")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_cert(cert: Certificate, out: Optional[str]) -> int:
    _emit(cert.to_json() + "\n", out)
    return EXIT_OK if cert.passed else EXIT_FAIL


def _cmd_orbit(args, m, R):
    P = Point(parse_complex(args.z), parse_complex(args.w))
    orbit = iterate_orbit(m, P, args.n)
    pairs = None
    if args.limits:
        pairs = [limit_pair(m, Q, R) if in_region(Q, R) else None for Q in orbit.points]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            dump_orbit(orbit, fh, pairs, args.format)
    else:
        dump_orbit(orbit, sys.stdout, pairs, args.format)
    return EXIT_OK


def _cmd_limitfn(args, m, R):
    P = Point(parse_complex(args.z), parse_complex(args.w))
    pair = limit_pair(m, P, R, args.tol)
    record = {"map": format_map_spec(m), "R": R, "z": P.z, "w": P.w, **pair.to_record()}
    _emit(json.dumps(to_jsonable(record), indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_conjcheck(args, m, R):
    worst, failures = 0.0, []
    for P in sample_region(R, args.samples, args.seed):
        r = conjugacy_residual(m, P, R, args.tol)
        worst = max(worst, r)
        if r > args.threshold:
            failures.append({"P": [P.z, P.w], "residual": r})
    route_gap = 0.0
    for P in sample_region(R, 10, args.seed + 7):
        for n in range(41):
            a, b = phi_n(m, P, n), phi_n_composed(m, P, n)
            route_gap = max(route_gap, a.distance(b) / (1.0 + P.norm))
    values = {"max_residual": worst, "max_two_route_gap": route_gap,
              "delta_bound": delta_bound(m, R)}
    if R > delta_bound(m, R):
        sandwich = sandwich_phi_W(m, R, min(args.samples, 200), args.seed)
        values["sandwich"] = sandwich.verdict
        failures += sandwich.counterexamples
    else:
        values["sandwich"] = "skipped: R does not exceed the delta bound"
    ok = not failures and route_gap <= args.threshold
    cert = Certificate(type="conjugacy", map=format_map_spec(m),
                       params={"R": R, "tol": args.tol, "threshold": args.threshold},
                       samples=args.samples, values=values,
                       verdict="pass" if ok else "fail", seed=args.seed,
                       counterexamples=failures)
    return _emit_cert(cert, args.out)


def _cmd_invariance(args, m, R):
    return _emit_cert(invariance_check(m, R, args.eps, args.samples, args.seed), args.out)


def _cmd_growth(args, m, R):
    if (args.z is None) != (args.w is None):
        raise UsageError("--z and --w go together")
    if args.z is not None:
        samples = [Point(parse_complex(args.z), parse_complex(args.w))]
    else:
        samples = sample_region(R, args.samples, args.seed, span=10.0)
    report = growth_check(m, samples, R, args.eps, args.n_max)
    return _emit_cert(report.to_certificate(m, R, args.seed), args.out)


def _cmd_rouche(args, m, R):
    c = parse_complex(args.c)
    if args.auto_M:
        cert = rouche_certificate_auto(m, c, R, args.M, args.boundary_samples, args.tol)
    else:
        cert = rouche_certificate(m, c, R, args.M, args.boundary_samples, args.tol)
    return _emit_cert(cert.to_certificate(m), args.out)


def _cmd_absorb(args, m, R):
    P = Point(parse_complex(args.z), parse_complex(args.w))
    v = absorbing_membership(m, P, R, args.n_max)
    cert = Certificate(type="absorbing", map=format_map_spec(m),
                       params={"R": R, "n_max": args.n_max, "P": [P.z, P.w]}, samples=1,
                       values={"status": v.status, "entry_index": v.entry_index},
                       verdict="pass" if v.is_member else "unknown")
    return _emit_cert(cert, args.out)


def _cmd_render(args, m, R):
    if not args.out:
        raise UsageError("render needs --out <file.ppm>")
    spec = SliceSpec(args.plane, tuple(_floats(args.window, 4)),
                     tuple(int(v) for v in _floats(args.size, 2)), tuple(_floats(args.fixed, 2)))
    result = render_slice(m, R, spec, args.n_max, args.out, args.shade, args.workers)
    members = int((result.entry >= 0).sum())
    sys.stderr.write(f"wrote {args.out}: {spec.width}x{spec.height}, {members} member pixels\n")
    return EXIT_OK


COMMANDS = {
    "orbit": _cmd_orbit,
    "limitfn": _cmd_limitfn,
    "conjcheck": _cmd_conjcheck,
    "invariance": _cmd_invariance,
    "growth": _cmd_growth,
    "rouche": _cmd_rouche,
    "absorb": _cmd_absorb,
    "render": _cmd_render,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        m = parse_map_spec(args.map)
        R = args.R if args.R is not None else default_R(m)
        return COMMANDS[args.command](args, m, R)
    except (UsageError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            sys.stderr.write(f"precondition error: {exc}\n")
            return EXIT_PRECONDITION
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (NotAbsorbed, ToleranceUnreachable) as exc:
        sys.stderr.write(f"precondition error: {exc}\n")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
