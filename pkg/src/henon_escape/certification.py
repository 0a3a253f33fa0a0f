"""Numerical certificates for the dynamical statements about F on W_R.

Each check returns data (a report or a ``Certificate``) rather than raising
on failure; exceptions are reserved for violated preconditions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .certificate import Certificate
from .dynamics import (
    OVERFLOW,
    MapSpec,
    Point,
    apply,
    f_sup_bound,
    format_map_spec,
    in_region,
    is_admissible,
    iterate_orbit,
)
from .errors import CurveTooClose, MTooSmallError, PreconditionError
from .sampling import sample_region
from .series import delta_bound, limit_pair

__all__ = [
    "GrowthReport",
    "DiskSpec",
    "RoucheCertificate",
    "AbsorbingVerdict",
    "growth_check",
    "invariance_check",
    "lemma_disk_radius",
    "rouche_disk",
    "winding_number",
    "rouche_certificate",
    "rouche_certificate_auto",
    "absorbing_membership",
    "u_n_diagnostics",
    "u_n_bound",
]

WINDING_CAP = 2 ** 20
BOUNDARY_SAMPLES = 256
SAMPLING_CHANGE = 0.01


def _require_admissible(m: MapSpec, R: float) -> None:
    # admissible for some eps > 0
    if not (R > 0 and f_sup_bound(m, R) < (m.a - 1.0) * R):
        raise PreconditionError(f"R={R} is not admissible for {format_map_spec(m)}")


# -- growth ---------------------------------------------------------------


@dataclass
class GrowthReport:
    s: List[List[float]]
    band: tuple
    m: float
    M: float
    eps: float
    n0: Optional[int]
    ratios_ok: bool
    n_max: int
    verdict: str

    def to_certificate(self, map_spec: MapSpec, R: float, seed=None) -> Certificate:
        return Certificate(
            type="growth",
            map=format_map_spec(map_spec),
            params={"R": R, "eps": self.eps, "n_max": self.n_max},
            samples=len(self.s),
            values={"band": list(self.band), "m": self.m, "M": self.M, "n0": self.n0,
                    "ratios_ok": self.ratios_ok,
                    "s_last": [row[-1] if row else None for row in self.s]},
            verdict=self.verdict,
            seed=seed,
        )


def growth_check(m: MapSpec, samples: Sequence[Point], R: float,
                 eps: Optional[float] = None, n_max: int = 60) -> GrowthReport:
    """Check log||F^n(P)||/n against the band [log(m-eps), log(M+eps)].

    m and M are the smallest and largest of |h1|, |h2| over the samples.
    """
    if not samples:
        raise PreconditionError("growth_check needs at least one sample")
    mags = []
    for P in samples:
        if not in_region(P, R):
            raise PreconditionError(f"sample {P} is not in W_R")
        pair = limit_pair(m, P, R)
        mags += [abs(pair.h1.value), abs(pair.h2.value)]
    m_lo, M_hi = min(mags), max(mags)
    if not m_lo > 0 or not math.isfinite(M_hi):
        raise PreconditionError("a limit function takes the value 0 or infinity on the samples")
    if eps is None:
        eps = m_lo / 10.0
    if not 0 < eps < m_lo:
        raise PreconditionError(f"epsilon too large: need 0 < eps < {m_lo}")
    lo, hi = math.log(m_lo - eps), math.log(M_hi + eps)

    s_all, n0, ratios_ok = [], 1, True
    orbits = []
    for P in samples:
        orbit = iterate_orbit(m, P, n_max)
        orbits.append(orbit)
        s = [math.log(orbit[n].norm) / n for n in range(1, len(orbit))]
        s_all.append(s)
        bad = [n for n, v in enumerate(s, start=1) if not lo <= v <= hi]
        if bad:
            n0 = max(n0, bad[-1] + 1)
    for orbit in orbits:
        for n in range(n0, len(orbit)):
            r = abs(orbit[n].z / orbit[n].w)
            if not m_lo - eps <= r <= M_hi + eps:
                ratios_ok = False
    verdict = "pass" if n0 <= n_max / 2 and ratios_ok else "fail"
    return GrowthReport(s_all, (lo, hi), m_lo, M_hi, eps, n0, ratios_ok, n_max, verdict)


# -- invariance -----------------------------------------------------------


def invariance_check(m: MapSpec, R: float, eps: float, samples: int = 1000,
                     seed: int = 0) -> Certificate:
    """Sample W_R and check F(P) in W_R with Re z_1 > R + eps."""
    if not is_admissible(m, R, eps):
        raise PreconditionError(f"R={R} is not admissible for eps={eps}")
    min_margin = math.inf
    bad = []
    for P in sample_region(R, samples, seed):
        Q = apply(m, P)
        if Q is OVERFLOW:
            bad.append({"P": [P.z, P.w], "image": "overflow"})
            continue
        margin = min(Q.z.real - (R + eps), Q.w.real - R)
        min_margin = min(min_margin, margin)
        if not margin > 0:
            bad.append({"P": [P.z, P.w], "image": [Q.z, Q.w]})
    return Certificate(
        type="invariance",
        map=format_map_spec(m),
        params={"R": R, "eps": eps},
        samples=samples,
        values={"min_margin": min_margin},
        verdict="fail" if bad else "pass",
        seed=seed,
        counterexamples=bad,
    )


# -- disks and Rouché -----------------------------------------------------


@dataclass(frozen=True)
class DiskSpec:
    """The disk {(c w0, w0) + t(-1, conj c) : |t| < delta} transverse to L_c."""

    c: complex
    w0: complex
    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("disk parameter radius must be positive")

    @property
    def center(self) -> Point:
        return Point(self.c * self.w0, self.w0)

    @property
    def ambient_radius(self) -> float:
        return math.sqrt(1.0 + abs(self.c) ** 2) * self.delta

    def at(self, t: complex) -> Point:
        return Point(self.c * self.w0 - t, self.w0 + self.c.conjugate() * t)

    def boundary_point(self, theta: float) -> Point:
        return self.at(self.delta * cmath.exp(1j * theta))

    def boundary(self, n: int) -> List[Point]:
        return [self.boundary_point(2 * math.pi * j / n) for j in range(n)]


def lemma_disk_radius(c: complex, w0: complex, R: float) -> float:
    """Largest delta with D_{c,delta}(w0) inside W_R."""
    c, w0 = complex(c), complex(w0)
    if c == 0:
        raise PreconditionError("c must be nonzero")
    if not in_region(Point(c * w0, w0), R):
        raise PreconditionError(f"disk center ({c * w0}, {w0}) is not in W_R")
    return min(abs(w0.real - R) / abs(c), abs(c.real * w0.real - c.imag * w0.imag - R))


def rouche_disk(c: complex, M_param: float, R: float) -> DiskSpec:
    c = complex(c)
    if c == 0 or not cmath.isfinite(c):
        raise PreconditionError("c must be finite and nonzero")
    if not M_param > 1:
        raise MTooSmallError("M must exceed 1")
    if c.imag != 0:
        w0 = complex(M_param + R, ((M_param + R) * c.real - 2 * M_param - R) / c.imag)
    else:
        w0 = complex(2 * M_param + R, 0.0)
    delta = (M_param - 1) * min(abs(c), 1 / abs(c))
    limit = lemma_disk_radius(c, w0, R)
    if delta > limit:
        raise MTooSmallError(f"M={M_param}: disk radius {delta} exceeds {limit}")
    return DiskSpec(c, w0, delta)


def winding_number(curve: Callable[[float], complex], c: complex = 0j,
                   m_samples: int = BOUNDARY_SAMPLES, cap: int = WINDING_CAP) -> int:
    """Winding number of the closed curve theta -> curve(theta), theta in [0, 2 pi), around c.

    Segments whose argument increment reaches pi/2 are bisected until every
    increment is below pi/2.
    """
    ts = [2 * math.pi * j / m_samples for j in range(m_samples)]
    vals = [complex(curve(t)) - c for t in ts]
    while True:
        if any(v == 0 for v in vals):
            raise CurveTooClose("curve passes through the target")
        n = len(ts)
        steps = [cmath.phase(vals[(j + 1) % n] / vals[j]) for j in range(n)]
        coarse = [j for j in range(n) if abs(steps[j]) >= math.pi / 2]
        if not coarse:
            return int(round(sum(steps) / (2 * math.pi)))
        if n + len(coarse) > cap:
            raise CurveTooClose(f"refinement exceeded {cap} samples")
        new_ts, new_vals = [], []
        coarse_set = set(coarse)
        for j in range(n):
            new_ts.append(ts[j])
            new_vals.append(vals[j])
            if j in coarse_set:
                t_next = ts[j + 1] if j + 1 < n else 2 * math.pi
                mid = 0.5 * (ts[j] + t_next)
                new_ts.append(mid)
                new_vals.append(complex(curve(mid)) - c)
        ts, vals = new_ts, new_vals


@dataclass
class RoucheCertificate:
    disk: DiskSpec
    M_param: float
    A_min: float
    B_max: float
    winding_h0: int
    winding_h1: int
    verdict: str
    R: float = 0.0
    boundary_samples: int = 0
    sampling_converged: bool = True
    attempts: list = field(default_factory=list)

    @property
    def c(self) -> complex:
        return self.disk.c

    def to_certificate(self, map_spec: MapSpec) -> Certificate:
        return Certificate(
            type="rouche",
            map=format_map_spec(map_spec),
            params={"c": self.c, "R": self.R, "M_param": self.M_param,
                    "w0": self.disk.w0, "delta": self.disk.delta},
            samples=self.boundary_samples,
            values={"A_min": self.A_min, "B_max": self.B_max,
                    "winding_h0": self.winding_h0, "winding_h1": self.winding_h1,
                    "sampling_converged": self.sampling_converged,
                    "attempts": self.attempts},
            verdict=self.verdict,
        )


def _boundary_extremes(m, disk, c, R, thetas, tol):
    A_min, B_max = math.inf, 0.0
    for theta in thetas:
        P = disk.boundary_point(theta)
        h0 = P.z / P.w
        pair = limit_pair(m, P, R, tol)
        A_min = min(A_min, abs(h0 - c))
        B_max = max(B_max, abs(pair.h1.value - h0) + pair.h1.err)
    return A_min, B_max


def _rel_change(old: float, new: float) -> float:
    return abs(new - old) / max(abs(old), abs(new), 1e-300)


def rouche_certificate(m: MapSpec, c: complex, R: float, M_param: float = 10.0,
                       m_samples: int = BOUNDARY_SAMPLES, tol: float = 1e-12) -> RoucheCertificate:
    """Certify c in h1(D) for the disk D = rouche_disk(c, M_param, R).

    A_min bounds |h0 - c| from below on the sampled boundary and B_max bounds
    |h1 - h0| from above (series error included).  Boundary sampling starts
    at ``m_samples`` points and is doubled once; a second doubling happens if
    either extreme moved by more than 1%.  Sampling is a heuristic: between
    samples the extremes are not certified.
    """
    c = complex(c)
    if c == 0 or not cmath.isfinite(c):
        raise PreconditionError("c must be finite and nonzero")
    _require_admissible(m, R)
    disk = rouche_disk(c, M_param, R)

    n = m_samples
    thetas = [2 * math.pi * j / n for j in range(n)]
    A_min, B_max = _boundary_extremes(m, disk, c, R, thetas, tol)
    converged = False
    for _ in range(2):
        mids = [2 * math.pi * (j + 0.5) / n for j in range(n)]
        A2, B2 = _boundary_extremes(m, disk, c, R, mids, tol)
        A2, B2 = min(A_min, A2), max(B_max, B2)
        n *= 2
        change = max(_rel_change(A_min, A2), _rel_change(B_max, B2))
        A_min, B_max = A2, B2
        if change <= SAMPLING_CHANGE:
            converged = True
            break

    def h0_curve(theta):
        P = disk.boundary_point(theta)
        return P.z / P.w

    def h1_curve(theta):
        return limit_pair(m, disk.boundary_point(theta), R, tol).h1.value

    wind0 = winding_number(h0_curve, c, m_samples)
    wind1 = winding_number(h1_curve, c, m_samples)
    verdict = "pass" if B_max < A_min and wind0 >= 1 else "fail"
    return RoucheCertificate(disk, M_param, A_min, B_max, wind0, wind1, verdict,
                             R=R, boundary_samples=n, sampling_converged=converged)


def rouche_certificate_auto(m: MapSpec, c: complex, R: float, M_start: float = 10.0,
                            m_samples: int = BOUNDARY_SAMPLES, tol: float = 1e-12,
                            M_cap: Optional[float] = None) -> RoucheCertificate:
    """Double M from ``M_start`` until the certificate passes or M exceeds 2**10 * R."""
    if M_cap is None:
        M_cap = 2 ** 10 * R
    M = M_start
    attempts = []
    last = None
    while M <= M_cap:
        try:
            cert = rouche_certificate(m, c, R, M, m_samples, tol)
        except MTooSmallError as exc:
            attempts.append({"M": M, "outcome": str(exc)})
        else:
            attempts.append({"M": M, "outcome": cert.verdict,
                             "A_min": cert.A_min, "B_max": cert.B_max})
            last = cert
            if cert.verdict == "pass":
                break
        M *= 2
    if last is None:
        raise MTooSmallError(f"no admissible disk for M up to {M_cap}")
    last.attempts = attempts
    return last


# -- absorbing domain -----------------------------------------------------


@dataclass(frozen=True)
class AbsorbingVerdict:
    entry_index: Optional[int]
    status: str
    n_max: int

    def __post_init__(self):
        if (self.entry_index is not None) != (self.status == "member"):
            raise ValueError("entry_index is present exactly for members")

    @property
    def is_member(self) -> bool:
        return self.status == "member"


def absorbing_membership(m: MapSpec, P: Point, R: float, n_max: int = 100) -> AbsorbingVerdict:
    """First n <= n_max with F^n(P) in W_R.

    Never reports non-membership: an orbit that has not entered W_R (or has
    overflowed) yields status "unknown".
    """
    _require_admissible(m, R)
    Q = P
    for n in range(n_max + 1):
        if in_region(Q, R):
            return AbsorbingVerdict(n, "member", n_max)
        if n == n_max:
            break
        Q = apply(m, Q)
        if Q is OVERFLOW:
            break
    return AbsorbingVerdict(None, "unknown", n_max)


def u_n_diagnostics(m: MapSpec, P: Point, n_max: int) -> List[float]:
    """u_n = -Re z_n / n for n = 1..n_max; shorter when the orbit overflows."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    orbit = iterate_orbit(m, P, n_max)
    return [-orbit[n].z.real / n for n in range(1, len(orbit))]


def u_n_bound(m: MapSpec, R: float, n: int) -> float:
    """Upper bound -a^floor(n/2) (R - delta_bound) / n for u_n on W_R."""
    return -(m.a ** (n // 2)) * (R - delta_bound(m, R)) / n


def boundary_in_region(disk: DiskSpec, R: float, n: int = 512) -> np.ndarray:
    return np.array([in_region(P, R) for P in disk.boundary(n)])
