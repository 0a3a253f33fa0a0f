"""Transcendental Hénon maps F(z, w) = (a*w + f(z), z) with exponential-sum f.

The map family is restricted to

    f(z) = sum_i A_i * exp(-k_i * z),   A_i > 0, k_i > 0,

which is bounded on every right half-plane and admits the closed-form bound
sup_{Re z > R} |f(z)| <= sum_i A_i * exp(-k_i * R).  The empty sum (f = 0)
gives the linear map L(z, w) = (a*w, z) and is kept as a test oracle.

Overflow never raises: scalar operations return the ``OVERFLOW`` sentinel and
orbits are truncated at the first unrepresentable iterate.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from .errors import PreconditionError

__all__ = [
    "OVERFLOW",
    "MapSpec",
    "Point",
    "Region",
    "Orbit",
    "make_map",
    "parse_map_spec",
    "format_map_spec",
    "f_eval",
    "f_sup_bound",
    "apply",
    "apply_inverse",
    "iterate_orbit",
    "in_region",
    "admissible_R",
    "is_admissible",
    "apply_array",
]

ADMISSIBLE_TOL = 1e-9


class _Overflow:
    """Singleton marking a value outside double range."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OVERFLOW"

    def __bool__(self) -> bool:
        return False


OVERFLOW = _Overflow()


@dataclass(frozen=True)
class MapSpec:
    a: float
    f_terms: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        a = float(self.a)
        if not math.isfinite(a) or a <= 1.0:
            raise ValueError(f"a must be a finite real > 1, got {self.a!r}")
        terms = tuple((float(A), float(k)) for A, k in self.f_terms)
        for A, k in terms:
            if not (math.isfinite(A) and A > 0 and math.isfinite(k) and k > 0):
                raise ValueError(f"f term ({A}, {k}) needs A > 0 and k > 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "f_terms", terms)

    @property
    def theorem_hypotheses_met(self) -> bool:
        """True when f is nonlinear, i.e. the exponential sum is non-empty."""
        return len(self.f_terms) > 0

    @property
    def amplitude(self) -> float:
        return sum(A for A, _ in self.f_terms)

    def __str__(self) -> str:
        return format_map_spec(self)


def make_map(a: float, f_terms: Iterable[Tuple[float, float]] = ()) -> MapSpec:
    return MapSpec(a, tuple(tuple(t) for t in f_terms))


def format_map_spec(m: MapSpec) -> str:
    """Serialize as ``a=<float>;f=<A1>,<k1>+<A2>,<k2>`` (``f=0`` when linear)."""
    if m.f_terms:
        f = "+".join(f"{A!r},{k!r}" for A, k in m.f_terms)
    else:
        f = "0"
    return f"a={m.a!r};f={f}"


_TERM_SPLIT = re.compile(r"(?<![eE])\+")


def parse_map_spec(text: str) -> MapSpec:
    fields = {}
    for part in text.strip().split(";"):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"malformed map spec field {part!r}")
        fields[key.strip()] = value.strip()
    if set(fields) != {"a", "f"}:
        raise ValueError(f"map spec needs exactly fields a and f: {text!r}")
    a = float(fields["a"])
    f = fields["f"]
    terms = []
    if f != "0":
        for term in _TERM_SPLIT.split(f):
            A, sep, k = term.partition(",")
            if not sep:
                raise ValueError(f"malformed f term {term!r}")
            terms.append((float(A), float(k)))
    return make_map(a, terms)


@dataclass(frozen=True, slots=True)
class Point:
    z: complex
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "w", complex(self.w))

    @property
    def norm(self) -> float:
        return math.hypot(abs(self.z), abs(self.w))

    def distance(self, other: "Point") -> float:
        return math.hypot(abs(self.z - other.z), abs(self.w - other.w))

    def is_finite(self) -> bool:
        return cmath.isfinite(self.z) and cmath.isfinite(self.w)


@dataclass(frozen=True)
class Region:
    """The open product half-plane W_R = {Re z > R, Re w > R}."""

    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"region threshold must be positive, got {self.R!r}")

    def __contains__(self, P: Point) -> bool:
        return in_region(P, self)


MaybePoint = Union[Point, _Overflow]


def f_eval(m: MapSpec, z: complex):
    total = 0j
    for A, k in m.f_terms:
        try:
            total += A * cmath.exp(-k * z)
        except OverflowError:
            return OVERFLOW
    if not cmath.isfinite(total):
        return OVERFLOW
    return total


def f_sup_bound(m: MapSpec, R: float) -> float:
    """Upper bound for sup |f| over the open half-plane Re z > R."""
    total = 0.0
    for A, k in m.f_terms:
        try:
            total += A * math.exp(-k * R)
        except OverflowError:
            return math.inf
    return total


def apply(m: MapSpec, P: Point) -> MaybePoint:
    fz = f_eval(m, P.z)
    if fz is OVERFLOW:
        return OVERFLOW
    z1 = m.a * P.w + fz
    if not cmath.isfinite(z1):
        return OVERFLOW
    return Point(z1, P.z)


def apply_inverse(m: MapSpec, P: Point) -> MaybePoint:
    fw = f_eval(m, P.w)
    if fw is OVERFLOW:
        return OVERFLOW
    w0 = (P.z - fw) / m.a
    if not cmath.isfinite(w0):
        return OVERFLOW
    return Point(P.w, w0)


@dataclass(frozen=True)
class Orbit:
    """Forward orbit P_0, ..., P_n.

    ``stop_index`` is the index of the first iterate that overflowed, or None
    when the orbit reached the requested length.
    """

    points: Tuple[Point, ...]
    stop_index: Optional[int] = None

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, n: int) -> Point:
        return self.points[n]

    @property
    def truncated(self) -> bool:
        return self.stop_index is not None

    @property
    def re_z(self) -> np.ndarray:
        return np.array([P.z.real for P in self.points])

    @property
    def norm(self) -> np.ndarray:
        return np.array([P.norm for P in self.points])

    @property
    def ratio(self) -> np.ndarray:
        """z_n / w_n, with complex NaN where w_n = 0."""
        return np.array(
            [P.z / P.w if P.w != 0 else complex(math.nan, math.nan) for P in self.points]
        )


def iterate_orbit(m: MapSpec, P: Point, n: int) -> Orbit:
    if n < 0:
        raise ValueError("orbit length must be non-negative")
    points = [P]
    for i in range(n):
        Q = apply(m, points[-1])
        if Q is OVERFLOW:
            return Orbit(tuple(points), stop_index=i + 1)
        points.append(Q)
    return Orbit(tuple(points))


def in_region(P: Point, W: Union[Region, float]) -> bool:
    R = W.R if isinstance(W, Region) else W
    return P.z.real > R and P.w.real > R


def is_admissible(m: MapSpec, R: float, eps: float) -> bool:
    """|f| < (a-1)R - eps on Re z > R, certified through the closed-form bound."""
    return R > 0 and f_sup_bound(m, R) <= (m.a - 1.0) * R - eps


def admissible_R(m: MapSpec, eps: float) -> float:
    """Smallest R (within ``ADMISSIBLE_TOL``) such that W_R is forward invariant with margin eps.

    Bisection on the increasing gap (a-1)R - eps - sup|f|; the returned value is
    the admissible end of the final bracket.
    """
    if not eps > 0:
        raise PreconditionError("eps must be positive")

    def gap(R):
        return (m.a - 1.0) * R - eps - f_sup_bound(m, R)

    lo = 0.0
    hi = max(1.0, 2.0 * m.amplitude / (m.a - 1.0)) + eps
    while gap(hi) < 0:
        lo, hi = hi, 2.0 * hi
    while hi - lo > ADMISSIBLE_TOL:
        mid = 0.5 * (lo + hi)
        if gap(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return hi


def f_eval_array(m: MapSpec, z: np.ndarray) -> np.ndarray:
    out = np.zeros_like(z, dtype=np.complex128)
    with np.errstate(over="ignore", invalid="ignore"):
        for A, k in m.f_terms:
            out += A * np.exp(-k * z)
    return out


def apply_array(m: MapSpec, z: np.ndarray, w: np.ndarray):
    """Vectorized F on coordinate arrays; non-finite entries mark overflow."""
    with np.errstate(over="ignore", invalid="ignore"):
        return m.a * w + f_eval_array(m, z), z

