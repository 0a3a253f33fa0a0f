"""Certified evaluation of the limit functions h1, h2 on W_R.

For P = (z0, w0) in W_R with orbit (z_n, w_n) the two series

    k1(P) = sum_{j>=1} a^-j f(z_{2j-1}),    k2(P) = sum_{j>=1} a^-j f(z_{2j-2})

converge geometrically, and

    h1 = lim z_{2n}/w_{2n}   = (z0 + k1) / (w0 + k2),
    h2 = lim z_{2n+1}/w_{2n+1} = a (w0 + k2) / (z0 + k1) = a / h1.

Truncating after N terms leaves a tail bounded by sup|f| * a^-N / (a - 1).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import List, Tuple

from .bounded import Bounded
from .dynamics import MapSpec, Point, f_eval, f_sup_bound, in_region, iterate_orbit
from .errors import PreconditionError, ToleranceUnreachable

__all__ = [
    "LimitPair",
    "delta_bound",
    "tail_bound",
    "k_sums",
    "limit_pair",
    "ratio_sequence",
    "N_START",
    "N_CAP",
]

N_START = 8
N_CAP = 10_000
# relative slack for comparing rounded doubles against exact identities
ROUNDING = 64 * sys.float_info.epsilon


def delta_bound(m: MapSpec, R: float) -> float:
    """Uniform bound on |k1|, |k2| over W_R: sup|f| * sum_j a^{-j/2}."""
    return f_sup_bound(m, R) / (math.sqrt(m.a) - 1.0)


def tail_bound(m: MapSpec, R: float, N: int) -> float:
    """Bound on |sum_{j>N} a^-j f(z_{2j-d})| for either parity d, valid on W_R."""
    if N < 0:
        raise ValueError("N must be non-negative")
    return f_sup_bound(m, R) * m.a ** (-N) / (m.a - 1.0)


def _require_region(P: Point, R: float) -> None:
    if not in_region(P, R):
        raise PreconditionError(f"point {P} is not in W_R for R={R}")


def _partial_sums(m: MapSpec, orbit, N: int, R: float) -> Tuple[Bounded, Bounded]:
    """Sums to j = N read off an orbit of length >= 2N.

    Missing iterates (overflow truncation) are dropped from the sum and their
    contribution folded into the error radius.
    """
    a = m.a
    sums = [0j, 0j]
    errs = [tail_bound(m, R, N), tail_bound(m, R, N)]
    for parity, offset in ((0, 1), (1, 2)):
        for j in range(1, N + 1):
            idx = 2 * j - offset
            if idx >= len(orbit):
                errs[parity] = tail_bound(m, R, j - 1)
                break
            fz = f_eval(m, orbit[idx].z)
            sums[parity] += a ** (-j) * fz
    return Bounded(sums[0], errs[0]), Bounded(sums[1], errs[1])


def k_sums(m: MapSpec, P: Point, R: float, N: int) -> Tuple[Bounded, Bounded]:
    _require_region(P, R)
    orbit = iterate_orbit(m, P, max(2 * N - 1, 0))
    return _partial_sums(m, orbit, N, R)


@dataclass(frozen=True)
class LimitPair:
    h1: Bounded
    h2: Bounded
    N_used: int
    a: float

    @property
    def identity_residual(self) -> float:
        return abs(self.h1.value * self.h2.value - self.a)

    @property
    def identity_bound(self) -> float:
        """Propagated error of h1*h2 plus a rounding allowance."""
        return (self.h1 * self.h2).err + ROUNDING * self.a

    def to_record(self) -> dict:
        return {
            "re_h1": self.h1.value.real,
            "im_h1": self.h1.value.imag,
            "err_h1": self.h1.err,
            "re_h2": self.h2.value.real,
            "im_h2": self.h2.value.imag,
            "err_h2": self.h2.err,
            "N_used": self.N_used,
        }


def _pair_at(m: MapSpec, P: Point, R: float, N: int) -> LimitPair:
    a = m.a
    orbit = iterate_orbit(m, P, 2 * N)
    k1, k2 = _partial_sums(m, orbit, N, R)
    # h2 uses one more even-index term than h1
    if len(orbit) > 2 * N:
        k2_next = Bounded(k2.value + a ** (-(N + 1)) * f_eval(m, orbit[2 * N].z),
                          tail_bound(m, R, N + 1))
    else:
        k2_next = Bounded(k2.value, k2.err)
    num = P.z + k1
    den = P.w + k2
    if not abs(den.value) > den.err:
        raise PreconditionError("denominator w0 + k2 not certifiably nonzero")
    h1 = num / den
    h2 = (a * (P.w + k2_next)) / num
    return LimitPair(h1, h2, N, a)


def limit_pair(m: MapSpec, P: Point, R: float, tol: float = 1e-12) -> LimitPair:
    """h1(P), h2(P) with certified error <= tol.

    N doubles from ``N_START`` until both quotient errors fall below tol.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    _require_region(P, R)
    N = N_START
    while True:
        pair = _pair_at(m, P, R, N)
        if pair.h1.err <= tol and pair.h2.err <= tol:
            return pair
        if N >= N_CAP:
            raise ToleranceUnreachable(f"tolerance {tol} unreachable with N <= {N_CAP}")
        N = min(2 * N, N_CAP)


def ratio_sequence(m: MapSpec, P: Point, n: int) -> List[complex]:
    """z_k / w_k for k = 0..n; NaN entries where w_k = 0 or the orbit overflowed."""
    orbit = iterate_orbit(m, P, n)
    ratios = list(orbit.ratio)
    ratios += [complex(math.nan, math.nan)] * (n + 1 - len(ratios))
    return [complex(r) for r in ratios]
