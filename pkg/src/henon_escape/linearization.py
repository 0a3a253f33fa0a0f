"""Conjugacy of F to the linear map L(z, w) = (a*w, z).

phi_n = L^-n o F^n converges on W_R to

    phi(z, w) = (z + k1(z, w), w + k2(z, w)),

and phi o F = L o phi.  Outside W_R, phi is extended along forward orbits:
phi(P) = L^-k(phi(F^k P)) for the first k with F^k P in W_R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from .bounded import Bounded
from .certificate import Certificate
from .dynamics import (
    OVERFLOW,
    MapSpec,
    Point,
    apply,
    f_eval,
    f_sup_bound,
    format_map_spec,
    in_region,
    iterate_orbit,
)
from .errors import NotAbsorbed, PreconditionError, ToleranceUnreachable
from .sampling import sample_region
from .series import N_CAP, ROUNDING, delta_bound, k_sums, tail_bound

__all__ = [
    "ConjugacyResult",
    "linear_apply",
    "phi_n",
    "phi_n_composed",
    "phi",
    "conjugacy_residual",
    "sandwich_phi_W",
    "N_MAX_EXTENSION",
]

N_MAX_EXTENSION = 100
FIXED_POINT_STEPS = 50


def linear_apply(a: float, P: Point, n: int):
    """L^n(P) for any integer n, in closed form.

    L^{2k} = a^k * id and L^{2k+1}(z, w) = (a^{k+1} w, a^k z), k = floor(n/2).
    """
    k, odd = divmod(n, 2)
    try:
        s = a ** k
        if odd:
            z, w = a ** (k + 1) * P.w, s * P.z
        else:
            z, w = s * P.z, s * P.w
    except OverflowError:
        return OVERFLOW
    Q = Point(z, w)
    return Q if Q.is_finite() else OVERFLOW


def phi_n(m: MapSpec, P: Point, n: int):
    """phi_n from the partial-sum formulas (no explicit L^-n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    orbit = iterate_orbit(m, P, max(n - 1, 0))
    if orbit.truncated:
        return OVERFLOW
    a = m.a
    half = n // 2
    s1 = sum((a ** (-j) * f_eval(m, orbit[2 * j - 1].z) for j in range(1, half + 1)), 0j)
    top = half + 1 if n % 2 else half
    s2 = sum((a ** (-j) * f_eval(m, orbit[2 * j - 2].z) for j in range(1, top + 1)), 0j)
    return Point(P.z + s1, P.w + s2)


def phi_n_composed(m: MapSpec, P: Point, n: int):
    """phi_n as the literal composition L^-n(F^n(P))."""
    orbit = iterate_orbit(m, P, n)
    if orbit.truncated:
        return OVERFLOW
    return linear_apply(m.a, orbit[n], -n)


@dataclass(frozen=True)
class ConjugacyResult:
    phi: Tuple[Bounded, Bounded]
    N_used: int
    extension_depth: int

    @property
    def point(self) -> Point:
        return Point(self.phi[0].value, self.phi[1].value)

    @property
    def err(self) -> float:
        return max(self.phi[0].err, self.phi[1].err)


def _terms_for(m: MapSpec, R: float, tol: float) -> int:
    N = 0
    while tail_bound(m, R, N) > tol:
        N += 1
        if N > N_CAP:
            raise ToleranceUnreachable(f"tail bound above {tol} at N = {N_CAP}")
    return N


def phi(m: MapSpec, P: Point, R: float, tol: float = 1e-12,
        n_max: int = N_MAX_EXTENSION) -> ConjugacyResult:
    Q, depth = P, 0
    while not in_region(Q, R):
        if depth >= n_max:
            raise NotAbsorbed(f"orbit of {P} did not enter W_R within {n_max} steps")
        Q = apply(m, Q)
        depth += 1
        if Q is OVERFLOW:
            raise NotAbsorbed(f"orbit of {P} overflowed after {depth} steps")
    N = _terms_for(m, R, tol)
    k1, k2 = k_sums(m, Q, R, N)
    value = Point(Q.z + k1.value, Q.w + k2.value)
    if depth == 0:
        return ConjugacyResult((Bounded(value.z, k1.err), Bounded(value.w, k2.err)), N, 0)
    pulled = linear_apply(m.a, value, -depth)
    # L^-k permutes and scales coordinates by positive factors, so it maps error radii too
    errs = linear_apply(m.a, Point(k1.err, k2.err), -depth)
    if pulled is OVERFLOW or errs is OVERFLOW:
        raise NotAbsorbed("extension overflowed")
    return ConjugacyResult(
        (Bounded(pulled.z, abs(errs.z)), Bounded(pulled.w, abs(errs.w))), N, depth
    )


def conjugacy_residual(m: MapSpec, P: Point, R: float, tol: float = 1e-12,
                       n_max: int = N_MAX_EXTENSION) -> float:
    """||phi(F(P)) - L(phi(P))||."""
    FP = apply(m, P)
    if FP is OVERFLOW:
        raise NotAbsorbed("F(P) overflowed")
    lhs = phi(m, FP, R, tol, n_max).point
    rhs = linear_apply(m.a, phi(m, P, R, tol, n_max).point, 1)
    return lhs.distance(rhs)


def _solve_preimage(m: MapSpec, Q: Point, R: float, N: int):
    """Fixed-point iteration P <- Q - (k1(P), k2(P)); returns (P, steps) or (None, steps)."""
    P = Q
    scale = 1.0 + Q.norm
    for step in range(1, FIXED_POINT_STEPS + 1):
        if not in_region(P, R):
            return None, step
        k1, k2 = k_sums(m, P, R, N)
        nxt = Point(Q.z - k1.value, Q.w - k2.value)
        if nxt.distance(P) <= ROUNDING * scale:
            return nxt, step
        P = nxt
    return None, FIXED_POINT_STEPS


def sandwich_phi_W(m: MapSpec, R: float, samples: int, seed: int = 0,
                   tol: float = 1e-13) -> Certificate:
    """Check W_{R+D} subset phi(W_R) subset W_{R-D} on random samples, D = delta_bound."""
    if not f_sup_bound(m, R) < (m.a - 1.0) * R:
        raise PreconditionError(f"R={R} is not admissible")
    D = delta_bound(m, R)
    if not R > D:
        raise PreconditionError(f"R={R} must exceed the delta bound {D}")
    N = _terms_for(m, R, tol)
    bad_forward, bad_inverse = [], []
    min_margin = math.inf
    max_steps = 0
    for P in sample_region(R, samples, seed):
        res = phi(m, P, R, tol)
        margin = min(res.point.z.real, res.point.w.real) - res.err - (R - D)
        min_margin = min(min_margin, margin)
        if not margin > 0:
            bad_forward.append({"P": [P.z, P.w], "phi": [res.point.z, res.point.w]})
    for Q in sample_region(R + D, samples, seed + 1):
        P, steps = _solve_preimage(m, Q, R, N)
        max_steps = max(max_steps, steps)
        if P is None:
            bad_inverse.append({"Q": [Q.z, Q.w], "steps": steps})
            continue
        back = phi(m, P, R, tol).point
        if back.distance(Q) > tol * 10 + ROUNDING * (1.0 + Q.norm):
            bad_inverse.append({"Q": [Q.z, Q.w], "P": [P.z, P.w], "residual": back.distance(Q)})
    verdict = "pass" if not (bad_forward or bad_inverse) else "fail"
    return Certificate(
        type="sandwich",
        map=format_map_spec(m),
        params={"R": R, "tol": tol, "N": N},
        samples=samples,
        values={
            "delta_bound": D,
            "min_forward_margin": min_margin,
            "max_fixed_point_steps": max_steps,
        },
        verdict=verdict,
        seed=seed,
        counterexamples=bad_forward + bad_inverse,
    )
