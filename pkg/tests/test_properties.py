"""Property tests for the dynamical invariants on randomly drawn maps and points."""

import math

from hypothesis import assume, given, settings, strategies as st

from henon_escape import (
    OVERFLOW,
    Point,
    admissible_R,
    apply,
    apply_inverse,
    in_region,
    iterate_orbit,
    k_sums,
    limit_pair,
    make_map,
    phi_n,
    phi_n_composed,
)
from henon_escape.series import tail_bound

coord = st.floats(-1e5, 1e5, allow_nan=False)
a_vals = st.floats(1.1, 6.0)
terms = st.lists(st.tuples(st.floats(0.05, 5.0), st.floats(0.1, 3.0)), min_size=1, max_size=3)


@st.composite
def maps(draw, linear=False):
    return make_map(draw(a_vals), [] if linear else draw(terms))


@st.composite
def region_points(draw, R, span=1e3):
    offs = [10 ** draw(st.floats(-6, math.log10(span))) for _ in range(2)]
    ims = [draw(st.floats(-span, span)) for _ in range(2)]
    return Point(complex(R + offs[0], ims[0]), complex(R + offs[1], ims[1]))


@given(maps(), coord, st.floats(-5, 1e5), coord, coord)
def test_inverse_roundtrip(m, zi, zr, wr, wi):
    # z restricted to Re z >= -5 so that f(z) does not swamp the coordinates
    P = Point(complex(zr, zi), complex(wr, wi))
    Q = apply(m, P)
    back = apply_inverse(m, Q)
    assert back.distance(P) <= 1e-12 * (1 + P.norm) + 1e-13 * abs(Q.z - P.z)


@given(maps(linear=True), coord, coord, coord, coord)
def test_inverse_roundtrip_linear(m, a, b, c, d):
    P = Point(complex(a, b), complex(c, d))
    assert apply_inverse(m, apply(m, P)).distance(P) <= 1e-12 * (1 + P.norm)


@given(maps(), st.floats(0.01, 1.0), st.data())
def test_forward_invariance(m, eps, data):
    R = admissible_R(m, eps)
    P = data.draw(region_points(R))
    Q = apply(m, P)
    assert in_region(Q, R)
    assert Q.z.real > R + eps


@settings(max_examples=50)
@given(maps(), st.data())
def test_parity_escape(m, data):
    R = admissible_R(m, 0.1)
    P = data.draw(region_points(R))
    orbit = iterate_orbit(m, P, 200)
    re = [Q.z.real for Q in orbit.points]
    for n in range(len(re) - 2):
        assert re[n + 2] > re[n]
    assert re[-1] > 1e3 * (R + 1) or orbit.truncated


@given(st.floats(1.1, 6.0), coord, coord, coord, coord)
def test_linear_closed_form(a, zr, zi, wr, wi):
    m = make_map(a, [])
    P = Point(complex(zr, zi), complex(wr, wi))
    orbit = iterate_orbit(m, P, 30)
    for n in range(15):
        e, o = a ** n * P.z, a ** (n + 1) * P.w
        assert abs(orbit[2 * n].z - e) <= 1e-12 * abs(e)
        assert abs(orbit[2 * n + 1].z - o) <= 1e-12 * abs(o)


@settings(max_examples=60, deadline=None)
@given(maps(), st.data())
def test_limit_identity(m, data):
    R = admissible_R(m, 0.1)
    P = data.draw(region_points(R))
    pair = limit_pair(m, P, R, 1e-10)
    assert pair.identity_residual <= pair.identity_bound
    assert max(abs(pair.h1.value), abs(pair.h2.value)) >= math.sqrt(m.a) * (1 - 1e-9)


@settings(max_examples=60, deadline=None)
@given(maps(), st.integers(0, 12), st.data())
def test_truncation_soundness(m, N, data):
    R = admissible_R(m, 0.1)
    P = data.draw(region_points(R))
    short = k_sums(m, P, R, N)
    long = k_sums(m, P, R, 10 * N + 10)
    for s, l in zip(short, long):
        assert s.contains(l.value, 1e-14 * (1 + tail_bound(m, R, 0)))


@settings(max_examples=40, deadline=None)
@given(maps(), st.integers(0, 40), st.data())
def test_phi_n_routes(m, n, data):
    R = admissible_R(m, 0.1)
    P = data.draw(region_points(R, span=50.0))
    lhs, rhs = phi_n(m, P, n), phi_n_composed(m, P, n)
    assume(lhs is not OVERFLOW and rhs is not OVERFLOW)
    assert lhs.distance(rhs) <= 1e-9 * (1 + P.norm)
