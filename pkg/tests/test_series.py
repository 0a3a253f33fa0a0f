import math

import mpmath
import pytest

from henon_escape import (
    Point,
    PreconditionError,
    delta_bound,
    k_sums,
    limit_pair,
    make_map,
    ratio_sequence,
    tail_bound,
)
from henon_escape.sampling import sample_region

from oracles import mp_h, mp_k_sums

E5 = float(mpmath.exp(-5))
# P = (5, 5) lies on the boundary of W_5, so these cases use R = 4
R4 = 4.0


def test_delta_bound(exp_map):
    assert delta_bound(make_map(4, []), 1) == 0
    assert delta_bound(make_map(4, [(1, 1)]), 5) == pytest.approx(E5, rel=1e-14)
    expected = float(mpmath.exp(-5) / (mpmath.sqrt(2) - 1))
    assert delta_bound(exp_map, 5) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.016268, abs=5e-6)


def test_tail_bound(exp_map, linear_map):
    assert tail_bound(exp_map, 5, 0) == pytest.approx(E5, rel=1e-15)
    assert tail_bound(linear_map, 5, 7) == 0
    for N in range(10):
        assert tail_bound(exp_map, 5, N + 1) == pytest.approx(tail_bound(exp_map, 5, N) / 2, rel=1e-15)


def test_k_sums_linear(linear_map):
    k1, k2 = k_sums(linear_map, Point(4, 2), 1, 10)
    assert (k1.value, k1.err, k2.value, k2.err) == (0, 0, 0, 0)


def test_k_sums_against_long_oracle(exp_map):
    k1, k2 = k_sums(exp_map, Point(5, 5), R4, 30)
    assert k1.err == tail_bound(exp_map, R4, 30) and k2.err == k1.err
    o1, o2 = mp_k_sums(2, [(1, 1)], 5, 5, N=200)
    assert k1.contains(o1) and k2.contains(o2)
    # first even term
    k2_one = k_sums(exp_map, Point(5, 5), R4, 1)[1]
    assert k2_one.value == pytest.approx(E5 / 2, rel=1e-15)


def test_k_sums_requires_region(exp_map):
    with pytest.raises(PreconditionError):
        k_sums(exp_map, Point(5, 5), 5, 10)


def test_truncation_soundness_on_samples(exp_map):
    # the 10x longer truncation stays inside the short one's radius
    for P in sample_region(5.0, 1000, seed=11):
        s1, s2 = k_sums(exp_map, P, 5.0, 3)
        l1, l2 = k_sums(exp_map, P, 5.0, 30)
        assert s1.contains(l1.value, 1e-15) and s2.contains(l2.value, 1e-15)


def test_limit_pair_linear(linear_map):
    pair = limit_pair(linear_map, Point(4, 2), 1, 1e-10)
    assert pair.h1.value == 2 and pair.h1.err == 0
    assert pair.h2.value == 1 and pair.h2.err == 0


def test_limit_pair_identity(exp_map):
    pair = limit_pair(exp_map, Point(5, 5), R4, 1e-12)
    assert abs(pair.h1.value * pair.h2.value - 2) < 1e-10
    assert pair.identity_residual <= pair.identity_bound
    h1, h2 = mp_h(2, [(1, 1)], 5, 5)
    assert pair.h1.contains(h1, 1e-15) and pair.h2.contains(h2, 1e-15)


def test_limit_pair_vs_iteration(exp_map):
    tol = 1e-12
    pair = limit_pair(exp_map, Point(5, 5), R4, tol)
    ratios = ratio_sequence(exp_map, Point(5, 5), 100)
    gap = abs(ratios[100] - ratios[98])
    assert abs(ratios[100] - pair.h1.value) <= tol + gap + 1e-14


def test_limit_pair_preconditions(exp_map):
    with pytest.raises(PreconditionError):
        limit_pair(exp_map, Point(5, 5), 5)
    with pytest.raises(ValueError):
        limit_pair(exp_map, Point(6, 6), 5, 0)


def test_limit_pair_record(exp_map):
    rec = limit_pair(exp_map, Point(6, 7), 5).to_record()
    assert set(rec) == {"re_h1", "im_h1", "err_h1", "re_h2", "im_h2", "err_h2", "N_used"}


def test_ratio_sequence_linear(linear_map):
    r = ratio_sequence(linear_map, Point(4, 2), 9)
    assert r[0::2] == [2] * 5
    assert r[1::2] == [1] * 5


def test_ratio_sequence_convergence_rate(exp_map):
    r = ratio_sequence(exp_map, Point(5, 5), 60)
    even = r[0::2]
    gaps = [abs(even[n + 1] - even[n]) for n in range(len(even) - 1)]
    # measured C with gap_n <= C * 2^-n, C fixed by the first step
    C = gaps[0] * 2
    for n, g in enumerate(gaps):
        assert g <= C * 2.0 ** (-n) + 1e-15
    assert abs(r[59] * r[60] - 2) < 1e-8


def test_nonconstancy(exp_map):
    R = 5.0
    D = delta_bound(exp_map, R)
    P = Point(6, 6)
    Pp = Point(6 + 10 * D, 6)
    h, hp = limit_pair(exp_map, P, R), limit_pair(exp_map, Pp, R)
    assert abs(h.h1.value - hp.h1.value) > 2 * (h.h1.err + hp.h1.err)


def test_two_limits_distinct(exp_map):
    for P in sample_region(5.0, 20, seed=3):
        pair = limit_pair(exp_map, P, 5.0)
        if abs(pair.h1.value ** 2 - 2) > 1e-3:
            assert abs(pair.h1.value - pair.h2.value) > pair.h1.err + pair.h2.err


def test_k_sums_survive_overflow_truncation(exp_map):
    # orbit overflows long before 2N iterates; missing terms go into the radius
    P = Point(6, 6)
    k1, k2 = k_sums(exp_map, P, 5.0, 3000)
    assert math.isfinite(k1.err) and k1.err <= tail_bound(exp_map, 5.0, 1000)
    o1, o2 = mp_k_sums(2, [(1, 1)], 6, 6, N=100)
    assert k1.contains(o1, 1e-15) and k2.contains(o2, 1e-15)
