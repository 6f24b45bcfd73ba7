import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdisk.combinatorics import multi_indices_upto, sigma, word_stats
from qdisk.deformation import (
    DefoSeries,
    alpha_with_inversions,
    canonical_split,
    dmul,
    dnorm,
    fiber_eval,
    fiber_norm_profile,
    max_jump,
    omega,
    parse_grid,
    rebuild,
)
from qdisk.quantum_series import QContext, QSeries, qmul

from oracles import brute_inversions, brute_sigma
from strategies import defo_series, exact_q


def D(*terms, n=2, cap=8, zwin=64):
    return DefoSeries(dict(terms), n, cap, zwin)


def omega_by_interval(k, p):
    """Point of minimal modulus in the integer interval [p, p + sigma(k,k)]."""
    return min(range(p, p + brute_sigma(k, k) + 1), key=abs)


def test_omega_examples():
    assert omega((1, 1), -1) == 0
    assert omega((3, 0, 2), 2) == 2
    assert omega((1, 1), -3) == -2


@given(st.lists(st.integers(0, 4), min_size=3, max_size=3).map(tuple), st.integers(-30, 30))
def test_omega_is_nearest_point(k, p):
    assert omega(k, p) == omega_by_interval(k, p)


def test_dmul_examples():
    x1, x2 = D((((1, 0), 0), 1)), D((((0, 1), 0), 1))
    assert dmul(x2, x1) == D((((1, 1), -1), 1))
    assert dmul(x1, x2) == D((((1, 1), 0), 1))
    z, zinv = D((((0, 0), 1), 1)), D((((0, 0), -1), 1))
    assert dmul(z, zinv) == D((((0, 0), 0), 1))
    # x_1 x_2 = z x_2 x_1
    assert dmul(x1, x2) == dmul(z, dmul(x2, x1))


@given(defo_series(n=3), defo_series(n=3), defo_series(n=3))
def test_dmul_associative_z_central(a, b, c):
    big = lambda s: DefoSeries(s.terms, 3, 9, 64)  # noqa: E731
    a, b, c = big(a), big(b), big(c)
    assert dmul(dmul(a, b), c) == dmul(a, dmul(b, c))
    z = DefoSeries({((0, 0, 0), 1): 1}, 3, 9, 64)
    assert dmul(z, a) == dmul(a, z)


def test_dmul_window_truncation():
    a = D((((0, 1), 3), 1), zwin=3)
    b = D((((1, 0), -1), 1), zwin=3)
    out = dmul(D((((0, 0), 3), 1), zwin=3), a)
    assert out.truncated and not out
    assert not dmul(a, b).truncated


def test_dnorm_examples():
    rho, tau = 0.7, 1.9
    assert dnorm(D((((1, 1), -1), 1)), rho, tau) == pytest.approx(rho**2)
    for p in (-3, 0, 4):
        assert dnorm(D((((0, 0), p), 1)), rho, tau) == pytest.approx(tau ** abs(p))
    with pytest.raises(ValueError):
        dnorm(D((((0, 0), 1), 1)), rho, 0.5)
    with pytest.raises(ValueError):
        dnorm(D((((0, 0), 1), 1)), 0.0, 2.0)


def test_dnorm_monomial_submultiplicative_exhaustive():
    """Integer exponent comparison |omega(k+l, p+s-sigma(l,k))| <= |omega(k,p)| + |omega(l,s)|."""
    ks = multi_indices_upto(2, 3)
    for k in ks:
        for l in ks:
            m = tuple(a + b for a, b in zip(k, l))
            for p in range(-6, 7):
                for s in range(-6, 7):
                    assert abs(omega(m, p + s - sigma(l, k))) <= abs(omega(k, p)) + abs(omega(l, s))


@given(defo_series(n=3, exact=False), defo_series(n=3, exact=False), st.floats(0.2, 1.5), st.floats(1.0, 3.0))
def test_dnorm_submultiplicative(a, b, rho, tau):
    a = DefoSeries(a.terms, 3, 9, 64)
    b = DefoSeries(b.terms, 3, 9, 64)
    assert dnorm(dmul(a, b), rho, tau) <= dnorm(a, rho, tau) * dnorm(b, rho, tau) * (1 + 1e-9) + 1e-12


def test_alpha_examples():
    assert alpha_with_inversions((2, 1), 1) == (1, 2, 1)
    assert alpha_with_inversions((2, 1), 2) == (2, 1, 1)
    assert alpha_with_inversions((2, 3, 1), 0) == (1, 1, 2, 2, 2, 3)
    with pytest.raises(ValueError):
        alpha_with_inversions((2, 1), 3)
    with pytest.raises(ValueError):
        alpha_with_inversions((2, 1), -1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_alpha_exhaustive_small(n):
    for k in multi_indices_upto(n, 6):
        for m in range(sigma(k, k) + 1):
            w = alpha_with_inversions(k, m)
            stats = word_stats(w, n)
            assert stats.p == k
            assert brute_inversions(w) == m
            assert stats.s <= n + 2


def test_split_examples():
    assert canonical_split(D((((1, 1), -1), 1))) == [(0, (2, 1), 1)]
    assert canonical_split(D((((2, 1), 2), 5))) == [(2, (1, 1, 2), 5)]


@given(defo_series(n=3, max_deg=4, pmax=8))
def test_split_round_trip(a):
    split = canonical_split(a)
    for e, w, _ in split:
        assert word_stats(w, 3).s <= 3 + 2
    assert rebuild(split, 3, a.cap, a.zwin) == a


def test_fiber_examples():
    q = Fraction(2, 5)
    ctx = QContext(2, q)
    assert fiber_eval(D((((1, 1), -1), 1)), ctx) == QSeries({(1, 1): 1 / q}, 2, 8)
    assert not fiber_eval(D((((0, 0), 1), 1), (((0, 0), 0), -q)), ctx)


@given(defo_series(n=3), defo_series(n=3), exact_q)
def test_fiber_is_homomorphism(a, b, q):
    ctx = QContext(3, q)
    a, b = DefoSeries(a.terms, 3, 9, 64), DefoSeries(b.terms, 3, 9, 64)
    assert fiber_eval(dmul(a, b), ctx) == qmul(fiber_eval(a, ctx), fiber_eval(b, ctx), ctx)
    one = DefoSeries({((0, 0, 0), 0): 1}, 3, 9, 64)
    assert fiber_eval(one, ctx) == QSeries({(0, 0, 0): 1}, 3, 9)


def test_profile_examples():
    grid = parse_grid("0.5:2:31")
    vals = fiber_norm_profile(D((((1, 1), 0), 1)), 1.0, "polydisk", grid)
    assert np.allclose(vals, [min(q, 1.0) for q in grid], rtol=1e-12, atol=0)
    z = D((((0, 0), 1), 1))
    for geo in ("polydisk", "ball"):
        assert np.allclose(fiber_norm_profile(z, 0.3, geo, grid), grid, rtol=1e-14)
    with pytest.raises(ValueError):
        fiber_norm_profile(z, 1.0, "polydisk", [0.5, 0])
    with pytest.raises(ValueError):
        fiber_norm_profile(z, 1.0, "torus", [0.5])


def test_parse_grid():
    g = parse_grid("1/2:2:4")
    assert g == pytest.approx([0.5, 1.0, 1.5, 2.0])
    rotated = parse_grid("1:1:1@1.5707963267948966")
    assert abs(rotated[0] - 1j) < 1e-15
    for bad in ("1:2", "0:2:3", "a:b:3", "1:2:0"):
        with pytest.raises(ValueError):
            parse_grid(bad)


@given(defo_series(n=2, max_deg=3, pmax=4, exact=False))
def test_profile_refinement(a):
    for geo in ("polydisk", "ball"):
        coarse = fiber_norm_profile(a, 0.8, geo, parse_grid("0.5:2:41"))
        fine = fiber_norm_profile(a, 0.8, geo, parse_grid("0.5:2:81"))
        finer = fiber_norm_profile(a, 0.8, geo, parse_grid("0.5:2:161"))
        j0, j2 = max_jump(coarse), max_jump(finer)
        assert j2 <= j0 / 2 + 1e-12
        assert max_jump(fine) <= j0 + 1e-12


def test_constructor_validation():
    with pytest.raises(ValueError):
        D((((1, 1), 70), 1))
    with pytest.raises(ValueError):
        D((((1, 1, 1), 0), 1))
    with pytest.raises(ValueError):
        D((((5, 5), 0), 1))
    assert math.isclose(dnorm(D(), 1.0, 1.0), 0.0)
