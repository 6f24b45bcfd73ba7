import math

import numpy as np
import pytest
import scipy.sparse as sps
from hypothesis import given, settings, strategies as st

from qdisk.free_series import (
    FreeSeries,
    evaluate_free,
    fmul,
    fnorm,
    fock_tuple,
    opnorm,
    sprad_profile,
    vacuum_norm,
)
from qdisk.combinatorics import block_count

from oracles import dense_creation_ops, dense_eval
from strategies import free_series


def Z(*terms, n=2, cap=6):
    return FreeSeries(dict(terms), n, cap)


def test_fmul_examples():
    z1, z2 = FreeSeries.generator(1), FreeSeries.generator(2)
    assert fmul(z1, z2) == Z(((1, 2), 1))
    one = FreeSeries.one()
    assert fmul(one + z1, one - z1) == Z(((), 1), ((1, 1), -1))
    f = Z(((1, 2), 3), ((2,), -1))
    assert fmul(f, one) == f and fmul(one, f) == f


def test_fmul_truncation_flag():
    f = Z(((1, 2, 1), 1), cap=4)
    g = Z(((2, 2), 1), ((), 1), cap=4)
    fg = fmul(f, g)
    assert fg.truncated
    assert fg == Z(((1, 2, 1), 1), cap=4)
    assert not fmul(Z(((1,), 1)), Z(((2,), 1))).truncated


def test_construction_errors():
    with pytest.raises(ValueError):
        FreeSeries({(3,): 1}, n=2)
    with pytest.raises(ValueError):
        FreeSeries({(1, 1, 1): 1}, n=2, cap=2)
    with pytest.raises(ValueError):
        FreeSeries({(1,): float("nan")}, n=2)
    with pytest.raises(ValueError):
        FreeSeries.generator(1, n=2) + FreeSeries.generator(1, n=3)
    assert len(FreeSeries({(1,): 0, (2,): 1})) == 1


@given(free_series(max_len=3, cap=9), free_series(max_len=3, cap=9), free_series(max_len=3, cap=9))
def test_fmul_associative_and_distributive(f, g, h):
    assert fmul(fmul(f, g), h) == fmul(f, fmul(g, h))
    assert fmul(f, g + h) == fmul(f, g) + fmul(f, h)


def test_fnorm_examples():
    rho, tau = 0.7, 1.3
    a = Z(((1, 2, 1, 2), 1))
    assert fnorm(a, "universal", rho, tau) == pytest.approx(rho**4 * tau**4)
    assert fnorm(Z(((2, 1, 1), 1)), "taylor", rho) == pytest.approx(rho**3)
    f = Z(((1, 2), 1), ((2, 1), 1))
    assert fnorm(f, "ball_circ", rho) == pytest.approx(math.sqrt(2) * rho**2)
    assert fnorm(f, "ball_bullet", rho) == pytest.approx(math.sqrt(2) * rho**2)
    g = Z(((1, 1), 3), ((1, 2), 4), ((1,), 1))
    # blocks: degree 1 -> 1, degree 2 -> 5 ; circ splits (2,0) and (1,1)
    assert fnorm(g, "ball_bullet", 1.0) == pytest.approx(6.0)
    assert fnorm(g, "ball_circ", 1.0) == pytest.approx(8.0)
    assert fnorm(g, "ball_sup", 1.0) == pytest.approx(5.0)
    assert fnorm(FreeSeries({}), "ball_sup", 1.0) == 0.0
    for bad in [("taylor", 0.0, 1.0), ("universal", 1.0, 0.5), ("nope", 1.0, 1.0)]:
        with pytest.raises(ValueError):
            fnorm(g, bad[0], bad[1], bad[2])


@given(free_series(n=3, max_len=5, exact=False, max_terms=8), st.floats(0.1, 2.0), st.floats(1.0, 3.0))
def test_norm_chains(f, rho, tau):
    slack = 1e-12

    def le(a, b):
        return a <= b * (1 + slack) + slack

    assert le(fnorm(f, "taylor", rho), fnorm(f, "universal", rho, tau))
    assert le(fnorm(f, "universal", rho, tau), fnorm(f, "taylor", rho * tau))
    assert le(fnorm(f, "ball_bullet", rho), fnorm(f, "ball_circ", rho))
    assert le(fnorm(f, "ball_sup", rho), fnorm(f, "ball_bullet", rho))
    assert le(fnorm(f, "taylor", rho), fnorm(f, "ball_bullet", rho * math.sqrt(3)))
    t2 = rho * 1.5
    assert le(fnorm(f, "ball_bullet", rho), t2 / (t2 - rho) * fnorm(f, "ball_sup", t2))


@given(free_series(n=2, max_len=4, cap=8, exact=False), free_series(n=2, max_len=4, cap=8, exact=False),
       st.floats(0.2, 1.5), st.floats(1.0, 2.0))
def test_submultiplicative(f, g, rho, tau):
    fg = fmul(f, g)
    for fam in ("taylor", "universal", "ball_bullet", "ball_circ"):
        lhs = fnorm(fg, fam, rho, tau)
        rhs = fnorm(f, fam, rho, tau) * fnorm(g, fam, rho, tau)
        assert lhs <= rhs * (1 + 1e-9) + 1e-12


def test_universal_weight_uses_blocks():
    # s(alpha)+1 for the empty word is 0: constant term carries no tau
    assert fnorm(Z(((), 2.0)), "universal", 0.5, 3.0) == pytest.approx(2.0)
    w = (1, 1, 2, 2, 1)
    assert fnorm(Z((w, 1)), "universal", 1.0, 2.0) == pytest.approx(2.0 ** (block_count(w) + 1))


def test_evaluate_free_examples():
    T1 = np.array([[0, 1], [0, 0]])
    T2 = np.array([[2, 0], [0, 3]])
    out = evaluate_free(Z(((), 1), ((1,), 1)), [T1, T2])
    assert np.array_equal(out, np.array([[1, 1], [0, 1]]))
    D1, D2 = np.diag([1.0, 2.0]), np.diag([3.0, -1.0])
    assert np.allclose(evaluate_free(Z(((1, 2), 1), ((2, 1), -1)), [D1, D2]), 0)
    assert np.allclose(evaluate_free(Z(((1,), 1)), [T1, T2]), T1)
    with pytest.raises(ValueError):
        evaluate_free(Z(((1,), 1)), [T1])
    with pytest.raises(ValueError):
        evaluate_free(Z(((1,), 1)), [T1, np.eye(3)])


@given(free_series(n=2, max_len=3, exact=False))
def test_evaluate_is_homomorphism(f):
    rng = np.random.default_rng(1)
    T = [rng.normal(size=(3, 3)) for _ in range(2)]
    g = Z(((1, 2), 0.5), ((2,), -1.0))
    lhs = evaluate_free(fmul(FreeSeries(f.terms, 2, 6), g), T)
    rhs = evaluate_free(f, T) @ evaluate_free(g, T)
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_fock_tuple_n1_is_shift():
    (S,) = fock_tuple(1, 1.0, 2)
    assert np.array_equal(S.toarray().real, np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]]))
    with pytest.raises(ValueError):
        fock_tuple(2, 1.0, 0)
    with pytest.raises(ValueError):
        fock_tuple(3, 1.0, 12, size_cap=1000)


@pytest.mark.parametrize("n,depth", [(1, 4), (2, 3), (3, 3)])
def test_fock_tuple_matches_tensor_construction(n, depth):
    rho = 0.8
    ours = fock_tuple(n, rho, depth)
    ref = dense_creation_ops(n, depth)
    for a, b in zip(ours, ref):
        assert np.allclose(a.toarray(), rho * b)


def test_row_norm_is_rho_on_untruncated_range():
    rho, n, depth = 0.6, 2, 4
    S = fock_tuple(n, rho, depth)
    row = sps.hstack(S).toarray()  # T = [S_1 ... S_n] : (C^dim)^n -> C^dim
    # restricted to vectors living in degrees < depth the row operator is an isometry times rho
    keep = [j for j in range(S[0].shape[0]) if j < sum(n**d for d in range(depth))]
    dim = S[0].shape[0]
    cols = [i * dim + j for i in range(n) for j in keep]
    sv = np.linalg.svd(row[:, cols], compute_uv=False)
    assert sv.max() == pytest.approx(rho)


@settings(max_examples=40)
@given(free_series(n=2, max_len=3, exact=False, max_terms=6), st.floats(0.3, 1.2))
def test_fock_sandwich(f, rho):
    depth = 4
    M = evaluate_free(f, fock_tuple(2, rho, depth))
    dense = dense_eval(f.terms, [rho * S for S in dense_creation_ops(2, depth)])
    assert np.allclose(M.toarray(), dense)
    exact_norm = np.linalg.norm(dense, 2) if f else 0.0
    vac = vacuum_norm(M)
    expected_vac = math.sqrt(sum(abs(c) ** 2 * rho ** (2 * len(w)) for w, c in f.items()))
    assert vac == pytest.approx(expected_vac, rel=1e-12, abs=1e-15)
    assert fnorm(f, "ball_sup", rho) <= vac * (1 + 1e-12) + 1e-15
    assert vac <= exact_norm * (1 + 1e-12) + 1e-15
    assert exact_norm <= fnorm(f, "ball_bullet", rho) * (1 + 1e-12) + 1e-15
    est = opnorm(M)
    assert est <= exact_norm * (1 + 1e-9) + 1e-12


def test_opnorm_against_svd():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    assert opnorm(A, iters=2000, tol=1e-14) == pytest.approx(np.linalg.norm(A, 2), rel=1e-8)
    assert opnorm(np.zeros((3, 3))) == 0.0


def test_sprad_profiles():
    rho, tau = 0.8, 1.5
    taylor = sprad_profile(lambda w: fnorm(FreeSeries({w: 1}, 2, len(w)), "taylor", rho), 6, 2)
    assert taylor == pytest.approx([rho] * 6, rel=1e-14)
    univ = sprad_profile(lambda w: fnorm(FreeSeries({w: 1}, 2, len(w)), "universal", rho, tau), 6, 2)
    assert univ[1::2] == pytest.approx([rho * tau] * 3, rel=1e-14)
