"""Truncated noncommutative power series, the free norm families, and
matrix/Fock-space evaluation."""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from ._sparse import SparseSeries
from .combinatorics import Word, block_count, graded_key, projection, words_of_length

__all__ = [
    "FreeSeries",
    "FREE_FAMILIES",
    "evaluate_free",
    "fmul",
    "fnorm",
    "fock_dimension",
    "fock_tuple",
    "opnorm",
    "sprad_profile",
    "vacuum_norm",
]

FREE_FAMILIES = ("taylor", "universal", "ball_bullet", "ball_circ", "ball_sup")
DEFAULT_FOCK_CAP = 20_000


class FreeSeries(SparseSeries):
    """Finite sum of c_alpha zeta_alpha with |alpha| <= cap."""

    __slots__ = ("n", "cap")

    def __init__(self, terms=None, n: int = 2, cap: int = 8, truncated: bool = False):
        self.n = n
        self.cap = cap
        terms = dict(terms or {})
        for w in terms:
            if any(not 1 <= a <= n for a in w):
                raise ValueError(f"word {list(w)} has a letter outside 1..{n}")
            if len(w) > cap:
                raise ValueError(f"word {list(w)} longer than degree cap {cap}")
        super().__init__({tuple(w): c for w, c in terms.items()}, truncated)

    @staticmethod
    def _key(index):
        return graded_key(index)

    def _like(self, terms, truncated=False):
        return FreeSeries(terms, self.n, self.cap, truncated)

    def _check_compatible(self, other):
        if self.n != other.n:
            raise ValueError(f"alphabet mismatch: n={self.n} vs n={other.n}")

    @classmethod
    def monomial(cls, word, c=1, n: int = 2, cap: int = 8):
        return cls({tuple(word): c}, n, cap)

    @classmethod
    def one(cls, n: int = 2, cap: int = 8):
        return cls({(): 1}, n, cap)

    @classmethod
    def generator(cls, i: int, n: int = 2, cap: int = 8):
        return cls({(i,): 1}, n, cap)

    def __mul__(self, other):
        if isinstance(other, FreeSeries):
            return fmul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def degree_blocks(self) -> dict[int, list]:
        blocks: dict[int, list] = defaultdict(list)
        for w, c in self.items():
            blocks[len(w)].append(c)
        return dict(sorted(blocks.items()))

    def multi_blocks(self) -> dict[tuple, list]:
        blocks: dict[tuple, list] = defaultdict(list)
        for w, c in self.items():
            blocks[projection(w, self.n)].append(c)
        return dict(sorted(blocks.items(), key=lambda kv: (sum(kv[0]), kv[0])))

    def __repr__(self):
        body = " + ".join(f"({c})*z{list(w)}" for w, c in self.items()) or "0"
        return f"FreeSeries(n={self.n}, cap={self.cap}: {body})"


def fmul(f: FreeSeries, g: FreeSeries) -> FreeSeries:
    """Concatenation product; words longer than the cap are dropped and flagged."""
    f._check_compatible(g)
    cap = min(f.cap, g.cap)
    out: dict = {}
    truncated = f.truncated or g.truncated
    for a, ca in f.items():
        for b, cb in g.items():
            w = a + b
            if len(w) > cap:
                truncated = True
                continue
            out[w] = out[w] + ca * cb if w in out else ca * cb
    return FreeSeries(out, f.n, cap, truncated)


def _check_rho(rho):
    if not rho > 0:
        raise ValueError("rho must be positive")


def _l2(coeffs) -> float:
    return math.sqrt(math.fsum(abs(c) ** 2 for c in coeffs))


def fnorm(f: FreeSeries, family: str, rho: float, tau: float = 1.0) -> float:
    """Evaluate one of the free norm families on the stored terms.

    taylor       sum |c| rho^|a|
    universal    sum |c| rho^|a| tau^(s(a)+1)
    ball_bullet  sum_d (sum_{|a|=d} |c|^2)^(1/2) rho^d
    ball_circ    sum_k (sum_{p(a)=k} |c|^2)^(1/2) rho^|k|
    ball_sup     sup_d (sum_{|a|=d} |c|^2)^(1/2) rho^d
    """
    _check_rho(rho)
    if family == "taylor":
        return math.fsum(abs(c) * rho ** len(w) for w, c in f.items())
    if family == "universal":
        if tau < 1:
            raise ValueError("universal norm requires tau >= 1")
        return math.fsum(
            abs(c) * rho ** len(w) * tau ** (block_count(w) + 1) for w, c in f.items()
        )
    if family == "ball_bullet":
        return math.fsum(_l2(cs) * rho**d for d, cs in f.degree_blocks().items())
    if family == "ball_circ":
        return math.fsum(_l2(cs) * rho ** sum(k) for k, cs in f.multi_blocks().items())
    if family == "ball_sup":
        return max((_l2(cs) * rho**d for d, cs in f.degree_blocks().items()), default=0.0)
    raise ValueError(f"unknown free norm family {family!r}")


# --- matrix evaluation ------------------------------------------------------


def _identity_like(m):
    if sp.issparse(m):
        return sp.identity(m.shape[0], dtype=complex, format="csr")
    return np.eye(m.shape[0], dtype=complex)


def evaluate_free(f: FreeSeries, T: Sequence):
    """sum c_alpha T_alpha for a tuple of square matrices (dense or scipy.sparse)."""
    if len(T) != f.n:
        raise ValueError(f"expected {f.n} matrices, got {len(T)}")
    shape = T[0].shape
    if shape[0] != shape[1] or any(t.shape != shape for t in T):
        raise ValueError("matrices must be square and of equal dimension")
    sparse = sp.issparse(T[0])
    mats = [sp.csr_matrix(t, dtype=complex) if sparse else np.asarray(t, dtype=complex) for t in T]
    ident = _identity_like(mats[0])
    cache: dict = {(): ident}

    def word_mat(w):
        if w not in cache:
            cache[w] = word_mat(w[:-1]) @ mats[w[-1] - 1]
        return cache[w]

    acc = ident * 0
    for w, c in f.items():
        acc = acc + complex(c) * word_mat(w)
    return acc


def fock_dimension(n: int, depth: int) -> int:
    return sum(n**d for d in range(depth + 1))


def fock_basis(n: int, depth: int) -> list:
    return [w for d in range(depth + 1) for w in words_of_length(n, d)]


def fock_tuple(n: int, rho: float, depth: int, size_cap: int = DEFAULT_FOCK_CAP):
    """(rho S_1, ..., rho S_n) on the full Fock space cut at tensor degree depth.

    Basis vectors are S_alpha e_0 for |alpha| <= depth in graded lexicographic
    order (index 0 is the vacuum); S_i kills the top degree.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    dim = fock_dimension(n, depth)
    if dim > size_cap:
        raise ValueError(f"Fock dimension {dim} exceeds size cap {size_cap}")
    basis = fock_basis(n, depth)
    index = {w: j for j, w in enumerate(basis)}
    mats = []
    for i in range(1, n + 1):
        rows, cols = [], []
        for w, j in index.items():
            if len(w) < depth:
                rows.append(index[(i,) + w])
                cols.append(j)
        data = np.full(len(rows), rho, dtype=complex)
        mats.append(sp.csr_matrix((data, (rows, cols)), shape=(dim, dim)))
    return mats


def vacuum_norm(M) -> float:
    """||M e_0|| for the vacuum basis vector (exact lower bound on ||M||)."""
    col = M[:, 0]
    col = col.toarray().ravel() if sp.issparse(col) else np.asarray(col).ravel()
    return float(np.linalg.norm(col))


def opnorm(M, iters: int = 200, tol: float = 1e-10) -> float:
    """Largest singular value by power iteration on M^* M from the all-ones vector."""
    dim = M.shape[1]
    v = np.ones(dim, dtype=complex) / math.sqrt(dim)
    MH = M.conj().T
    est = 0.0
    for _ in range(iters):
        w = MH @ (M @ v)
        lam = float(np.linalg.norm(w))
        if lam == 0.0:
            return 0.0
        v = w / lam
        new = math.sqrt(lam)
        if abs(new - est) <= tol * new:
            est = new
            break
        est = new
    return est


def sprad_profile(norm_eval: Callable[[Word], float], d_max: int, n: int) -> list[float]:
    """r_d = (max over words of length d of norm_eval(word))^(1/d), d = 1..d_max."""
    out = []
    for d in range(1, d_max + 1):
        top = max(norm_eval(w) for w in words_of_length(n, d))
        out.append(top ** (1.0 / d))
    return out
