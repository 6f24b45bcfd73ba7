"""Commutative-monomial model of the quantum polydisk and ball algebras."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._sparse import SparseSeries
from .combinatorics import (
    delta,
    enumerate_preimage,
    inversions,
    multi_key,
    projection,
    q_factorial,
    q_multifactorial,
    sigma,
)
from .free_series import FreeSeries
from .scalars import GaussianRational, abs_sq, is_exact, to_exact

__all__ = [
    "QContext",
    "QSeries",
    "QUANTUM_FAMILIES",
    "ball_weight_sq",
    "normal_order",
    "qmul",
    "qnorm",
    "weight",
]

QUANTUM_FAMILIES = ("polydisk", "ball", "ball_alt")


@dataclass(frozen=True)
class QContext:
    """Alphabet size and deformation parameter q != 0.

    Exact q (int, Fraction, GaussianRational) is kept exact, so that |q|^2
    and every weight built from it is an exact rational.
    """

    n: int
    q: object = 1
    abs_q_sq: object = field(init=False, compare=False)

    def __post_init__(self):
        q = self.q
        q = to_exact(q) if is_exact(q) else complex(q)
        if q == 0:
            raise ValueError("q must be nonzero")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "abs_q_sq", abs_sq(q))

    @property
    def exact(self) -> bool:
        return isinstance(self.q, GaussianRational)

    @property
    def abs_q(self) -> float:
        return math.sqrt(self.abs_q_sq)

    def qpow(self, e: int):
        return self.q**e


class QSeries(SparseSeries):
    """Finite sum of c_k x^k with |k| <= cap."""

    __slots__ = ("n", "cap")

    def __init__(self, terms=None, n: int = 2, cap: int = 8, truncated: bool = False):
        self.n = n
        self.cap = cap
        terms = {tuple(k): c for k, c in (terms or {}).items()}
        for k in terms:
            if len(k) != n or any(ki < 0 for ki in k):
                raise ValueError(f"bad multi-index {k} for n={n}")
            if sum(k) > cap:
                raise ValueError(f"multi-index {k} exceeds degree cap {cap}")
        super().__init__(terms, truncated)

    @staticmethod
    def _key(index):
        return multi_key(index)

    def _like(self, terms, truncated=False):
        return QSeries(terms, self.n, self.cap, truncated)

    def _check_compatible(self, other):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: n={self.n} vs n={other.n}")

    @classmethod
    def monomial(cls, k, c=1, cap: int = 8):
        return cls({tuple(k): c}, len(k), cap)

    @classmethod
    def one(cls, n: int = 2, cap: int = 8):
        return cls({(0,) * n: 1}, n, cap)

    def lift(self) -> FreeSeries:
        """Monomial lift: x^k -> zeta_{delta(k)} (a preimage under normal ordering)."""
        return FreeSeries({delta(k): c for k, c in self.terms.items()}, self.n, self.cap)

    def __repr__(self):
        body = " + ".join(f"({c})*x{k}" for k, c in self.items()) or "0"
        return f"QSeries(n={self.n}, cap={self.cap}: {body})"


# --- weights ---------------------------------------------------------------


def _sqrt(x) -> float:
    return math.sqrt(x)


def weight(k, ctx: QContext, which: str = "w", squared: bool = False):
    """u_q(k) = |q|^sigma(k,k), w_q(k) = min(u_q(k), 1), or the brute-force
    minimum of |q|^m(alpha) over words alpha with p(alpha) = k.

    With ``squared=True`` the square of the weight is returned; it is an exact
    Fraction whenever q is exact.
    """
    s = ctx.abs_q_sq
    if which == "u":
        sq = s ** sigma(k, k)
    elif which == "w":
        sq = min(s ** sigma(k, k), 1)
    elif which == "w_bruteforce":
        sq = min(s ** inversions(w) for w in enumerate_preimage(k))
    else:
        raise ValueError(f"unknown weight {which!r}")
    return sq if squared else _sqrt(sq)


def ball_weight_sq(k, ctx: QContext, alt: bool = False):
    """Square of the ball-norm weight of x^k at rho = 1.

    Default:  [k]_s! / [|k|]_s! * s^sigma(k,k)   with s = |q|^2.
    alt:      [k]_{1/s}! / [|k|]_{1/s}!
    """
    s = ctx.abs_q_sq
    if alt:
        t = 1 / s if isinstance(s, Fraction) else 1.0 / s
        return q_multifactorial(k, t) / q_factorial(sum(k), t)
    return q_multifactorial(k, s) / q_factorial(sum(k), s) * s ** sigma(k, k)


# --- algebra ----------------------------------------------------------------


def normal_order(f: FreeSeries, ctx: QContext) -> QSeries:
    """Image of a free series under zeta_i -> x_i: zeta_alpha -> q^-m(alpha) x^p(alpha)."""
    if f.n != ctx.n:
        raise ValueError("context/series dimension mismatch")
    powers: dict[int, object] = {}
    out: dict = {}
    for w, c in f.items():
        m = inversions(w)
        if m not in powers:
            powers[m] = ctx.qpow(-m)
        k = projection(w, f.n)
        term = c * powers[m]
        out[k] = out[k] + term if k in out else term
    return QSeries(out, f.n, f.cap, f.truncated)


def qmul(f: QSeries, g: QSeries, ctx: QContext) -> QSeries:
    """q-twisted product: x^k x^l = q^-sigma(l,k) x^(k+l)."""
    if f.n != g.n or f.n != ctx.n:
        raise ValueError("context mismatch")
    cap = min(f.cap, g.cap)
    truncated = f.truncated or g.truncated
    out: dict = {}
    for k, a in f.items():
        for l, b in g.items():
            m = tuple(x + y for x, y in zip(k, l))
            if sum(m) > cap:
                truncated = True
                continue
            term = a * b * ctx.qpow(-sigma(l, k))
            out[m] = out[m] + term if m in out else term
    return QSeries(out, f.n, cap, truncated)


def qnorm(f: QSeries, ctx: QContext, family: str, rho: float) -> float:
    """Quantum polydisk / ball norms on the stored terms."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    if family == "polydisk":
        vals = (abs(c) * weight(k, ctx, "w") * rho ** sum(k) for k, c in f.items())
    elif family in ("ball", "ball_alt"):
        alt = family == "ball_alt"
        vals = (
            abs(c) * _sqrt(ball_weight_sq(k, ctx, alt)) * rho ** sum(k) for k, c in f.items()
        )
    else:
        raise ValueError(f"unknown quantum norm family {family!r}")
    return math.fsum(vals)
