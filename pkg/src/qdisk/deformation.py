"""The algebra D_{n,r}: series in x^k z^p with the z-twisted product.

Elements are finite sums c_{kp} x^k z^p, p in Z. Substituting z = q gives
the fibre at q, an element of the q-twisted algebra.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from ._sparse import SparseSeries
from .combinatorics import delta, inversions, multi_key, sigma
from .quantum_series import QContext, QSeries, qnorm

__all__ = [
    "DefoSeries",
    "alpha_with_inversions",
    "canonical_split",
    "dmul",
    "dnorm",
    "fiber_eval",
    "fiber_norm_profile",
    "max_jump",
    "omega",
    "parse_grid",
    "rebuild",
]


def omega(k, p: int) -> int:
    """The point of [p, p + sigma(k,k)] nearest zero."""
    if p >= 0:
        return p
    top = p + sigma(k, k)
    return 0 if top >= 0 else top


class DefoSeries(SparseSeries):
    """Finite sum of c x^k z^p, keyed by (k, p), with |k| <= cap and |p| <= zwin."""

    __slots__ = ("n", "cap", "zwin")

    def __init__(self, terms=None, n: int = 2, cap: int = 8, zwin: int = 64, truncated: bool = False):
        self.n = n
        self.cap = cap
        self.zwin = zwin
        clean = {}
        for (k, p), c in (terms or {}).items():
            k = tuple(k)
            if len(k) != n or any(ki < 0 for ki in k):
                raise ValueError(f"bad multi-index {k} for n={n}")
            if sum(k) > cap:
                raise ValueError(f"multi-index {k} exceeds degree cap {cap}")
            if abs(p) > zwin:
                raise ValueError(f"z-exponent {p} outside window [-{zwin}, {zwin}]")
            key = (k, int(p))
            clean[key] = clean[key] + c if key in clean else c
        super().__init__(clean, truncated)

    @staticmethod
    def _key(index):
        k, p = index
        return (multi_key(k), p)

    def _like(self, terms, truncated=False):
        return DefoSeries(terms, self.n, self.cap, self.zwin, truncated)

    def _check_compatible(self, other):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: n={self.n} vs n={other.n}")

    @classmethod
    def monomial(cls, k, p: int = 0, c=1, cap: int = 8, zwin: int = 64):
        return cls({(tuple(k), p): c}, len(k), cap, zwin)

    def __mul__(self, other):
        if isinstance(other, DefoSeries):
            return dmul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __repr__(self):
        body = " + ".join(f"({c})*x{k}z^{p}" for (k, p), c in self.items()) or "0"
        return f"DefoSeries(n={self.n}, cap={self.cap}, zwin={self.zwin}: {body})"


def dmul(a: DefoSeries, b: DefoSeries) -> DefoSeries:
    """(x^k z^p)(x^l z^s) = x^(k+l) z^(p + s - sigma(l,k))."""
    a._check_compatible(b)
    cap = min(a.cap, b.cap)
    zwin = min(a.zwin, b.zwin)
    truncated = a.truncated or b.truncated
    out: dict = {}
    for (k, p), ca in a.items():
        for (l, s), cb in b.items():
            m = tuple(x + y for x, y in zip(k, l))
            e = p + s - sigma(l, k)
            if sum(m) > cap or abs(e) > zwin:
                truncated = True
                continue
            key = (m, e)
            out[key] = out[key] + ca * cb if key in out else ca * cb
    return DefoSeries(out, a.n, cap, zwin, truncated)


def dnorm(a: DefoSeries, rho: float, tau: float) -> float:
    """sum |c| rho^|k| tau^|omega(k,p)|."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    if tau < 1:
        raise ValueError("tau must be >= 1")
    return math.fsum(
        abs(c) * rho ** sum(k) * tau ** abs(omega(k, p)) for (k, p), c in a.items()
    )


# --- words with a prescribed number of inversions --------------------------------


def alpha_with_inversions(k, m: int):
    """A word with letter counts k and exactly m inversions.

    Starting from the ascending word, the current first letter is carried to
    the right by adjacent transpositions; pass j moves it past d - j letters.
    Only transpositions of distinct letters change the inversion count, and
    each of those raises it by one, so we stop as soon as the count reaches m.
    """
    k = tuple(k)
    top = sigma(k, k)
    if not 0 <= m <= top:
        raise ValueError(f"m={m} outside [0, {top}] for k={k}")
    word = list(delta(k))
    d = len(word)
    count = 0
    for j in range(d):
        if count == m:
            break
        # carry word[0] to position d - 1 - j
        for pos in range(d - 1 - j):
            if count == m:
                break
            if word[pos] != word[pos + 1]:
                count += 1
            word[pos], word[pos + 1] = word[pos + 1], word[pos]
    if count != m:
        raise AssertionError("inversion procedure did not terminate at m")
    return tuple(word)


def canonical_split(a: DefoSeries):
    """Terms c x^k z^p rewritten as (omega(k,p), alpha, c) with m(alpha) = omega - p."""
    out = []
    for (k, p), c in a.items():
        e = omega(k, p)
        out.append((e, alpha_with_inversions(k, e - p), c))
    return out


def rebuild(split, n: int, cap: int = 8, zwin: int = 64) -> DefoSeries:
    """Inverse of canonical_split: z^e zeta_alpha -> x^p(alpha) z^(e - m(alpha))."""
    terms: dict = {}
    for e, w, c in split:
        k = [0] * n
        for letter in w:
            k[letter - 1] += 1
        key = (tuple(k), e - inversions(w))
        terms[key] = terms[key] + c if key in terms else c
    return DefoSeries(terms, n, cap, zwin)


# --- fibres ----------------------------------------------------------------


def fiber_eval(a: DefoSeries, ctx: QContext) -> QSeries:
    """Substitute z = q."""
    if a.n != ctx.n:
        raise ValueError("context/series dimension mismatch")
    out: dict = {}
    powers: dict = {}
    for (k, p), c in a.items():
        if p not in powers:
            powers[p] = ctx.qpow(p)
        term = c * powers[p]
        out[k] = out[k] + term if k in out else term
    return QSeries(out, a.n, a.cap, a.truncated)


def fiber_norm_profile(a: DefoSeries, rho: float, geometry: str, q_grid) -> list[float]:
    """||a_q|| in the quantum polydisk or ball norm at each grid point."""
    if geometry not in ("polydisk", "ball"):
        raise ValueError(f"unknown geometry {geometry!r}")
    out = []
    for q in q_grid:
        if q == 0:
            raise ValueError("q = 0 is not in the punctured plane")
        ctx = QContext(a.n, q)
        out.append(qnorm(fiber_eval(a, ctx), ctx, geometry, rho))
    return out


def max_jump(values) -> float:
    return max((abs(y - x) for x, y in zip(values, values[1:])), default=0.0)


_GRID_RE = re.compile(r"^([^:]+):([^:]+):(\d+)(?:@(.+))?$")


def parse_grid(spec: str) -> list:
    """``start:stop:num[@angle]`` -> num moduli in [start, stop] at argument angle.

    The moduli are evenly spaced; the angle (radians, default 0) is shared by all
    points, so ``0.5:2:7`` walks the positive real axis.
    """
    m = _GRID_RE.match(spec.strip())
    if not m:
        raise ValueError(f"malformed grid spec {spec!r}; expected start:stop:num[@angle]")
    start, stop = float(Fraction(m.group(1))), float(Fraction(m.group(2)))
    num = int(m.group(3))
    angle = float(m.group(4)) if m.group(4) else 0.0
    if num < 1:
        raise ValueError("grid needs at least one point")
    if start <= 0 or stop <= 0:
        raise ValueError("grid moduli must be positive")
    step = (stop - start) / (num - 1) if num > 1 else 0.0
    phase = complex(math.cos(angle), math.sin(angle))
    pts = [start + i * step for i in range(num)]
    return [r * phase if angle else r for r in pts]
