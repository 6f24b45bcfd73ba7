"""Formal star product in h, the Poisson bracket, and related checks.

A truncated h-series is an ``HPoly`` whose coefficients are ``QSeries`` (or
``FreeSeries``); plain series are treated as constant in h.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .combinatorics import enumerate_preimage, inversions, multi_key, multinomial, projection, sigma
from .free_series import FreeSeries
from .quantum_series import QContext, QSeries, qmul, qnorm
from .scalars import GaussianRational, HPoly, hpoly_exp_factor

__all__ = [
    "HSeries",
    "normal_order_h",
    "poisson",
    "rieffel_defect",
    "star",
    "star_fiber_compare",
    "u_section",
    "u_section_check",
]

HSeries = HPoly


def _as_orders(f, N):
    if isinstance(f, HPoly):
        return list(f.coeffs[: N + 1])
    return [f]


def star(f, g, N: int) -> HPoly:
    """f * g truncated above h^N, from x^k * x^l = exp(-i h sigma(l,k)) x^(k+l)."""
    if N < 0:
        raise ValueError("order cap must be >= 0")
    fs, gs = _as_orders(f, N), _as_orders(g, N)
    n = fs[0].n
    if gs[0].n != n:
        raise ValueError("dimension mismatch")
    cap = min(fs[0].cap, gs[0].cap)
    truncated = False
    orders: list[dict] = [{} for _ in range(N + 1)]
    factors: dict[int, HPoly] = {}
    for i, fi in enumerate(fs):
        for j, gj in enumerate(gs):
            if i + j > N:
                continue
            truncated |= fi.truncated or gj.truncated
            for k, a in fi.items():
                for l, b in gj.items():
                    m = tuple(x + y for x, y in zip(k, l))
                    if sum(m) > cap:
                        truncated = True
                        continue
                    s = sigma(l, k)
                    if s not in factors:
                        factors[s] = hpoly_exp_factor(s, N)
                    ab = a * b
                    for e in range(N + 1 - i - j):
                        c = factors[s][e]
                        if c:
                            bucket = orders[i + j + e]
                            term = ab * c
                            bucket[m] = bucket[m] + term if m in bucket else term
    coeffs = [QSeries(o, n, cap, truncated) for o in orders]
    return HPoly(coeffs, N, QSeries({}, n, cap))


def poisson(f: QSeries, g: QSeries) -> QSeries:
    """{f, g} = sum a_k b_l (sigma(k,l) - sigma(l,k)) x^(k+l)."""
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    cap = min(f.cap, g.cap)
    out: dict = {}
    truncated = f.truncated or g.truncated
    for k, a in f.items():
        for l, b in g.items():
            w = sigma(k, l) - sigma(l, k)
            if w == 0:
                continue
            m = tuple(x + y for x, y in zip(k, l))
            if sum(m) > cap:
                truncated = True
                continue
            term = a * b * w
            out[m] = out[m] + term if m in out else term
    return QSeries(out, f.n, cap, truncated)


def _phi(a: int, b: int, h: float) -> complex:
    """(exp(-i h a) - exp(-i h b))/h - i(b - a), with a = sigma(l,k), b = sigma(k,l)."""
    diff = -2j * cmath.exp(-0.5j * h * (a + b)) * math.sin(0.5 * h * (a - b))
    return diff / h - 1j * (b - a)


def rieffel_defect(f: QSeries, g: QSeries, h: float, rho: float) -> float:
    """Fibre norm at q = exp(ih) of (f_h g_h - g_h f_h)/h - i{f,g}.

    Pairs {k, l} are combined as (a_k b_l - a_l b_k) phi_kl, which makes the
    defect of f with itself vanish identically in floating point.
    """
    if h == 0:
        raise ValueError("h must be nonzero")
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    a = {k: complex(c) for k, c in f.terms.items()}
    b = {k: complex(c) for k, c in g.terms.items()}
    keys = sorted(set(a) | set(b), key=multi_key)
    out: dict = {}
    for i, k in enumerate(keys):
        for l in keys[i + 1 :]:
            coef = a.get(k, 0) * b.get(l, 0) - a.get(l, 0) * b.get(k, 0)
            if coef == 0:
                continue
            val = coef * _phi(sigma(l, k), sigma(k, l), h)
            m = tuple(x + y for x, y in zip(k, l))
            out[m] = out.get(m, 0) + val
    cap = max((sum(m) for m in out), default=0)
    ctx = QContext(f.n, cmath.exp(1j * h))
    return qnorm(QSeries(out, f.n, cap), ctx, "polydisk", rho)


def star_fiber_compare(f: QSeries, g: QSeries, h: float) -> float:
    """Relative max coefficient gap between sum a b exp(-ih sigma(l,k)) x^(k+l)
    and the q-twisted product at q = exp(ih)."""
    direct: dict = {}
    cap = f.cap + g.cap
    for k, a in f.items():
        for l, b in g.items():
            m = tuple(x + y for x, y in zip(k, l))
            term = complex(a) * complex(b) * cmath.exp(-1j * h * sigma(l, k))
            direct[m] = direct.get(m, 0) + term
    ctx = QContext(f.n, cmath.exp(1j * h))
    big_f = QSeries(f.terms, f.n, cap)
    big_g = QSeries(g.terms, g.n, cap)
    fiber = qmul(big_f, big_g, ctx)
    keys = set(direct) | set(fiber.terms)
    gap = max((abs(direct.get(m, 0) - complex(fiber.coeff(m))) for m in keys), default=0.0)
    scale = max((abs(v) for v in direct.values()), default=0.0)
    return gap / scale if scale > 0 else gap


# --- the section u_k -------------------------------------------------------


def u_section(k, N: int) -> HPoly:
    """(k!/|k|!) sum_alpha exp(i m(alpha) h) zeta_alpha, expanded to h^N."""
    k = tuple(k)
    words = enumerate_preimage(k)
    n, d = len(k), sum(k)
    norm = Fraction(1, multinomial(k))
    orders: list[dict] = [{} for _ in range(N + 1)]
    for w in words:
        e = hpoly_exp_factor(-inversions(w), N)
        for j in range(N + 1):
            if e[j]:
                orders[j][w] = e[j] * norm
    coeffs = [FreeSeries(o, n, d) for o in orders]
    return HPoly(coeffs, N, FreeSeries({}, n, d))


def normal_order_h(u: HPoly, N: int) -> HPoly:
    """Normal ordering with q = exp(ih): zeta_alpha -> exp(-i m(alpha) h) x^p(alpha)."""
    first = u.coeffs[0]
    n, cap = first.n, first.cap
    orders: list[dict] = [{} for _ in range(N + 1)]
    factors: dict[int, HPoly] = {}
    for i, fi in enumerate(u.coeffs[: N + 1]):
        for w, c in fi.items():
            m = inversions(w)
            if m not in factors:
                factors[m] = hpoly_exp_factor(m, N)
            k = projection(w, n)
            for e in range(N + 1 - i):
                t = factors[m][e]
                if t:
                    bucket = orders[i + e]
                    bucket[k] = bucket[k] + c * t if k in bucket else c * t
    coeffs = [QSeries(o, n, cap) for o in orders]
    return HPoly(coeffs, N, QSeries({}, n, cap))


def u_section_check(k, N: int) -> bool:
    """Normal ordering of u_k is exactly x^k with vanishing higher h-coefficients."""
    k = tuple(k)
    image = normal_order_h(u_section(k, N), N)
    target = QSeries({k: GaussianRational(1)}, len(k), sum(k))
    return image.coeffs[0] == target and all(not c for c in image.coeffs[1:])
