"""Coefficient domains: Gaussian rationals, floats, Laurent and truncated h-polynomials."""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from numbers import Complex, Rational, Real

__all__ = [
    "GaussianRational",
    "I",
    "HPoly",
    "LaurentPoly",
    "abs_sq",
    "format_scalar",
    "gaussian_arith",
    "hpoly_exp_factor",
    "is_exact",
    "laurent_norm",
    "parse_scalar",
    "to_complex",
    "to_exact",
]


class GaussianRational:
    """Exact element of Q(i), stored as a pair of fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, Rational):
            return cls(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other if isinstance(other, Complex) else NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other if isinstance(other, Complex) else NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self) if isinstance(other, Complex) else NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other if isinstance(other, Complex) else NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other if isinstance(other, Complex) else NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self) if isinstance(other, Complex) else NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, e):
        if not isinstance(e, int):
            return complex(self) ** e
        base = self if e >= 0 else self.inverse()
        result = GaussianRational(1)
        e = abs(e)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        d = self.abs_sq()
        if d == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / d, -self.im / d)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.sqrt(self.abs_sq())

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


I = GaussianRational(0, 1)


def is_exact(x) -> bool:
    return isinstance(x, (GaussianRational, Rational))


def to_exact(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, Rational):
        return GaussianRational(x)
    raise TypeError(f"cannot convert {x!r} to an exact scalar")


def to_complex(x) -> complex:
    return complex(x)


def abs_sq(x):
    """|x|^2, exact (Fraction) for exact scalars and float otherwise."""
    if isinstance(x, GaussianRational):
        return x.abs_sq()
    if isinstance(x, Rational):
        return Fraction(x) ** 2
    z = complex(x)
    return z.real * z.real + z.imag * z.imag


def gaussian_arith(a, b, op: str):
    a, b = to_exact(a), to_exact(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# --- text format -----------------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_EXACT_RE = re.compile(
    rf"^(?:(?P<re>{_RAT})(?=$|[+-]))?(?:(?P<im>[+-]?(?:\d+(?:/\d+)?)?)\*?i)?$"
)
_PAIR_RE = re.compile(r"^\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)$")


def parse_scalar(text: str):
    """Parse ``a/b+c/d*i`` (exact) or ``(re,im)`` (float pair)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    m = _PAIR_RE.match(s)
    if m:
        re_, im_ = float(m.group(1)), float(m.group(2))
        if not (math.isfinite(re_) and math.isfinite(im_)):
            raise ValueError(f"non-finite scalar {text!r}")
        return complex(re_, im_)
    m = _EXACT_RE.match(s)
    if m and (m.group("re") is not None or m.group("im") is not None):
        re_ = Fraction(m.group("re")) if m.group("re") else Fraction(0)
        im_txt = m.group("im")
        if im_txt is None:
            im_ = Fraction(0)
        elif im_txt in ("", "+"):
            im_ = Fraction(1)
        elif im_txt == "-":
            im_ = Fraction(-1)
        else:
            im_ = Fraction(im_txt)
        return GaussianRational(re_, im_)
    # plain decimals are accepted as exact rationals (0.5 == 1/2)
    try:
        return GaussianRational(Fraction(s))
    except ValueError:
        pass
    raise ValueError(f"malformed scalar {text!r}")


def _fmt_float(v: float) -> str:
    s = repr(float(v))
    if s.endswith(".0"):
        s = s[:-2]
    if s == "-0":
        s = "0"
    return s


def format_scalar(x) -> str:
    if isinstance(x, (GaussianRational, Rational)):
        x = to_exact(x)
        if x.im == 0:
            return str(x.re)
        im = f"{x.im}*i"
        if x.re == 0:
            return im
        sign = "+" if x.im > 0 else ""
        return f"{x.re}{sign}{im}"
    z = complex(x)
    return f"({_fmt_float(z.real)},{_fmt_float(z.imag)})"


# --- Laurent polynomials ----------------------------------------------------


class LaurentPoly:
    """Finite Laurent polynomial in one variable, sparse in the exponent."""

    __slots__ = ("coeffs", "window")

    def __init__(self, coeffs=None, window: int | None = None):
        clean = {int(e): c for e, c in (coeffs or {}).items() if c != 0}
        if window is not None and any(abs(e) > window for e in clean):
            raise ValueError(f"exponent outside window [-{window}, {window}]")
        self.coeffs = dict(sorted(clean.items()))
        self.window = window

    @classmethod
    def monomial(cls, e: int, c=1):
        return cls({e: c})

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, _join_window(self.window, other.window))

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out: dict = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
            w = None
            if self.window is not None and other.window is not None:
                w = self.window + other.window
            return LaurentPoly(out, w)
        return LaurentPoly({e: c * other for e, c in self.coeffs.items()}, self.window)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __call__(self, z):
        return sum((c * z**e for e, c in self.coeffs.items()), 0)

    def __repr__(self):
        return f"LaurentPoly({self.coeffs!r})"


def _join_window(a, b):
    if a is None or b is None:
        return None
    return max(a, b)


def laurent_norm(f: LaurentPoly, t: float) -> float:
    """Sum of |c_n| t^|n| over the Laurent coefficients."""
    if t < 1:
        raise ValueError("laurent_norm requires t >= 1")
    return math.fsum(abs(c) * t ** abs(e) for e, c in f.coeffs.items())


# --- truncated power series in h -----------------------------------------


class HPoly:
    """Polynomial in h truncated above h^N.

    Coefficients may be scalars or any ring elements supporting ``+`` and
    ``*``; ``zero`` is the additive identity used for padding.
    """

    __slots__ = ("coeffs", "order", "zero")

    def __init__(self, coeffs, order: int, zero=0):
        if order < 0:
            raise ValueError("order cap must be >= 0")
        coeffs = list(coeffs)[: order + 1]
        coeffs += [zero] * (order + 1 - len(coeffs))
        self.coeffs = coeffs
        self.order = order
        self.zero = zero

    def __getitem__(self, m):
        return self.coeffs[m]

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, HPoly):
            return HPoly([self.coeffs[0] + other] + self.coeffs[1:], self.order, self.zero)
        n = min(self.order, other.order)
        return HPoly([a + b for a, b in zip(self.coeffs, other.coeffs)][: n + 1], n, self.zero)

    def __sub__(self, other):
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __mul__(self, other):
        if not isinstance(other, HPoly):
            return HPoly([c * other for c in self.coeffs], self.order, self.zero)
        n = min(self.order, other.order)
        out = []
        for m in range(n + 1):
            acc = self.zero
            for a in range(m + 1):
                acc = acc + self.coeffs[a] * other.coeffs[m - a]
            out.append(acc)
        return HPoly(out, n, self.zero)

    def __rmul__(self, other):
        return HPoly([other * c for c in self.coeffs], self.order, self.zero)

    def __eq__(self, other):
        if not isinstance(other, HPoly):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def evaluate(self, h):
        """Numeric value of the truncated polynomial at h (scalar coefficients)."""
        return sum((complex(c) * h**m for m, c in enumerate(self.coeffs)), 0j)

    def __repr__(self):
        return f"HPoly({self.coeffs!r}, order={self.order})"


def hpoly_exp_factor(s: int, order: int) -> HPoly:
    """Truncation of exp(-i s h): coefficient of h^m is (-i s)^m / m!."""
    if order < 0:
        raise ValueError("order cap must be >= 0")
    base = GaussianRational(0, -s)
    coeffs = []
    term = GaussianRational(1)
    for m in range(order + 1):
        if m:
            term = term * base / m
        coeffs.append(term)
    return HPoly(coeffs, order, GaussianRational(0))


def exp_ih(h: float) -> complex:
    return cmath.exp(1j * h)
