"""Seeded random series for the verification suites."""

from __future__ import annotations

import numpy as np

from .combinatorics import multi_indices_upto
from .deformation import DefoSeries
from .free_series import FreeSeries
from .quantum_series import QSeries
from .scalars import GaussianRational


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def exact_coeff(gen: np.random.Generator, span: int = 3) -> GaussianRational:
    while True:
        re, im = (int(v) for v in gen.integers(-span, span + 1, size=2))
        if re or im:
            den = int(gen.integers(1, 4))
            return GaussianRational(re, im) / den


def float_coeff(gen: np.random.Generator) -> complex:
    re, im = gen.normal(size=2)
    return complex(re, im)


def _coeff(gen, exact):
    return exact_coeff(gen) if exact else float_coeff(gen)


def random_word(gen, n: int, d: int) -> tuple:
    return tuple(int(a) for a in gen.integers(1, n + 1, size=d))


def random_free(gen, n: int, max_deg: int, terms: int = 5, cap: int | None = None, exact: bool = False):
    cap = max_deg if cap is None else cap
    out = {}
    for _ in range(terms):
        d = int(gen.integers(0, max_deg + 1))
        out[random_word(gen, n, d)] = _coeff(gen, exact)
    return FreeSeries(out, n, cap)


def random_q(gen, n: int, max_deg: int, terms: int = 5, cap: int | None = None, exact: bool = False):
    cap = max_deg if cap is None else cap
    pool = multi_indices_upto(n, max_deg)
    out = {}
    for _ in range(terms):
        k = pool[int(gen.integers(len(pool)))]
        out[k] = _coeff(gen, exact)
    return QSeries(out, n, cap)


def random_defo(
    gen, n: int, max_deg: int, pmax: int, terms: int = 5, cap: int | None = None,
    zwin: int = 64, exact: bool = False,
):
    cap = max_deg if cap is None else cap
    pool = multi_indices_upto(n, max_deg)
    out = {}
    for _ in range(terms):
        k = pool[int(gen.integers(len(pool)))]
        p = int(gen.integers(-pmax, pmax + 1))
        out[(k, p)] = _coeff(gen, exact)
    return DefoSeries(out, n, cap, zwin)
