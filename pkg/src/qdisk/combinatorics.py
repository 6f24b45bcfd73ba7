"""Words, multi-indices, inversion/block statistics and q-numbers.

Words are tuples of letters in ``1..n``; multi-indices are tuples of
nonnegative integers of length ``n``. Both sort in graded lexicographic
order (length/degree first), which every reduction in the package uses.
"""

from __future__ import annotations

import math
import os
from itertools import combinations_with_replacement, product
from typing import Iterator, NamedTuple, Sequence

from .scalars import LaurentPoly

Word = tuple
MultiIndex = tuple

DEFAULT_MAX_ENUM = 10**6


class EnumerationTooLarge(ValueError):
    pass


class DegenerateQ(ZeroDivisionError):
    pass


def max_enum() -> int:
    """Enumeration cap; the ``QDISK_MAX_ENUM`` environment variable overrides it."""
    env = os.environ.get("QDISK_MAX_ENUM")
    return int(env) if env else DEFAULT_MAX_ENUM


def graded_key(index: Sequence[int]):
    return (len(index), tuple(index))


def multi_key(k: Sequence[int]):
    return (sum(k), tuple(k))


class WordStats(NamedTuple):
    p: MultiIndex
    m: int
    s: int


def projection(alpha: Word, n: int) -> MultiIndex:
    counts = [0] * n
    for a in alpha:
        if not 1 <= a <= n:
            raise ValueError(f"letter {a} outside alphabet 1..{n}")
        counts[a - 1] += 1
    return tuple(counts)


def inversions(alpha: Word) -> int:
    """Number of pairs i < j with alpha_i > alpha_j."""
    # counting sort pass: letters seen so far that exceed the current one
    seen: dict[int, int] = {}
    total = 0
    for a in alpha:
        total += sum(c for b, c in seen.items() if b > a)
        seen[a] = seen.get(a, 0) + 1
    return total


def block_count(alpha: Word) -> int:
    if len(alpha) <= 1:
        return len(alpha) - 1
    return sum(1 for x, y in zip(alpha, alpha[1:]) if x != y)


def word_stats(alpha: Word, n: int) -> WordStats:
    return WordStats(projection(alpha, n), inversions(alpha), block_count(alpha))


def delta(k: MultiIndex) -> Word:
    """The ascending word 1^{k_1} 2^{k_2} ... n^{k_n}."""
    return tuple(i + 1 for i, ki in enumerate(k) for _ in range(ki))


def multinomial(k: MultiIndex) -> int:
    out = math.factorial(sum(k))
    for ki in k:
        out //= math.factorial(ki)
    return out


def _multiset_permutations(letters: list[int]) -> Iterator[tuple]:
    # lexicographic successor algorithm, starts from the sorted word
    a = sorted(letters)
    n = len(a)
    yield tuple(a)
    while True:
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1 :] = reversed(a[i + 1 :])
        yield tuple(a)


def iter_preimage(k: MultiIndex) -> Iterator[Word]:
    """Stream the words with letter counts k in lexicographic order."""
    return _multiset_permutations(list(delta(k)))


def enumerate_preimage(k: MultiIndex, cap: int | None = None) -> list[Word]:
    """All words alpha with p(alpha) = k; the first one is delta(k)."""
    if any(ki < 0 for ki in k):
        raise ValueError(f"negative multi-index {k}")
    cap = max_enum() if cap is None else cap
    count = multinomial(k)
    if count > cap:
        raise EnumerationTooLarge(
            f"p^-1({k}) has {count} words, above the enumeration cap {cap}"
        )
    return list(iter_preimage(k))


def words_of_length(n: int, d: int) -> Iterator[Word]:
    """W_{n,d} in lexicographic order."""
    return product(range(1, n + 1), repeat=d)


def multi_indices(n: int, d: int) -> list[MultiIndex]:
    """All k in Z_+^n with |k| = d, lexicographically."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        k = [0] * n
        for c in combo:
            k[c] += 1
        out.append(tuple(k))
    return sorted(out)


def multi_indices_upto(n: int, d_max: int) -> list[MultiIndex]:
    return [k for d in range(d_max + 1) for k in multi_indices(n, d)]


def sigma(k: MultiIndex, l: MultiIndex) -> int:
    """sum_{i<j} k_i l_j."""
    if len(k) != len(l):
        raise ValueError("dimension mismatch")
    total = 0
    prefix = 0
    for i in range(len(k)):
        total += prefix * l[i]
        prefix += k[i]
    return total


# --- q-numbers as integer polynomials -----------------------------------------
# An integer polynomial is a tuple of coefficients, lowest degree first.


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _poly_divexact(a, b):
    a = list(a)
    while len(b) > 1 and b[-1] == 0:
        b = b[:-1]
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        coef, rem = divmod(a[i + len(b) - 1], b[-1])
        if rem:
            raise ArithmeticError("inexact polynomial division")
        q[i] = coef
        for j, y in enumerate(b):
            a[i + j] -= coef * y
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return tuple(q)


def q_integer_poly(j: int):
    return (1,) * j


def q_factorial_poly(j: int):
    out = (1,)
    for i in range(1, j + 1):
        out = _poly_mul(out, q_integer_poly(i))
    return out


def q_multifactorial_poly(k: MultiIndex):
    out = (1,)
    for ki in k:
        out = _poly_mul(out, q_factorial_poly(ki))
    return out


def q_multinomial_poly(k: MultiIndex):
    """[|k|]_q! / [k]_q! computed by exact polynomial division."""
    return _poly_divexact(q_factorial_poly(sum(k)), q_multifactorial_poly(k))


def inversion_poly(k: MultiIndex, cap: int | None = None):
    """sum over p^-1(k) of q^{m(alpha)}, by enumeration."""
    words = enumerate_preimage(k, cap)
    top = sigma(k, k)
    out = [0] * (top + 1)
    for w in words:
        out[inversions(w)] += 1
    return tuple(out)


def poly_eval(poly, q):
    acc = 0
    for c in reversed(poly):
        acc = acc * q + c
    return acc


def q_factorial(j: int, q):
    out = 1
    for i in range(1, j + 1):
        out = out * poly_eval(q_integer_poly(i), q)
    return out


def q_multifactorial(k: MultiIndex, q):
    out = 1
    for ki in k:
        out = out * q_factorial(ki, q)
    return out


def q_ratio(k: MultiIndex, q=None):
    """Return ([k]_q!, [|k|]_q!/[k]_q!, inversion polynomial).

    With ``q=None`` the first two entries are integer coefficient tuples in a
    symbolic q; otherwise they are evaluated at q.
    """
    inv = LaurentPoly(dict(enumerate(inversion_poly(k))))
    if q is None:
        return q_multifactorial_poly(k), q_multinomial_poly(k), inv
    qk = q_multifactorial(k, q)
    if qk == 0:
        raise DegenerateQ(f"[k]_q! vanishes for k={k}, q={q}")
    return qk, q_factorial(sum(k), q) / qk, inv
