"""Shared plumbing for the sparse series types."""

from __future__ import annotations

import cmath
from numbers import Complex

from .scalars import GaussianRational, is_exact


def clean_terms(terms) -> dict:
    out = {}
    for key, c in terms.items():
        if isinstance(c, Complex) and not is_exact(c):
            z = complex(c)
            if not (cmath.isfinite(z)):
                raise ValueError(f"non-finite coefficient at {key}")
            if z == 0:
                continue
            out[key] = z
        else:
            if c == 0:
                continue
            out[key] = c if isinstance(c, GaussianRational) else GaussianRational(c)
    return out


class SparseSeries:
    """Immutable map index -> nonzero coefficient; subclasses fix the index type."""

    __slots__ = ("terms", "truncated")

    def __init__(self, terms=None, truncated: bool = False):
        self.terms = clean_terms(terms or {})
        self.truncated = truncated

    # subclasses provide: _key (sort key), _like(terms, truncated)

    def _like(self, terms, truncated=False):
        raise NotImplementedError

    @staticmethod
    def _key(index):
        raise NotImplementedError

    def _check_compatible(self, other):
        pass

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values())

    def items(self):
        """Terms in canonical (graded lexicographic) order."""
        return sorted(self.terms.items(), key=lambda kv: self._key(kv[0]))

    def coeff(self, index):
        return self.terms.get(index, 0)

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return self._like(out, self.truncated or other.truncated)

    def __sub__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return self._like({k: v * c for k, v in self.terms.items()}, self.truncated)

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def to_float(self):
        return self._like({k: complex(c) for k, c in self.terms.items()}, self.truncated)
