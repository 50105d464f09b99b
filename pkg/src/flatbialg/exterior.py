"""Graded multivectors over exact rationals.

Elements of degree 0..3 in an n-dimensional space, stored as a map from
strictly increasing index tuples to nonzero coefficients.  That canonical
form is unique, so equality of multivectors is a plain map comparison.
Degree is capped at 3: nothing downstream ever needs a 4-vector, and the
cap keeps the index space honest.
"""

from __future__ import annotations

from .rationals import ZERO, Rational, as_rational

MAX_DEGREE = 3


def merge_indices(left: tuple, right: tuple):
    """Merge two strictly increasing tuples, counting the wedge sign.

    Returns (indices, sign) or None when an index repeats.
    """
    out = []
    sign = 1
    i = j = 0
    while i < len(left) and j < len(right):
        a, b = left[i], right[j]
        if a == b:
            return None
        if a < b:
            out.append(a)
            i += 1
        else:
            out.append(b)
            j += 1
            if (len(left) - i) % 2:
                sign = -sign
    out.extend(left[i:])
    out.extend(right[j:])
    return tuple(out), sign


def sort_indices(indices):
    """Canonicalize an index tuple: (sorted tuple, sign), or None on repeats."""
    out: tuple = ()
    sign = 1
    for idx in indices:
        step = merge_indices(out, (idx,))
        if step is None:
            return None
        out, s = step
        sign *= s
    return out, sign


class Multivector:
    """Immutable homogeneous multivector in canonical form."""

    __slots__ = ("degree", "dim", "terms")

    def __init__(self, degree: int, dim: int, terms=None):
        if not 0 <= degree <= MAX_DEGREE:
            raise ValueError(f"degree {degree} outside 0..{MAX_DEGREE}")
        if dim < 0:
            raise ValueError("ambient dimension must be >= 0")
        canonical: dict[tuple, Rational] = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for indices, coeff in items:
                indices = tuple(indices)
                if len(indices) != degree:
                    raise ValueError(
                        f"index tuple {indices} has wrong length for degree {degree}")
                if any(not 0 <= k < dim for k in indices):
                    raise ValueError(f"index out of range in {indices}")
                sorted_pair = sort_indices(indices)
                if sorted_pair is None:
                    continue
                key, sign = sorted_pair
                value = canonical.get(key, ZERO) + sign * as_rational(coeff)
                if value == 0:
                    canonical.pop(key, None)
                else:
                    canonical[key] = value
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", canonical)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    @classmethod
    def zero(cls, degree: int, dim: int) -> "Multivector":
        return cls(degree, dim, None)

    @classmethod
    def basis(cls, index: int, dim: int) -> "Multivector":
        return cls(1, dim, {(index,): 1})

    @classmethod
    def scalar(cls, value, dim: int) -> "Multivector":
        return cls(0, dim, {(): value})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, indices) -> Rational:
        sorted_pair = sort_indices(tuple(indices))
        if sorted_pair is None:
            return ZERO
        key, sign = sorted_pair
        return sign * self.terms.get(key, ZERO)

    def _check_compatible(self, other: "Multivector"):
        if self.dim != other.dim:
            raise ValueError("ambient dimension mismatch")
        if self.degree != other.degree:
            raise ValueError("degree mismatch")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check_compatible(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            value = terms.get(key, ZERO) + coeff
            if value == 0:
                terms.pop(key, None)
            else:
                terms[key] = value
        return _raw(self.degree, self.dim, terms)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __neg__(self) -> "Multivector":
        return _raw(self.degree, self.dim,
                    {k: -c for k, c in self.terms.items()})

    def __mul__(self, scalar) -> "Multivector":
        factor = as_rational(scalar)
        if factor == 0:
            return _raw(self.degree, self.dim, {})
        return _raw(self.degree, self.dim,
                    {k: c * factor for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self.degree == other.degree and self.dim == other.dim
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, self.dim, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if self.is_zero():
            return f"Multivector({self.degree}, {self.dim}, 0)"
        body = " + ".join(f"{c}*e{list(k)}" for k, c in sorted(self.terms.items()))
        return f"Multivector({self.degree}, {self.dim}, {body})"


def _raw(degree: int, dim: int, terms: dict) -> Multivector:
    """Internal constructor for terms already in canonical form."""
    mv = Multivector.__new__(Multivector)
    object.__setattr__(mv, "degree", degree)
    object.__setattr__(mv, "dim", dim)
    object.__setattr__(mv, "terms", terms)
    return mv


def wedge(u: Multivector, v: Multivector) -> Multivector:
    """Exterior product; rejects dimension mismatches and degree overflow."""
    if u.dim != v.dim:
        raise ValueError("ambient dimension mismatch")
    degree = u.degree + v.degree
    if degree > MAX_DEGREE:
        raise ValueError(f"degree overflow: {u.degree}+{v.degree} > {MAX_DEGREE}")
    terms: dict[tuple, Rational] = {}
    for ku, cu in u.terms.items():
        for kv, cv in v.terms.items():
            merged = merge_indices(ku, kv)
            if merged is None:
                continue
            key, sign = merged
            value = terms.get(key, ZERO) + sign * cu * cv
            if value == 0:
                terms.pop(key, None)
            else:
                terms[key] = value
    return _raw(degree, u.dim, terms)


def apply_linear(matrix, v: Multivector) -> Multivector:
    """Apply an n x n matrix to a degree-1 multivector."""
    if v.degree != 1:
        raise ValueError("apply_linear expects a degree-1 multivector")
    n = v.dim
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ValueError("matrix shape mismatch")
    out: dict[tuple, Rational] = {}
    for (i,), coeff in v.terms.items():
        for j in range(n):
            entry = as_rational(matrix[j][i])
            if entry == 0:
                continue
            key = (j,)
            value = out.get(key, ZERO) + entry * coeff
            if value == 0:
                out.pop(key, None)
            else:
                out[key] = value
    return _raw(1, n, out)
