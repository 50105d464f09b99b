"""Lie algebras from structure constants, adjoint actions on multivectors,
the Schouten bracket, cocycles and dualization.

Structure constants are stored sparsely for i < j; antisymmetry is enforced
structurally.  All values are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import linalg
from .exterior import Multivector, _raw, merge_indices, wedge
from .rationals import ZERO, Rational, as_rational

_EMPTY: dict = {}


class LieAlgebra:
    """A Lie algebra by structure constants, with an optional inner product.

    ``brackets`` maps basis pairs (i, j) to {k: coefficient}; pairs with
    i > j are folded in with the sign flipped.  The Jacobi identity is not
    enforced here -- run :func:`jacobi_check` to verify validity.
    """

    __slots__ = ("dim", "metric", "_table")

    def __init__(self, dim: int, brackets=None, metric=None):
        if dim < 0:
            raise ValueError("dimension must be >= 0")
        table: dict[tuple[int, int], dict[int, Rational]] = {}
        if brackets:
            items = brackets.items() if hasattr(brackets, "items") else brackets
            for (i, j), image in items:
                if not (0 <= i < dim and 0 <= j < dim):
                    raise ValueError(f"basis index out of range in ({i}, {j})")
                if i == j:
                    if any(as_rational(c) != 0 for c in image.values()):
                        raise ValueError("[x, x] must vanish")
                    continue
                sign = 1
                if i > j:
                    i, j, sign = j, i, -1
                row = table.setdefault((i, j), {})
                for k, coeff in image.items():
                    if not 0 <= k < dim:
                        raise ValueError(f"bracket target {k} out of range")
                    value = row.get(k, ZERO) + sign * as_rational(coeff)
                    if value == 0:
                        row.pop(k, None)
                    else:
                        row[k] = value
                if not row:
                    del table[(i, j)]
        if metric is not None:
            metric = tuple(tuple(as_rational(x) for x in row) for row in metric)
            if len(metric) != dim or any(len(row) != dim for row in metric):
                raise ValueError("metric shape mismatch")
            if not linalg.is_positive_definite(metric):
                raise ValueError("metric must be symmetric positive-definite")
        self.dim = dim
        self.metric = metric
        self._table = table

    def _pair(self, i: int, j: int):
        """Raw structure constants of [e_i, e_j] as (dict, sign)."""
        if i == j:
            return _EMPTY, 1
        if i < j:
            return self._table.get((i, j), _EMPTY), 1
        return self._table.get((j, i), _EMPTY), -1

    def bracket_basis(self, i: int, j: int) -> Multivector:
        row, sign = self._pair(i, j)
        return _raw(1, self.dim, {(k,): sign * c for k, c in row.items()})

    def bracket(self, x: Multivector, y: Multivector) -> Multivector:
        """Bilinear extension of the structure-constant table."""
        if x.dim != self.dim or y.dim != self.dim:
            raise ValueError("ambient dimension mismatch")
        if x.degree != 1 or y.degree != 1:
            raise ValueError("bracket expects degree-1 arguments")
        out: dict[tuple, Rational] = {}
        for (i,), cx in x.terms.items():
            for (j,), cy in y.terms.items():
                row, sign = self._pair(i, j)
                if not row:
                    continue
                factor = sign * cx * cy
                for k, c in row.items():
                    value = out.get((k,), ZERO) + factor * c
                    if value == 0:
                        out.pop((k,), None)
                    else:
                        out[(k,)] = value
        return _raw(1, self.dim, out)

    def ad_multivector(self, x: Multivector, w: Multivector) -> Multivector:
        """Adjoint action extended to multivectors as a wedge derivation."""
        if x.dim != self.dim or w.dim != self.dim:
            raise ValueError("ambient dimension mismatch")
        if x.degree != 1:
            raise ValueError("ad expects a degree-1 first argument")
        out: dict[tuple, Rational] = {}
        for (i,), cx in x.terms.items():
            for key, cw in w.terms.items():
                for pos, target in enumerate(key):
                    row, sign = self._pair(i, target)
                    if not row:
                        continue
                    rest = key[:pos] + key[pos + 1:]
                    pos_sign = -1 if pos % 2 else 1
                    factor = cx * cw * (sign * pos_sign)
                    for k, c in row.items():
                        merged = merge_indices((k,), rest)
                        if merged is None:
                            continue
                        new_key, merge_sign = merged
                        value = out.get(new_key, ZERO) + factor * c * merge_sign
                        if value == 0:
                            out.pop(new_key, None)
                        else:
                            out[new_key] = value
        return _raw(w.degree, self.dim, out)

    def schouten(self, p: Multivector, q: Multivector) -> Multivector:
        """Schouten bracket of multivectors of degree 1 or 2.

        On decomposables it is the signed sum over single-bracket
        contractions; on a pair of bivectors the result is the degree-3
        four-term expansion, symmetric in its arguments.
        """
        if p.dim != self.dim or q.dim != self.dim:
            raise ValueError("ambient dimension mismatch")
        if not (1 <= p.degree <= 2 and 1 <= q.degree <= 2):
            raise ValueError("schouten is implemented for degrees 1 and 2")
        degree = p.degree + q.degree - 1
        out: dict[tuple, Rational] = {}
        for kp, cp in p.terms.items():
            for kq, cq in q.terms.items():
                base = cp * cq
                for a, xi in enumerate(kp):
                    rest_p = kp[:a] + kp[a + 1:]
                    for b, yj in enumerate(kq):
                        row, sign = self._pair(xi, yj)
                        if not row:
                            continue
                        rest_q = kq[:b] + kq[b + 1:]
                        merged_rest = merge_indices(rest_p, rest_q)
                        if merged_rest is None:
                            continue
                        rest_key, rest_sign = merged_rest
                        term_sign = -1 if (a + b) % 2 else 1
                        factor = base * (sign * term_sign * rest_sign)
                        for k, c in row.items():
                            merged = merge_indices((k,), rest_key)
                            if merged is None:
                                continue
                            new_key, head_sign = merged
                            value = out.get(new_key, ZERO) + factor * c * head_sign
                            if value == 0:
                                out.pop(new_key, None)
                            else:
                                out[new_key] = value
        return _raw(degree, self.dim, out)

    def inner(self, u: Multivector, v: Multivector) -> Rational:
        """Inner product of degree-1 multivectors under the metric."""
        if self.metric is None:
            raise ValueError("algebra carries no metric")
        total = ZERO
        for (i,), cu in u.terms.items():
            row = self.metric[i]
            for (j,), cv in v.terms.items():
                total += cu * row[j] * cv
        return total

    def ad_matrix(self, i: int):
        """Dense matrix of ad_{e_i} (columns are [e_i, e_j])."""
        n = self.dim
        out = [[ZERO] * n for _ in range(n)]
        for j in range(n):
            row, sign = self._pair(i, j)
            for k, c in row.items():
                out[k][j] = sign * c
        return out

    def ad_trace(self, i: int) -> Rational:
        total = ZERO
        for j in range(self.dim):
            row, sign = self._pair(i, j)
            total += sign * row.get(j, ZERO)
        return total

    def is_unimodular(self) -> bool:
        return all(self.ad_trace(i) == 0 for i in range(self.dim))

    def structure_constants(self):
        """Canonical copy of the sparse table, for comparisons."""
        return {pair: dict(row) for pair, row in sorted(self._table.items())}

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.dim == other.dim and self.metric == other.metric
                and self._table == other._table)

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, brackets={len(self._table)})"


def abelian(dim: int, metric=None) -> LieAlgebra:
    if metric is None and dim >= 0:
        metric = identity_metric(dim)
    return LieAlgebra(dim, None, metric)


def identity_metric(dim: int):
    return tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triple: tuple[int, int, int] | None = None
    jacobiator: Multivector | None = None


def jacobi_check(algebra: LieAlgebra) -> JacobiReport:
    """Exhaustive Jacobi test; reports the first failing basis triple."""
    n = algebra.dim
    for i, j, k in combinations(range(n), 3):
        ei, ej, ek = (Multivector.basis(t, n) for t in (i, j, k))
        jac = (algebra.bracket(algebra.bracket(ei, ej), ek)
               + algebra.bracket(algebra.bracket(ej, ek), ei)
               + algebra.bracket(algebra.bracket(ek, ei), ej))
        if not jac.is_zero():
            return JacobiReport(False, (i, j, k), jac)
    return JacobiReport(True)


class Cocycle:
    """A linear map from the algebra to its bivectors, one image per basis
    vector.  When built from a generating bivector the generator is kept."""

    __slots__ = ("algebra", "images", "generator")

    def __init__(self, algebra: LieAlgebra, images, generator: Multivector | None = None):
        images = tuple(images)
        if len(images) != algebra.dim:
            raise ValueError("one image per basis vector required")
        for mv in images:
            if mv.degree != 2 or mv.dim != algebra.dim:
                raise ValueError("cocycle images must be bivectors of matching dimension")
        self.algebra = algebra
        self.images = images
        self.generator = generator

    def image(self, i: int) -> Multivector:
        return self.images[i]

    def image_of(self, x: Multivector) -> Multivector:
        if x.degree != 1 or x.dim != self.algebra.dim:
            raise ValueError("cocycle applies to degree-1 multivectors")
        out = Multivector.zero(2, self.algebra.dim)
        for (i,), c in x.terms.items():
            out = out + self.images[i] * c
        return out

    def matrix(self):
        """Dense n x C(n,2) matrix over the wedge basis in lexicographic order."""
        n = self.algebra.dim
        pairs = list(combinations(range(n), 2))
        return [[self.images[i].terms.get(pair, ZERO) for pair in pairs]
                for i in range(n)]

    def is_zero(self) -> bool:
        return all(mv.is_zero() for mv in self.images)

    def __eq__(self, other):
        if not isinstance(other, Cocycle):
            return NotImplemented
        return self.algebra == other.algebra and self.images == other.images


def zero_cocycle(algebra: LieAlgebra) -> Cocycle:
    zero = Multivector.zero(2, algebra.dim)
    return Cocycle(algebra, [zero] * algebra.dim)


def coboundary(algebra: LieAlgebra, r: Multivector) -> Cocycle:
    """The coboundary x -> ad_x(r) of a bivector."""
    if r.dim != algebra.dim:
        raise ValueError("ambient dimension mismatch")
    if r.degree != 2:
        raise ValueError("generator must be a bivector")
    images = [algebra.ad_multivector(Multivector.basis(i, algebra.dim), r)
              for i in range(algebra.dim)]
    return Cocycle(algebra, images, generator=r)


@dataclass(frozen=True)
class CocycleReport:
    ok: bool
    pair: tuple[int, int] | None = None
    lhs: Multivector | None = None
    rhs: Multivector | None = None


def cocycle_check(xi: Cocycle) -> CocycleReport:
    """Exhaustive check of the cocycle identity over basis pairs."""
    algebra = xi.algebra
    n = algebra.dim
    for i, j in combinations(range(n), 2):
        ei, ej = Multivector.basis(i, n), Multivector.basis(j, n)
        lhs = xi.image_of(algebra.bracket(ei, ej))
        rhs = (algebra.ad_multivector(ei, xi.image(j))
               - algebra.ad_multivector(ej, xi.image(i)))
        if lhs != rhs:
            return CocycleReport(False, (i, j), lhs, rhs)
    return CocycleReport(True)


def dual_bracket(xi: Cocycle) -> LieAlgebra:
    """Lie algebra on the dual basis with bracket the transpose of ``xi``.

    The structure constant of [e*_i, e*_j] on e*_k is the coefficient of
    e_i ^ e_j in xi(e_k).  Fails loudly when the input is not a cocycle or
    when the transpose does not satisfy Jacobi: silent acceptance would
    corrupt everything downstream.
    """
    report = cocycle_check(xi)
    if not report.ok:
        raise ValueError(f"not a cocycle: identity fails on basis pair {report.pair}")
    algebra = xi.algebra
    n = algebra.dim
    brackets: dict[tuple[int, int], dict[int, Rational]] = {}
    for k in range(n):
        for pair, coeff in xi.image(k).terms.items():
            brackets.setdefault(pair, {})[k] = coeff
    metric = None
    if algebra.metric is not None:
        metric = linalg.inverse(algebra.metric)
    dual = LieAlgebra(n, brackets, metric)
    jac = jacobi_check(dual)
    if not jac.ok:
        raise ValueError(
            f"transpose is not a Lie bracket: Jacobi fails on triple {jac.triple}")
    return dual


def dual_cocycle(algebra: LieAlgebra, dual: LieAlgebra | None = None) -> Cocycle:
    """The cocycle on the dual that dualizes the bracket of ``algebra``.

    The image of e*_k collects the structure constants of the original
    bracket: its coefficient on e*_i ^ e*_j is c_{ij}^k.  The returned
    cocycle is attached to ``dual`` when given (the dual algebra of a
    bialgebra), otherwise to an abelian algebra of the same dimension.
    """
    n = algebra.dim
    if dual is None:
        dual = abelian(n, identity_metric(n) if algebra.metric is not None else None)
    if dual.dim != n:
        raise ValueError("dual algebra dimension mismatch")
    images = []
    for k in range(n):
        terms = {}
        for i, j in combinations(range(n), 2):
            row, sign = algebra._pair(i, j)
            c = row.get(k)
            if c:
                terms[(i, j)] = sign * c
        images.append(Multivector(2, n, terms))
    return Cocycle(dual, images)
