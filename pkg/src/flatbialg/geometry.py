"""Levi-Civita connection, curvature and the orthogonal-split verifier for
metric Lie algebras.

The curvature sign convention is R(x,y,z) = nabla_{[x,y]} z - (nabla_x
nabla_y z - nabla_y nabla_x z).  The opposite convention is common
elsewhere; everything in this package uses this one.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .exterior import Multivector, _raw
from .rationals import ZERO, Rational


class Connection:
    """The unique torsion-free metric connection, stored column-sparse."""

    __slots__ = ("algebra", "_columns", "_dense")

    def __init__(self, algebra, columns):
        self.algebra = algebra
        self._columns = columns  # {(i, j): {k: coeff}} for nabla_{e_i} e_j
        self._dense = None

    def column(self, i: int, j: int) -> dict:
        return self._columns.get((i, j), {})

    def apply_basis(self, i: int, vec: dict) -> dict:
        """nabla_{e_i} applied to a sparse coordinate vector."""
        out: dict[int, Rational] = {}
        for j, c in vec.items():
            for k, v in self.column(i, j).items():
                value = out.get(k, ZERO) + c * v
                if value == 0:
                    out.pop(k, None)
                else:
                    out[k] = value
        return out

    @property
    def nabla(self):
        """Dense n x n x n coordinate array of nabla_{e_i} e_j."""
        if self._dense is None:
            n = self.algebra.dim
            self._dense = tuple(
                tuple(tuple(self.column(i, j).get(k, ZERO) for k in range(n))
                      for j in range(n))
                for i in range(n))
        return self._dense


def levi_civita(algebra) -> Connection:
    """Solve 2<nabla_x y, z> = <[x,y],z> + <[z,x],y> + <[z,y],x> exactly.

    The Gram matrix is inverted once, so non-orthonormal metrics are
    supported.
    """
    if algebra.metric is None:
        raise ValueError("Levi-Civita connection needs a metric")
    n = algebra.dim
    gram_inv = linalg.inverse(algebra.metric)
    metric = algebra.metric
    half = Rational(1, 2)

    def pairing(row_sign, row, target):
        # <[a,b], e_t> for a sparse bracket row with its sign
        total = ZERO
        for k, c in row.items():
            total += c * metric[k][target]
        return row_sign * total

    columns = {}
    for i in range(n):
        for j in range(n):
            rhs = []
            for z in range(n):
                row_ij, s_ij = algebra._pair(i, j)
                row_zi, s_zi = algebra._pair(z, i)
                row_zj, s_zj = algebra._pair(z, j)
                value = (pairing(s_ij, row_ij, z)
                         + pairing(s_zi, row_zi, j)
                         + pairing(s_zj, row_zj, i))
                rhs.append(half * value)
            coords = {}
            for k in range(n):
                value = ZERO
                for z in range(n):
                    if rhs[z] != 0:
                        value += gram_inv[k][z] * rhs[z]
                if value != 0:
                    coords[k] = value
            if coords:
                columns[(i, j)] = coords
    return Connection(algebra, columns)


def curvature(connection: Connection):
    """Dense n^4 curvature tensor R(e_i, e_j) e_k in coordinates."""
    n = connection.algebra.dim
    zero_row = (ZERO,) * n
    tensor = [[[zero_row] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                vec = _curvature_vector(connection, i, j, k)
                if not vec:
                    continue
                row = tuple(vec.get(t, ZERO) for t in range(n))
                tensor[i][j][k] = row
                tensor[j][i][k] = tuple(-x for x in row)
    return tuple(tuple(tuple(rows) for rows in plane) for plane in tensor)


def _curvature_vector(connection: Connection, i: int, j: int, k: int) -> dict:
    algebra = connection.algebra
    out: dict[int, Rational] = {}
    row_ij, sign = algebra._pair(i, j)
    for t, c in row_ij.items():
        for target, v in connection.column(t, k).items():
            value = out.get(target, ZERO) + sign * c * v
            if value == 0:
                out.pop(target, None)
            else:
                out[target] = value
    for first, second, flip in ((i, j, -1), (j, i, 1)):
        inner = connection.column(second, k)
        outer = connection.apply_basis(first, inner)
        for target, v in outer.items():
            value = out.get(target, ZERO) + flip * v
            if value == 0:
                out.pop(target, None)
            else:
                out[target] = value
    return out


def flatness_witness(connection: Connection):
    """None when the curvature vanishes identically, else the first
    (i, j, k, R(e_i,e_j)e_k) with a nonzero value."""
    n = connection.algebra.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                vec = _curvature_vector(connection, i, j, k)
                if vec:
                    return i, j, k, _raw(1, n, {(t,): c for t, c in vec.items()})
    return None


def is_flat(algebra) -> bool:
    return flatness_witness(levi_civita(algebra)) is None


@dataclass(frozen=True)
class MilnorReport:
    ok: bool
    violations: tuple[str, ...] = ()


def milnor_verify(algebra, s_part, z_part, d_part) -> MilnorReport:
    """Check a claimed orthogonal split by basis index sets.

    Required: the spans are pairwise orthogonal, every z is central, the
    s-part is abelian, the d-part is exactly the derived ideal and is
    abelian and even-dimensional, and ad_x = nabla_x on the s- and z-parts.
    """
    n = algebra.dim
    s_part, z_part, d_part = (tuple(sorted(p)) for p in (s_part, z_part, d_part))
    merged = sorted(s_part + z_part + d_part)
    if merged != list(range(n)):
        raise ValueError("index sets must partition the basis")
    if algebra.metric is None:
        raise ValueError("split verification needs a metric")

    violations: list[str] = []
    metric = algebra.metric

    def orthogonal(left, right, label):
        for a in left:
            for b in right:
                if metric[a][b] != 0:
                    violations.append(
                        f"{label}: basis vectors {a} and {b} are not orthogonal")
                    return

    orthogonal(s_part, z_part, "s-part vs z-part")
    orthogonal(s_part, d_part, "s-part vs d-part")
    orthogonal(z_part, d_part, "z-part vs d-part")

    for z in z_part:
        if any(algebra._pair(z, j)[0] for j in range(n)):
            violations.append(f"z-part vector {z} is not central")
            break

    for a in s_part:
        for b in s_part:
            if a < b and algebra._pair(a, b)[0]:
                violations.append(f"s-part is not abelian: [{a}, {b}] != 0")
                break

    for a in d_part:
        for b in d_part:
            if a < b and algebra._pair(a, b)[0]:
                violations.append(f"d-part is not abelian: [{a}, {b}] != 0")
                break

    if len(d_part) % 2:
        violations.append("d-part has odd dimension")

    d_set = set(d_part)
    rows = []
    outside = False
    for (i, j), row in algebra._table.items():
        if any(k not in d_set for k in row):
            violations.append(
                f"derived ideal leaves the d-part: [{i}, {j}] has support outside")
            outside = True
            break
        rows.append([row.get(k, ZERO) for k in range(n)])
    if not outside and linalg.rank(rows) != len(d_part):
        violations.append("d-part strictly contains the derived ideal")

    connection = levi_civita(algebra)
    for x in s_part + z_part:
        for j in range(n):
            row, sign = algebra._pair(x, j)
            ad_col = {k: sign * c for k, c in row.items()}
            if ad_col != connection.column(x, j):
                violations.append(
                    f"ad and nabla differ in direction {x} on basis vector {j}")
                break
        else:
            continue
        break

    return MilnorReport(not violations, tuple(violations))
