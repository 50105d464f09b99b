"""The (k0, l0, m, lambda) presentation of flat Lie algebras.

Basis order is fixed as s_1..s_k0, z_1..z_l0, d_1..d_2m.  The only nonzero
brackets rotate the d-planes: [s_i, d_{2j-1}] = lambda_ij d_{2j} and
[s_i, d_{2j}] = -lambda_ij d_{2j-1}.  All indices in this module are
0-based; the 1-based convention of the file format is translated at the
CLI boundary only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import linalg
from .lie import LieAlgebra, identity_metric
from .rationals import ZERO, Rational, as_rational, format_rational


@dataclass(frozen=True)
class FlatModel:
    """Counts of the three blocks plus the k0 x m rotation-speed matrix.

    A zero lambda column would put its d-plane in the center, breaking the
    split, so zero columns are rejected.  Individual zero entries are fine.
    The abelian presentation (k0 = m = 0) is allowed; a nonempty s-part
    with no d-planes is not, since those generators would be central.
    """

    k0: int
    l0: int
    m: int
    lam: tuple

    def __post_init__(self):
        if min(self.k0, self.l0, self.m) < 0:
            raise ValueError("block sizes must be >= 0")
        lam = tuple(tuple(as_rational(x) for x in row) for row in self.lam)
        if len(lam) != self.k0 or any(len(row) != self.m for row in lam):
            raise ValueError(f"lambda must be {self.k0} x {self.m}")
        if self.m > 0:
            if self.k0 == 0:
                raise ValueError("d-planes need at least one rotation generator")
            for j in range(self.m):
                if all(row[j] == 0 for row in lam):
                    raise ValueError(f"lambda column {j} is zero")
        elif self.k0 > 0:
            raise ValueError("rotation generators with no d-planes would be central")
        object.__setattr__(self, "lam", lam)

    @property
    def dim(self) -> int:
        return self.k0 + self.l0 + 2 * self.m

    def s_index(self, i: int) -> int:
        return i

    def z_index(self, j: int) -> int:
        return self.k0 + j

    def d_odd(self, j: int) -> int:
        """Index of d_{2j+1} (the first vector of plane j)."""
        return self.k0 + self.l0 + 2 * j

    def d_even(self, j: int) -> int:
        return self.k0 + self.l0 + 2 * j + 1

    def split(self):
        """The declared (s, z, d) index sets."""
        return (tuple(range(self.k0)),
                tuple(range(self.k0, self.k0 + self.l0)),
                tuple(range(self.k0 + self.l0, self.dim)))

    def basis_names(self) -> tuple[str, ...]:
        return tuple([f"s{i + 1}" for i in range(self.k0)]
                     + [f"z{j + 1}" for j in range(self.l0)]
                     + [f"d{t + 1}" for t in range(2 * self.m)])

    def lambda_strings(self):
        return [[format_rational(x) for x in row] for row in self.lam]


def expand(model: FlatModel) -> LieAlgebra:
    """The model as a Lie algebra, orthonormal in the adapted basis."""
    brackets = {}
    for i in range(model.k0):
        for j in range(model.m):
            rate = model.lam[i][j]
            if rate == 0:
                continue
            odd, even = model.d_odd(j), model.d_even(j)
            brackets[(model.s_index(i), odd)] = {even: rate}
            brackets[(model.s_index(i), even)] = {odd: -rate}
    return LieAlgebra(model.dim, brackets, identity_metric(model.dim))


def column_pair_sign(model: FlatModel, i: int, j: int):
    """+1/-1 when lambda columns i and j agree up to that global sign,
    else None."""
    col_i = [row[i] for row in model.lam]
    col_j = [row[j] for row in model.lam]
    if col_i == col_j:
        return 1
    if col_i == [-x for x in col_j]:
        return -1
    return None


@dataclass(frozen=True)
class DegeneracyReport:
    degenerate: bool
    #: for a degenerate model: (i, j, sign) with column i = sign * column j
    witness: tuple[int, int, int] | None = None
    #: for a nondegenerate model: per-pair certificate vectors v over the
    #: s-coordinates with lambda_i(v)^2 != lambda_j(v)^2
    certificates: dict | None = None


def _column_value(model: FlatModel, vector, j: int) -> Rational:
    total = ZERO
    for k in range(model.k0):
        total += vector[k] * model.lam[k][j]
    return total


def classify_degeneracy(model: FlatModel) -> DegeneracyReport:
    """Degenerate iff two lambda columns agree up to one global sign.

    For nondegenerate models every pair receives a certificate vector: a
    basis vector when one separates the squared entries directly, else the
    sum of two basis vectors picked from a sign conflict.
    """
    certificates = {}
    for i, j in combinations(range(model.m), 2):
        sign = column_pair_sign(model, i, j)
        if sign is not None:
            return DegeneracyReport(True, (i, j, sign))
        certificates[(i, j)] = _separating_vector(model, i, j)
    return DegeneracyReport(False, None, certificates)


def _separating_vector(model: FlatModel, i: int, j: int):
    """A rational vector v with lambda_i(v)^2 != lambda_j(v)^2; exists for
    every non-sign-proportional column pair."""
    for k in range(model.k0):
        if model.lam[k][i] ** 2 != model.lam[k][j] ** 2:
            return tuple(1 if t == k else 0 for t in range(model.k0))
    # Entrywise equal squares but no global sign: combine one +1 row with
    # one -1 row (both nonzero); their sum separates the squares.
    plus = minus = None
    for k in range(model.k0):
        if model.lam[k][i] == 0:
            continue
        if model.lam[k][i] == model.lam[k][j]:
            plus = k
        else:
            minus = k
    assert plus is not None and minus is not None
    return tuple(1 if t in (plus, minus) else 0 for t in range(model.k0))


def check_ndeg_for_basis(model: FlatModel, basis_change) -> bool:
    """Evaluate the separation condition in a transformed s-basis.

    ``basis_change`` rows are the coordinates of the new basis vectors; the
    matrix must be square and invertible.
    """
    rows = [[as_rational(x) for x in row] for row in basis_change]
    if len(rows) != model.k0 or any(len(row) != model.k0 for row in rows):
        raise ValueError(f"basis change must be {model.k0} x {model.k0}")
    if linalg.det(rows) == 0:
        raise ValueError("basis change is singular")
    transformed = [[_column_value(model, row, j) for j in range(model.m)]
                   for row in rows]
    for i, j in combinations(range(model.m), 2):
        if all(row[i] ** 2 == row[j] ** 2 for row in transformed):
            return False
    return True


def find_ndeg_basis(model: FlatModel, rng=None, attempts: int = 50):
    """Search for a basis change satisfying the separation condition.

    Tries the identity, then random invertible matrices, then a
    deterministic one-parameter family.  Returns None only for degenerate
    models, where no basis can work.
    """
    identity = [[1 if a == b else 0 for b in range(model.k0)]
                for a in range(model.k0)]
    if check_ndeg_for_basis(model, identity):
        return identity
    if rng is not None:
        for _ in range(attempts):
            candidate = [[Rational(rng.randint(-5, 5)) for _ in range(model.k0)]
                         for _ in range(model.k0)]
            if linalg.det(candidate) == 0:
                continue
            if check_ndeg_for_basis(model, candidate):
                return candidate
    # First row (1, t, t^2, ...) separates every pair for some small t;
    # the remaining rows keep the matrix invertible.
    for t in range(1, 200):
        first = [Rational(t) ** p for p in range(model.k0)]
        candidate = [first] + [identity[a] for a in range(1, model.k0)]
        if linalg.det(candidate) != 0 and check_ndeg_for_basis(model, candidate):
            return candidate
    return None
