"""Structured bivectors on flat models: closed-form coboundaries,
metaflatness, the classical Yang-Baxter check and full dualization.

A bivector on a flat model decomposes into ten blocks named a, b, c, e, f,
g, h, m, n, p after the basis parts they pair (s^s, s^z, s^d_odd, s^d_even,
z^z, z^d_odd, z^d_even, d_odd^d_odd, d_odd^d_even, d_even^d_even).  The
n-block is stored for all ordered index pairs including the diagonal; the
conversion to the canonical wedge basis is the one place where its
orientation is sign-normalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import linalg
from .exterior import Multivector, wedge
from .flatmodel import FlatModel, column_pair_sign, expand
from .geometry import flatness_witness, levi_civita
from .lie import Cocycle, LieAlgebra, coboundary, identity_metric
from .rationals import ZERO, Rational, as_rational

BLOCK_NAMES = ("a", "b", "c", "e", "f", "g", "h", "m", "n", "p")

#: blocks indexed i<j within one part
_TRIANGULAR = {"a", "f", "m", "p"}


def _block_ranges(k0: int, l0: int, m: int):
    return {
        "a": (k0, k0), "b": (k0, l0), "c": (k0, m), "e": (k0, m),
        "f": (l0, l0), "g": (l0, m), "h": (l0, m),
        "m": (m, m), "n": (m, m), "p": (m, m),
    }


@dataclass(frozen=True)
class StructuredBivector:
    """Block coefficients of a bivector on a flat model (0-based indices)."""

    k0: int
    l0: int
    m: int
    blocks: dict

    def __post_init__(self):
        ranges = _block_ranges(self.k0, self.l0, self.m)
        cleaned = {}
        for name, entries in self.blocks.items():
            if name not in BLOCK_NAMES:
                raise ValueError(f"unknown block {name!r}")
            rows, cols = ranges[name]
            kept = {}
            for (i, j), value in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ValueError(f"block {name} index ({i}, {j}) out of range")
                if name in _TRIANGULAR and not i < j:
                    raise ValueError(f"block {name} requires i < j, got ({i}, {j})")
                value = as_rational(value)
                if value != 0:
                    kept[(i, j)] = value
            if kept:
                cleaned[name] = kept
        object.__setattr__(self, "blocks", cleaned)

    def block(self, name: str) -> dict:
        return self.blocks.get(name, {})

    def entry(self, name: str, i: int, j: int) -> Rational:
        return self.blocks.get(name, {}).get((i, j), ZERO)

    def is_zero(self) -> bool:
        return not self.blocks


def structured(model: FlatModel, **blocks) -> StructuredBivector:
    """Convenience constructor: ``structured(model, n={(0, 0): 1})``."""
    return StructuredBivector(model.k0, model.l0, model.m, blocks)


def _check_dims(model: FlatModel, r: StructuredBivector):
    if (model.k0, model.l0, model.m) != (r.k0, r.l0, r.m):
        raise ValueError("bivector block sizes do not match the model")


def to_multivector(model: FlatModel, r: StructuredBivector) -> Multivector:
    """Canonical wedge-basis form of the block data."""
    _check_dims(model, r)
    terms = {}

    def put(u, v, value):
        if u < v:
            terms[(u, v)] = terms.get((u, v), ZERO) + value
        else:
            terms[(v, u)] = terms.get((v, u), ZERO) - value

    for (i, j), v in r.block("a").items():
        put(model.s_index(i), model.s_index(j), v)
    for (i, j), v in r.block("b").items():
        put(model.s_index(i), model.z_index(j), v)
    for (i, j), v in r.block("c").items():
        put(model.s_index(i), model.d_odd(j), v)
    for (i, j), v in r.block("e").items():
        put(model.s_index(i), model.d_even(j), v)
    for (i, j), v in r.block("f").items():
        put(model.z_index(i), model.z_index(j), v)
    for (i, j), v in r.block("g").items():
        put(model.z_index(i), model.d_odd(j), v)
    for (i, j), v in r.block("h").items():
        put(model.z_index(i), model.d_even(j), v)
    for (i, j), v in r.block("m").items():
        put(model.d_odd(i), model.d_odd(j), v)
    for (i, j), v in r.block("n").items():
        put(model.d_odd(i), model.d_even(j), v)
    for (i, j), v in r.block("p").items():
        put(model.d_even(i), model.d_even(j), v)
    return Multivector(2, model.dim, terms)


def from_multivector(model: FlatModel, mv: Multivector) -> StructuredBivector:
    """Inverse of :func:`to_multivector`; exact round-trip."""
    if mv.degree != 2 or mv.dim != model.dim:
        raise ValueError("expected a bivector of the model's dimension")
    base = model.k0 + model.l0
    blocks: dict[str, dict] = {name: {} for name in BLOCK_NAMES}

    def classify(t):
        if t < model.k0:
            return "s", t
        if t < base:
            return "z", t - model.k0
        offset = t - base
        return ("do", offset // 2) if offset % 2 == 0 else ("de", offset // 2)

    table = {
        ("s", "s"): "a", ("s", "z"): "b", ("s", "do"): "c", ("s", "de"): "e",
        ("z", "z"): "f", ("z", "do"): "g", ("z", "de"): "h",
        ("do", "do"): "m", ("do", "de"): "n", ("de", "de"): "p",
    }
    for (u, v), value in mv.terms.items():
        (part_u, i), (part_v, j) = classify(u), classify(v)
        if (part_u, part_v) == ("de", "do"):
            # canonical order put d_even before a later d_odd; flip back
            blocks["n"][(j, i)] = -value
            continue
        name = table[(part_u, part_v)]
        blocks[name][(i, j)] = value
    return StructuredBivector(model.k0, model.l0, model.m,
                              {k: v for k, v in blocks.items() if v})


def phi_vector(model: FlatModel, r: StructuredBivector, k: int) -> Multivector:
    """The degree-1 vector whose wedge with d_{2k+2} gives the coboundary
    image of d_{2k+1} (closed form; includes the c- and e-block parts)."""
    _check_dims(model, r)
    if not 0 <= k < model.m:
        raise ValueError("pair index out of range")
    lam = model.lam
    coords: dict[int, Rational] = {}

    def add(index, value):
        if value == 0:
            return
        total = coords.get(index, ZERO) + value
        if total == 0:
            coords.pop(index, None)
        else:
            coords[index] = total

    for (i, j), v in r.block("a").items():
        add(model.s_index(j), lam[i][k] * v)
        add(model.s_index(i), -lam[j][k] * v)
    for (i, j), v in r.block("b").items():
        add(model.z_index(j), lam[i][k] * v)
    for (i, j), v in r.block("c").items():
        add(model.d_odd(j), lam[i][k] * v)
    for (i, j), v in r.block("e").items():
        add(model.d_even(j), lam[i][k] * v)
    return Multivector(1, model.dim, {(t,): c for t, c in coords.items()})


def cocycle_on_s(model: FlatModel, r: StructuredBivector, k: int) -> Multivector:
    """Closed form of the coboundary image of s_{k+1}."""
    _check_dims(model, r)
    if not 0 <= k < model.k0:
        raise ValueError("rotation-generator index out of range")
    lam = model.lam
    terms: dict[tuple[int, int], Rational] = {}

    def put(u, v, value):
        if value == 0 or u == v:
            return
        key = (u, v) if u < v else (v, u)
        if u > v:
            value = -value
        total = terms.get(key, ZERO) + value
        if total == 0:
            terms.pop(key, None)
        else:
            terms[key] = total

    for (i, j), v in r.block("c").items():
        put(model.s_index(i), model.d_even(j), lam[k][j] * v)
    for (i, j), v in r.block("e").items():
        put(model.s_index(i), model.d_odd(j), -lam[k][j] * v)
    for (i, j), v in r.block("g").items():
        put(model.z_index(i), model.d_even(j), lam[k][j] * v)
    for (i, j), v in r.block("h").items():
        put(model.z_index(i), model.d_odd(j), -lam[k][j] * v)
    for (i, j), v in r.block("m").items():
        put(model.d_odd(i), model.d_even(j), lam[k][j] * v)
        put(model.d_even(i), model.d_odd(j), lam[k][i] * v)
    for (i, j), v in r.block("p").items():
        put(model.d_odd(i), model.d_even(j), -lam[k][i] * v)
        put(model.d_even(i), model.d_odd(j), -lam[k][j] * v)
    for (i, j), v in r.block("n").items():
        put(model.d_even(i), model.d_even(j), lam[k][i] * v)
        put(model.d_odd(i), model.d_odd(j), -lam[k][j] * v)
    return Multivector(2, model.dim, terms)


def cocycle_on_d(model: FlatModel, r: StructuredBivector, k: int):
    """Closed-form coboundary images of the d-plane pair (d_{2k+1}, d_{2k+2})."""
    phi = phi_vector(model, r, k)
    n = model.dim
    odd = Multivector.basis(model.d_odd(k), n)
    even = Multivector.basis(model.d_even(k), n)
    return wedge(phi, even), wedge(odd, phi)


def closed_form_cocycle(model: FlatModel, r: StructuredBivector) -> Cocycle:
    """The full coboundary assembled from the closed forms (the generic
    adjoint action is the independent oracle for this)."""
    algebra = expand(model)
    n = model.dim
    zero = Multivector.zero(2, n)
    images = [zero] * n
    for k in range(model.k0):
        images[model.s_index(k)] = cocycle_on_s(model, r, k)
    for k in range(model.m):
        on_odd, on_even = cocycle_on_d(model, r, k)
        images[model.d_odd(k)] = on_odd
        images[model.d_even(k)] = on_even
    return Cocycle(algebra, images, generator=to_multivector(model, r))


@dataclass(frozen=True)
class MetaflatReport:
    ok: bool
    #: (x, y, z) s-part indices and the nonzero value of ad_x ad_y xi(z)
    witness: tuple[int, int, int, Multivector] | None = None


def is_metaflat(model: FlatModel, xi: Cocycle) -> MetaflatReport:
    """Exhaustive double-adjoint test over the declared s-part.

    Mixed pairs x != y are included: the condition quantifies over all of
    the s-part, not only the diagonal.
    """
    if xi.algebra.dim != model.dim:
        raise ValueError("cocycle lives on a different dimension")
    n = model.dim
    s_basis = [Multivector.basis(model.s_index(i), n) for i in range(model.k0)]
    algebra = xi.algebra
    for c in range(model.k0):
        image = xi.image(model.s_index(c))
        if image.is_zero():
            continue
        for b in range(model.k0):
            inner = algebra.ad_multivector(s_basis[b], image)
            if inner.is_zero():
                continue
            for a in range(model.k0):
                value = algebra.ad_multivector(s_basis[a], inner)
                if not value.is_zero():
                    return MetaflatReport(False, (a, b, c, value))
    return MetaflatReport(True)


@dataclass(frozen=True)
class NormalFormReport:
    conforming: bool
    violations: tuple[str, ...] = ()


def metaflat_normal_form(model: FlatModel, r: StructuredBivector) -> NormalFormReport:
    """Decide whether the blocks have the restricted shape equivalent to
    metaflatness of the coboundary.

    The c, e, g, h blocks must vanish.  For each d-plane pair the rule
    depends on whether its lambda columns agree up to one global sign:
    coupled pairs need p_ij = sign * m_ij and n_ji = sign * n_ij, separated
    pairs must carry no coefficients at all.  Diagonal n entries and the
    a, b, f blocks are always free.
    """
    _check_dims(model, r)
    violations = []
    for name in ("c", "e", "g", "h"):
        for (i, j) in sorted(r.block(name)):
            violations.append(f"block {name}[{i},{j}] must vanish")
    for i, j in combinations(range(model.m), 2):
        sign = column_pair_sign(model, i, j)
        m_ij = r.entry("m", i, j)
        p_ij = r.entry("p", i, j)
        n_ij = r.entry("n", i, j)
        n_ji = r.entry("n", j, i)
        if sign is None:
            for name, value in (("m", m_ij), ("p", p_ij), ("n", n_ij)):
                if value != 0:
                    violations.append(
                        f"block {name}[{i},{j}] must vanish (separated pair)")
            if n_ji != 0:
                violations.append(f"block n[{j},{i}] must vanish (separated pair)")
        else:
            if p_ij != sign * m_ij:
                violations.append(
                    f"coupled pair ({i},{j}): p[{i},{j}] must equal "
                    f"{'+' if sign > 0 else '-'}m[{i},{j}]")
            if n_ji != sign * n_ij:
                violations.append(
                    f"coupled pair ({i},{j}): n[{j},{i}] must equal "
                    f"{'+' if sign > 0 else '-'}n[{i},{j}]")
    return NormalFormReport(not violations, tuple(violations))


@dataclass(frozen=True)
class CybeReport:
    zero: bool
    bracket: Multivector


def cybe_check(algebra: LieAlgebra, r: Multivector) -> CybeReport:
    """Exact Schouten square; zero means r solves the classical
    Yang-Baxter equation."""
    value = algebra.schouten(r, r)
    return CybeReport(value.is_zero(), value)


def schouten_square_structured(model: FlatModel, r: StructuredBivector) -> Multivector:
    """[r, r] on a flat model through the block expansion.

    Only s^s and s^z terms bracket nontrivially against the d-blocks, which
    collapses the Schouten square to six double sums.  This is an
    independent route kept in lockstep with the generic expansion by the
    test suite.
    """
    _check_dims(model, r)
    n = model.dim
    lam = model.lam
    half: dict[tuple, Rational] = {}

    def gamma(i, j, col):
        # lambda_{j,col} s_i - lambda_{i,col} s_j as sparse coordinates
        out = {}
        if lam[j][col] != 0:
            out[model.s_index(i)] = lam[j][col]
        if lam[i][col] != 0:
            out[model.s_index(j)] = out.get(model.s_index(j), ZERO) - lam[i][col]
        return out

    def add_triple(head_coords, u, v, factor):
        if u == v or factor == 0:
            return
        pair_sign = 1
        if u > v:
            u, v, pair_sign = v, u, -1
        for t, c in head_coords.items():
            # t is an s- or z-index, always below the d-range
            key = (t, u, v)
            value = half.get(key, ZERO) + factor * pair_sign * c
            if value == 0:
                half.pop(key, None)
            else:
                half[key] = value

    a_block = r.block("a")
    b_block = r.block("b")
    m_block = r.block("m")
    n_block = r.block("n")
    p_block = r.block("p")

    for (i, j), av in a_block.items():
        for (k, l), mv in m_block.items():
            g_l, g_k = gamma(i, j, l), gamma(i, j, k)
            add_triple(g_l, model.d_odd(k), model.d_even(l), av * mv)
            add_triple(g_k, model.d_odd(l), model.d_even(k), -av * mv)
        for (k, l), nv in n_block.items():
            g_l, g_k = gamma(i, j, l), gamma(i, j, k)
            add_triple(g_l, model.d_odd(k), model.d_odd(l), -av * nv)
            add_triple(g_k, model.d_even(k), model.d_even(l), av * nv)
        for (k, l), pv in p_block.items():
            g_l, g_k = gamma(i, j, l), gamma(i, j, k)
            add_triple(g_k, model.d_odd(k), model.d_even(l), -av * pv)
            add_triple(g_l, model.d_odd(l), model.d_even(k), av * pv)
    for (i, j), bv in b_block.items():
        z = model.z_index(j)
        for (k, l), mv in m_block.items():
            add_triple({z: -lam[i][l]}, model.d_odd(k), model.d_even(l), bv * mv)
            add_triple({z: lam[i][k]}, model.d_odd(l), model.d_even(k), bv * mv)
        for (k, l), nv in n_block.items():
            add_triple({z: lam[i][l]}, model.d_odd(k), model.d_odd(l), bv * nv)
            add_triple({z: -lam[i][k]}, model.d_even(k), model.d_even(l), bv * nv)
        for (k, l), pv in p_block.items():
            add_triple({z: lam[i][k]}, model.d_odd(k), model.d_even(l), bv * pv)
            add_triple({z: -lam[i][l]}, model.d_odd(l), model.d_even(k), bv * pv)

    return Multivector(3, n, half) * 2


@dataclass(frozen=True)
class DualBialgebra:
    """The dual flat algebra with its rotation-speed data and dual cocycle.

    ``phi`` holds, per d-plane, the vector controlling the dual brackets
    (supported on the s- and z-coordinates); ``psi`` the vectors defining
    the dual cocycle images.
    """

    algebra: LieAlgebra
    phi: tuple
    psi: tuple
    cocycle: Cocycle
    flat: bool
    metaflat: bool

    def is_abelian(self) -> bool:
        return not self.algebra.structure_constants()


def dualize(model: FlatModel, r: StructuredBivector) -> DualBialgebra:
    """Dual bialgebra of the coboundary structure defined by ``r``.

    Refuses non-conforming input: outside the metaflat hypothesis the dual
    bracket table is not a Lie bracket in general.
    """
    form = metaflat_normal_form(model, r)
    if not form.conforming:
        raise ValueError("bivector is not metaflat: " + "; ".join(form.violations))
    n = model.dim
    phi = tuple(phi_vector(model, r, k) for k in range(model.m))

    brackets: dict[tuple[int, int], dict[int, Rational]] = {}
    for j, vec in enumerate(phi):
        odd, even = model.d_odd(j), model.d_even(j)
        for (t,), value in vec.terms.items():
            brackets[(t, odd)] = {even: -value}
            brackets[(t, even)] = {odd: value}
    dual = LieAlgebra(n, brackets, identity_metric(n))

    psi = tuple(
        Multivector(1, n, {(model.s_index(i),): model.lam[i][k]
                           for i in range(model.k0) if model.lam[i][k] != 0})
        for k in range(model.m))
    zero = Multivector.zero(2, n)
    images = [zero] * n
    for k in range(model.m):
        odd = Multivector.basis(model.d_odd(k), n)
        even = Multivector.basis(model.d_even(k), n)
        images[model.d_odd(k)] = -wedge(psi[k], even)
        images[model.d_even(k)] = wedge(psi[k], odd)
    xi_star = Cocycle(dual, images)

    flat = flatness_witness(levi_civita(dual)) is None
    metaflat = _metaflat_on_canonical_split(dual, xi_star, phi, model)
    return DualBialgebra(dual, phi, psi, xi_star, flat, metaflat)


def _metaflat_on_canonical_split(dual: LieAlgebra, xi_star: Cocycle,
                                 phi, model: FlatModel) -> bool:
    """Check the double-adjoint condition over the dual's own abelian
    complement, which is spanned by the (independent) phi vectors."""
    base = model.k0 + model.l0
    rows = [[vec.coefficient((t,)) for t in range(base)] for vec in phi]
    kept = linalg.independent_rows(rows)
    span = [Multivector(1, dual.dim,
                        {(t,): rows[idx][t] for t in range(base) if rows[idx][t] != 0})
            for idx in kept]
    for x in span:
        for y in span:
            for z in span:
                value = dual.ad_multivector(x, dual.ad_multivector(y, xi_star.image_of(z)))
                if not value.is_zero():
                    return False
    return True


@dataclass(frozen=True)
class TheoremReport:
    hypothesis_met: bool
    conforming: bool
    cybe_zero: bool | None = None
    dual_flat: bool | None = None
    dual_metaflat: bool | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        if not self.hypothesis_met:
            return True
        return bool(self.cybe_zero and self.dual_flat and self.dual_metaflat
                    and not self.detail)


def verify_main_theorem(model: FlatModel, r: StructuredBivector) -> TheoremReport:
    """Run the full pipeline: when the coboundary of ``r`` is metaflat, its
    Schouten square must vanish and the dual must be flat and metaflat.

    A metaflat verdict that disagrees with the block normal form is itself
    reported as a violation, since the two are provably equivalent.
    """
    algebra = expand(model)
    rv = to_multivector(model, r)
    xi = coboundary(algebra, rv)
    meta = is_metaflat(model, xi)
    form = metaflat_normal_form(model, r)
    if meta.ok != form.conforming:
        return TheoremReport(meta.ok, form.conforming,
                             detail="metaflat test disagrees with block normal form")
    if not meta.ok:
        return TheoremReport(False, False)
    cybe = cybe_check(algebra, rv)
    dual = dualize(model, r)
    return TheoremReport(True, True, cybe.zero, dual.flat, dual.metaflat)
