"""Randomized instance generation and the theorem regression suite.

Every instance is reproducible from its 64-bit seed.  The suite binds the
main-theorem claims and the closed-form/generic oracle equivalences to
executable checks; any failure is recorded with the seed and the full
instance document so it replays standalone.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from . import instancefile
from .bialgebra import (StructuredBivector, closed_form_cocycle, cybe_check,
                        dualize, from_multivector, is_metaflat,
                        metaflat_normal_form, schouten_square_structured,
                        to_multivector)
from .flatmodel import FlatModel, classify_degeneracy, column_pair_sign, expand
from .geometry import flatness_witness, levi_civita, milnor_verify
from .lie import cocycle_check, coboundary, dual_bracket, dual_cocycle, jacobi_check
from .rationals import Rational

MODES = ("any", "degenerate", "nondegenerate")


@dataclass(frozen=True)
class InstanceSpec:
    """Dimensions, degeneracy mode and coefficient bound for one instance."""

    seed: int
    k0: int
    l0: int
    m: int
    mode: str = "any"
    magnitude: int = 5

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.k0 < 1 or self.m < 1 or self.l0 < 0:
            raise ValueError("instance dims need k0 >= 1, m >= 1, l0 >= 0")
        if self.magnitude < 1:
            raise ValueError("magnitude must be >= 1")


def _random_rational(rng: random.Random, magnitude: int, nonzero=False) -> Rational:
    while True:
        value = Rational(rng.randint(-magnitude, magnitude),
                         rng.randint(1, magnitude))
        if value != 0 or not nonzero:
            return value


def gen_flat_model(spec: InstanceSpec) -> FlatModel:
    """A valid flat model in the requested degeneracy class."""
    if spec.mode == "degenerate" and spec.m < 2:
        raise ValueError("degeneracy needs at least two d-planes")
    rng = random.Random(spec.seed)
    for _ in range(1000):
        lam = [[_random_rational(rng, spec.magnitude) for _ in range(spec.m)]
               for _ in range(spec.k0)]
        for j in range(spec.m):
            if all(row[j] == 0 for row in lam):
                lam[rng.randrange(spec.k0)][j] = _random_rational(
                    rng, spec.magnitude, nonzero=True)
        if spec.mode == "degenerate":
            i, j = sorted(rng.sample(range(spec.m), 2))
            sign = rng.choice((1, -1))
            for row in lam:
                row[j] = sign * row[i]
            if all(row[i] == 0 for row in lam):
                lam[rng.randrange(spec.k0)][i] = _random_rational(
                    rng, spec.magnitude, nonzero=True)
                for row in lam:
                    row[j] = sign * row[i]
        model = FlatModel(spec.k0, spec.l0, spec.m,
                          tuple(tuple(row) for row in lam))
        verdict = classify_degeneracy(model).degenerate
        if spec.mode == "any" or verdict == (spec.mode == "degenerate"):
            return model
    raise RuntimeError("could not generate a model in the requested class")


def gen_conforming_bivector(model: FlatModel, spec: InstanceSpec) -> StructuredBivector:
    """A bivector that is metaflat by construction.

    The a, b, f blocks and the diagonal n entries are free; coupled d-plane
    pairs get their m/n/p coefficients tied by the pair sign, separated
    pairs stay empty.
    """
    rng = random.Random(spec.seed ^ 0x9E3779B97F4A7C15)
    mag = spec.magnitude
    blocks: dict[str, dict] = {"a": {}, "b": {}, "f": {}, "m": {}, "n": {}, "p": {}}
    for i in range(model.k0):
        for j in range(i + 1, model.k0):
            blocks["a"][(i, j)] = _random_rational(rng, mag)
        for j in range(model.l0):
            blocks["b"][(i, j)] = _random_rational(rng, mag)
    for i in range(model.l0):
        for j in range(i + 1, model.l0):
            blocks["f"][(i, j)] = _random_rational(rng, mag)
    for i in range(model.m):
        blocks["n"][(i, i)] = _random_rational(rng, mag)
    from .flatmodel import column_pair_sign
    for i in range(model.m):
        for j in range(i + 1, model.m):
            sign = column_pair_sign(model, i, j)
            if sign is None:
                continue
            m_ij = _random_rational(rng, mag)
            n_ij = _random_rational(rng, mag)
            blocks["m"][(i, j)] = m_ij
            blocks["p"][(i, j)] = sign * m_ij
            blocks["n"][(i, j)] = n_ij
            blocks["n"][(j, i)] = sign * n_ij
    r = StructuredBivector(model.k0, model.l0, model.m, blocks)
    report = is_metaflat(model, closed_form_cocycle(model, r))
    if not report.ok:
        raise RuntimeError("generator produced a non-metaflat bivector")
    return r


@dataclass(frozen=True)
class FailureRecord:
    seed: int
    dims: tuple[int, int, int]
    mode: str
    failed_checks: tuple[str, ...]
    instance: dict


@dataclass
class SuiteSummary:
    instances: int = 0
    failures: list = field(default_factory=list)
    master_seed: int = 0
    dims: tuple[int, int, int] = (0, 0, 0)
    mode: str = "any"

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        lines = [
            f"instances={self.instances} failures={len(self.failures)} "
            f"mode={self.mode} dims<=({self.dims[0]},{self.dims[1]},{self.dims[2]}) "
            f"seed={self.master_seed}"
        ]
        for rec in self.failures:
            lines.append(
                f"FAIL seed={rec.seed} dims=({rec.dims[0]},{rec.dims[1]},{rec.dims[2]}) "
                f"mode={rec.mode} checks={','.join(rec.failed_checks)}")
        lines.append("PASS" if self.ok else "FAIL")
        return "\n".join(lines)

    def to_json(self) -> str:
        doc = {
            "instances": self.instances,
            "master_seed": self.master_seed,
            "dims": list(self.dims),
            "mode": self.mode,
            "failures": [
                {
                    "seed": rec.seed,
                    "dims": list(rec.dims),
                    "mode": rec.mode,
                    "failed_checks": list(rec.failed_checks),
                    "instance": rec.instance,
                }
                for rec in self.failures
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def check_instance(model: FlatModel, r: StructuredBivector, corrupt=False) -> list[str]:
    """All per-instance checks; returns the names of failing ones."""
    failed = []
    algebra = expand(model)
    rv = to_multivector(model, r)

    if not from_multivector(model, rv).blocks == r.blocks:
        failed.append("block-roundtrip")

    from .lie import jacobi_check
    if not jacobi_check(algebra).ok:
        failed.append("jacobi")
    if not algebra.is_unimodular():
        failed.append("unimodular")
    connection = levi_civita(algebra)
    if flatness_witness(connection) is not None:
        failed.append("flat")
    if not milnor_verify(algebra, *model.split()).ok:
        failed.append("milnor-split")

    xi = coboundary(algebra, rv)
    if not cocycle_check(xi).ok:
        failed.append("coboundary-is-cocycle")

    closed = closed_form_cocycle(model, r)
    if corrupt:
        closed = _corrupted_cocycle(model, r)
    if closed.images != xi.images:
        failed.append("closed-form-vs-generic")

    structured_square = schouten_square_structured(model, r)
    generic_square = algebra.schouten(rv, rv)
    if structured_square != generic_square:
        failed.append("schouten-structured-vs-generic")

    meta = is_metaflat(model, xi)
    form = metaflat_normal_form(model, r)
    if meta.ok != form.conforming:
        failed.append("metaflat-vs-normal-form")
    if not meta.ok:
        failed.append("conforming-bivector-not-metaflat")
        return failed

    cybe = cybe_check(algebra, rv)
    if not cybe.zero:
        failed.append("cybe")
    dual = dualize(model, r)
    if not dual.flat:
        failed.append("dual-flat")
    if not dual.metaflat:
        failed.append("dual-metaflat")
    if dual.algebra.structure_constants() != dual_bracket(xi).structure_constants():
        failed.append("dual-table-vs-transpose")
    if dual_cocycle(algebra, dual.algebra).images != dual.cocycle.images:
        failed.append("dual-cocycle-vs-definition")
    return failed


def _corrupted_cocycle(model: FlatModel, r: StructuredBivector):
    """Shadow implementation with a deliberate sign flip, used by the
    self-test mode to prove the harness notices broken closed forms."""
    good = closed_form_cocycle(model, r)
    images = list(good.images)
    for k in range(model.m):
        images[model.d_odd(k)] = -images[model.d_odd(k)]
    return good.__class__(good.algebra, images, generator=good.generator)


def run_suite(count: int, dims=(3, 2, 3), mode="any", seed=0,
              magnitude: int = 5, corrupt=False) -> SuiteSummary:
    """Run ``count`` seeded instances; zero failures is the expected state.

    ``dims`` bounds (k0, l0, m) from above; each instance draws its exact
    dimensions.  ``corrupt`` switches in the deliberately broken shadow
    closed form (harness self-validation).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    k0_max, l0_max, m_max = dims
    master = random.Random(seed)
    summary = SuiteSummary(master_seed=seed, dims=(k0_max, l0_max, m_max), mode=mode)
    for _ in range(count):
        inst_seed = master.getrandbits(63)
        rng = random.Random(inst_seed)
        m_min = 2 if mode == "degenerate" else 1
        spec = InstanceSpec(
            seed=inst_seed,
            k0=rng.randint(1, max(1, k0_max)),
            l0=rng.randint(0, max(0, l0_max)),
            m=rng.randint(m_min, max(m_min, m_max)),
            mode=mode if mode != "any" else rng.choice(MODES[1:] if rng.random() < 0.5 else ("any",)),
            magnitude=magnitude,
        )
        model = gen_flat_model(spec)
        bivector = gen_conforming_bivector(model, spec)
        failed = check_instance(model, bivector, corrupt=corrupt)
        summary.instances += 1
        if failed:
            summary.failures.append(FailureRecord(
                seed=inst_seed,
                dims=(spec.k0, spec.l0, spec.m),
                mode=spec.mode,
                failed_checks=tuple(failed),
                instance=instancefile.serialize(model, bivector),
            ))
    return summary
