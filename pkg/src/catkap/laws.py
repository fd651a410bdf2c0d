"""Statistical law suites: sampled algebraic checks with witnesses.

Hom-sets at real parameters are astronomically large, so laws are
checked on seeded random composable tuples; any hom chain whose size
fits under the exhaustive limit is checked exhaustively instead.  Every
failure is reported with a concrete witness so a broken model points
straight at its faulty rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .category import CategoryModel, Morphism
from .enrichment import COEFF_NONNEGATIVE, EnrichedModel, FreeEnrichment
from .errors import CatkapError
from .matrices import (
    CommutingFamily,
    EndoMatrix,
    HomMatrix,
    act_left,
    act_right,
    endo_identity,
    mat_add,
    ring_mul,
)

EXHAUSTIVE_LIMIT = 10_000


@dataclass
class CheckResult:
    law: str
    trials: int
    witnesses: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.witnesses


@dataclass
class LawReport:
    model_id: str
    results: list[CheckResult] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def violation_count(self) -> int:
        return sum(len(r.witnesses) for r in self.results)

    def first_witness(self) -> str | None:
        for r in self.results:
            if r.witnesses:
                return f"{r.law}: {r.witnesses[0]}"
        return None

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            status = "ok" if r.ok else f"FAIL ({len(r.witnesses)} witnesses)"
            out.append(f"{self.model_id}: {r.law}: {r.trials} trials: {status}")
            if r.witnesses:
                out.append(f"  witness: {r.witnesses[0]}")
        for d in self.diagnostics:
            out.append(f"{self.model_id}: diagnostic: {d}")
        return out


def _chains(model: CategoryModel, steps: int) -> list[tuple]:
    chains = [(o,) for o in model.objects]
    for _ in range(steps):
        chains = [
            ch + (c,)
            for ch in chains
            for c in model.objects
            if model.hom_exists(ch[-1], c)
        ]
    return chains


def _sample_chain(model, chain, rng) -> list[Morphism]:
    return [
        model.sample_hom(chain[i], chain[i + 1], rng) for i in range(len(chain) - 1)
    ]


def _chain_size(model, chain) -> int | None:
    total = 1
    for i in range(len(chain) - 1):
        card = model.hom_cardinality(chain[i], chain[i + 1])
        if card is None:
            return None
        total *= card
    return total


def check_associativity(
    model: CategoryModel, trials: int, rng, exhaustive_limit: int = EXHAUSTIVE_LIMIT
) -> CheckResult:
    """(h.g).f == h.(g.f) over sampled or exhausted composable triples."""
    result = CheckResult("associativity", 0)
    chains = _chains(model, 3)

    def check(f, g, h):
        result.trials += 1
        lhs = model.compose(model.compose(h, g), f)
        rhs = model.compose(h, model.compose(g, f))
        if lhs != rhs:
            result.witnesses.append(f"h={h!r} g={g!r} f={f!r}: {lhs!r} != {rhs!r}")

    sampled_chains = []
    for chain in chains:
        size = _chain_size(model, chain)
        enums = [model.hom_enumerate(chain[i], chain[i + 1]) for i in range(3)]
        if size is not None and size <= exhaustive_limit and all(e is not None for e in enums):
            spaces = [
                [model.morphism(chain[i], chain[i + 1], p) for p in enums[i]]
                for i in range(3)
            ]
            for f, g, h in itertools.product(*spaces):
                check(f, g, h)
        else:
            sampled_chains.append(chain)
    if sampled_chains:
        per_chain = max(1, trials // len(sampled_chains))
        for chain in sampled_chains:
            for _ in range(per_chain):
                f, g, h = _sample_chain(model, chain, rng)
                check(f, g, h)
    return result


def check_identity_laws(model: CategoryModel, trials: int, rng) -> CheckResult:
    """id.f == f == f.id for sampled morphisms in every nonempty hom-set."""
    result = CheckResult("identity", 0)
    pairs = [
        (d, c) for d in model.objects for c in model.objects if model.hom_exists(d, c)
    ]
    per_pair = max(1, trials // len(pairs))
    for dom, cod in pairs:
        for _ in range(per_pair):
            f = model.sample_hom(dom, cod, rng)
            result.trials += 1
            left = model.compose(model.identity(cod), f)
            right = model.compose(f, model.identity(dom))
            if left != f or right != f:
                result.witnesses.append(f"f={f!r}: id.f={left!r}, f.id={right!r}")
    return result


def check_canonicality(model: CategoryModel, trials: int, rng) -> CheckResult:
    """Compose output is a fixed point of canonicalization."""
    result = CheckResult("canonicality", 0)
    chains = _chains(model, 2)
    per_chain = max(1, trials // len(chains))
    for chain in chains:
        for _ in range(per_chain):
            f, g = _sample_chain(model, chain, rng)
            result.trials += 1
            out = model.compose(g, f)
            canon = model.payload_canonical(out.dom, out.cod, out.payload)
            if canon != out.payload:
                result.witnesses.append(f"{out!r} is not canonically reduced")
    return result


def check_closure(model: CategoryModel, trials: int, rng) -> CheckResult:
    """Compose results always validate as members of the target hom-set."""
    result = CheckResult("closure", 0)
    chains = _chains(model, 2)
    per_chain = max(1, trials // len(chains))
    for chain in chains:
        for _ in range(per_chain):
            f, g = _sample_chain(model, chain, rng)
            result.trials += 1
            try:
                model.validate(model.compose(g, f))
            except CatkapError as exc:
                result.witnesses.append(f"g={g!r} f={f!r}: {exc}")
    return result


def diagnose_degenerate_actions(model: CategoryModel, rng, probes: int = 8) -> list[str]:
    """Flag hom-sets on which the endo action looks constant.

    Constant actions are legal but produce useless protocols, so they
    are a diagnostic rather than an error.
    """
    notes = []
    for dom in model.objects:
        for cod in model.objects:
            if dom == cod or not model.hom_exists(dom, cod):
                continue
            card = model.hom_cardinality(dom, dom)
            if card is not None and card <= 1:
                continue
            g = model.sample_hom(dom, cod, rng)
            outs = {
                model.compose(g, model.sample_endo(dom, rng)).payload
                for _ in range(probes)
            }
            if len(outs) == 1:
                notes.append(
                    f"right action of Hom({dom.id},{dom.id}) on "
                    f"Hom({dom.id},{cod.id}) looks constant over {probes} probes"
                )
    return notes


def check_category_laws(
    model: CategoryModel,
    rng,
    assoc_trials: int = 10_000,
    other_trials: int = 1_000,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> LawReport:
    report = LawReport(model.model_id)
    report.results.append(
        check_associativity(model, assoc_trials, rng, exhaustive_limit)
    )
    report.results.append(check_identity_laws(model, other_trials, rng))
    report.results.append(check_canonicality(model, other_trials, rng))
    report.results.append(check_closure(model, other_trials, rng))
    report.diagnostics.extend(diagnose_degenerate_actions(model, rng))
    return report


# ---------------------------------------------------------------------------
# enriched-model laws
# ---------------------------------------------------------------------------


def check_add_commutes(model: EnrichedModel, trials: int, rng) -> CheckResult:
    result = CheckResult("abelian-add", 0)
    pairs = [
        (d, c) for d in model.objects for c in model.objects if model.hom_exists(d, c)
    ]
    per_pair = max(1, trials // len(pairs))
    for dom, cod in pairs:
        for _ in range(per_pair):
            x = model.sample_hom(dom, cod, rng)
            y = model.sample_hom(dom, cod, rng)
            result.trials += 1
            if model.add(x, y) != model.add(y, x):
                result.witnesses.append(f"x={x!r} y={y!r}")
            z = model.zero(dom, cod)
            if model.add(x, z) != x:
                result.witnesses.append(f"x={x!r}: x + 0 != x")
    return result


def check_bilinearity(model: EnrichedModel, trials: int, rng) -> CheckResult:
    """Composition distributes over hom addition on both sides."""
    result = CheckResult("bilinearity", 0)
    chains = _chains(model, 2)
    per_chain = max(1, trials // len(chains))
    for chain in chains:
        d, m, c = chain
        for _ in range(per_chain):
            y = model.sample_hom(d, m, rng)
            y2 = model.sample_hom(d, m, rng)
            x = model.sample_hom(m, c, rng)
            x2 = model.sample_hom(m, c, rng)
            result.trials += 1
            left = model.compose(model.add(x, x2), y)
            right = model.add(model.compose(x, y), model.compose(x2, y))
            if left != right:
                result.witnesses.append(f"left-linearity: x={x!r} x'={x2!r} y={y!r}")
            left = model.compose(x, model.add(y, y2))
            right = model.add(model.compose(x, y), model.compose(x, y2))
            if left != right:
                result.witnesses.append(f"right-linearity: x={x!r} y={y!r} y'={y2!r}")
            zero_left = model.compose(model.zero(m, c), y)
            if zero_left != model.zero(d, c):
                result.witnesses.append(f"zero absorption failed through y={y!r}")
    return result


def check_ring_laws(model: EnrichedModel, trials: int, rng) -> CheckResult:
    """Endo hom-sets are unital (semi)rings under add and composition."""
    result = CheckResult("endo-ring", 0)
    per_obj = max(1, trials // len(model.objects))
    for obj in model.objects:
        one = model.ring_one(obj)
        for _ in range(per_obj):
            x = model.sample_endo(obj, rng)
            y = model.sample_endo(obj, rng)
            z = model.sample_endo(obj, rng)
            result.trials += 1
            if model.compose(model.compose(x, y), z) != model.compose(x, model.compose(y, z)):
                result.witnesses.append(f"mul associativity: {x!r} {y!r} {z!r}")
            if model.compose(one, x) != x or model.compose(x, one) != x:
                result.witnesses.append(f"unit law: {x!r}")
            lhs = model.compose(x, model.add(y, z))
            rhs = model.add(model.compose(x, y), model.compose(x, z))
            if lhs != rhs:
                result.witnesses.append(f"distributivity: {x!r} {y!r} {z!r}")
    return result


def check_faithfulness(model: FreeEnrichment, trials: int, rng) -> CheckResult:
    """Lifting is injective: lifted sums agree iff the generators do."""
    result = CheckResult("lift-faithful", 0)
    base = model.base
    pairs = [
        (d, c) for d in base.objects for c in base.objects if base.hom_exists(d, c)
    ]
    per_pair = max(1, trials // len(pairs))
    for dom, cod in pairs:
        for _ in range(per_pair):
            f = base.sample_hom(dom, cod, rng)
            g = base.sample_hom(dom, cod, rng)
            result.trials += 1
            if (model.lift(f) == model.lift(g)) != (f == g):
                result.witnesses.append(f"f={f!r} g={g!r}")
    return result


def check_functoriality(model: FreeEnrichment, trials: int, rng) -> CheckResult:
    """Lifted generators compose exactly as they did downstairs."""
    result = CheckResult("lift-functorial", 0)
    base = model.base
    chains = _chains(base, 2)
    per_chain = max(1, trials // len(chains))
    for chain in chains:
        for _ in range(per_chain):
            f, g = _sample_chain(base, chain, rng)
            result.trials += 1
            lifted = model.compose(model.lift(g), model.lift(f))
            direct = model.lift(base.compose(g, f))
            if lifted != direct:
                result.witnesses.append(f"g={g!r} f={f!r}")
    return result


def check_nonnegative_closure(model: EnrichedModel, trials: int, rng) -> CheckResult:
    """Monoid mode never produces a negative coefficient under add/compose."""
    result = CheckResult("nonnegative-closure", 0)
    if model.coefficient_mode != COEFF_NONNEGATIVE:
        return result
    chains = _chains(model, 2)
    per_chain = max(1, trials // len(chains))
    for chain in chains:
        for _ in range(per_chain):
            f, g = _sample_chain(model, chain, rng)
            result.trials += 1
            try:
                model.validate(model.compose(g, f))
                model.validate(model.add(f, f))
            except CatkapError as exc:
                result.witnesses.append(str(exc))
    return result


def check_enriched_laws(model: EnrichedModel, rng, trials: int = 1_000) -> LawReport:
    report = LawReport(model.model_id)
    report.results.append(check_add_commutes(model, trials, rng))
    report.results.append(check_bilinearity(model, trials, rng))
    report.results.append(check_ring_laws(model, trials, rng))
    report.results.append(check_nonnegative_closure(model, trials, rng))
    if isinstance(model, FreeEnrichment):
        report.results.append(check_faithfulness(model, trials, rng))
        report.results.append(check_functoriality(model, trials, rng))
    return report


# ---------------------------------------------------------------------------
# matrix laws
# ---------------------------------------------------------------------------


def random_hom_matrix(model, dom, cod, rows, cols, rng) -> HomMatrix:
    return HomMatrix.build(
        model, dom, cod,
        [[model.sample_hom(dom, cod, rng) for _ in range(cols)] for _ in range(rows)],
    )


def random_endo_matrix(model, obj, size, rng, side=None) -> EndoMatrix:
    return EndoMatrix.build(
        model, obj,
        [[model.sample_endo(obj, rng) for _ in range(size)] for _ in range(size)],
        side=side,
    )


def check_matrix_laws(
    model: EnrichedModel, rng, trials: int = 1_000, dims: tuple[int, int] = (2, 2)
) -> LawReport:
    """Action, module, commutation and sandwich laws at one matrix shape."""
    m, n = dims
    report = LawReport(f"{model.model_id}[{m}x{n}]")
    A = model.object("A")
    B = model.object("B")
    ident_n = endo_identity(model, A, n)
    ident_m = endo_identity(model, B, m)

    act_identity = CheckResult("action-identity", 0)
    mixed_assoc = CheckResult("mixed-associativity", 0)
    module = CheckResult("module-law", 0)
    commute = CheckResult("family-commutation", 0)
    sandwich = CheckResult("sandwich-agreement", 0)

    gen_psi = random_endo_matrix(model, A, n, rng)
    gen_omega = random_endo_matrix(model, B, m, rng)
    lo, hi = (0, 7) if model.coefficient_mode == COEFF_NONNEGATIVE else (-3, 4)
    fam_psi = CommutingFamily(model, A, n, gen_psi, 2, (lo, hi))
    fam_omega = CommutingFamily(model, B, m, gen_omega, 2, (lo, hi))

    for _ in range(trials):
        phi = random_hom_matrix(model, A, B, m, n, rng)
        psi = random_endo_matrix(model, A, n, rng)
        omega = random_endo_matrix(model, B, m, rng)

        act_identity.trials += 1
        if act_right(phi, ident_n) != phi or act_left(ident_m, phi) != phi:
            act_identity.witnesses.append(f"phi={phi.encode()}")

        mixed_assoc.trials += 1
        if act_left(omega, act_right(phi, psi)) != act_right(act_left(omega, phi), psi):
            mixed_assoc.witnesses.append(
                f"omega={omega.encode()} phi={phi.encode()} psi={psi.encode()}"
            )

        module.trials += 1
        psi2 = random_endo_matrix(model, A, n, rng)
        omega2 = random_endo_matrix(model, B, m, rng)
        if act_right(phi, ring_mul(psi, psi2)) != act_right(act_right(phi, psi), psi2):
            module.witnesses.append("right module law failed")
        if act_left(ring_mul(omega, omega2), phi) != act_left(omega, act_left(omega2, phi)):
            module.witnesses.append("left module law failed")

        commute.trials += 1
        s1, s2 = fam_psi.sample(rng), fam_psi.sample(rng)
        if ring_mul(s1, s2) != ring_mul(s2, s1):
            commute.witnesses.append(f"s1={s1.encode()} s2={s2.encode()}")

        sandwich.trials += 1
        psi_a, psi_b = fam_psi.sample(rng), fam_psi.sample(rng)
        omega_a, omega_b = fam_omega.sample(rng), fam_omega.sample(rng)
        k_a = act_left(omega_a, act_right(act_left(omega_b, act_right(phi, psi_b)), psi_a))
        k_b = act_left(omega_b, act_right(act_left(omega_a, act_right(phi, psi_a)), psi_b))
        if k_a != k_b:
            sandwich.witnesses.append(f"phi={phi.encode()}")

    report.results.extend([act_identity, mixed_assoc, module, commute, sandwich])
    return report


def check_matrix_add_laws(model: EnrichedModel, rng, trials: int = 200, size: int = 2) -> CheckResult:
    """Entrywise sum is commutative and compatible with scaling."""
    result = CheckResult("matrix-add", 0)
    A = model.object("A")
    for _ in range(trials):
        x = random_endo_matrix(model, A, size, rng)
        y = random_endo_matrix(model, A, size, rng)
        result.trials += 1
        if mat_add(x, y) != mat_add(y, x):
            result.witnesses.append(f"x={x.encode()} y={y.encode()}")
    return result
