"""Free enrichment of a base model over abelian groups or monoids.

Hom-sets of the enriched model are finite formal sums of base morphisms;
composition expands bilinearly through the base composition, which makes
every endomorphism hom-set a unital ring (semiring in nonnegative mode).
Lifting a base morphism to the single-term sum with coefficient 1 embeds
the base model faithfully.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .category import CategoryModel, Morphism, ObjectRef
from .errors import (
    ForeignMorphism,
    NegativeCoefficient,
    ShapeMismatch,
    TermExplosion,
)

COEFF_INTEGERS = "integers"
COEFF_NONNEGATIVE = "nonnegative"

DEFAULT_TERM_CAP = 100_000


@dataclass(frozen=True)
class FormalSum:
    """Finite integer combination of parallel base morphisms.

    terms is canonically sorted with no zero coefficients, so equality
    and hashing are structural.  The hash is precomputed: sums get hashed
    on every membership memo lookup.
    """

    dom: ObjectRef
    cod: ObjectRef
    terms: tuple[tuple[Morphism, int], ...]
    coefficient_mode: str = COEFF_INTEGERS

    def __post_init__(self):
        object.__setattr__(
            self,
            "_hash",
            hash((self.dom, self.cod, self.terms, self.coefficient_mode)),
        )

    def __hash__(self) -> int:
        return self._hash

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def coefficient(self, m: Morphism) -> int:
        for base, coeff in self.terms:
            if base == m:
                return coeff
        return 0

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{m.payload!r}" for m, c in self.terms) or "0"
        return f"FormalSum({self.dom.id}->{self.cod.id}: {body})"


class EnrichedModel(CategoryModel):
    """A model whose hom-sets carry an abelian group/monoid structure.

    On top of the plain category hooks, subclasses provide the hom
    addition, its neutral element and integer scaling; composition is
    required to be bilinear over them.
    """

    coefficient_mode: str = COEFF_INTEGERS

    def payload_add(self, dom, cod, x, y):
        raise NotImplementedError

    def payload_zero(self, dom, cod):
        raise NotImplementedError

    def payload_scale(self, dom, cod, c: int, x):
        raise NotImplementedError

    # -- morphism-level wrappers -------------------------------------------

    def add(self, x: Morphism, y: Morphism) -> Morphism:
        self.validate(x)
        self.validate(y)
        if (x.dom, x.cod) != (y.dom, y.cod):
            raise ShapeMismatch(
                f"cannot add {self.hom_tag(x.dom, x.cod)} "
                f"to {self.hom_tag(y.dom, y.cod)}"
            )
        return self.morphism(x.dom, x.cod, self.payload_add(x.dom, x.cod, x.payload, y.payload))

    def zero(self, dom: ObjectRef, cod: ObjectRef) -> Morphism:
        return self.morphism(dom, cod, self.payload_zero(dom, cod))

    def scale(self, c: int, m: Morphism) -> Morphism:
        self.validate(m)
        if self.coefficient_mode == COEFF_NONNEGATIVE and c < 0:
            raise NegativeCoefficient(
                f"{self.model_id}: scaling by {c} in nonnegative mode"
            )
        return self.morphism(m.dom, m.cod, self.payload_scale(m.dom, m.cod, c, m.payload))

    def ring_one(self, obj: ObjectRef) -> Morphism:
        """Multiplicative unit of the endomorphism ring Hom(obj, obj)."""
        return self.identity(obj)


class FreeEnrichment(EnrichedModel):
    """Formal-sum model over an arbitrary base model.

    Objects coincide with the base objects; Hom(A, B) is the free abelian
    group (or monoid) on the base hom-set.  A base pair with an empty
    hom-set contributes the trivial group, whose only element is the
    empty sum.
    """

    def __init__(
        self,
        base: CategoryModel,
        coefficient_mode: str = COEFF_INTEGERS,
        term_cap: int = DEFAULT_TERM_CAP,
    ):
        if coefficient_mode not in (COEFF_INTEGERS, COEFF_NONNEGATIVE):
            raise ValueError(f"unknown coefficient mode {coefficient_mode!r}")
        self.base = base
        self.coefficient_mode = coefficient_mode
        self.term_cap = term_cap
        self.model_id = f"T({base.model_id})"
        self.objects = base.objects

    # -- sum construction ----------------------------------------------------

    def _sum_payload(self, dom, cod, weights: dict[Morphism, int]) -> FormalSum:
        kept = {m: c for m, c in weights.items() if c != 0}
        if self.coefficient_mode == COEFF_NONNEGATIVE:
            for m, c in kept.items():
                if c < 0:
                    raise NegativeCoefficient(
                        f"{self.model_id}: coefficient {c} on {m!r}"
                    )
        if len(kept) > self.term_cap:
            raise TermExplosion(
                f"{self.model_id}: {len(kept)} terms exceeds cap {self.term_cap}"
            )
        key = lambda item: self.base.payload_sort_key(dom, cod, item[0].payload)
        terms = tuple(sorted(kept.items(), key=key))
        out = FormalSum(dom, cod, terms, self.coefficient_mode)
        object.__setattr__(out, "_canonical", True)
        return out

    def lift(self, m: Morphism) -> Morphism:
        """Embed a base morphism as the single-term sum with coefficient 1."""
        self.base.validate(m)
        return Morphism(m.dom, m.cod, self._sum_payload(m.dom, m.cod, {m: 1}))

    def unlift(self, m: Morphism) -> Morphism:
        """Partial inverse of lift, defined on single-term unit-coefficient sums."""
        payload = m.payload
        if (
            not isinstance(payload, FormalSum)
            or payload.term_count != 1
            or payload.terms[0][1] != 1
        ):
            raise ForeignMorphism(f"{self.model_id}: {m!r} is not a lifted generator")
        return payload.terms[0][0]

    # -- category hooks --------------------------------------------------------

    def hom_exists(self, dom, cod) -> bool:
        # the free construction never yields an empty hom-set: at worst it
        # is the trivial group on no generators
        return self.base.has_object(dom) and self.base.has_object(cod)

    def payload_compose(self, dom, mid, cod, g_payload, f_payload):
        # terms of canonical sums are already validated, so the double sum
        # runs on raw base payloads and validates each distinct result once
        base = self.base
        raw: dict = {}
        for mg, cg in g_payload.terms:
            for mf, cf in f_payload.terms:
                out = base.payload_compose(dom, mid, cod, mg.payload, mf.payload)
                raw[out] = raw.get(out, 0) + cg * cf
                if len(raw) > self.term_cap:
                    raise TermExplosion(
                        f"{self.model_id}: bilinear expansion exceeds cap {self.term_cap}"
                    )
        weights = {base.morphism(dom, cod, p): c for p, c in raw.items() if c != 0}
        return self._sum_payload(dom, cod, weights)

    def payload_identity(self, obj):
        return self._sum_payload(obj, obj, {self.base.identity(obj): 1})

    def payload_contains(self, dom, cod, payload) -> bool:
        if not isinstance(payload, FormalSum):
            return False
        if payload.dom != dom or payload.cod != cod:
            return False
        if payload.coefficient_mode != self.coefficient_mode:
            return False
        seen = set()
        for m, c in payload.terms:
            if c == 0 or (self.coefficient_mode == COEFF_NONNEGATIVE and c < 0):
                return False
            if m.dom != dom or m.cod != cod or m in seen:
                return False
            seen.add(m)
            try:
                self.base.validate(m)
            except Exception:
                return False
        return True

    def payload_canonical(self, dom, cod, payload):
        if isinstance(payload, dict):
            return self._sum_payload(dom, cod, payload)
        if isinstance(payload, FormalSum):
            if getattr(payload, "_canonical", False):
                return payload
            return self._sum_payload(dom, cod, dict(payload.terms))
        raise ForeignMorphism(f"{self.model_id}: bad payload {payload!r}")

    def payload_sample(self, dom, cod, rng):
        """A short random sum: 1..3 sampled base morphisms, small coefficients."""
        if not self.base.hom_exists(dom, cod):
            return self._sum_payload(dom, cod, {})
        lo, hi = (1, 3) if self.coefficient_mode == COEFF_NONNEGATIVE else (-3, 3)
        weights: dict[Morphism, int] = {}
        for _ in range(rng.randrange(1, 4)):
            m = self.base.sample_hom(dom, cod, rng)
            c = rng.randrange(lo, hi + 1)
            weights[m] = weights.get(m, 0) + c
        return self._sum_payload(dom, cod, weights)

    def payload_sort_key(self, dom, cod, payload):
        return tuple(
            (self.base.payload_sort_key(dom, cod, m.payload), c)
            for m, c in payload.terms
        )

    # -- enriched hooks ----------------------------------------------------------

    def payload_add(self, dom, cod, x, y):
        weights = dict(x.terms)
        for m, c in y.terms:
            weights[m] = weights.get(m, 0) + c
        return self._sum_payload(dom, cod, weights)

    def payload_zero(self, dom, cod):
        return self._sum_payload(dom, cod, {})

    def payload_scale(self, dom, cod, c, x):
        return self._sum_payload(dom, cod, {m: c * k for m, k in x.terms})

    # -- encoding ------------------------------------------------------------------

    def payload_encode(self, dom, cod, payload) -> str:
        pairs = sorted(
            (self.base.payload_encode(dom, cod, m.payload), c)
            for m, c in payload.terms
        )
        return json.dumps([[e, c] for e, c in pairs], separators=(",", ":"))

    def payload_decode(self, dom, cod, text: str):
        pairs = json.loads(text)
        weights: dict[Morphism, int] = {}
        for enc, coeff in pairs:
            m = self.base.decode(dom, cod, enc)
            weights[m] = weights.get(m, 0) + int(coeff)
        return self._sum_payload(dom, cod, weights)

    def hom_cardinality(self, dom, cod) -> int | None:
        if not self.base.hom_exists(dom, cod):
            return 1  # just the zero sum
        return None

    def hom_enumerate(self, dom, cod) -> Iterator | None:
        return None


def enrich(
    base: CategoryModel,
    coefficient_mode: str = COEFF_INTEGERS,
    term_cap: int = DEFAULT_TERM_CAP,
) -> FreeEnrichment:
    """Free abelian-group (or abelian-monoid) enrichment of a base model.

    Enrichments of one base are shared: the construction is pure, so two
    calls with equal settings may return the same instance.
    """
    memo = base.__dict__.setdefault("_enrich_memo", {})
    key = (coefficient_mode, term_cap)
    if key not in memo:
        memo[key] = FreeEnrichment(base, coefficient_mode, term_cap)
    return memo[key]


def lift(m: Morphism, enriched: FreeEnrichment) -> Morphism:
    return enriched.lift(m)


def compose_bilinear(x: Morphism, y: Morphism, enriched: FreeEnrichment) -> Morphism:
    """Composite x.y in the enriched model (y first), expanded bilinearly."""
    return enriched.compose(x, y)
