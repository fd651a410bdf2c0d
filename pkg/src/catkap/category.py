"""Core category abstraction: objects, morphisms, pluggable models.

Every protocol in this package runs on top of a :class:`CategoryModel`:
a set of objects, a hom-set descriptor per ordered object pair (possibly
empty), a composition rule and identities.

Composition convention, fixed once here and enforced by dom/cod checks
everywhere: ``compose(g, f)`` means "apply f first".  It is defined
exactly when ``f.cod == g.dom`` and the result runs ``f.dom -> g.cod``.

Morphism payloads are canonicalized eagerly (residues reduced, matrix
entries reduced, coefficientless terms dropped) so equality is plain
structural equality.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterator

from .errors import (
    DecodeError,
    EmptyHom,
    ForeignMorphism,
    NonComposable,
    NoSampler,
    UnknownObject,
)


@dataclass(frozen=True, order=True)
class ObjectRef:
    """An object of a model, identified by a short opaque id."""

    id: str

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(self.id))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"ObjectRef({self.id!r})"


@dataclass(frozen=True)
class Morphism:
    """A typed arrow: domain, codomain and an instantiation-specific payload.

    Hashes are precomputed: morphisms key the hot membership memos."""

    dom: ObjectRef
    cod: ObjectRef
    payload: Any

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.dom, self.cod, self.payload)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def is_endo(self) -> bool:
        return self.dom == self.cod

    def __repr__(self) -> str:
        return f"Morphism({self.dom.id}->{self.cod.id}, {self.payload!r})"


# Validated payloads are memoized per model; membership is pure, so the
# cache only trades memory for repeated arithmetic.
_MEMBER_CACHE_CAP = 1 << 18


class CategoryModel(ABC):
    """Pluggable description of one concrete category.

    Subclasses provide the payload-level rules (composition, identities,
    membership, encodings, samplers); this base class owns the dom/cod
    bookkeeping and canonicalization that make the public operations safe.
    Models are immutable after construction and may be shared freely
    between concurrent sessions (the internal membership memo is a pure
    cache; racing writers at worst recompute).
    """

    model_id: str = "category"
    objects: tuple[ObjectRef, ...] = ()

    # ---- payload hooks, one concrete category each -----------------------

    @abstractmethod
    def hom_exists(self, dom: ObjectRef, cod: ObjectRef) -> bool:
        """Whether Hom(dom, cod) is nonempty."""

    @abstractmethod
    def payload_compose(self, dom, mid, cod, g_payload, f_payload):
        """Payload of g.f for f: dom->mid and g: mid->cod."""

    @abstractmethod
    def payload_identity(self, obj: ObjectRef):
        """Payload of the neutral endomorphism of obj."""

    @abstractmethod
    def payload_contains(self, dom, cod, payload) -> bool:
        """Membership test for a canonical payload in Hom(dom, cod)."""

    @abstractmethod
    def payload_encode(self, dom, cod, payload) -> str:
        """Canonical text encoding used in transcripts."""

    @abstractmethod
    def payload_decode(self, dom, cod, text: str):
        """Inverse of payload_encode; may raise ValueError on bad text."""

    def payload_canonical(self, dom, cod, payload):
        return payload

    def payload_sample(self, dom, cod, rng):
        """Random payload of Hom(dom, cod), or None when no rule exists."""
        return None

    def payload_sort_key(self, dom, cod, payload):
        return payload

    def hom_cardinality(self, dom, cod) -> int | None:
        """Exact size of Hom(dom, cod) when cheap to know, else None."""
        return None

    def hom_enumerate(self, dom, cod) -> Iterator | None:
        """Canonically-ordered payload iterator, or None when infeasible."""
        return None

    # ---- public surface ---------------------------------------------------

    def object(self, oid: str) -> ObjectRef:
        for obj in self.objects:
            if obj.id == oid:
                return obj
        raise UnknownObject(f"{self.model_id}: no object {oid!r}")

    def has_object(self, obj: ObjectRef) -> bool:
        return obj in self.objects

    def hom_tag(self, dom: ObjectRef, cod: ObjectRef) -> str:
        return f"{dom.id}->{cod.id}"

    def _contains_cached(self, dom, cod, payload) -> bool:
        cache = self.__dict__.setdefault("_member_memo", {})
        key = (dom, cod, payload)
        hit = cache.get(key)
        if hit is None:
            hit = self.payload_contains(dom, cod, payload)
            if len(cache) < _MEMBER_CACHE_CAP:
                cache[key] = hit
        return hit

    def morphism(self, dom: ObjectRef, cod: ObjectRef, payload) -> Morphism:
        """Canonicalize and validate a payload into a Morphism.

        Morphisms are immutable, so equal inputs may share one instance."""
        memo = self.__dict__.setdefault("_morphism_memo", {})
        try:
            key = (dom, cod, payload)
            hit = memo.get(key)
            if hit is not None:
                return hit
        except TypeError:  # unhashable raw payload (e.g. a weights dict)
            key = None
        if not self.has_object(dom) or not self.has_object(cod):
            raise ForeignMorphism(
                f"{self.model_id}: objects {dom.id},{cod.id} not registered"
            )
        if not self.hom_exists(dom, cod):
            raise EmptyHom(f"{self.model_id}: Hom({self.hom_tag(dom, cod)}) is empty")
        canon = self.payload_canonical(dom, cod, payload)
        if not self._contains_cached(dom, cod, canon):
            raise ForeignMorphism(
                f"{self.model_id}: {payload!r} not in Hom({self.hom_tag(dom, cod)})"
            )
        built = Morphism(dom, cod, canon)
        if key is not None and len(memo) < _MEMBER_CACHE_CAP:
            memo[key] = built
        return built

    def validate(self, m: Morphism) -> Morphism:
        if not self.has_object(m.dom) or not self.has_object(m.cod):
            raise ForeignMorphism(f"{self.model_id}: unregistered dom/cod on {m!r}")
        if not self.hom_exists(m.dom, m.cod):
            raise EmptyHom(
                f"{self.model_id}: Hom({self.hom_tag(m.dom, m.cod)}) is empty"
            )
        if not self._contains_cached(m.dom, m.cod, m.payload):
            raise ForeignMorphism(f"{self.model_id}: foreign morphism {m!r}")
        return m

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """g.f, i.e. f followed by g.  Requires f.cod == g.dom."""
        self.validate(g)
        self.validate(f)
        if f.cod != g.dom:
            raise NonComposable(
                f"cannot compose {g!r} after {f!r}: {f.cod.id} != {g.dom.id}"
            )
        if not self.hom_exists(f.dom, g.cod):
            raise EmptyHom(
                f"{self.model_id}: no composition rule into "
                f"Hom({self.hom_tag(f.dom, g.cod)})"
            )
        payload = self.payload_compose(f.dom, f.cod, g.cod, g.payload, f.payload)
        return self.morphism(f.dom, g.cod, payload)

    def identity(self, obj: ObjectRef) -> Morphism:
        if not self.has_object(obj):
            raise UnknownObject(f"{self.model_id}: unknown object {obj!r}")
        return self.morphism(obj, obj, self.payload_identity(obj))

    def sample_endo(self, obj: ObjectRef, rng) -> Morphism:
        """Random endomorphism of obj; deterministic for a seeded rng."""
        if not self.has_object(obj):
            raise UnknownObject(f"{self.model_id}: unknown object {obj!r}")
        return self.sample_hom(obj, obj, rng)

    def sample_hom(self, dom: ObjectRef, cod: ObjectRef, rng) -> Morphism:
        if not self.hom_exists(dom, cod):
            raise EmptyHom(f"{self.model_id}: Hom({self.hom_tag(dom, cod)}) is empty")
        payload = self.payload_sample(dom, cod, rng)
        if payload is None:
            raise NoSampler(
                f"{self.model_id}: no sampler for Hom({self.hom_tag(dom, cod)})"
            )
        return self.morphism(dom, cod, payload)

    def encode(self, m: Morphism) -> str:
        self.validate(m)
        return self.payload_encode(m.dom, m.cod, m.payload)

    def decode(self, dom: ObjectRef, cod: ObjectRef, text: str) -> Morphism:
        try:
            payload = self.payload_decode(dom, cod, text)
        except (ValueError, TypeError, KeyError, IndexError) as exc:
            raise DecodeError(
                f"{self.model_id}: bad payload for Hom({self.hom_tag(dom, cod)}): {exc}"
            ) from exc
        try:
            return self.morphism(dom, cod, payload)
        except (ForeignMorphism, EmptyHom) as exc:
            raise DecodeError(str(exc)) from exc


def compose(g: Morphism, f: Morphism, model: CategoryModel) -> Morphism:
    return model.compose(g, f)


def identity(obj: ObjectRef, model: CategoryModel) -> Morphism:
    return model.identity(obj)


def sample_endo(obj: ObjectRef, model: CategoryModel, rng) -> Morphism:
    return model.sample_endo(obj, rng)
