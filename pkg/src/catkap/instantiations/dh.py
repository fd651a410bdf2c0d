"""Two-object model of exponentiation in a cyclic subgroup of Z_p*.

Objects A and B; arrows A->B carry elements of the subgroup generated by
g, endomorphisms carry exponent residues.  Because g has public order s,
the exponent monoid is represented as residues mod s under
multiplication, which keeps payloads bounded and equality canonical.
Composition is modular exponentiation:

    compose(arrow x, endo e)  = x^e  (mod p)
    compose(endo e, arrow x)  = x^e  (mod p)
    compose(endo e, endo e')  = e*e' (mod s)

Hom(B, A) is empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..category import CategoryModel, ObjectRef
from ..errors import InvalidParams
from ..numbers import factorize, is_probable_prime


@dataclass(frozen=True)
class DhParams:
    p: int  # prime modulus
    g: int  # subgroup generator
    s: int  # order of g, publicly known

    @classmethod
    def from_dict(cls, raw: dict) -> "DhParams":
        try:
            return cls(int(raw["p"]), int(raw["g"]), int(raw["s"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParams(f"bad dh parameter document: {exc}") from exc

    def to_dict(self) -> dict:
        return {"p": self.p, "g": self.g, "s": self.s}

    def validate(self) -> "DhParams":
        if not is_probable_prime(self.p):
            raise InvalidParams(f"p={self.p} is not prime")
        if not 1 < self.g < self.p:
            raise InvalidParams(f"g={self.g} out of range")
        if self.s < 2:
            raise InvalidParams(f"s={self.s} too small")
        if pow(self.g, self.s, self.p) != 1:
            raise InvalidParams(f"g^s != 1 mod p: g={self.g} has not order {self.s}")
        try:
            s_factors = factorize(self.s)
        except ValueError as exc:
            raise InvalidParams(f"cannot verify order: {exc}") from exc
        for prime in s_factors:
            if pow(self.g, self.s // prime, self.p) == 1:
                raise InvalidParams(
                    f"g={self.g} has order dividing {self.s // prime}, not {self.s}"
                )
        return self


class DhCategory(CategoryModel):
    def __init__(self, params: DhParams):
        self.params = params.validate()
        self.A = ObjectRef("A")
        self.B = ObjectRef("B")
        self.objects = (self.A, self.B)
        self.model_id = f"dh(p={params.p},g={params.g},s={params.s})"

    def _is_arrow(self, dom, cod) -> bool:
        return (dom, cod) == (self.A, self.B)

    def hom_exists(self, dom, cod) -> bool:
        return (dom, cod) != (self.B, self.A) and dom in self.objects and cod in self.objects

    def payload_compose(self, dom, mid, cod, g_payload, f_payload):
        p, s = self.params.p, self.params.s
        if dom == mid == cod:
            return g_payload * f_payload % s
        if self._is_arrow(dom, mid):  # endo of B after an arrow
            return pow(f_payload, g_payload, p)
        # arrow after an endo of A
        return pow(g_payload, f_payload, p)

    def payload_identity(self, obj):
        return 1 % self.params.s

    def payload_contains(self, dom, cod, payload) -> bool:
        if not isinstance(payload, int):
            return False
        if self._is_arrow(dom, cod):
            return 0 < payload < self.params.p and pow(payload, self.params.s, self.params.p) == 1
        return 0 <= payload < self.params.s

    def payload_canonical(self, dom, cod, payload):
        if self._is_arrow(dom, cod):
            return payload % self.params.p
        return payload % self.params.s

    def payload_sample(self, dom, cod, rng):
        if self._is_arrow(dom, cod):
            return pow(self.params.g, rng.randrange(self.params.s), self.params.p)
        # secret exponents are drawn from [2, s-1]
        return rng.randrange(2, self.params.s)

    def payload_encode(self, dom, cod, payload) -> str:
        return str(payload)

    def payload_decode(self, dom, cod, text: str):
        return int(text)

    def hom_cardinality(self, dom, cod) -> int | None:
        if not self.hom_exists(dom, cod):
            return 0
        return self.params.s

    def hom_enumerate(self, dom, cod) -> Iterator | None:
        if not self.hom_exists(dom, cod):
            return iter(())
        if self._is_arrow(dom, cod):
            def powers():
                acc = 1
                for _ in range(self.params.s):
                    yield acc
                    acc = acc * self.params.g % self.params.p
            return powers()
        return iter(range(self.params.s))


def dh_category(params: DhParams) -> DhCategory:
    return DhCategory(params)
