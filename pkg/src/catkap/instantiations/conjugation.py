"""Conjugation platform on a direct product of matrix groups.

G = GL(d, Z_q) x GL(d, Z_q); the coordinate subgroups H_A = <(a0, 1)>
and H_B = <(1, b0)> commute elementwise.  Arrows A->B carry arbitrary
elements of G, endomorphisms carry subgroup elements, and composition is
conjugation:

    compose(arrow g, endo a)  = a g a^-1
    compose(endo b, arrow g)  = b g b^-1
    compose(endo a, endo a')  = a' a        (A side, reversed)
    compose(endo b, endo b')  = b b'        (B side)

The reversed A-side product is what makes conjugation associate with the
arrow action; both endo subgroups here are cyclic, so the reversal
coincides with the plain product, but the rule is applied verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import count
from typing import Iterator

from .. import modmat
from ..category import CategoryModel, ObjectRef
from ..errors import InvalidParams
from ..numbers import element_order, factorize, is_probable_prime

# Exponent lookup tables are only built for subgroups up to this order.
_MEMBERSHIP_CAP = 1 << 16

# Exponent range used when the generator's order could not be determined.
_BLIND_EXPONENT_RANGE = 1 << 62


@dataclass(frozen=True)
class ConjugationParams:
    q: int  # prime modulus
    d: int  # matrix dimension
    a0: modmat.Matrix  # generator of H_A's first coordinate
    b0: modmat.Matrix  # generator of H_B's second coordinate
    g: tuple[modmat.Matrix, modmat.Matrix]  # public element of G

    @classmethod
    def from_dict(cls, raw: dict) -> "ConjugationParams":
        try:
            return cls(
                int(raw["q"]),
                int(raw["d"]),
                modmat.freeze(raw["a0"]),
                modmat.freeze(raw["b0"]),
                (modmat.freeze(raw["g"][0]), modmat.freeze(raw["g"][1])),
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InvalidParams(f"bad conjugation parameter document: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "d": self.d,
            "a0": [list(r) for r in self.a0],
            "b0": [list(r) for r in self.b0],
            "g": [[list(r) for r in self.g[0]], [list(r) for r in self.g[1]]],
        }

    def validate(self) -> "ConjugationParams":
        if not is_probable_prime(self.q):
            raise InvalidParams(f"q={self.q} is not prime")
        if self.d < 1:
            raise InvalidParams("dimension must be positive")
        for name, mat in (("a0", self.a0), ("b0", self.b0), ("g[0]", self.g[0]), ("g[1]", self.g[1])):
            if len(mat) != self.d or not modmat.is_square(mat):
                raise InvalidParams(f"{name} is not {self.d}x{self.d}")
            if not modmat.is_invertible(mat, self.q):
                raise InvalidParams(f"{name} is not invertible mod {self.q}")
        return self


def _gl_order_factors(d: int, q: int) -> dict[int, int] | None:
    """Factored order of GL(d, q), or None when a factor resists."""
    factors: dict[int, int] = {}
    parts = [q] * (d * (d - 1) // 2) + [q**i - 1 for i in range(1, d + 1)]
    for part in parts:
        try:
            for prime, e in factorize(part).items():
                factors[prime] = factors.get(prime, 0) + e
        except ValueError:
            return None
    return factors


class ConjugationCategory(CategoryModel):
    def __init__(self, params: ConjugationParams):
        self.params = params.validate()
        self.A = ObjectRef("A")
        self.B = ObjectRef("B")
        self.objects = (self.A, self.B)
        self.model_id = f"kolee(q={params.q},d={params.d})"
        self._ident = modmat.identity(params.d)
        self.order_a0 = self._generator_order(params.a0)
        self.order_b0 = self._generator_order(params.b0)
        self._power_index: dict[ObjectRef, dict[modmat.Matrix, int]] = {}

    def _generator_order(self, mat: modmat.Matrix) -> int | None:
        factors = _gl_order_factors(self.params.d, self.params.q)
        if factors is None:
            return None
        return element_order(
            mat,
            self._ident,
            lambda a, b: modmat.mat_mul(a, b, self.params.q),
            factors,
        )

    def _generator_for(self, obj: ObjectRef) -> tuple[modmat.Matrix, int | None]:
        if obj == self.A:
            return self.params.a0, self.order_a0
        return self.params.b0, self.order_b0

    def _powers_of(self, obj: ObjectRef) -> dict[modmat.Matrix, int] | None:
        """Lookup table matrix -> exponent for small cyclic subgroups."""
        gen, order = self._generator_for(obj)
        if order is None or order > _MEMBERSHIP_CAP:
            return None
        if obj not in self._power_index:
            table = {}
            acc = self._ident
            for k in range(order):
                table.setdefault(acc, k)
                acc = modmat.mat_mul(acc, gen, self.params.q)
            self._power_index[obj] = table
        return self._power_index[obj]

    # -- category hooks ------------------------------------------------------

    def hom_exists(self, dom, cod) -> bool:
        return (dom, cod) != (self.B, self.A) and dom in self.objects and cod in self.objects

    def _mul(self, x, y):
        return (
            modmat.mat_mul(x[0], y[0], self.params.q),
            modmat.mat_mul(x[1], y[1], self.params.q),
        )

    def _inv(self, x):
        return (
            modmat.inverse(x[0], self.params.q),
            modmat.inverse(x[1], self.params.q),
        )

    def _conjugate(self, actor, target):
        return self._mul(self._mul(actor, target), self._inv(actor))

    def payload_compose(self, dom, mid, cod, g_payload, f_payload):
        if dom == mid == cod:
            if dom == self.A:
                # reversed product on the A side: a.a' = a'a
                return self._mul(f_payload, g_payload)
            return self._mul(g_payload, f_payload)
        if (dom, mid) == (self.A, self.A):
            # arrow after an A-endomorphism: g.a = a g a^-1
            return self._conjugate(f_payload, g_payload)
        # B-endomorphism after the arrow: b.g = b g b^-1
        return self._conjugate(g_payload, f_payload)

    def payload_identity(self, obj):
        return (self._ident, self._ident)

    def payload_contains(self, dom, cod, payload) -> bool:
        try:
            x, y = payload
        except (TypeError, ValueError):
            return False
        q, d = self.params.q, self.params.d
        for mat in (x, y):
            if len(mat) != d or not modmat.is_square(mat):
                return False
            if any(not (0 <= v < q) for row in mat for v in row):
                return False
        if not (modmat.is_invertible(x, q) and modmat.is_invertible(y, q)):
            return False
        if dom == cod == self.A:
            if y != self._ident:
                return False
            table = self._powers_of(self.A)
            return table is None or x in table
        if dom == cod == self.B:
            if x != self._ident:
                return False
            table = self._powers_of(self.B)
            return table is None or y in table
        return True

    def payload_canonical(self, dom, cod, payload):
        x, y = payload
        return (
            modmat.freeze(x, self.params.q),
            modmat.freeze(y, self.params.q),
        )

    def payload_sample(self, dom, cod, rng):
        q, d = self.params.q, self.params.d
        if dom == cod:
            gen, order = self._generator_for(dom)
            k = rng.randrange(1, order if order else _BLIND_EXPONENT_RANGE)
            power = modmat.mat_pow(gen, k, q)
            if dom == self.A:
                return (power, self._ident)
            return (self._ident, power)
        return (
            modmat.random_invertible(d, q, rng),
            modmat.random_invertible(d, q, rng),
        )

    def payload_encode(self, dom, cod, payload) -> str:
        x, y = payload
        flat = lambda m: [v for row in m for v in row]
        return json.dumps([flat(x), flat(y)], separators=(",", ":"))

    def payload_decode(self, dom, cod, text: str):
        fx, fy = json.loads(text)
        d = self.params.d
        if len(fx) != d * d or len(fy) != d * d:
            raise ValueError("flat matrix length mismatch")
        unflat = lambda f: tuple(tuple(int(v) for v in f[i * d : (i + 1) * d]) for i in range(d))
        return (unflat(fx), unflat(fy))

    def payload_sort_key(self, dom, cod, payload):
        return payload

    def hom_cardinality(self, dom, cod) -> int | None:
        if not self.hom_exists(dom, cod):
            return 0
        if dom == cod:
            _, order = self._generator_for(dom)
            return order
        q, d = self.params.q, self.params.d
        gl = 1
        for i in range(d):
            gl *= q**d - q**i
        return gl * gl

    def hom_enumerate(self, dom, cod) -> Iterator | None:
        if dom != cod:
            return None
        gen, order = self._generator_for(dom)
        is_a_side = dom == self.A
        q = self.params.q
        ident = self._ident

        def powers():
            acc = ident
            for _ in range(order) if order else count():
                yield (acc, ident) if is_a_side else (ident, acc)
                acc = modmat.mat_mul(acc, gen, q)

        return powers()


def conjugation_category(params: ConjugationParams) -> ConjugationCategory:
    return ConjugationCategory(params)
