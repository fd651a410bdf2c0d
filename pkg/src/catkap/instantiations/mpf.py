"""Matrix-power platform: hom entries exponentiate through endo actions.

The arrow hom-set A->B is the multiplicative monoid Z_p^* and both
endomorphism hom-sets are the exponent semiring Z_{p-1} (Fermat reduces
exponents mod p-1, making the action total and canonical).  The model is
natively enriched over abelian monoids:

    hom "addition" on A->B   : x * y   (mod p),   zero = 1
    hom addition on endos    : x + y   (mod p-1), zero = 0
    composition (actions)    : w^e     (mod p)  on either side
    endo ring multiplication : x * y   (mod p-1)

Matrix-level actions from the generic matrix module then evaluate to the
matrix power function: (W . Psi)_ij = prod_k w_ik^(psi_kj) and
(Omega . W)_ij = prod_k w_kj^(omega_ik).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..category import ObjectRef
from ..enrichment import COEFF_NONNEGATIVE, EnrichedModel
from ..errors import InvalidParams
from ..matrices import HomMatrix
from ..numbers import is_probable_prime


@dataclass(frozen=True)
class MpfParams:
    p: int  # prime modulus of the base monoid
    k: int  # matrix dimension
    base: tuple[tuple[int, ...], ...]  # public k x k matrix, entries in Z_p^*

    @classmethod
    def from_dict(cls, raw: dict) -> "MpfParams":
        try:
            return cls(
                int(raw["p"]),
                int(raw["k"]),
                tuple(tuple(int(v) for v in row) for row in raw["base"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParams(f"bad mpf parameter document: {exc}") from exc

    def to_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "base": [list(r) for r in self.base]}

    def validate(self) -> "MpfParams":
        if not is_probable_prime(self.p):
            raise InvalidParams(f"p={self.p} is not prime")
        if self.p < 3:
            raise InvalidParams("p must exceed 2 so the exponent semiring is nontrivial")
        if self.k < 1:
            raise InvalidParams("dimension must be positive")
        if len(self.base) != self.k or any(len(r) != self.k for r in self.base):
            raise InvalidParams(f"base matrix is not {self.k}x{self.k}")
        for row in self.base:
            for v in row:
                if not 0 < v % self.p:
                    raise InvalidParams(f"base entry {v} is not invertible mod {self.p}")
        return self


class MatrixPowerModel(EnrichedModel):
    coefficient_mode = COEFF_NONNEGATIVE

    def __init__(self, params: MpfParams):
        self.params = params.validate()
        self.A = ObjectRef("A")
        self.B = ObjectRef("B")
        self.objects = (self.A, self.B)
        self.model_id = f"mpf(p={params.p},k={params.k})"

    def _is_arrow(self, dom, cod) -> bool:
        return (dom, cod) == (self.A, self.B)

    @property
    def exp_mod(self) -> int:
        return self.params.p - 1

    # -- category hooks ------------------------------------------------------

    def hom_exists(self, dom, cod) -> bool:
        return (dom, cod) != (self.B, self.A) and dom in self.objects and cod in self.objects

    def payload_compose(self, dom, mid, cod, g_payload, f_payload):
        p = self.params.p
        if dom == mid == cod:
            return g_payload * f_payload % self.exp_mod
        if self._is_arrow(dom, mid):  # left action: endo of B after the arrow
            return pow(f_payload, g_payload, p)
        return pow(g_payload, f_payload, p)  # right action

    def payload_identity(self, obj):
        return 1 % self.exp_mod

    def payload_contains(self, dom, cod, payload) -> bool:
        if not isinstance(payload, int):
            return False
        if self._is_arrow(dom, cod):
            return 0 < payload < self.params.p
        return 0 <= payload < self.exp_mod

    def payload_canonical(self, dom, cod, payload):
        if self._is_arrow(dom, cod):
            return payload % self.params.p
        return payload % self.exp_mod

    def payload_sample(self, dom, cod, rng):
        if self._is_arrow(dom, cod):
            return rng.randrange(1, self.params.p)
        return rng.randrange(self.exp_mod)

    def payload_encode(self, dom, cod, payload) -> str:
        return str(payload)

    def payload_decode(self, dom, cod, text: str):
        return int(text)

    def hom_cardinality(self, dom, cod) -> int | None:
        if not self.hom_exists(dom, cod):
            return 0
        return self.params.p - 1

    def hom_enumerate(self, dom, cod) -> Iterator | None:
        if not self.hom_exists(dom, cod):
            return iter(())
        if self._is_arrow(dom, cod):
            return iter(range(1, self.params.p))
        return iter(range(self.exp_mod))

    # -- enriched hooks ------------------------------------------------------

    def payload_add(self, dom, cod, x, y):
        if self._is_arrow(dom, cod):
            return x * y % self.params.p
        return (x + y) % self.exp_mod

    def payload_zero(self, dom, cod):
        if self._is_arrow(dom, cod):
            return 1
        return 0

    def payload_scale(self, dom, cod, c: int, x):
        if self._is_arrow(dom, cod):
            return pow(x, c, self.params.p)
        return c * x % self.exp_mod


@dataclass(frozen=True)
class MpfPlatform:
    """The enriched model together with its public hom matrix."""

    model: MatrixPowerModel
    phi: HomMatrix


def mpf_model(params: MpfParams) -> MpfPlatform:
    model = MatrixPowerModel(params)
    phi = HomMatrix.build(
        model, model.A, model.B, [[v for v in row] for row in params.base]
    )
    return MpfPlatform(model, phi)
