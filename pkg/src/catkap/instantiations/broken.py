"""Deliberately broken model used to prove the law checker detects faults.

Looks like the exponentiation category but shifts every endo product by
one, which breaks associativity and the identity laws.
"""

from __future__ import annotations

from .dh import DhCategory, DhParams


class BrokenModel(DhCategory):
    def __init__(self, params: DhParams):
        super().__init__(params)
        self.model_id = f"broken(p={params.p},g={params.g},s={params.s})"

    def payload_compose(self, dom, mid, cod, g_payload, f_payload):
        if dom == mid == cod:
            # off-by-one: (x*y + 1) mod s is not associative
            return (g_payload * f_payload + 1) % self.params.s
        return super().payload_compose(dom, mid, cod, g_payload, f_payload)


def broken_model(params: DhParams) -> BrokenModel:
    return BrokenModel(params)
