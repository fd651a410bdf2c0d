"""Matrices over enriched hom-sets and commuting-family samplers.

A HomMatrix is rectangular with entries from one abelian hom-group; an
EndoMatrix is square with entries from one endomorphism ring.  Products
thread entry composition through the model and accumulate with the hom
addition, so the 1x1 case reduces to plain composition.

Commuting families are polynomial: every sample is sum(c_i * P^i) for a
shared public generator matrix P, which makes pairwise commutation a
theorem rather than a runtime property.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

from .category import Morphism, ObjectRef
from .enrichment import COEFF_NONNEGATIVE, EnrichedModel
from .errors import (
    DecodeError,
    DegenerateModelWarning,
    InvalidParams,
    NegativeCoefficient,
    NonComposable,
    ShapeMismatch,
)


@dataclass(frozen=True)
class HomMatrix:
    """m x n matrix over one hom abelian group Hom(dom, cod)."""

    model: EnrichedModel = field(compare=False)
    dom: ObjectRef
    cod: ObjectRef
    rows: int
    cols: int
    entries: tuple[tuple[Morphism, ...], ...]

    @classmethod
    def build(cls, model, dom, cod, rows_of_payloads) -> "HomMatrix":
        entries = tuple(
            tuple(
                e if isinstance(e, Morphism) else model.morphism(dom, cod, e)
                for e in row
            )
            for row in rows_of_payloads
        )
        rows = len(entries)
        if rows == 0 or any(len(r) != len(entries[0]) for r in entries):
            raise ShapeMismatch("matrix rows must be nonempty and equal length")
        for row in entries:
            for e in row:
                if (e.dom, e.cod) != (dom, cod):
                    raise ShapeMismatch(
                        f"entry {e!r} not in Hom({dom.id}->{cod.id})"
                    )
                model.validate(e)
        return cls(model, dom, cod, rows, len(entries[0]), entries)

    @property
    def hom_tag(self) -> str:
        return f"{self.dom.id}->{self.cod.id}"

    def entry(self, i: int, j: int) -> Morphism:
        return self.entries[i][j]

    def is_zero(self) -> bool:
        z = self.model.zero(self.dom, self.cod)
        return all(e == z for row in self.entries for e in row)

    def encode(self) -> str:
        return json.dumps(
            {
                "rows": self.rows,
                "cols": self.cols,
                "hom": self.hom_tag,
                "entries": [
                    self.model.encode(e) for row in self.entries for e in row
                ],
            },
            sort_keys=True,
            separators=(",", ":"),
        )

    @classmethod
    def decode(cls, model: EnrichedModel, text: str) -> "HomMatrix":
        try:
            doc = json.loads(text)
            rows, cols = int(doc["rows"]), int(doc["cols"])
            dom_id, cod_id = doc["hom"].split("->")
            dom, cod = model.object(dom_id), model.object(cod_id)
            flat = doc["entries"]
            if len(flat) != rows * cols:
                raise ValueError("entry count does not match shape")
            grid = [
                [model.decode(dom, cod, flat[i * cols + j]) for j in range(cols)]
                for i in range(rows)
            ]
        except DecodeError:
            raise
        except Exception as exc:
            raise DecodeError(f"bad matrix payload: {exc}") from exc
        return cls.build(model, dom, cod, grid)


@dataclass(frozen=True)
class EndoMatrix:
    """n x n matrix over the endomorphism ring Hom(obj, obj).

    side, when set, records the intended use ("left" for codomain-side
    action, "right" for domain-side) and is checked by the actions.
    """

    model: EnrichedModel = field(compare=False)
    obj: ObjectRef
    size: int
    entries: tuple[tuple[Morphism, ...], ...]
    side: str | None = field(default=None, compare=False)

    @classmethod
    def build(cls, model, obj, rows_of_payloads, side=None) -> "EndoMatrix":
        entries = tuple(
            tuple(
                e if isinstance(e, Morphism) else model.morphism(obj, obj, e)
                for e in row
            )
            for row in rows_of_payloads
        )
        size = len(entries)
        if size == 0 or any(len(r) != size for r in entries):
            raise ShapeMismatch("endo matrix must be square and nonempty")
        for row in entries:
            for e in row:
                if (e.dom, e.cod) != (obj, obj):
                    raise ShapeMismatch(f"entry {e!r} is not an endomorphism of {obj.id}")
                model.validate(e)
        return cls(model, obj, size, entries, side)

    def with_side(self, side: str | None) -> "EndoMatrix":
        return EndoMatrix(self.model, self.obj, self.size, self.entries, side)

    def entry(self, i: int, j: int) -> Morphism:
        return self.entries[i][j]

    def encode(self) -> str:
        return json.dumps(
            {
                "size": self.size,
                "hom": f"{self.obj.id}->{self.obj.id}",
                "entries": [
                    self.model.encode(e) for row in self.entries for e in row
                ],
            },
            sort_keys=True,
            separators=(",", ":"),
        )


def _same_model(a, b) -> None:
    if a.model is not b.model:
        raise ShapeMismatch("matrices belong to different models")


def endo_identity(model: EnrichedModel, obj: ObjectRef, size: int) -> EndoMatrix:
    one = model.ring_one(obj)
    zero = model.zero(obj, obj)
    return EndoMatrix.build(
        model, obj, [[one if i == j else zero for j in range(size)] for i in range(size)]
    )


def zero_hom_matrix(model, dom, cod, rows, cols) -> HomMatrix:
    z = model.zero(dom, cod)
    return HomMatrix.build(model, dom, cod, [[z] * cols for _ in range(rows)])


def act_right(phi: HomMatrix, psi: EndoMatrix) -> HomMatrix:
    """phi . psi: the domain-side endo matrix acts on the right.

    Matrix entries are validated at build time, so the dot products run
    on raw payloads; the result matrix re-validates every entry.
    """
    _same_model(phi, psi)
    if psi.obj != phi.dom:
        raise NonComposable(
            f"right action needs endomorphisms of {phi.dom.id}, got {psi.obj.id}"
        )
    if psi.side == "left":
        raise NonComposable("left-acting matrix used on the right")
    if phi.cols != psi.size:
        raise ShapeMismatch(f"{phi.rows}x{phi.cols} . {psi.size}x{psi.size}")
    model = phi.model
    dom, cod = phi.dom, phi.cod
    grid = []
    for i in range(phi.rows):
        row = []
        for j in range(psi.size):
            acc = model.payload_zero(dom, cod)
            for k in range(phi.cols):
                term = model.payload_compose(
                    dom, dom, cod, phi.entries[i][k].payload, psi.entries[k][j].payload
                )
                acc = model.payload_add(dom, cod, acc, term)
            row.append(acc)
        grid.append(row)
    return HomMatrix.build(model, dom, cod, grid)


def act_left(omega: EndoMatrix, phi: HomMatrix) -> HomMatrix:
    """omega . phi: the codomain-side endo matrix acts on the left."""
    _same_model(omega, phi)
    if omega.obj != phi.cod:
        raise NonComposable(
            f"left action needs endomorphisms of {phi.cod.id}, got {omega.obj.id}"
        )
    if omega.side == "right":
        raise NonComposable("right-acting matrix used on the left")
    if omega.size != phi.rows:
        raise ShapeMismatch(f"{omega.size}x{omega.size} . {phi.rows}x{phi.cols}")
    model = phi.model
    dom, cod = phi.dom, phi.cod
    grid = []
    for i in range(omega.size):
        row = []
        for j in range(phi.cols):
            acc = model.payload_zero(dom, cod)
            for k in range(omega.size):
                term = model.payload_compose(
                    dom, cod, cod, omega.entries[i][k].payload, phi.entries[k][j].payload
                )
                acc = model.payload_add(dom, cod, acc, term)
            row.append(acc)
        grid.append(row)
    return HomMatrix.build(model, dom, cod, grid)


def ring_mul(x: EndoMatrix, y: EndoMatrix) -> EndoMatrix:
    """Matrix ring product; entry multiplication is endo composition."""
    _same_model(x, y)
    if x.obj != y.obj or x.size != y.size:
        raise ShapeMismatch(
            f"ring product needs equal rings and sizes, got "
            f"{x.obj.id}:{x.size} and {y.obj.id}:{y.size}"
        )
    model = x.model
    obj = x.obj
    grid = []
    for i in range(x.size):
        row = []
        for j in range(x.size):
            acc = model.payload_zero(obj, obj)
            for k in range(x.size):
                term = model.payload_compose(
                    obj, obj, obj, x.entries[i][k].payload, y.entries[k][j].payload
                )
                acc = model.payload_add(obj, obj, acc, term)
            row.append(acc)
        grid.append(row)
    return EndoMatrix.build(model, obj, grid, side=x.side or y.side)


def mat_add(x: EndoMatrix, y: EndoMatrix) -> EndoMatrix:
    _same_model(x, y)
    if x.obj != y.obj or x.size != y.size:
        raise ShapeMismatch("entrywise sum needs matching rings and sizes")
    model = x.model
    grid = [
        [model.add(x.entry(i, j), y.entry(i, j)) for j in range(x.size)]
        for i in range(x.size)
    ]
    return EndoMatrix.build(model, x.obj, grid, side=x.side or y.side)


def mat_scale(c: int, x: EndoMatrix) -> EndoMatrix:
    model = x.model
    grid = [
        [model.scale(c, x.entry(i, j)) for j in range(x.size)] for i in range(x.size)
    ]
    return EndoMatrix.build(model, x.obj, grid, side=x.side)


@dataclass(frozen=True)
class CommutingFamily:
    """Sampler over the polynomial subring generated by one public matrix.

    Samples are sum(c_i * P^i) with 0 <= i <= degree and coefficients
    drawn from coeff_range, so any two samples commute.  A family with
    degree 0 and a single-point range is constant and consumes no
    randomness, which keeps seed alignment exact in reduction setups.
    """

    model: EnrichedModel = field(compare=False)
    obj: ObjectRef
    size: int
    generator: EndoMatrix
    degree: int
    coeff_range: tuple[int, int]
    side: str | None = None

    def __post_init__(self):
        lo, hi = self.coeff_range
        if lo > hi or self.degree < 0:
            raise InvalidParams("empty coefficient range or negative degree")
        if self.model.coefficient_mode == COEFF_NONNEGATIVE and lo < 0:
            raise NegativeCoefficient(
                "negative coefficients in a nonnegative-mode model"
            )
        if self.generator.obj != self.obj or self.generator.size != self.size:
            raise ShapeMismatch("generator does not match family ring/size")

    @property
    def is_constant(self) -> bool:
        lo, hi = self.coeff_range
        return self.degree == 0 and lo == hi

    def sample(self, rng) -> EndoMatrix:
        lo, hi = self.coeff_range
        ident = endo_identity(self.model, self.obj, self.size)
        if self.is_constant:
            return mat_scale(lo, ident).with_side(self.side)
        coeffs = [rng.randrange(lo, hi + 1) for _ in range(self.degree + 1)]
        acc = mat_scale(coeffs[0], ident)
        power = ident
        for c in coeffs[1:]:
            power = ring_mul(power, self.generator)
            acc = mat_add(acc, mat_scale(c, power))
        return acc.with_side(self.side)


def constant_identity_family(
    model: EnrichedModel, obj: ObjectRef, size: int, side: str | None = None
) -> CommutingFamily:
    """The family whose every sample is the unit matrix."""
    return CommutingFamily(
        model, obj, size, endo_identity(model, obj, size), 0, (1, 1), side
    )


def sample_commuting(fam: CommutingFamily, rng) -> EndoMatrix:
    return fam.sample(rng)


def check_commuting_pair(fam_a, fam_b, rng, trials: int = 16) -> None:
    """Verify two families commute elementwise; InvalidParams on a witness.

    Shared-generator pairs commute by construction; distinct generators
    are screened by a generator check plus sampled pairs.
    """
    if fam_a.obj != fam_b.obj or fam_a.size != fam_b.size:
        raise ShapeMismatch("families live in different matrix rings")
    if fam_a.is_constant or fam_b.is_constant:
        return
    if fam_a.generator == fam_b.generator:
        return
    pairs = [(fam_a.generator, fam_b.generator)]
    pairs += [(fam_a.sample(rng), fam_b.sample(rng)) for _ in range(trials)]
    for x, y in pairs:
        if ring_mul(x, y) != ring_mul(y, x):
            raise InvalidParams(
                "families do not commute: witness pair "
                f"{x.encode()} / {y.encode()}"
            )


def warn_if_degenerate(phi: HomMatrix) -> None:
    if phi.is_zero():
        warnings.warn(
            "public matrix is all-zero: derived keys are trivially predictable",
            DegenerateModelWarning,
            stacklevel=2,
        )
