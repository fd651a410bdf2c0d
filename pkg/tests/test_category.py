import random

import pytest
from hypothesis import given, settings, strategies as st

from catkap.category import Morphism, ObjectRef
from catkap.errors import (
    EmptyHom,
    ForeignMorphism,
    NonComposable,
    UnknownObject,
)
from catkap.instantiations.broken import broken_model
from catkap.instantiations.dh import DhParams
from catkap.laws import (
    check_associativity,
    check_category_laws,
    check_canonicality,
    check_closure,
    check_identity_laws,
)

from oracles import DH23, modexp


class TestCompose:
    def test_identity_absorbs(self, dh23):
        A, B = dh23.object("A"), dh23.object("B")
        g = dh23.morphism(A, B, 5)
        assert dh23.compose(dh23.identity(B), g) == g
        assert dh23.compose(g, dh23.identity(A)) == g

    def test_dh_composition_matches_square_and_multiply(self, dh23):
        A, B = dh23.object("A"), dh23.object("B")
        g = dh23.morphism(A, B, 5)
        endo = dh23.morphism(A, A, 6)
        assert dh23.compose(g, endo).payload == modexp(5, 6, 23) == 8

    def test_conjugation_by_identity(self, kolee):
        A, B = kolee.object("A"), kolee.object("B")
        g = kolee.sample_hom(A, B, random.Random(5))
        e = kolee.identity(A)
        assert kolee.compose(g, e) == g

    def test_non_composable(self, dh23):
        A, B = dh23.object("A"), dh23.object("B")
        g = dh23.morphism(A, B, 5)
        h = dh23.morphism(B, B, 3)
        with pytest.raises(NonComposable):
            dh23.compose(g, h)  # h lands in B, g starts at A

    def test_foreign_morphism_rejected(self, dh23):
        A, B = dh23.object("A"), dh23.object("B")
        foreign = Morphism(A, B, 7)  # 7 is not in the subgroup generated by 5
        g = dh23.morphism(A, B, 5)
        assert pow(7, 22, 23) != 1
        with pytest.raises(ForeignMorphism):
            dh23.compose(foreign, dh23.identity(A))
        with pytest.raises(ForeignMorphism):
            dh23.validate(Morphism(ObjectRef("X"), B, 5))
        assert dh23.validate(g) == g

    def test_empty_hom(self, dh23):
        A, B = dh23.object("A"), dh23.object("B")
        assert not dh23.hom_exists(B, A)
        with pytest.raises(EmptyHom):
            dh23.morphism(B, A, 5)

    def test_unknown_object(self, dh23):
        with pytest.raises(UnknownObject):
            dh23.identity(ObjectRef("nope"))
        with pytest.raises(UnknownObject):
            dh23.object("nope")


class TestSampling:
    def test_deterministic_per_seed(self, dh31):
        A = dh31.object("A")
        assert dh31.sample_endo(A, random.Random(7)) == dh31.sample_endo(
            A, random.Random(7)
        )

    def test_secret_range(self, dh23):
        A = dh23.object("A")
        rng = random.Random(1)
        for _ in range(200):
            e = dh23.sample_endo(A, rng).payload
            assert 2 <= e <= 21

    def test_birthday_spread(self, dh31):
        # hom-set of size ~2^31: 100 draws should be essentially distinct
        A = dh31.object("A")
        rng = random.Random(3)
        draws = {dh31.sample_endo(A, rng).payload for _ in range(100)}
        assert len(draws) >= 99

    def test_arrow_sampling_lands_in_subgroup(self, kolee):
        A, B = kolee.object("A"), kolee.object("B")
        rng = random.Random(11)
        for _ in range(20):
            m = kolee.sample_endo(A, rng)
            kolee.validate(m)
            assert m.payload[1] == ((1, 0), (0, 1))
        arrow = kolee.sample_hom(A, B, rng)
        kolee.validate(arrow)


class TestLawSuite:
    @pytest.mark.parametrize("model_name", ["dh23", "kolee", "mpf"])
    def test_models_pass_laws(self, model_name, dh23, kolee, mpf7, rng):
        model = {"dh23": dh23, "kolee": kolee, "mpf": mpf7.model}[model_name]
        report = check_category_laws(model, rng, assoc_trials=800, other_trials=200)
        assert report.ok, report.first_witness()
        assert not report.diagnostics

    def test_broken_model_detected_with_witness(self, rng):
        model = broken_model(DhParams.from_dict(DH23))
        assoc = check_associativity(model, 300, rng)
        ident = check_identity_laws(model, 100, rng)
        assert assoc.witnesses or ident.witnesses
        witness = (assoc.witnesses or ident.witnesses)[0]
        assert "Morphism" in witness

    def test_closure_and_canon(self, dh23, rng):
        assert check_closure(dh23, 200, rng).ok
        assert check_canonicality(dh23, 200, rng).ok


@settings(max_examples=100, deadline=None)
@given(e1=st.integers(0, 21), e2=st.integers(0, 21), k=st.integers(0, 21))
def test_dh_associativity_property(e1, e2, k):
    model_params = DhParams.from_dict(DH23)
    from catkap.instantiations.dh import dh_category

    model = dh_category(model_params)
    A, B = model.object("A"), model.object("B")
    f = model.morphism(A, A, e1)
    g = model.morphism(A, A, e2)
    arrow = model.morphism(A, B, pow(5, k, 23))
    lhs = model.compose(model.compose(arrow, g), f)
    rhs = model.compose(arrow, model.compose(g, f))
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(e=st.integers(0, 21))
def test_dh_canonical_form_is_reduced(e):
    from catkap.instantiations.dh import dh_category

    model = dh_category(DhParams.from_dict(DH23))
    A = model.object("A")
    m = model.morphism(A, A, e + 22 * 3)  # non-canonical input reduces
    assert m.payload == e
