import random

import pytest

from catkap.instantiations.conjugation import ConjugationParams, conjugation_category
from catkap.instantiations.dh import DhParams, dh_category
from catkap.instantiations.mpf import MpfParams, mpf_model

from oracles import DH23, DH31, KOLEE7, MPF7, MPF31


@pytest.fixture(scope="session")
def dh23():
    return dh_category(DhParams.from_dict(DH23))


@pytest.fixture(scope="session")
def dh31():
    return dh_category(DhParams.from_dict(DH31))


@pytest.fixture(scope="session")
def kolee():
    return conjugation_category(ConjugationParams.from_dict(KOLEE7))


@pytest.fixture(scope="session")
def mpf7():
    return mpf_model(MpfParams.from_dict(MPF7))


@pytest.fixture(scope="session")
def mpf31():
    return mpf_model(MpfParams.from_dict(MPF31))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
