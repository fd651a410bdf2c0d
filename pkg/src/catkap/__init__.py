"""Key agreement protocols built from category composition.

The package provides a pluggable category abstraction, a free enrichment
over abelian groups/monoids, matrix algebra over enriched hom-sets,
three concrete platforms (cyclic-group exponentiation, matrix
conjugation, matrix power functions), protocol state machines for
two-party, matrix and multi-party sessions, and an in-memory insecure
network with brute-force oracles at toy parameters.

Not a hardened implementation: arithmetic is not constant-time and
parameters default to desk scale.
"""

from .category import CategoryModel, Morphism, ObjectRef, compose, identity, sample_endo
from .enrichment import (
    COEFF_INTEGERS,
    COEFF_NONNEGATIVE,
    EnrichedModel,
    FormalSum,
    FreeEnrichment,
    compose_bilinear,
    enrich,
    lift,
)
from .errors import CatkapError
from .matrices import (
    CommutingFamily,
    EndoMatrix,
    HomMatrix,
    act_left,
    act_right,
    check_commuting_pair,
    constant_identity_family,
    endo_identity,
    mat_add,
    mat_scale,
    ring_mul,
    sample_commuting,
)
from .netsim import (
    Broker,
    EavesdropperView,
    SessionResult,
    brute_force_dh,
    brute_force_generic,
    run_session,
    verify_transcript,
)
from .protocols import (
    ALICE,
    BOB,
    Message,
    SessionConfig,
    SessionOutcome,
    ckap_finalize,
    ckap_offer,
    eckap_finalize,
    eckap_offer,
    multiparty_finalize,
    multiparty_messages,
)
from .transcript import Transcript

__version__ = "0.1.0"

__all__ = [
    "ALICE",
    "BOB",
    "Broker",
    "CatkapError",
    "CategoryModel",
    "COEFF_INTEGERS",
    "COEFF_NONNEGATIVE",
    "CommutingFamily",
    "EavesdropperView",
    "EndoMatrix",
    "EnrichedModel",
    "FormalSum",
    "FreeEnrichment",
    "HomMatrix",
    "Message",
    "Morphism",
    "ObjectRef",
    "SessionConfig",
    "SessionOutcome",
    "SessionResult",
    "Transcript",
    "act_left",
    "act_right",
    "brute_force_dh",
    "brute_force_generic",
    "check_commuting_pair",
    "ckap_finalize",
    "ckap_offer",
    "compose",
    "compose_bilinear",
    "constant_identity_family",
    "eckap_finalize",
    "eckap_offer",
    "endo_identity",
    "enrich",
    "identity",
    "lift",
    "mat_add",
    "mat_scale",
    "multiparty_finalize",
    "multiparty_messages",
    "ring_mul",
    "run_session",
    "sample_commuting",
    "sample_endo",
    "verify_transcript",
]
