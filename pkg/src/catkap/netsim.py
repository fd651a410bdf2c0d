"""In-memory insecure network: broker, eavesdropper, brute-force oracles.

The broker delivers every sent message exactly once to each addressee
and copies it to every registered tap.  Taps see precisely the traffic;
they never see seeds, secrets or derived keys.  The brute-force oracles
demonstrate, at toy parameters, that recovering a secret from the public
composites breaks the session key.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .category import CategoryModel, Morphism
from .enrichment import EnrichedModel, enrich
from .errors import (
    CatkapError,
    DecodeError,
    DeliveryFailure,
    NotEnumerable,
    NotFound,
    ParamsTooLarge,
    SearchExhausted,
)
from .instantiations import build_model
from .instantiations.dh import DhParams
from .matrices import HomMatrix
from .protocols import (
    ALICE,
    BOB,
    Message,
    Session,
    SessionConfig,
    SessionOutcome,
    build_session,
)
from .transcript import Transcript, build_header, build_outcome, config_from_header

# Exhaustive discrete-log scans refuse to start above this order.
DH_SEARCH_CEILING = 1 << 24

DELIVERY_IN_ORDER = "in-order"
DELIVERY_SHUFFLE = "shuffle"


class Tap:
    """Append-only observer of all broker traffic."""

    def __init__(self, name: str = "eve"):
        self.name = name
        self.captured: list[Message] = []

    def observe(self, msg: Message) -> None:
        self.captured.append(msg)


class Broker:
    """Delivers messages between registered endpoints, copying to taps."""

    def __init__(self, policy: str = DELIVERY_IN_ORDER, seed: int = 0):
        if policy not in (DELIVERY_IN_ORDER, DELIVERY_SHUFFLE):
            raise DeliveryFailure(f"unknown delivery policy {policy!r}")
        self.policy = policy
        self._rng = random.Random(seed)
        self._inboxes: dict[str, deque[Message]] = {}
        self._queue: list[tuple[str, Message]] = []
        self._taps: list[Tap] = []
        self.delivered: int = 0

    def register(self, name: str) -> None:
        self._inboxes.setdefault(name, deque())

    def add_tap(self, tap: Tap) -> None:
        self._taps.append(tap)

    def send(self, msg: Message) -> None:
        for name in msg.recipients:
            if name not in self._inboxes:
                raise DeliveryFailure(f"no endpoint registered for {name!r}")
            self._queue.append((name, msg))
        for tap in self._taps:
            tap.observe(msg)

    def deliver_all(self) -> None:
        pending = list(self._queue)
        self._queue.clear()
        if self.policy == DELIVERY_SHUFFLE:
            self._rng.shuffle(pending)
        for name, msg in pending:
            self._inboxes[name].append(msg)
            self.delivered += 1

    def drain(self, name: str) -> Iterable[Message]:
        inbox = self._inboxes.get(name)
        if inbox is None:
            raise DeliveryFailure(f"no endpoint registered for {name!r}")
        while inbox:
            yield inbox.popleft()


@dataclass
class EavesdropperView:
    """Everything the channel leaked: public header data plus messages."""

    protocol: str
    instantiation: str
    params: dict
    public: dict
    parties: list[str]
    messages: list[Message] = field(default_factory=list)

    def payloads(self) -> list[str]:
        return [m.payload for m in self.messages]

    def from_sender(self, sender: str) -> list[Message]:
        return [m for m in self.messages if m.sender == sender]

    def to_transcript(self) -> Transcript:
        header = {
            "protocol": self.protocol,
            "instantiation": self.instantiation,
            "params": dict(self.params),
            "public": dict(self.public),
            "parties": list(self.parties),
            "role": "view",
        }
        return Transcript(header, list(self.messages), {"agreement": None, "keys": None})

    @classmethod
    def from_transcript(cls, t: Transcript) -> "EavesdropperView":
        header = t.header
        return cls(
            protocol=header["protocol"],
            instantiation=header["instantiation"],
            params=dict(header["params"]),
            public=dict(header["public"]),
            parties=list(header["parties"]),
            messages=list(t.messages),
        )


@dataclass
class SessionResult:
    outcome: SessionOutcome
    transcript: Transcript
    view: EavesdropperView
    session: Session


def run_session(config: SessionConfig, broker: Broker | None = None) -> SessionResult:
    """Drive every party through offer and finalize over the broker."""
    session = build_session(config)
    if broker is None:
        broker = Broker(policy=config.delivery, seed=config.delivery_seed)
    tap = Tap()
    broker.add_tap(tap)
    for party in session.parties:
        broker.register(party.name)

    sid = session.session_id
    sent: list[Message] = []
    seq = 0
    for party in session.parties:
        offers = party.offers(sid, seq)
        seq += len(offers)
        for msg in offers:
            broker.send(msg)
            sent.append(msg)
    broker.deliver_all()
    for party in session.parties:
        for msg in broker.drain(party.name):
            party.receive(msg)

    keys = {party.name: party.key_encoding(party.finalize()) for party in session.parties}
    agreement = len(set(keys.values())) == 1

    header = build_header(config, session.public, session.extra_header)
    outcome = build_outcome(keys, agreement, config.disclose_keys)
    transcript = Transcript(header, sent, outcome)
    view = EavesdropperView(
        protocol=config.protocol,
        instantiation=config.instantiation,
        params=dict(config.params),
        public=dict(session.public),
        parties=list(config.party_names()),
        messages=list(tap.captured),
    )
    return SessionResult(
        SessionOutcome(keys=keys, agreement=agreement, transcript=transcript),
        transcript,
        view,
        session,
    )


# ---------------------------------------------------------------------------
# transcript verification
# ---------------------------------------------------------------------------


@dataclass
class VerifyReport:
    ok: bool
    mode: str  # "replay" | "structural" | "parse"
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        status = "consistent" if self.ok else "INCONSISTENT"
        return [f"transcript {status} ({self.mode} check)"] + [
            f"  {n}" for n in self.notes
        ]


def _validate_messages(transcript: Transcript) -> list[str]:
    header = transcript.header
    problems: list[str] = []
    try:
        model = build_model(header["instantiation"], dict(header["params"]))
    except (CatkapError, KeyError, TypeError) as exc:
        return [f"header does not rebuild a model: {exc}"]
    is_matrix = header.get("protocol") == "eckap"
    if is_matrix and not isinstance(model, EnrichedModel):
        model = enrich(model)
    expected_dims = header.get("dims")
    for msg in transcript.messages:
        try:
            if is_matrix:
                matrix = HomMatrix.decode(model, msg.payload)
                if expected_dims and [matrix.rows, matrix.cols] != list(expected_dims):
                    problems.append(
                        f"message {msg.seq}: {matrix.rows}x{matrix.cols} payload, "
                        f"header says {expected_dims}"
                    )
            else:
                dom = model.object(msg.hom[0])
                cod = model.object(msg.hom[1])
                model.decode(dom, cod, msg.payload)
        except CatkapError as exc:
            problems.append(f"message {msg.seq} from {msg.sender}: {exc}")
    return problems


def verify_transcript(text: str) -> VerifyReport:
    """Re-validate a transcript document.

    With disclosed seeds the whole session is replayed and compared byte
    for byte, which catches any tampering; otherwise messages are
    structurally validated and agreement is recomputed from disclosed
    keys when present.
    """
    try:
        transcript = Transcript.from_json(text)
    except DecodeError as exc:
        return VerifyReport(False, "parse", [str(exc)])

    notes = _validate_messages(transcript)
    if notes:
        return VerifyReport(False, "structural", notes)

    outcome = transcript.outcome
    keys = outcome.get("keys")
    keys_disclosed = isinstance(keys, dict)
    if keys_disclosed:
        recomputed = len(set(keys.values())) == 1
        if outcome.get("agreement") != recomputed:
            return VerifyReport(
                False,
                "structural",
                [
                    f"outcome says agreement={outcome.get('agreement')}, "
                    f"disclosed keys say {recomputed}"
                ],
            )
        notes.append("messages valid, agreement recomputed from disclosed keys")
    else:
        notes.append("agreement unverifiable, messages valid")

    config = None
    try:
        config = config_from_header(transcript.header, keys_disclosed)
    except (CatkapError, KeyError, TypeError, ValueError) as exc:
        return VerifyReport(False, "structural", [f"bad replay header: {exc}"])
    if config is None:
        return VerifyReport(True, "structural", notes)

    try:
        replayed = run_session(config).transcript.to_json()
    except CatkapError as exc:
        return VerifyReport(False, "replay", [f"replay failed: {exc}"])
    if replayed != text:
        return VerifyReport(
            False, "replay", ["replayed bytes differ from the given transcript"]
        )
    return VerifyReport(True, "replay", ["full replay matches byte for byte"])


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------


def _offer_payload(view: EavesdropperView, sender: str) -> str:
    msgs = view.from_sender(sender)
    if not msgs:
        raise NotFound(f"view has no message from {sender!r}")
    return msgs[0].payload


def brute_force_dh(
    view: EavesdropperView, params: DhParams, bound: int | None = None
) -> int:
    """Recover the session key of a two-party exponentiation session.

    Scans exponents in ascending order for a preimage of Alice's offer;
    any preimage congruent mod the public order yields the same key.
    Without an explicit bound the full order is scanned, guarded by the
    hard ceiling; with one, the scan stops at the bound and reports
    exhaustion.
    """
    params.validate()
    if bound is None and params.s > DH_SEARCH_CEILING:
        raise ParamsTooLarge(
            f"order {params.s} exceeds the search ceiling {DH_SEARCH_CEILING}"
        )
    limit = params.s if bound is None else min(bound, params.s)
    offer_a = int(_offer_payload(view, ALICE))
    offer_b = int(_offer_payload(view, BOB))
    acc = 1
    for m in range(limit):
        if acc == offer_a:
            return pow(offer_b, m, params.p)
        acc = acc * params.g % params.p
    if limit < params.s:
        raise SearchExhausted(f"no preimage within bound {limit}")
    raise NotFound("no exponent reproduces Alice's offer; inconsistent view")


def brute_force_generic(
    view: EavesdropperView,
    model: CategoryModel | None = None,
    bound: int = 1 << 16,
) -> Morphism:
    """Enumerate Alice-side secrets up to a bound and rebuild the key.

    Works for any two-party session whose model enumerates its secret
    space; raises SearchExhausted past the bound and NotEnumerable when
    the model offers no enumeration.
    """
    if model is None:
        model = build_model(view.instantiation, view.params)
    if "g" not in view.public:
        raise NotEnumerable("view does not carry a scalar public element")
    a_obj = model.object("A")
    b_obj = model.object("B")
    g = model.decode(a_obj, b_obj, view.public["g"])
    offer_a = model.decode(a_obj, b_obj, _offer_payload(view, ALICE))
    offer_b = model.decode(a_obj, b_obj, _offer_payload(view, BOB))
    candidates = model.hom_enumerate(a_obj, a_obj)
    if candidates is None:
        raise NotEnumerable(f"{model.model_id} exposes no endo enumeration")
    for steps, payload in enumerate(candidates):
        if steps >= bound:
            break
        candidate = model.morphism(a_obj, a_obj, payload)
        if model.compose(g, candidate) == offer_a:
            return model.compose(offer_b, candidate)
    raise SearchExhausted(f"no secret found within bound {bound}")
