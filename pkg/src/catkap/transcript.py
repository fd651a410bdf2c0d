"""Transcript documents: the canonical JSON record of one session.

A transcript is exactly what a passive observer of the channel can
write down: the public session header, every message in send order, and
an outcome block.  Keys and seeds appear only when disclosure was
requested.  Serialization is canonical (sorted keys, fixed separators),
so equal documents have equal bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .errors import DecodeError
from .protocols import Message, SessionConfig

SCHEMA_VERSION = 1

REDACTED = "redacted"


@dataclass
class Transcript:
    header: dict[str, Any]
    messages: list[Message]
    outcome: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "header": self.header,
            "messages": [m.to_dict() for m in self.messages],
            "outcome": self.outcome,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "Transcript":
        try:
            return cls(
                header=dict(doc["header"]),
                messages=[Message.from_dict(m) for m in doc["messages"]],
                outcome=dict(doc.get("outcome") or {}),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"malformed transcript document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DecodeError(f"transcript is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("version") != SCHEMA_VERSION:
            raise DecodeError("unsupported or missing transcript version")
        return cls.from_dict(doc)


def build_header(config: SessionConfig, public: dict, extra: dict | None = None) -> dict:
    wire = config.wire_config()
    header = {
        "protocol": wire.protocol,
        "instantiation": wire.instantiation,
        "params": dict(wire.params),
        "public": dict(public),
        "parties": list(wire.party_names()),
        "session": wire.session_id(),
        "delivery": wire.delivery,
    }
    if extra:
        header.update(extra)
    if wire.protocol == "multi":
        header["count"] = wire.parties
    if wire.disclose_seeds:
        header["seeds"] = list(wire.seeds)
        header["setup_seed"] = wire.setup_seed
        header["delivery_seed"] = wire.delivery_seed
    return header


def build_outcome(keys: dict[str, str], agreement: bool, disclose: bool) -> dict:
    return {
        "agreement": agreement,
        "keys": dict(keys) if disclose else REDACTED,
    }


def config_from_header(header: dict, keys_disclosed: bool) -> SessionConfig | None:
    """Rebuild a runnable SessionConfig from a seeds-disclosing header."""
    if "seeds" not in header:
        return None
    return SessionConfig(
        protocol=header["protocol"],
        instantiation=header["instantiation"],
        params=dict(header["params"]),
        seeds=tuple(int(s) for s in header["seeds"]),
        setup_seed=int(header.get("setup_seed", 0)),
        parties=int(header.get("count", 2)),
        dims=tuple(header.get("dims", (2, 2))),
        degree=int(header.get("degree", 1)),
        coeff_range=tuple(header.get("coeff_range", (0, 7))),
        reduce_to_base=bool(header.get("reduce", False)),
        delivery=header.get("delivery", "in-order"),
        delivery_seed=int(header.get("delivery_seed", 0)),
        disclose_keys=keys_disclosed,
        disclose_seeds=True,
    )
