"""Opaque bearer tokens, each bound to one participant role on one auction.

Tokens are pre-distributed (minted by the operator); there is no
self-registration.  A guest token can never escalate: the binding is
immutable and single-auction scoped.
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass
from pathlib import Path

from ..errors import Unauthorized
from ..visibility import Role, RoleKind

TOKENS_FILE = "tokens.json"


@dataclass(frozen=True)
class Credential:
    token: str
    participant_id: str
    auction_id: str
    role: Role


class TokenStore:
    """tokens.json-backed token registry; safe for concurrent lookups."""

    def __init__(self, data_dir: Path):
        self._path = Path(data_dir) / TOKENS_FILE
        self._lock = threading.Lock()
        self._by_token: dict[str, Credential] = {}
        if self._path.exists():
            for token, entry in json.loads(self._path.read_text()).items():
                self._by_token[token] = Credential(
                    token=token,
                    participant_id=entry["participant_id"],
                    auction_id=entry["auction_id"],
                    role=Role(RoleKind(entry["role"]), entry["participant_id"]),
                )

    def mint(self, auction_id: str, participant_id: str, role: RoleKind) -> Credential:
        token = secrets.token_urlsafe(24)
        cred = Credential(
            token=token,
            participant_id=participant_id,
            auction_id=auction_id,
            role=Role(role, participant_id),
        )
        with self._lock:
            self._by_token[token] = cred
            self._persist()
        return cred

    def resolve(self, token: str | None, auction_id: str | None = None) -> Credential:
        if not token:
            raise Unauthorized("missing token")
        cred = self._by_token.get(token)
        if cred is None:
            raise Unauthorized("unknown token")
        if auction_id is not None and cred.auction_id != auction_id:
            raise Unauthorized("token bound to a different auction")
        return cred

    def tokens_for(self, auction_id: str) -> list[Credential]:
        return [c for c in self._by_token.values() if c.auction_id == auction_id]

    def _persist(self) -> None:
        self._path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            c.token: {
                "participant_id": c.participant_id,
                "auction_id": c.auction_id,
                "role": c.role.kind.value,
            }
            for c in self._by_token.values()
        }
        tmp = self._path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, indent=2))
        tmp.replace(self._path)
