"""Durable session state: append-only JSON-lines per session plus an index log.

Each session file starts with a header line; every accepted batch is one
line (all-or-nothing append), and finalization writes a result line. A torn
trailing line from a crash is dropped on load; anything else malformed is an
error. Participant identifiers are stored as salted hashes only.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from ..core.session_io import event_from_dict, event_to_dict, participant_from_dict, participant_to_dict
from ..core.types import MAX_SESSION_MS, EventKind, InteractionEvent, ParticipantRecord, SessionLog
from ..core.variants import AgeVariant, variant_by_name, variant_for_age
from ..errors import DyscreenError, MalformedSessionError, SessionStateError

OPEN = "Open"
FINALIZED = "Finalized"
ABANDONED = "Abandoned"


class UnknownSessionError(DyscreenError):
    """No session with that id."""


@dataclass
class StoredSession:
    session_id: str
    participant: ParticipantRecord
    variant: AgeVariant
    created_at: float
    status: str = OPEN
    events: list[InteractionEvent] = field(default_factory=list)
    batch_counts: list[int] = field(default_factory=list)
    result: dict[str, Any] | None = None

    @property
    def next_seq(self) -> int:
        return len(self.batch_counts)

    def to_log(self, completed: bool) -> SessionLog:
        return SessionLog(
            session_id=self.session_id,
            participant=self.participant,
            variant=self.variant,
            events=tuple(self.events),
            completed=completed,
        )


def _append_line(path: Path, doc: dict[str, Any]) -> None:
    line = json.dumps(doc, ensure_ascii=False) + "\n"
    with path.open("a", encoding="utf-8") as fh:
        fh.write(line)
        fh.flush()
        os.fsync(fh.fileno())


class SessionStore:
    """Single-writer-per-session store over flat files."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.sessions_dir = self.data_dir / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.index_path = self.data_dir / "index.jsonl"
        self._salt = self._load_or_create_salt()
        self._registry_lock = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._cache: dict[str, StoredSession] = {}
        self._known: dict[str, str] = {}
        self._load_index()

    def _load_or_create_salt(self) -> str:
        salt_path = self.data_dir / "salt"
        if salt_path.exists():
            return salt_path.read_text().strip()
        salt = secrets.token_hex(16)
        salt_path.write_text(salt + "\n")
        return salt

    def hash_participant_id(self, raw_id: str) -> str:
        return hashlib.sha256((self._salt + raw_id).encode("utf-8")).hexdigest()

    def _load_index(self) -> None:
        if not self.index_path.exists():
            return
        with self.index_path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    doc = json.loads(line)
                except json.JSONDecodeError:
                    continue  # torn trailing index line; session files are authoritative
                sid = doc.get("session_id")
                if sid:
                    self._known[sid] = doc.get("status", OPEN)

    def _session_path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.jsonl"

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    def _index(self, session_id: str, status: str) -> None:
        _append_line(self.index_path, {"session_id": session_id, "status": status})
        self._known[session_id] = status

    def create(self, participant_raw_id: str, participant: ParticipantRecord) -> StoredSession:
        """Open a session; the variant comes from age, the id from a salted hash."""
        hashed = self.hash_participant_id(participant_raw_id)
        record = ParticipantRecord(
            id=hashed,
            gender=participant.gender,
            native_spanish_monolingual=participant.native_spanish_monolingual,
            failed_language_subject=participant.failed_language_subject,
            age=participant.age,
            label=None,
        )
        session = StoredSession(
            session_id=uuid.uuid4().hex,
            participant=record,
            variant=variant_for_age(record.age),
            created_at=time.time(),
        )
        with self._lock_for(session.session_id):
            _append_line(
                self._session_path(session.session_id),
                {
                    "type": "session",
                    "session_id": session.session_id,
                    "participant": participant_to_dict(record),
                    "variant": session.variant.name,
                    "created_at": session.created_at,
                },
            )
            self._index(session.session_id, OPEN)
            self._cache[session.session_id] = session
        return session

    def get(self, session_id: str) -> StoredSession:
        with self._lock_for(session_id):
            return self._get_locked(session_id)

    def _get_locked(self, session_id: str) -> StoredSession:
        if session_id in self._cache:
            return self._cache[session_id]
        path = self._session_path(session_id)
        if not path.exists():
            raise UnknownSessionError(f"unknown session {session_id!r}")
        session = self._read_file(path)
        self._cache[session_id] = session
        return session

    def _read_file(self, path: Path) -> StoredSession:
        lines = path.read_text(encoding="utf-8").splitlines()
        session: StoredSession | None = None
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError:
                if lineno == len(lines):
                    break  # torn trailing line from a crash: drop it
                raise MalformedSessionError(f"{path}:{lineno}: invalid JSON")
            kind = doc.get("type")
            if kind == "session":
                session = StoredSession(
                    session_id=doc["session_id"],
                    participant=participant_from_dict(doc["participant"]),
                    variant=variant_by_name(doc["variant"]),
                    created_at=float(doc.get("created_at", 0.0)),
                )
            elif session is None:
                raise MalformedSessionError(f"{path}:{lineno}: record before header")
            elif kind == "batch":
                events = [event_from_dict(e) for e in doc["events"]]
                session.events.extend(events)
                session.batch_counts.append(len(events))
            elif kind == "finalize":
                session.status = FINALIZED
                session.result = doc["result"]
            elif kind == "status":
                session.status = doc["status"]
            else:
                raise MalformedSessionError(f"{path}:{lineno}: unknown record type {kind!r}")
        if session is None:
            raise MalformedSessionError(f"{path}: no session header")
        return session

    def append(
        self, session_id: str, seq: int, events: list[InteractionEvent]
    ) -> tuple[StoredSession, int, bool]:
        """Validate then durably append one batch; idempotent per (session, seq).

        Returns (session, accepted_count, was_duplicate).
        """
        with self._lock_for(session_id):
            session = self._get_locked(session_id)
            if session.status == FINALIZED:
                raise SessionStateError(f"session {session_id} is finalized")
            if session.status == ABANDONED:
                raise SessionStateError(f"session {session_id} was abandoned")
            if seq < session.next_seq:
                return session, session.batch_counts[seq], True
            if seq > session.next_seq:
                raise SessionStateError(
                    f"batch seq {seq} skips ahead (expected {session.next_seq})"
                )
            candidate = session.events + list(events)
            starts = [e.timestamp for e in candidate if e.kind is EventKind.QUESTION_START]
            ends = [e.timestamp for e in candidate if e.kind is EventKind.QUESTION_END]
            if starts and ends and max(ends) - min(starts) > MAX_SESSION_MS:
                self._mark_abandoned_locked(session)
                raise SessionStateError(
                    f"session {session_id} exceeded the {MAX_SESSION_MS} ms cap; abandoned"
                )
            # Full-log validation before anything is written.
            SessionLog(
                session_id=session.session_id,
                participant=session.participant,
                variant=session.variant,
                events=tuple(candidate),
                completed=False,
            )
            _append_line(
                self._session_path(session_id),
                {"type": "batch", "seq": seq, "events": [event_to_dict(e) for e in events]},
            )
            session.events.extend(events)
            session.batch_counts.append(len(events))
            return session, len(events), False

    def finalize(
        self,
        session_id: str,
        compute: Callable[[SessionLog], dict[str, Any]],
    ) -> tuple[StoredSession, dict[str, Any], bool]:
        """Run compute over the completed log once; replays return the stored result.

        Returns (session, result, was_already_finalized).
        """
        with self._lock_for(session_id):
            session = self._get_locked(session_id)
            if session.status == FINALIZED:
                assert session.result is not None
                return session, session.result, True
            if session.status == ABANDONED:
                raise SessionStateError(f"session {session_id} was abandoned")
            log = session.to_log(completed=True)
            result = compute(log)
            _append_line(
                self._session_path(session_id), {"type": "finalize", "result": result}
            )
            self._index(session_id, FINALIZED)
            session.status = FINALIZED
            session.result = result
            return session, result, False

    def _mark_abandoned_locked(self, session: StoredSession) -> None:
        _append_line(
            self._session_path(session.session_id), {"type": "status", "status": ABANDONED}
        )
        self._index(session.session_id, ABANDONED)
        session.status = ABANDONED

    def mark_abandoned(self, session_id: str) -> None:
        with self._lock_for(session_id):
            session = self._get_locked(session_id)
            if session.status == OPEN:
                self._mark_abandoned_locked(session)

    def session_ids(self, status: str | None = None) -> list[str]:
        ids = sorted(self._known)
        if status is None:
            return ids
        return [sid for sid in ids if self._known[sid] == status]
