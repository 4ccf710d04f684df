"""Session log IO: JSON lines, one header line per session then one event per line.

A file may hold several sessions back to back; each starts with its own
header line (``"type": "session"``).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Any

from ..errors import MalformedSessionError
from .types import EventKind, Gender, InteractionEvent, Label, ParticipantRecord, SessionLog
from .variants import variant_by_name


def participant_to_dict(record: ParticipantRecord) -> dict[str, Any]:
    return {
        "id": record.id,
        "gender": record.gender.value,
        "native": record.native_spanish_monolingual,
        "lang_fail": record.failed_language_subject,
        "age": record.age,
        "label": record.label.value if record.label is not None else None,
    }


def participant_from_dict(data: dict[str, Any]) -> ParticipantRecord:
    try:
        return ParticipantRecord(
            id=data["id"],
            gender=Gender(data["gender"]),
            native_spanish_monolingual=bool(data["native"]),
            failed_language_subject=bool(data["lang_fail"]),
            age=int(data["age"]),
            label=Label(data["label"]) if data.get("label") is not None else None,
        )
    except (KeyError, ValueError) as exc:
        raise MalformedSessionError(f"bad participant record: {exc}") from None


def event_to_dict(event: InteractionEvent) -> dict[str, Any]:
    out: dict[str, Any] = {
        "type": "event",
        "qid": event.qid,
        "item": event.item_index,
        "t": event.timestamp,
        "kind": event.kind.value,
    }
    if event.payload is not None:
        out["payload"] = event.payload
    return out


def event_from_dict(data: dict[str, Any]) -> InteractionEvent:
    try:
        return InteractionEvent(
            qid=int(data["qid"]),
            item_index=int(data["item"]),
            timestamp=int(data["t"]),
            kind=EventKind(data["kind"]),
            payload=data.get("payload"),
        )
    except (KeyError, ValueError) as exc:
        raise MalformedSessionError(f"bad event record: {exc}") from None


def session_header(log: SessionLog) -> dict[str, Any]:
    return {
        "type": "session",
        "session_id": log.session_id,
        "participant": participant_to_dict(log.participant),
        "variant": log.variant.name,
        "completed": log.completed,
    }


def write_sessions(logs: list[SessionLog], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for log in logs:
            _write_one(log, fh)


def write_session(log: SessionLog, path: str | Path) -> None:
    write_sessions([log], path)


def _write_one(log: SessionLog, fh: IO[str]) -> None:
    fh.write(json.dumps(session_header(log), ensure_ascii=False) + "\n")
    for event in log.events:
        fh.write(json.dumps(event_to_dict(event), ensure_ascii=False) + "\n")


def read_sessions(path: str | Path) -> list[SessionLog]:
    """Parse every session in the file, in order."""
    path = Path(path)
    logs: list[SessionLog] = []
    header: dict[str, Any] | None = None
    events: list[InteractionEvent] = []

    def flush() -> None:
        nonlocal header, events
        if header is None:
            return
        try:
            variant = variant_by_name(header["variant"])
        except Exception as exc:
            raise MalformedSessionError(f"{path}: {exc}") from None
        logs.append(
            SessionLog(
                session_id=header["session_id"],
                participant=participant_from_dict(header["participant"]),
                variant=variant,
                events=tuple(events),
                completed=bool(header.get("completed", False)),
            )
        )
        header, events = None, []

    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedSessionError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            kind = data.get("type")
            if kind == "session":
                flush()
                if "session_id" not in data or "participant" not in data:
                    raise MalformedSessionError(f"{path}:{lineno}: incomplete session header")
                header = data
            elif kind == "event":
                if header is None:
                    raise MalformedSessionError(f"{path}:{lineno}: event before session header")
                events.append(event_from_dict(data))
            else:
                raise MalformedSessionError(f"{path}:{lineno}: unknown record type {kind!r}")
    flush()
    return logs


def read_session(path: str | Path) -> SessionLog:
    """Parse a file expected to contain exactly one session."""
    logs = read_sessions(path)
    if len(logs) != 1:
        raise MalformedSessionError(f"{path}: expected 1 session, found {len(logs)}")
    return logs[0]
