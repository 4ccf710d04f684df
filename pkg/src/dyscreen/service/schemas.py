"""Request and response bodies for the HTTP API."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field

from ..core.types import EventKind, Gender, InteractionEvent, ParticipantRecord
from ..core.variants import MAX_AGE, MIN_AGE


class ParticipantIn(BaseModel):
    participant_id: str = Field(min_length=1, max_length=256)
    gender: Literal["Female", "Male"]
    native: bool
    lang_fail: bool
    age: int = Field(ge=MIN_AGE, le=MAX_AGE)

    def to_record(self, hashed_id: str) -> ParticipantRecord:
        return ParticipantRecord(
            id=hashed_id,
            gender=Gender(self.gender),
            native_spanish_monolingual=self.native,
            failed_language_subject=self.lang_fail,
            age=self.age,
            label=None,
        )


class SessionCreated(BaseModel):
    session_id: str
    variant: str
    feature_count: int
    question_ids: list[int]


class EventIn(BaseModel):
    qid: int = Field(ge=1)
    item: int = Field(ge=0)
    t: int = Field(ge=0)
    kind: Literal[
        "ClickTarget",
        "ClickDistractor",
        "ClickNeutral",
        "SubmitText",
        "QuestionStart",
        "QuestionEnd",
    ]
    payload: str | None = None

    def to_event(self) -> InteractionEvent:
        return InteractionEvent(
            qid=self.qid,
            item_index=self.item,
            timestamp=self.t,
            kind=EventKind(self.kind),
            payload=self.payload,
        )


class EventBatch(BaseModel):
    seq: int = Field(ge=0)
    events: list[EventIn]


class AppendAck(BaseModel):
    session_id: str
    seq: int
    accepted: int
    duplicate: bool
    total_events: int


class PredictionOut(BaseModel):
    score: float
    flagged: bool
    threshold: float
    model_version: str
    variant: str


class FinalizeResponse(BaseModel):
    session_id: str
    status: str
    prediction: PredictionOut
    feature_vector: list[float]


class SessionStatusOut(BaseModel):
    session_id: str
    status: str
    variant: str
    created_at: float
    event_count: int
    batch_count: int
    prediction: PredictionOut | None = None


class ModelActivated(BaseModel):
    version: str
    variant: str


class ActiveModelInfo(BaseModel):
    version: str
    threshold: float
    n_trees: int


class ActiveModels(BaseModel):
    models: dict[str, ActiveModelInfo | None]


class ErrorBody(BaseModel):
    code: str
    message: str
    details: dict[str, Any] = Field(default_factory=dict)
