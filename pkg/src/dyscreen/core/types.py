"""Domain types shared by every stage of the screening pipeline."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from dyscreen.core.variants import (
    MAX_AGE,
    MEASURE_NAMES,
    MIN_AGE,
    AgeVariant,
)
from dyscreen.errors import DataError, MalformedSessionError

#: Hard cap on a session's interaction window, in milliseconds.
MAX_SESSION_MS = 15 * 60 * 1000


class Gender(enum.Enum):
    FEMALE = "Female"
    MALE = "Male"


class Label(enum.Enum):
    DYSLEXIA = "Dyslexia"
    NO_DYSLEXIA = "NoDyslexia"


class EventKind(enum.Enum):
    CLICK_TARGET = "ClickTarget"
    CLICK_DISTRACTOR = "ClickDistractor"
    CLICK_NEUTRAL = "ClickNeutral"
    SUBMIT_TEXT = "SubmitText"
    QUESTION_START = "QuestionStart"
    QUESTION_END = "QuestionEnd"


CLICK_KINDS = frozenset(
    {EventKind.CLICK_TARGET, EventKind.CLICK_DISTRACTOR, EventKind.CLICK_NEUTRAL}
)


@dataclass(frozen=True)
class ParticipantRecord:
    """Demographics plus (for study data) the diagnosis label.

    ``label`` is None for screening-only sessions; training and evaluation
    loaders reject unlabeled records.
    """

    id: str
    gender: Gender
    native_spanish_monolingual: bool
    failed_language_subject: bool
    age: int
    label: Label | None = None

    def __post_init__(self):
        if not MIN_AGE <= self.age <= MAX_AGE:
            raise DataError(
                f"participant {self.id!r}: age {self.age} outside {MIN_AGE}..{MAX_AGE}"
            )

    def demographic_features(self) -> list[float]:
        """[gender, native, lang_fail, age] encoded for the model.

        Female -> 0 / Male -> 1; booleans Yes -> 1 / No -> 0; age raw.
        """
        return [
            0.0 if self.gender is Gender.FEMALE else 1.0,
            1.0 if self.native_spanish_monolingual else 0.0,
            1.0 if self.failed_language_subject else 0.0,
            float(self.age),
        ]


@dataclass(frozen=True)
class InteractionEvent:
    """One raw interaction during a session.

    ``timestamp`` is milliseconds since session start. ``payload`` carries the
    submitted text for SubmitText events and is None otherwise.
    """

    qid: int
    item_index: int
    timestamp: int
    kind: EventKind
    payload: str | None = None

    def __post_init__(self):
        if self.item_index < 0:
            raise DataError(f"event item_index {self.item_index} negative")
        if self.timestamp < 0:
            raise DataError(f"event timestamp {self.timestamp} negative")
        if self.kind is EventKind.SUBMIT_TEXT and self.payload is None:
            raise DataError("SubmitText event requires a payload")


@dataclass(frozen=True)
class SessionLog:
    """Ordered interaction events for one participant's test run."""

    session_id: str
    participant: ParticipantRecord
    variant: AgeVariant
    events: tuple[InteractionEvent, ...]
    completed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        self.validate()

    def validate(self) -> None:
        allowed = set(self.variant.qids)
        prev_ts = 0
        for ev in self.events:
            if ev.qid not in allowed:
                raise MalformedSessionError(
                    f"session {self.session_id}: event qid {ev.qid} outside "
                    f"variant {self.variant.name}"
                )
            if ev.timestamp < prev_ts:
                raise MalformedSessionError(
                    f"session {self.session_id}: timestamps decrease at t={ev.timestamp}"
                )
            prev_ts = ev.timestamp
        span = self._bracket_span()
        if span is not None and span > MAX_SESSION_MS:
            raise MalformedSessionError(
                f"session {self.session_id}: interaction span {span} ms exceeds "
                f"the {MAX_SESSION_MS} ms session cap"
            )

    def _bracket_span(self) -> int | None:
        starts = [e.timestamp for e in self.events if e.kind is EventKind.QUESTION_START]
        ends = [e.timestamp for e in self.events if e.kind is EventKind.QUESTION_END]
        if not starts or not ends:
            return None
        return max(ends) - min(starts)

    def events_for_question(self, qid: int) -> tuple[InteractionEvent, ...]:
        return tuple(e for e in self.events if e.qid == qid)


@dataclass(frozen=True)
class QuestionMeasures:
    """The six per-question performance measures.

    Accuracy and missrate are hits/clicks and misses/clicks with 0/0 defined
    as 0 so the model always receives finite inputs. For click-driven
    questions hits + misses <= clicks (neutral clicks make the inequality
    strict); bare text submissions are graded without contributing clicks.
    """

    qid: int
    clicks: int
    hits: int
    misses: int
    score: int
    accuracy: float
    missrate: float

    @classmethod
    def from_counts(cls, qid: int, clicks: int, hits: int, misses: int, score: int):
        accuracy = hits / clicks if clicks > 0 else 0.0
        missrate = misses / clicks if clicks > 0 else 0.0
        return cls(qid, clicks, hits, misses, score, accuracy, missrate)

    def as_features(self) -> list[float]:
        """Block values in canonical measure order."""
        return [
            float(self.clicks),
            float(self.hits),
            float(self.misses),
            float(self.score),
            self.accuracy,
            self.missrate,
        ]


@dataclass(frozen=True)
class FeatureVector:
    """Numeric input to the model: demographics followed by question blocks."""

    values: np.ndarray
    variant: AgeVariant

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.shape[0] != self.variant.feature_count:
            raise DataError(
                f"feature vector length {values.shape} does not match variant "
                f"{self.variant.name} ({self.variant.feature_count})"
            )
        object.__setattr__(self, "values", values)

    def question_block(self, qid: int) -> np.ndarray:
        start, end = self.variant.block(qid)
        return self.values[start:end]

    def measure(self, qid: int, name: str) -> float:
        start, _ = self.variant.block(qid)
        return float(self.values[start + MEASURE_NAMES.index(name)])


@dataclass
class Dataset:
    """Labeled feature vectors sharing one variant."""

    records: list[tuple[ParticipantRecord, FeatureVector]]
    variant: AgeVariant
    require_labels: bool = True

    def __post_init__(self):
        for participant, vector in self.records:
            if vector.variant is not self.variant and vector.variant.name != self.variant.name:
                raise DataError(
                    f"record {participant.id!r} has variant {vector.variant.name}, "
                    f"dataset is {self.variant.name}"
                )
            if self.require_labels and participant.label is None:
                raise DataError(f"record {participant.id!r} is unlabeled")

    def __len__(self) -> int:
        return len(self.records)

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, y) with y = 1 for the dyslexia class."""
        n = len(self.records)
        X = np.empty((n, self.variant.feature_count), dtype=np.float64)
        y = np.empty(n, dtype=np.int64)
        for i, (participant, vector) in enumerate(self.records):
            X[i] = vector.values
            y[i] = 1 if participant.label is Label.DYSLEXIA else 0
        return X, y

    def labels(self) -> np.ndarray:
        return np.array(
            [1 if p.label is Label.DYSLEXIA else 0 for p, _ in self.records],
            dtype=np.int64,
        )

    def ages(self) -> np.ndarray:
        return np.array([p.age for p, _ in self.records], dtype=np.int64)


def slice_by_age(dataset: Dataset, lo: int, hi: int) -> Dataset:
    """Records with lo <= age <= hi, order preserved. Empty result is legal."""
    if not (MIN_AGE <= lo <= hi <= MAX_AGE):
        raise DataError(f"age slice [{lo}, {hi}] outside {MIN_AGE}..{MAX_AGE}")
    kept = [(p, v) for p, v in dataset.records if lo <= p.age <= hi]
    return Dataset(kept, dataset.variant, require_labels=dataset.require_labels)
