"""Turn raw interaction events into the per-question measures the model consumes.

Six measures per question: Clicks, Hits, Misses, Score, Accuracy, Missrate.
Click events are graded by their kind; submitted text is graded by exact
match against the item's accepted answers after canonicalization.
"""

from __future__ import annotations

from .core.manifest import QuestionManifest, QuestionSpec
from .core.types import (
    Dataset,
    EventKind,
    FeatureVector,
    InteractionEvent,
    QuestionMeasures,
    SessionLog,
)
from .errors import DataError, IncompleteSessionError, MalformedSessionError

import numpy as np


def text_canonicalize(s: str) -> str:
    """Trim, collapse interior whitespace, lowercase. Accents are preserved."""
    return " ".join(s.split()).lower()


def _accepted_answers(spec: QuestionSpec, item_index: int) -> frozenset[str]:
    return frozenset(text_canonicalize(t) for t in spec.items[item_index].targets)


def measures_for_question(
    events: tuple[InteractionEvent, ...] | list[InteractionEvent],
    spec: QuestionSpec,
) -> QuestionMeasures:
    """Grade one question's events.

    Clicks counts every click kind, neutral included. Hits are target clicks
    plus correct submissions; misses are distractor clicks plus incorrect
    submissions. Score is the per-item hit total. Interaction events outside
    the question's Start/End bracket are a recording fault.
    """
    clicks = 0
    misses = 0
    item_hits = [0] * len(spec.items)
    state = "before"
    for event in events:
        if event.qid != spec.qid:
            raise MalformedSessionError(
                f"event for question {event.qid} passed to grader for {spec.qid}"
            )
        if event.kind is EventKind.QUESTION_START:
            if state != "before":
                raise MalformedSessionError(f"question {spec.qid}: duplicate start")
            state = "inside"
        elif event.kind is EventKind.QUESTION_END:
            if state != "inside":
                raise MalformedSessionError(f"question {spec.qid}: end without start")
            state = "after"
        else:
            if state != "inside":
                raise MalformedSessionError(
                    f"question {spec.qid}: event at t={event.timestamp} "
                    "outside the question bracket"
                )
            if event.item_index >= len(spec.items):
                raise MalformedSessionError(
                    f"question {spec.qid}: item index {event.item_index} out of range "
                    f"(question has {len(spec.items)} items)"
                )
            if event.kind is EventKind.CLICK_TARGET:
                clicks += 1
                item_hits[event.item_index] += 1
            elif event.kind is EventKind.CLICK_DISTRACTOR:
                clicks += 1
                misses += 1
            elif event.kind is EventKind.CLICK_NEUTRAL:
                clicks += 1
            elif event.kind is EventKind.SUBMIT_TEXT:
                answers = _accepted_answers(spec, event.item_index)
                if text_canonicalize(event.payload or "") in answers:
                    item_hits[event.item_index] += 1
                else:
                    misses += 1
    if state == "inside":
        raise MalformedSessionError(f"question {spec.qid}: bracket never closed")
    hits = sum(item_hits)
    return QuestionMeasures.from_counts(
        qid=spec.qid, clicks=clicks, hits=hits, misses=misses, score=sum(item_hits)
    )


def extract_features(session: SessionLog, manifest: QuestionManifest) -> FeatureVector:
    """Feature vector for a finalized session: demographics then question blocks."""
    if not session.completed:
        raise IncompleteSessionError(
            f"session {session.session_id!r} is not finalized", missing_qids=[]
        )
    per_question = {qid: session.events_for_question(qid) for qid in session.variant.qids}
    missing = [
        qid
        for qid, evs in per_question.items()
        if not any(e.kind is EventKind.QUESTION_START for e in evs)
        or not any(e.kind is EventKind.QUESTION_END for e in evs)
    ]
    if missing:
        raise IncompleteSessionError(
            f"session {session.session_id!r} missing question brackets", missing_qids=missing
        )
    values = np.empty(session.variant.feature_count, dtype=np.float64)
    values[:4] = session.participant.demographic_features()
    for qid in session.variant.qids:
        start, end = session.variant.block(qid)
        measures = measures_for_question(per_question[qid], manifest.question(qid))
        values[start:end] = measures.as_features()
    return FeatureVector(values=values, variant=session.variant)


def sessions_to_dataset(
    sessions: list[SessionLog],
    manifest: QuestionManifest,
    *,
    require_labels: bool = False,
) -> Dataset:
    """Extract features for a batch of sessions sharing one variant."""
    if not sessions:
        raise DataError("no sessions to extract")
    variant = sessions[0].variant
    for log in sessions[1:]:
        if log.variant.name != variant.name:
            raise DataError(
                f"mixed variants in session batch: {variant.name} vs {log.variant.name}"
            )
    records = [(log.participant, extract_features(log, manifest)) for log in sessions]
    return Dataset(records=records, variant=variant, require_labels=require_labels)
