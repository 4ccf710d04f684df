"""Synthetic participants, feature sets, and raw event streams for harness runs.

The class-conditional generator shifts per-question hit probability down by
``separation`` for the positive class; separation 0 makes the classes
indistinguishable, 0.4 makes their hit-probability supports disjoint.
"""

from __future__ import annotations

import numpy as np

from ..core.manifest import TEXT_ARCHETYPES, QuestionManifest
from ..core.types import (
    Dataset,
    EventKind,
    FeatureVector,
    Gender,
    InteractionEvent,
    Label,
    ParticipantRecord,
    SessionLog,
)
from ..core.variants import FULL, AgeVariant
from ..errors import DataError

_AGE_RANGE = {
    "Full": (7, 17),
    "Young7_8": (7, 8),
    "Mid9_11": (9, 11),
    "Teen12_17": (12, 17),
}


def estimate_prevalence(flag_rate: float, take_rate: float, tp_share: float = 1.0) -> float:
    """Population prevalence implied by screening uptake: flag x take x tp share."""
    for name, rate in (("flag_rate", flag_rate), ("take_rate", take_rate), ("tp_share", tp_share)):
        if not 0.0 <= rate <= 1.0:
            raise DataError(f"{name} {rate} outside [0, 1]")
    return flag_rate * take_rate * tp_share


def _random_participant(
    rng: np.random.Generator, variant: AgeVariant, pid: str, label: Label | None
) -> ParticipantRecord:
    lo, hi = _AGE_RANGE[variant.name]
    return ParticipantRecord(
        id=pid,
        gender=Gender.MALE if rng.random() < 0.5 else Gender.FEMALE,
        native_spanish_monolingual=bool(rng.random() < 0.9),
        failed_language_subject=bool(rng.random() < 0.3),
        age=int(rng.integers(lo, hi + 1)),
        label=label,
    )


def synth_generate(
    n: int,
    prevalence: float,
    separation: float,
    seed: int,
    variant: AgeVariant = FULL,
) -> Dataset:
    """Deterministic labeled dataset with exactly round(n * prevalence) positives."""
    if n < 10:
        raise DataError(f"n must be >= 10, got {n}")
    if not 0.0 < prevalence < 1.0:
        raise DataError(f"prevalence {prevalence} outside (0, 1)")
    if not 0.0 <= separation <= 1.0:
        raise DataError(f"separation {separation} outside [0, 1]")
    rng = np.random.default_rng(seed)
    n_pos = int(np.floor(n * prevalence + 0.5))
    if n_pos == 0 or n_pos == n:
        raise DataError("prevalence rounds to a single-class dataset")
    labels = np.zeros(n, dtype=np.int64)
    labels[rng.permutation(n)[:n_pos]] = 1

    records = []
    width = len(str(n))
    for i in range(n):
        label = Label.DYSLEXIA if labels[i] == 1 else Label.NO_DYSLEXIA
        participant = _random_participant(rng, variant, f"s{i:0{width}d}", label)
        values = np.empty(variant.feature_count, dtype=np.float64)
        values[:4] = participant.demographic_features()
        for qid in variant.qids:
            start, _ = variant.block(qid)
            acc = rng.uniform(0.75, 0.95)
            if labels[i] == 1:
                acc = max(0.0, acc - separation)
            clicks = int(6 + rng.binomial(18, 0.5))
            hits = int(rng.binomial(clicks, acc))
            misses = clicks - hits
            values[start : start + 6] = [
                clicks,
                hits,
                misses,
                hits,
                hits / clicks,
                misses / clicks,
            ]
        records.append((participant, FeatureVector(values=values, variant=variant)))
    return Dataset(records, variant)


_SUBMIT_JITTER = ("{}", " {}", "{} ", "{}  ")


def synth_session(
    seed: int,
    manifest: QuestionManifest,
    variant: AgeVariant = FULL,
    participant: ParticipantRecord | None = None,
) -> SessionLog:
    """One randomized completed session walking every question of the variant.

    Click questions get random target/distractor/neutral clicks; text
    questions get submissions (each preceded by the submit-button click,
    recorded as a neutral click) with whitespace/case jitter on correct
    answers. Event counts and correctness are random but the stream always
    satisfies the session-structure invariants.
    """
    rng = np.random.default_rng(seed)
    if participant is None:
        participant = _random_participant(rng, variant, f"synth{seed}", None)
    events: list[InteractionEvent] = []
    t = int(rng.integers(0, 500))

    def step() -> int:
        nonlocal t
        t += int(rng.integers(10, 600))
        return t

    for qid in variant.qids:
        spec = manifest.question(qid)
        events.append(InteractionEvent(qid, 0, step(), EventKind.QUESTION_START))
        if spec.archetype in TEXT_ARCHETYPES:
            for _ in range(int(rng.integers(0, 4))):
                item_index = int(rng.integers(0, len(spec.items)))
                item = spec.items[item_index]
                if rng.random() < 0.7:
                    text = _SUBMIT_JITTER[int(rng.integers(0, len(_SUBMIT_JITTER)))].format(
                        item.targets[int(rng.integers(0, len(item.targets)))]
                    )
                    if rng.random() < 0.3:
                        text = text.upper()
                else:
                    text = "qqqzz"
                when = step()
                events.append(InteractionEvent(qid, item_index, when, EventKind.CLICK_NEUTRAL))
                events.append(
                    InteractionEvent(qid, item_index, when, EventKind.SUBMIT_TEXT, payload=text)
                )
        else:
            for _ in range(int(rng.integers(0, 9))):
                item_index = int(rng.integers(0, len(spec.items)))
                roll = rng.random()
                if roll < 0.5:
                    kind = EventKind.CLICK_TARGET
                elif roll < 0.85:
                    kind = EventKind.CLICK_DISTRACTOR
                else:
                    kind = EventKind.CLICK_NEUTRAL
                events.append(InteractionEvent(qid, item_index, step(), kind))
        events.append(InteractionEvent(qid, 0, step(), EventKind.QUESTION_END))

    return SessionLog(
        session_id=f"synthsession{seed}",
        participant=participant,
        variant=variant,
        events=tuple(events),
        completed=True,
    )


