"""Core domain model: participants, sessions, variants, manifests, flat-file IO."""

from .dataset_io import csv_header, read_dataset, write_dataset
from .manifest import (
    Archetype,
    QuestionManifest,
    QuestionSpec,
    StimulusItem,
    load_manifest,
    manifest_from_json,
    manifest_to_json,
    save_manifest,
)
from .session_io import read_session, read_sessions, write_session, write_sessions
from .types import (
    CLICK_KINDS,
    MAX_SESSION_MS,
    Dataset,
    EventKind,
    FeatureVector,
    Gender,
    InteractionEvent,
    Label,
    ParticipantRecord,
    QuestionMeasures,
    SessionLog,
    slice_by_age,
)
from .variants import (
    FULL,
    LIVE_VARIANTS,
    MAX_AGE,
    MEASURE_NAMES,
    MID_9_11,
    MIN_AGE,
    TEEN_12_17,
    VARIANTS,
    YOUNG_7_8,
    AgeVariant,
    variant_by_name,
    variant_for_age,
)

__all__ = [
    "Archetype",
    "AgeVariant",
    "CLICK_KINDS",
    "Dataset",
    "EventKind",
    "FULL",
    "FeatureVector",
    "Gender",
    "InteractionEvent",
    "LIVE_VARIANTS",
    "Label",
    "MAX_AGE",
    "MAX_SESSION_MS",
    "MEASURE_NAMES",
    "MID_9_11",
    "MIN_AGE",
    "ParticipantRecord",
    "QuestionManifest",
    "QuestionMeasures",
    "QuestionSpec",
    "SessionLog",
    "StimulusItem",
    "TEEN_12_17",
    "VARIANTS",
    "YOUNG_7_8",
    "csv_header",
    "load_manifest",
    "manifest_from_json",
    "manifest_to_json",
    "read_dataset",
    "read_session",
    "read_sessions",
    "save_manifest",
    "slice_by_age",
    "variant_by_name",
    "variant_for_age",
    "write_dataset",
    "write_session",
    "write_sessions",
]
