"""Question manifest: the data-driven description of the 32 test questions.

The manifest is versioned JSON. Audio is referenced by asset id and resolved
by the frontend against its static asset directory; nothing binary lives
here.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from dyscreen.core.variants import N_QUESTIONS, AgeVariant
from dyscreen.errors import ManifestError

MANIFEST_SCHEMA_VERSION = 1


class Archetype(enum.Enum):
    WHAC_A_MOLE = "WhacAMole"
    AUDIO_CHOICE = "AudioChoice"
    VISUAL_SEARCH_PAIRS = "VisualSearchPairs"
    FILL_MISSING_LETTER = "FillMissingLetter"
    DELETE_EXTRA_LETTER = "DeleteExtraLetter"
    FIND_SENTENCE_ERROR = "FindSentenceError"
    REORDER_LETTERS = "ReorderLetters"
    REORDER_SYLLABLES = "ReorderSyllables"
    SEPARATE_WORDS = "SeparateWords"
    MEMORY_SEQUENCE = "MemorySequence"
    DICTATION = "Dictation"


#: Archetypes whose items must carry at least one distractor.
DISTRACTOR_ARCHETYPES = frozenset(
    {Archetype.WHAC_A_MOLE, Archetype.AUDIO_CHOICE, Archetype.VISUAL_SEARCH_PAIRS}
)

#: Archetypes graded from the final submitted text rather than clicks.
TEXT_ARCHETYPES = frozenset(
    {
        Archetype.DELETE_EXTRA_LETTER,
        Archetype.REORDER_LETTERS,
        Archetype.REORDER_SYLLABLES,
        Archetype.SEPARATE_WORDS,
        Archetype.MEMORY_SEQUENCE,
        Archetype.DICTATION,
    }
)

#: Cognitive-indicator tags a question may carry.
INDICATOR_TAGS = frozenset(
    {
        "AlphabeticAwareness",
        "PhonologicalAwareness",
        "SyllabicAwareness",
        "LexicalAwareness",
        "MorphologicalAwareness",
        "SyntacticAwareness",
        "SemanticAwareness",
        "OrthographicAwareness",
        "VisualWorkingMemory",
        "AuditoryWorkingMemory",
        "SequentialAuditoryWorkingMemory",
        "SequentialVisualWorkingMemory",
        "ActivationAttention",
        "SustainedAttention",
        "SimultaneousAttention",
        "VisualDiscriminationCategorization",
        "AuditoryDiscriminationCategorization",
    }
)


@dataclass(frozen=True)
class StimulusItem:
    """One exercise item: what is shown/played and how answers grade.

    ``targets`` are the accepted answers (clickable target entities for click
    questions, accepted submissions for text questions). ``display`` is the
    visual stimulus, ``display_ms`` a display duration for timed stimuli
    (memory sequences).
    """

    targets: tuple[str, ...]
    distractors: tuple[str, ...] = ()
    prompt_audio: str | None = None
    display: str | None = None
    display_ms: int | None = None

    def __post_init__(self):
        if not self.targets:
            raise ManifestError("stimulus item has no targets")


@dataclass(frozen=True)
class QuestionSpec:
    qid: int
    archetype: Archetype
    items: tuple[StimulusItem, ...]
    indicators: frozenset[str]
    time_limit_s: int | None = None

    def __post_init__(self):
        if not 1 <= self.qid <= N_QUESTIONS:
            raise ManifestError(f"qid {self.qid} outside 1..{N_QUESTIONS}")
        if not self.items:
            raise ManifestError(f"Q{self.qid}: no stimulus items")
        if not self.indicators:
            raise ManifestError(f"Q{self.qid}: indicators must be non-empty")
        unknown = self.indicators - INDICATOR_TAGS
        if unknown:
            raise ManifestError(f"Q{self.qid}: unknown indicators {sorted(unknown)}")
        if self.archetype in DISTRACTOR_ARCHETYPES:
            for i, item in enumerate(self.items):
                if not item.distractors:
                    raise ManifestError(
                        f"Q{self.qid} item {i}: {self.archetype.value} requires distractors"
                    )

    @property
    def item_count(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class QuestionManifest:
    version: int
    questions: dict[int, QuestionSpec] = field(default_factory=dict)

    def __post_init__(self):
        qids = sorted(self.questions)
        if qids != list(range(1, N_QUESTIONS + 1)):
            raise ManifestError(
                f"manifest must define qids 1..{N_QUESTIONS} exactly once, got {qids}"
            )
        for qid, spec in self.questions.items():
            if spec.qid != qid:
                raise ManifestError(f"manifest key {qid} maps to spec for Q{spec.qid}")

    def question(self, qid: int) -> QuestionSpec:
        try:
            return self.questions[qid]
        except KeyError:
            raise ManifestError(f"manifest has no Q{qid}") from None

    def for_variant(self, variant: AgeVariant) -> list[QuestionSpec]:
        return [self.questions[q] for q in variant.qids]


def _item_from_json(obj: dict) -> StimulusItem:
    return StimulusItem(
        targets=tuple(obj["targets"]),
        distractors=tuple(obj.get("distractors", ())),
        prompt_audio=obj.get("prompt_audio"),
        display=obj.get("display"),
        display_ms=obj.get("display_ms"),
    )


def _item_to_json(item: StimulusItem) -> dict:
    out: dict = {"targets": list(item.targets)}
    if item.distractors:
        out["distractors"] = list(item.distractors)
    if item.prompt_audio is not None:
        out["prompt_audio"] = item.prompt_audio
    if item.display is not None:
        out["display"] = item.display
    if item.display_ms is not None:
        out["display_ms"] = item.display_ms
    return out


def manifest_from_json(doc: dict) -> QuestionManifest:
    try:
        version = int(doc["version"])
        raw_questions = doc["questions"]
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"manifest missing required field: {exc}") from None
    if version != MANIFEST_SCHEMA_VERSION:
        raise ManifestError(
            f"unsupported manifest version {version}, expected {MANIFEST_SCHEMA_VERSION}"
        )
    questions: dict[int, QuestionSpec] = {}
    for raw in raw_questions:
        try:
            spec = QuestionSpec(
                qid=int(raw["qid"]),
                archetype=Archetype(raw["archetype"]),
                items=tuple(_item_from_json(it) for it in raw["items"]),
                indicators=frozenset(raw["indicators"]),
                time_limit_s=raw.get("time_limit_s"),
            )
        except (KeyError, ValueError) as exc:
            raise ManifestError(f"bad question entry {raw.get('qid')}: {exc}") from None
        if spec.qid in questions:
            raise ManifestError(f"duplicate qid {spec.qid} in manifest")
        questions[spec.qid] = spec
    return QuestionManifest(version=version, questions=questions)


def manifest_to_json(manifest: QuestionManifest) -> dict:
    return {
        "version": manifest.version,
        "questions": [
            {
                "qid": spec.qid,
                "archetype": spec.archetype.value,
                "time_limit_s": spec.time_limit_s,
                "indicators": sorted(spec.indicators),
                "items": [_item_to_json(it) for it in spec.items],
            }
            for _, spec in sorted(manifest.questions.items())
        ],
    }


def load_manifest(path: str | Path | None = None) -> QuestionManifest:
    """Load a manifest file, or the packaged default when ``path`` is None."""
    if path is None:
        text = (resources.files("dyscreen.data") / "manifest.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from None
    return manifest_from_json(doc)


def save_manifest(manifest: QuestionManifest, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(manifest_to_json(manifest), ensure_ascii=False, indent=2) + "\n",
        "utf-8",
    )
