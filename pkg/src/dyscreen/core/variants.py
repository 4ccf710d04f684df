"""Test variants and the feature-vector layout they induce.

A feature vector starts with 4 demographic entries and then one block of 6
interaction measures per question, in ascending question id. The full test
has 32 questions (4 + 6*32 = 196 features); the age-customized variants keep
the same block ordering restricted to their question subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from dyscreen.errors import DataError

N_DEMOGRAPHIC = 4
MEASURES_PER_QUESTION = 6
MEASURE_NAMES = ("clicks", "hits", "misses", "score", "accuracy", "missrate")
N_QUESTIONS = 32


@dataclass(frozen=True)
class AgeVariant:
    """A named question subset; ``feature_count`` is always 4 + 6 * |qids|."""

    name: str
    qids: tuple[int, ...]
    feature_count: int = field(init=False)

    def __post_init__(self):
        if not self.qids:
            raise DataError(f"variant {self.name!r} has no questions")
        if list(self.qids) != sorted(set(self.qids)):
            raise DataError(f"variant {self.name!r} qids must be strictly ascending")
        if self.qids[0] < 1 or self.qids[-1] > N_QUESTIONS:
            raise DataError(f"variant {self.name!r} qids outside 1..{N_QUESTIONS}")
        object.__setattr__(
            self, "feature_count", N_DEMOGRAPHIC + MEASURES_PER_QUESTION * len(self.qids)
        )

    def block(self, qid: int) -> tuple[int, int]:
        """0-based [start, end) slice of the measure block for ``qid``."""
        try:
            rank = self.qids.index(qid)
        except ValueError:
            raise DataError(f"qid {qid} not in variant {self.name!r}") from None
        start = N_DEMOGRAPHIC + MEASURES_PER_QUESTION * rank
        return start, start + MEASURES_PER_QUESTION

    def block_one_based(self, qid: int) -> tuple[int, int]:
        """1-based inclusive feature numbering for ``qid``'s block."""
        start, end = self.block(qid)
        return start + 1, end


FULL = AgeVariant("Full", tuple(range(1, 33)))
YOUNG_7_8 = AgeVariant(
    "Young7_8",
    tuple(range(1, 13)) + tuple(range(14, 18)) + (22, 23, 30),
)
MID_9_11 = AgeVariant(
    "Mid9_11",
    tuple(range(1, 21)) + (22, 23, 24) + (26, 27, 28) + (30,),
)
TEEN_12_17 = AgeVariant(
    "Teen12_17",
    tuple(range(1, 29)) + (30, 31, 32),
)

VARIANTS: dict[str, AgeVariant] = {
    v.name: v for v in (FULL, YOUNG_7_8, MID_9_11, TEEN_12_17)
}

#: Variants a screening session may be assigned to (never Full: live sessions
#: always run the age-customized test).
LIVE_VARIANTS = (YOUNG_7_8.name, MID_9_11.name, TEEN_12_17.name)

MIN_AGE = 7
MAX_AGE = 17


def variant_by_name(name: str) -> AgeVariant:
    try:
        return VARIANTS[name]
    except KeyError:
        raise DataError(f"unknown variant {name!r}; expected one of {sorted(VARIANTS)}") from None


def variant_for_age(age: int) -> AgeVariant:
    """Variant administered to a participant of the given age."""
    if not MIN_AGE <= age <= MAX_AGE:
        raise DataError(f"age {age} outside supported range {MIN_AGE}..{MAX_AGE}")
    if age <= 8:
        return YOUNG_7_8
    if age <= 11:
        return MID_9_11
    return TEEN_12_17
