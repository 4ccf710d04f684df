import numpy as np
import pytest
from hypothesis import settings

from dyscreen.core import Gender, Label, ParticipantRecord, load_manifest

# Kernel calls may hit a one-off JIT compile; never let that fail a deadline.
settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def manifest():
    return load_manifest()


def make_participant(
    pid: str = "p1",
    gender: Gender = Gender.FEMALE,
    native: bool = True,
    lang_fail: bool = False,
    age: int = 10,
    label: Label | None = None,
) -> ParticipantRecord:
    return ParticipantRecord(
        id=pid,
        gender=gender,
        native_spanish_monolingual=native,
        failed_language_subject=lang_fail,
        age=age,
        label=label,
    )


def random_split_instance(rng: np.random.Generator, dyadic: bool = False):
    """Small random (X, y, w) with both classes present.

    ``dyadic`` snaps values and weights to multiples of 1/8 so float and
    rational arithmetic agree exactly.
    """
    n = int(rng.integers(4, 11))
    m = int(rng.integers(1, 5))
    if dyadic:
        X = rng.integers(0, 8, size=(n, m)).astype(np.float64) / 8.0
        w = rng.integers(1, 17, size=n).astype(np.float64) / 8.0
    else:
        X = rng.random((n, m))
        w = rng.uniform(0.25, 2.0, size=n)
    y = rng.integers(0, 2, size=n).astype(np.int64)
    y[0], y[1] = 0, 1
    return X, y, w
