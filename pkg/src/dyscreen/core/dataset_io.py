"""Flat-file dataset IO.

CSV layout: ``id,label,gender,native,lang_fail,age`` followed by six measure
columns per question in ascending qid order (``q{NN}_clicks`` through
``q{NN}_missrate``, qid zero-padded to two digits).
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..errors import DataError
from .types import Dataset, FeatureVector, Gender, Label, ParticipantRecord
from .variants import MEASURE_NAMES, AgeVariant

_FIXED_COLUMNS = ("id", "label", "gender", "native", "lang_fail", "age")
_GENDER_IN = {"F": Gender.FEMALE, "M": Gender.MALE}
_GENDER_OUT = {Gender.FEMALE: "F", Gender.MALE: "M"}
_LABEL_IN = {"dys": Label.DYSLEXIA, "nodys": Label.NO_DYSLEXIA}
_LABEL_OUT = {Label.DYSLEXIA: "dys", Label.NO_DYSLEXIA: "nodys"}
_BOOL_IN = {"0": False, "1": True}


def csv_header(variant: AgeVariant) -> list[str]:
    """Column names for ``variant``, in file order."""
    cols = list(_FIXED_COLUMNS)
    for qid in variant.qids:
        cols.extend(f"q{qid:02d}_{name}" for name in MEASURE_NAMES)
    return cols


def _format_number(x: float) -> str:
    # Integral measures print without a trailing ".0"; repr round-trips the rest.
    x = float(x)
    if x == int(x) and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _parse_row(
    row: list[str], variant: AgeVariant, line: int, allow_unlabeled: bool
) -> tuple[ParticipantRecord, FeatureVector]:
    expected = len(_FIXED_COLUMNS) + 6 * len(variant.qids)
    if len(row) != expected:
        raise DataError(f"line {line}: expected {expected} fields, got {len(row)}")
    pid, label_tok, gender_tok, native_tok, fail_tok, age_tok = row[:6]
    if label_tok == "":
        if not allow_unlabeled:
            raise DataError(f"line {line}: missing label")
        label = None
    elif label_tok in _LABEL_IN:
        label = _LABEL_IN[label_tok]
    else:
        raise DataError(f"line {line}: unknown label {label_tok!r}")
    if gender_tok not in _GENDER_IN:
        raise DataError(f"line {line}: unknown gender {gender_tok!r}")
    if native_tok not in _BOOL_IN or fail_tok not in _BOOL_IN:
        raise DataError(f"line {line}: native/lang_fail must be 0 or 1")
    try:
        age = int(age_tok)
    except ValueError:
        raise DataError(f"line {line}: age {age_tok!r} is not an integer") from None
    try:
        record = ParticipantRecord(
            id=pid,
            gender=_GENDER_IN[gender_tok],
            native_spanish_monolingual=_BOOL_IN[native_tok],
            failed_language_subject=_BOOL_IN[fail_tok],
            age=age,
            label=label,
        )
    except DataError as exc:
        raise DataError(f"line {line}: {exc}") from None
    values = np.empty(variant.feature_count, dtype=np.float64)
    values[:4] = record.demographic_features()
    try:
        values[4:] = [float(tok) for tok in row[6:]]
    except ValueError:
        raise DataError(f"line {line}: non-numeric measure value") from None
    if not np.all(np.isfinite(values)):
        raise DataError(f"line {line}: non-finite measure value")
    return record, FeatureVector(values=values, variant=variant)


def read_dataset(
    path: str | Path, variant: AgeVariant, *, allow_unlabeled: bool = False
) -> Dataset:
    """Load a dataset CSV; rows must match ``variant``'s column layout."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        expected = csv_header(variant)
        if header != expected:
            raise DataError(
                f"{path}: header does not match variant {variant.name!r} "
                f"(expected {len(expected)} columns, got {len(header)})"
            )
        records = []
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            records.append(_parse_row(row, variant, line, allow_unlabeled))
    return Dataset(records=records, variant=variant, require_labels=not allow_unlabeled)


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset CSV readable by :func:`read_dataset`."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(csv_header(dataset.variant))
        for record, vector in dataset.records:
            row = [
                record.id,
                _LABEL_OUT[record.label] if record.label is not None else "",
                _GENDER_OUT[record.gender],
                "1" if record.native_spanish_monolingual else "0",
                "1" if record.failed_language_subject else "0",
                str(record.age),
            ]
            row.extend(_format_number(x) for x in vector.values[4:])
            writer.writerow(row)
