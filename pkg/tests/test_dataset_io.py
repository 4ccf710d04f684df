import numpy as np
import pytest
from hypothesis import given, strategies as st

from dyscreen.core import (
    FULL,
    YOUNG_7_8,
    Dataset,
    FeatureVector,
    Gender,
    Label,
    csv_header,
    read_dataset,
    write_dataset,
)
from dyscreen.errors import DataError

from conftest import make_participant


def _dataset(rows):
    records = []
    for pid, age, label, fill in rows:
        p = make_participant(pid=pid, age=age, label=label)
        values = np.full(196, fill, dtype=np.float64)
        values[:4] = p.demographic_features()
        records.append((p, FeatureVector(values=values, variant=FULL)))
    return Dataset(records, FULL, require_labels=all(r[2] is not None for r in rows))


def test_header_shape():
    header = csv_header(FULL)
    assert header[:6] == ["id", "label", "gender", "native", "lang_fail", "age"]
    assert len(header) == 6 + 6 * 32
    assert header[6] == "q01_clicks"
    assert header[11] == "q01_missrate"
    assert header[-1] == "q32_missrate"
    assert "q13_clicks" not in csv_header(YOUNG_7_8)


def test_round_trip(tmp_path):
    ds = _dataset(
        [
            ("a", 9, Label.DYSLEXIA, 0.25),
            ("b", 15, Label.NO_DYSLEXIA, 3.0),
        ]
    )
    path = tmp_path / "data.csv"
    write_dataset(ds, path)
    back = read_dataset(path, FULL)
    assert len(back) == 2
    for (p0, v0), (p1, v1) in zip(ds.records, back.records):
        assert p0 == p1
        assert np.array_equal(v0.values, v1.values)


def test_three_row_parse(tmp_path):
    ds = _dataset(
        [
            ("a", 9, Label.DYSLEXIA, 1.0),
            ("b", 10, Label.NO_DYSLEXIA, 2.0),
            ("c", 11, Label.NO_DYSLEXIA, 3.0),
        ]
    )
    path = tmp_path / "data.csv"
    write_dataset(ds, path)
    assert len(read_dataset(path, FULL)) == 3


def test_header_mismatch_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    header = ",".join(csv_header(FULL)[:-1])  # 195 measure columns
    path.write_text(header + "\n")
    with pytest.raises(DataError, match="header"):
        read_dataset(path, FULL)


def test_row_errors_carry_line_numbers(tmp_path):
    ds = _dataset([("a", 9, Label.DYSLEXIA, 1.0), ("b", 10, Label.NO_DYSLEXIA, 2.0)])
    path = tmp_path / "data.csv"
    write_dataset(ds, path)
    lines = path.read_text().splitlines()

    broken = lines[:]
    broken[2] = broken[2].replace("nodys", "maybe")
    path.write_text("\n".join(broken) + "\n")
    with pytest.raises(DataError, match="line 3"):
        read_dataset(path, FULL)

    broken = lines[:]
    broken[1] = broken[1].replace(",9,", ",25,")
    path.write_text("\n".join(broken) + "\n")
    with pytest.raises(DataError, match="line 2"):
        read_dataset(path, FULL)


def test_non_finite_rejected(tmp_path):
    ds = _dataset([("a", 9, Label.DYSLEXIA, 1.0)])
    path = tmp_path / "data.csv"
    write_dataset(ds, path)
    text = path.read_text().replace(",1,1,1", ",nan,1,1", 1)
    path.write_text(text)
    with pytest.raises(DataError):
        read_dataset(path, FULL)


def test_unlabeled_rows(tmp_path):
    ds = _dataset([("a", 9, None, 1.0)])
    path = tmp_path / "data.csv"
    write_dataset(ds, path)
    with pytest.raises(DataError):
        read_dataset(path, FULL)
    back = read_dataset(path, FULL, allow_unlabeled=True)
    assert back.records[0][0].label is None


@given(
    age=st.integers(7, 17),
    gender=st.sampled_from(list(Gender)),
    label=st.sampled_from(list(Label)),
    fills=st.lists(
        st.floats(0, 60, allow_nan=False).map(lambda x: round(x, 6)), min_size=1, max_size=4
    ),
)
def test_round_trip_property(tmp_path_factory, age, gender, label, fills):
    records = []
    for i, fill in enumerate(fills):
        p = make_participant(pid=f"r{i}", gender=gender, age=age, label=label)
        values = np.full(196, fill, dtype=np.float64)
        values[:4] = p.demographic_features()
        records.append((p, FeatureVector(values=values, variant=FULL)))
    ds = Dataset(records, FULL)
    path = tmp_path_factory.mktemp("csv") / "data.csv"
    write_dataset(ds, path)
    back = read_dataset(path, FULL)
    for (p0, v0), (p1, v1) in zip(ds.records, back.records):
        assert p0 == p1
        assert np.array_equal(v0.values, v1.values)
