import numpy as np
import pytest

from twinprep import formats
from twinprep.errors import MatrixFileError


def test_matrix_round_trip_bit_identical():
    rng = np.random.default_rng(2)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    text = formats.dumps_matrix(m)
    assert text.splitlines()[0] == "# complex-matrix v1"
    assert text.splitlines()[1] == "4"
    back = formats.loads_matrix(text)
    assert np.array_equal(back, m)
    assert formats.dumps_matrix(back) == text


def test_matrix_file_round_trip(tmp_path):
    path = tmp_path / "m.cmx"
    m = np.eye(4) / 4
    formats.write_matrix(path, m)
    assert np.array_equal(formats.read_matrix(path), m)


@pytest.mark.parametrize("text,invariant", [
    ("bogus\n2\n1,0 0,0\n0,0 1,0\n", "header"),
    ("# complex-matrix v1\nx\n", "dimension"),
    ("# complex-matrix v1\n2\n1,0 0,0\n", "row-count"),
    ("# complex-matrix v1\n2\n1,0\n0,0 1,0\n", "column-count"),
    ("# complex-matrix v1\n2\n1,0 nope\n0,0 1,0\n", "entry"),
])
def test_matrix_parse_errors(text, invariant):
    with pytest.raises(MatrixFileError) as excinfo:
        formats.loads_matrix(text)
    assert excinfo.value.invariant == invariant


def test_tradeoff_header_and_round_trip():
    rows = [
        formats.TradeoffRow(0.0, 0.7071067811865476, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0),
        formats.TradeoffRow(1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.001, 0.0, 0.0),
    ]
    text = formats.dumps_tradeoff(rows, comments=["a note", "another"])
    lines = text.splitlines()
    assert lines[0] == "# a note"
    assert lines[2] == formats.TRADEOFF_HEADER
    assert formats.loads_tradeoff(text) == rows


def test_tradeoff_rejects_wrong_header():
    with pytest.raises(ValueError):
        formats.loads_tradeoff("alpha,beta\n0,0\n")
