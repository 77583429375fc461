"""
Utility function tests.
"""
import pytest

from app.core.exceptions import SequenceFileError
from app.utils.file_utils import (
    ensure_directory,
    get_file_hash,
    read_array_csv,
    write_array_csv,
    write_csv,
)


def test_get_file_hash(tmp_path):
    """Test file hash calculation."""
    path = tmp_path / "hello.txt"
    path.write_bytes(b"Hello, World!")

    hash_value = get_file_hash(path)
    assert len(hash_value) == 64  # SHA256 produces 64 hex characters
    assert hash_value == "dffd6021bb2bd5b0af676290809ec3a53191dd81c7f70a4b28688a362182986f"


def test_ensure_directory(tmp_path):
    """Test directory creation."""
    test_dir = tmp_path / "a" / "b" / "c"
    assert ensure_directory(test_dir) == test_dir
    assert test_dir.is_dir()

    # Should not raise error if directory already exists
    ensure_directory(test_dir)


def test_write_csv_header_and_floats(tmp_path):
    """Header row first; floats keep full precision."""
    path = write_csv(tmp_path / "out" / "table.csv", ["tau [samples]", "magnitude"], [[0, 0.1], [1, 1 / 3]])
    lines = path.read_text().splitlines()
    assert lines[0] == "tau [samples],magnitude"
    assert lines[1] == "0,0.1"
    assert lines[2] == f"1,{1 / 3!r}"


def test_array_csv_round_trip(tmp_path, base_array_5):
    """Arrays are written one row per line and read back unchanged."""
    path = write_array_csv(tmp_path / "array.csv", base_array_5)
    assert path.read_text().splitlines()[1] == "0,2,4,1,3"
    assert read_array_csv(path) == base_array_5


def test_read_array_csv_missing(tmp_path):
    """Test missing array file."""
    with pytest.raises(SequenceFileError):
        read_array_csv(tmp_path / "absent.csv")


@pytest.mark.parametrize("content", ["0,1,x\n", "", "0,1,2\n0,1\n"])
def test_read_array_csv_malformed(tmp_path, content):
    """Test non-integer, empty and ragged files."""
    path = tmp_path / "bad.csv"
    path.write_text(content)
    with pytest.raises(SequenceFileError):
        read_array_csv(path)
