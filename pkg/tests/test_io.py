import json

import numpy as np
import pytest

from hypqec import css
from hypqec.errors import IoError
from hypqec.finegrain import fine_grained_code
from hypqec.io import (
    ResultRecord,
    append_results,
    code_to_json,
    load_code,
    read_results,
    save_code,
)

from helpers import toric_complex


@pytest.fixture(scope="module")
def h32(code_factory):
    code = code_factory(8, 96, "H32")
    if code.d_x is None:
        code.d_x, code.d_z = css.distance(code)
    return code


def test_code_json_key_order(h32):
    doc = code_to_json(h32)
    assert list(doc.keys()) == [
        "name", "family", "n", "k", "d_x", "d_z", "h_x", "h_z",
        "logical_x", "logical_z", "edge_colors", "complex", "coords",
        "provenance",
    ]
    assert doc["family"] == {"p": 8, "q": 3}
    assert set(doc["complex"]) == {"edge_endpoints", "face_boundary", "face_colors"}


def test_code_roundtrip(tmp_path, h32):
    path = str(tmp_path / "h32.json")
    save_code(h32, path)
    loaded = load_code(path)
    assert (loaded.name, loaded.n, loaded.k) == (h32.name, h32.n, h32.k)
    assert (loaded.d_x, loaded.d_z) == (h32.d_x, h32.d_z)
    assert np.array_equal(loaded.h_x.to_dense(), h32.h_x.to_dense())
    assert np.array_equal(loaded.h_z.to_dense(), h32.h_z.to_dense())
    assert loaded.edge_colors.color == h32.edge_colors.color
    assert css.distance(loaded) == (h32.d_x, h32.d_z)


def test_loaded_code_supports_subdivision(tmp_path, h32):
    path = str(tmp_path / "h32.json")
    save_code(h32, path)
    loaded = load_code(path)
    fg_direct = fine_grained_code(h32, 2)
    fg_loaded = fine_grained_code(loaded, 2)
    assert (fg_loaded.n, fg_loaded.k) == (fg_direct.n, fg_direct.k)
    assert css.distance(fg_loaded) == css.distance(fg_direct)


def test_toric_code_roundtrip(tmp_path):
    code = css.from_complex(toric_complex(3, 3), None, "toric33")
    code.d_x, code.d_z = css.distance(code)
    path = str(tmp_path / "t.json")
    save_code(code, path)
    loaded = load_code(path)
    assert (loaded.n, loaded.k) == (code.n, code.k)
    assert loaded.edge_colors is None


def test_load_missing_file():
    with pytest.raises(IoError):
        load_code("/nonexistent/code.json")


def test_result_record_roundtrip_and_key_order():
    rec = ResultRecord(
        code="H32", noise="pauli", p=0.003, shots=2000, rounds=3,
        basis=["Z", "X"], fails_any=17, per_logical=[3, 2, 4, 1, 5, 2],
        seed=99,
    )
    line = rec.to_line()
    assert list(json.loads(line).keys()) == [
        "code", "noise", "p", "shots", "rounds", "basis", "fails_any",
        "per_logical", "seed", "wall_time",
    ]
    back = ResultRecord.from_line(line)
    assert back == rec


def test_results_append_and_read(tmp_path):
    path = str(tmp_path / "r.jsonl")
    r1 = ResultRecord("A", "pauli", 0.001, 10, 2, ["Z", "X"], 1, [1], 5)
    r2 = ResultRecord("A", "pauli", 0.002, 10, 2, ["Z", "X"], 3, [3], 6)
    append_results(path, [r1])
    append_results(path, [r2])
    got = read_results(path)
    assert got == [r1, r2]
    append_results(path, [])
    assert read_results(path) == [r1, r2]


def test_results_corrupt_file(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text("{not json\n")
    with pytest.raises(IoError):
        read_results(str(path))
