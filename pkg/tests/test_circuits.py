import re

import numpy as np
import pytest

from hypqec import css
from hypqec.circuits import Circuit, Layer, build_memory_circuit, schedule_layers
from hypqec.errors import ScheduleConflict
from hypqec.sim import sample_pauli

from helpers import toric_complex


@pytest.fixture(scope="module")
def h32(code_factory):
    return code_factory(8, 96, "H32")


@pytest.fixture(scope="module")
def toric_code():
    return css.from_complex(toric_complex(3, 3), None, "toric33")


def test_cx_count_per_round(h32):
    # 3V + pF = 96 + 96 for {8,3} with V=32, F=12
    circuit, _ = build_memory_circuit(h32, "Z", 3)
    assert circuit.cx_count() == 3 * 192


def test_layer_count_bounds(h32):
    z_layers, x_layers = schedule_layers(h32)
    assert len(z_layers) == 6
    assert len(x_layers) <= 9
    # every edge appears once per endpoint in the z plan
    seen = {}
    for layer in z_layers:
        for e, v in layer:
            seen[(e, v)] = seen.get((e, v), 0) + 1
    assert all(count == 1 for count in seen.values())
    assert len(seen) == 2 * h32.n


def test_disjoint_stabilizers_coscheduled():
    code = css.from_complex(toric_complex(4, 4), None, "toric44")
    _, x_layers = schedule_layers(code)
    # 16 weight-4 faces over 32 edges cannot use more than weight+1 layers,
    # so some layer must hold several face CXs at once
    assert any(len(layer) > 1 for layer in x_layers)
    assert len(x_layers) <= 5


def test_dump_format(toric_code):
    circuit, _ = build_memory_circuit(toric_code, "Z", 1)
    text = circuit.dump()
    line = re.compile(
        r"^L\d+: ((R|H|M) \d+( \d+)*|CX \d+>\d+(; CX \d+>\d+)*)$"
    )
    for row in text.strip().split("\n"):
        assert line.match(row), row


def test_toric_detector_count_t1(toric_code):
    # T=1, Z-memory: 9 first-round anchors + 9 final-reconstruction checks
    _, dmap = build_memory_circuit(toric_code, "Z", 1)
    assert len(dmap.detectors) == 18
    assert dmap.detector_type == ["v"] * 18
    assert len(dmap.observables) == toric_code.k


def test_detector_count_general(h32):
    T = 3
    for basis in ("Z", "X"):
        _, dmap = build_memory_circuit(h32, basis, T)
        nv, nf = 32, 12
        n_mem = nv if basis == "Z" else nf
        n_other = nf if basis == "Z" else nv
        expected = n_mem + (T - 1) * n_mem + (T - 1) * n_other + n_mem
        assert len(dmap.detectors) == expected


def test_zero_noise_silence(h32, toric_code):
    for code in (h32, toric_code):
        for basis in ("Z", "X"):
            circuit, dmap = build_memory_circuit(code, basis, 2)
            batch = sample_pauli(circuit, dmap, 0.0, 2000, 11)
            assert not batch.detector_bits.any()
            assert not batch.observable_bits.any()


def test_construction_deterministic(h32):
    c1, _ = build_memory_circuit(h32, "Z", 2)
    c2, _ = build_memory_circuit(h32, "Z", 2)
    assert c1.dump() == c2.dump()


def test_schedule_conflict_detected():
    with pytest.raises(ScheduleConflict):
        Circuit(4, 2, [Layer("cx", [(0, 1), (1, 2)])], rounds=1)
    with pytest.raises(ScheduleConflict):
        Circuit(4, 2, [Layer("measure", [0, 0])], rounds=1)


def test_x_basis_adds_basis_change(h32):
    cz, _ = build_memory_circuit(h32, "Z", 1)
    cx, _ = build_memory_circuit(h32, "X", 1)
    h_z = sum(1 for l in cz.layers if l.kind == "h")
    h_x = sum(1 for l in cx.layers if l.kind == "h")
    assert h_x == h_z + 2  # transversal basis change at start and end


def test_t_validation(h32):
    with pytest.raises(ValueError):
        build_memory_circuit(h32, "Z", 0)
    with pytest.raises(ValueError):
        build_memory_circuit(h32, "Y", 1)
