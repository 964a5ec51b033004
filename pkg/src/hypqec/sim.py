"""Vectorized Pauli-frame sampling of extraction circuits.

Frames are (x, z) uint8 arrays of shape (shots, qubits) propagated through
Clifford layers; noise draws are chunked with fixed chunk size and per-chunk
seeds derived from (master seed, chunk index), so results are byte-identical
regardless of how shots are distributed over threads or calls.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, DetectorMap

CHUNK = 4096


@dataclass
class ShotBatch:
    shots: int
    detector_bits: np.ndarray  # (shots, n_detectors) uint8
    observable_bits: np.ndarray  # (shots, k) uint8
    master_seed: int
    erasure_records: list[np.ndarray] | None = None  # per-shot erased gate ids


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([int(seed) & (2**64 - 1), chunk_index])
    )


def cx_gates(circuit: Circuit) -> list[tuple[int, int, int, int]]:
    """(gate_id, layer_index, control, target) for every CX in the circuit."""
    out = []
    gid = 0
    for li, layer in enumerate(circuit.layers):
        if layer.kind == "cx":
            for c, t in layer.ops:
                out.append((gid, li, c, t))
                gid += 1
    return out


def _measure_columns(circuit: Circuit) -> list[tuple[int, list[int], bool]]:
    """(layer_index, measurement indices, noisy flag) per measure layer."""
    out = []
    base = 0
    for li, layer in enumerate(circuit.layers):
        if layer.kind == "measure":
            out.append((li, list(range(base, base + len(layer.ops))), layer.noisy))
            base += len(layer.ops)
    return out


def _propagate(
    circuit: Circuit,
    shots: int,
    gate_noise=None,
    meas_noise=None,
    inject_after: dict | None = None,
):
    """Run frames through the circuit; returns measurement bits (shots, M).

    gate_noise(layer_index, controls, targets, fx, fz) mutates frames after a
    noisy CX layer; meas_noise(layer_index, bits) mutates recorded outcomes of
    a noisy measure layer; inject_after maps layer index -> (shot_idx, qubit,
    xbit, zbit) arrays XORed into the frames after that layer.
    """
    fx = np.zeros((shots, circuit.n_qubits), dtype=np.uint8)
    fz = np.zeros((shots, circuit.n_qubits), dtype=np.uint8)
    meas = np.zeros((shots, circuit.n_measurements), dtype=np.uint8)
    mcursor = 0
    for li, layer in enumerate(circuit.layers):
        if layer.kind == "reset":
            qs = layer.ops
            fx[:, qs] = 0
            fz[:, qs] = 0
        elif layer.kind == "h":
            qs = layer.ops
            tmp = fx[:, qs].copy()
            fx[:, qs] = fz[:, qs]
            fz[:, qs] = tmp
        elif layer.kind == "cx":
            cs = [c for c, _ in layer.ops]
            ts = [t for _, t in layer.ops]
            fx[:, ts] ^= fx[:, cs]
            fz[:, cs] ^= fz[:, ts]
            if layer.noisy and gate_noise is not None:
                gate_noise(li, cs, ts, fx, fz)
        elif layer.kind == "measure":
            qs = layer.ops
            cols = slice(mcursor, mcursor + len(qs))
            meas[:, cols] = fx[:, qs]
            if layer.noisy and meas_noise is not None:
                meas_noise(li, meas[:, cols])
            mcursor += len(qs)
        if inject_after and li in inject_after:
            si, qi, xb, zb = inject_after[li]
            np.bitwise_xor.at(fx, (si, qi), xb)
            np.bitwise_xor.at(fz, (si, qi), zb)
    return meas


def evaluate_detectors(
    dmap: DetectorMap, meas: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    shots = meas.shape[0]
    det = np.zeros((shots, len(dmap.detectors)), dtype=np.uint8)
    for d, cols in enumerate(dmap.detectors):
        for c in cols:
            det[:, d] ^= meas[:, c]
    obs = np.zeros((shots, len(dmap.observables)), dtype=np.uint8)
    for o, cols in enumerate(dmap.observables):
        for c in cols:
            obs[:, o] ^= meas[:, c]
    return det, obs


def sample_pauli(
    circuit: Circuit, dmap: DetectorMap, p: float, shots: int, seed: int
) -> ShotBatch:
    """Two-qubit depolarizing after each CX (p/15 each) + measurement flips."""
    dets, obss = [], []
    done = 0
    chunk_index = 0
    while done < shots:
        m = min(CHUNK, shots - done)
        rng = _chunk_rng(seed, chunk_index)

        def gate_noise(li, cs, ts, fx, fz):
            draw = rng.random((m, len(cs)))
            which = rng.integers(1, 16, size=(m, len(cs)), dtype=np.uint8)
            which[draw >= p] = 0
            fx[:, cs] ^= (which >> 3) & 1
            fz[:, cs] ^= (which >> 2) & 1
            fx[:, ts] ^= (which >> 1) & 1
            fz[:, ts] ^= which & 1

        def meas_noise(li, bits):
            bits ^= (rng.random(bits.shape) < p).astype(np.uint8)

        meas = _propagate(circuit, m, gate_noise, meas_noise)
        d, o = evaluate_detectors(dmap, meas)
        dets.append(d)
        obss.append(o)
        done += m
        chunk_index += 1
    return ShotBatch(shots, np.vstack(dets), np.vstack(obss), seed)


def sample_erasure(
    circuit: Circuit, dmap: DetectorMap, p_e: float, shots: int, seed: int
) -> ShotBatch:
    """Each CX erased w.p. p_e; erased gates apply a uniform two-qubit Pauli.

    Everything else is noiseless.  Per-shot erased gate ids are recorded for
    the aware decoder.
    """
    gates = cx_gates(circuit)
    n_gates = len(gates)
    dets, obss, records = [], [], []
    done = 0
    chunk_index = 0
    while done < shots:
        m = min(CHUNK, shots - done)
        rng = _chunk_rng(seed, chunk_index)
        erased = rng.random((m, n_gates)) < p_e
        pauli = rng.integers(0, 16, size=(m, n_gates), dtype=np.uint8)
        pauli[~erased] = 0
        gid_by_layer: dict[int, list[tuple[int, int, int]]] = {}
        for gid, li, c, t in gates:
            gid_by_layer.setdefault(li, []).append((gid, c, t))

        def gate_noise(li, cs, ts, fx, fz):
            trip = gid_by_layer[li]
            gids = [g for g, _, _ in trip]
            which = pauli[:, gids]
            fx[:, cs] ^= (which >> 3) & 1
            fz[:, cs] ^= (which >> 2) & 1
            fx[:, ts] ^= (which >> 1) & 1
            fz[:, ts] ^= which & 1

        meas = _propagate(circuit, m, gate_noise, None)
        d, o = evaluate_detectors(dmap, meas)
        dets.append(d)
        obss.append(o)
        for s in range(m):
            records.append(np.flatnonzero(erased[s]))
        done += m
        chunk_index += 1
    return ShotBatch(shots, np.vstack(dets), np.vstack(obss), seed, records)


def inject_mechanisms(
    circuit: Circuit, dmap: DetectorMap, injections: list
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic signatures of candidate error mechanisms.

    Each injection is either ("gate", layer_index, control, target, pauli4)
    with pauli4 = (xc<<3)|(zc<<2)|(xt<<1)|zt applied after the layer, or
    ("meas", measurement_index).  One "shot" per injection; returns the
    detector and observable flip vectors.
    """
    shots = len(injections)
    inject_after: dict[int, list] = {}
    meas_flips: list[tuple[int, int]] = []
    for s, inj in enumerate(injections):
        if inj[0] == "gate":
            _, li, c, t, pauli = inj
            inject_after.setdefault(li, []).append(
                (s, c, (pauli >> 3) & 1, (pauli >> 2) & 1)
            )
            inject_after.setdefault(li, []).append(
                (s, t, (pauli >> 1) & 1, pauli & 1)
            )
        else:
            meas_flips.append((s, inj[1]))
    packed = {
        li: tuple(
            np.array(col, dtype=np.intp if i < 2 else np.uint8)
            for i, col in enumerate(zip(*items))
        )
        for li, items in inject_after.items()
    }
    meas = _propagate(circuit, shots, None, None, packed)
    for s, mi in meas_flips:
        meas[s, mi] ^= 1
    return evaluate_detectors(dmap, meas)


def sample_phenomenological(
    code, T: int, p: float, shots: int, seed: int
) -> tuple[ShotBatch, ShotBatch]:
    """Code-capacity-with-measurement-noise sampling, both channels at once.

    Returns (z_batch, x_batch): z_batch holds vertex-check detectors and
    Z-logical observables (sensitive to X data errors), x_batch the duals.
    """
    hz = code.h_z.to_dense()
    hx = code.h_x.to_dense()
    lz = code.logical_z.to_dense()
    lx = code.logical_x.to_dense()
    out = []
    for h, logi, sub in ((hz, lz, 0), (hx, lx, 1)):
        dets, obss = [], []
        done = 0
        chunk_index = 0
        while done < shots:
            m = min(CHUNK, shots - done)
            rng = _chunk_rng(seed + sub, chunk_index)
            cum = np.zeros((m, code.n), dtype=np.uint8)
            synd = []
            for _ in range(T):
                cum ^= (rng.random((m, code.n)) < p).astype(np.uint8)
                s = (cum @ h.T) & 1
                s ^= (rng.random(s.shape) < p).astype(np.uint8)
                synd.append(s)
            synd.append((cum @ h.T) & 1)  # final noiseless readout
            d = [synd[0]]
            for r in range(1, T + 1):
                d.append(synd[r - 1] ^ synd[r])
            dets.append(np.concatenate(d, axis=1).astype(np.uint8))
            obss.append(((cum @ logi.T) & 1).astype(np.uint8))
            done += m
            chunk_index += 1
        out.append(
            ShotBatch(shots, np.vstack(dets), np.vstack(obss), seed)
        )
    return out[0], out[1]
