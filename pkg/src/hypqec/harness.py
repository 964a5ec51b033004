"""Experiment orchestration: sweep, decode, tally, persist."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circuits import build_memory_circuit
from .css import CssCode
from .decoder import (
    build_decoding_graphs,
    build_phenomenological_graphs,
    decode_batch,
    decode_erasure_shot,
)
from .errors import ConfigError
from .io import ResultRecord, append_results, read_results
from .sim import sample_erasure, sample_pauli, sample_phenomenological

NOISE_KINDS = ("pauli", "erasure", "phenom")

# basis -> detector type whose graph carries that basis' observables
_MEM_TYPE = {"Z": "v", "X": "f"}


@dataclass
class ExperimentConfig:
    code: CssCode
    noise: str
    ps: list[float]
    shots: int
    out: str
    rounds: int | None = None  # None = auto (T = d circuit noise, 1 phenom)
    seed: int = 0
    dump_shots: str | None = None

    def __post_init__(self):
        if self.noise not in NOISE_KINDS:
            raise ConfigError(f"unknown noise kind {self.noise!r}")
        if not self.ps:
            raise ConfigError("empty p grid")
        if any(not 0.0 <= p <= 1.0 for p in self.ps):
            raise ConfigError("p values must lie in [0, 1]")
        if self.shots < 1:
            raise ConfigError(f"shots = {self.shots} (need >= 1)")
        if self.rounds is not None and self.rounds < 1:
            raise ConfigError(f"rounds = {self.rounds} (need >= 1)")


def default_rounds(code: CssCode, noise: str) -> int:
    if noise == "phenom":
        return 1
    if code.d is None:
        raise ConfigError("code carries no distance; run `distance` first")
    return code.d


def _point_seed(master: int, index: int) -> int:
    state = np.random.SeedSequence(
        [int(master) & (2**64 - 1), index]
    ).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


def _mask_to_bits(mask: int, k: int) -> np.ndarray:
    return np.array([(mask >> o) & 1 for o in range(k)], dtype=np.uint8)


def _run_point(code: CssCode, noise: str, p: float, shots: int, T: int, seed: int):
    """(fails_any, per_logical counts, basis tags) for one sweep point."""
    k = code.k
    fail_any = np.zeros(shots, dtype=np.uint8)
    fail_per = np.zeros((shots, k), dtype=np.uint8)
    if noise == "phenom":
        zb, xb = sample_phenomenological(code, T, p, shots, seed)
        graphs = build_phenomenological_graphs(code, T, p)
        for batch, t in ((zb, "v"), (xb, "f")):
            fa, fp = decode_batch({t: graphs[t]}, batch, t, k)
            fail_any |= fa
            fail_per |= fp
        basis = ["Z", "X"]
    elif noise == "pauli":
        for bi, b in enumerate(("Z", "X")):
            circuit, dmap = build_memory_circuit(code, b, T)
            graphs = build_decoding_graphs(circuit, dmap, "pauli", p)
            batch = sample_pauli(circuit, dmap, p, shots, seed + bi)
            fa, fp = decode_batch(graphs, batch, _MEM_TYPE[b], k)
            fail_any |= fa
            fail_per |= fp
        basis = ["Z", "X"]
    else:
        for bi, b in enumerate(("Z", "X")):
            circuit, dmap = build_memory_circuit(code, b, T)
            graphs = build_decoding_graphs(circuit, dmap, "erasure", p)
            batch = sample_erasure(circuit, dmap, p, shots, seed + bi)
            mem = _MEM_TYPE[b]
            for s in range(shots):
                predicted = decode_erasure_shot(
                    graphs,
                    batch.detector_bits[s],
                    batch.erasure_records[s],
                    mem,
                )
                actual = 0
                for o in np.flatnonzero(batch.observable_bits[s]):
                    actual |= 1 << int(o)
                diff = _mask_to_bits(predicted ^ actual, k)
                fail_per[s] |= diff
                fail_any[s] |= diff.any()
        basis = ["Z", "X"]
    return int(fail_any.sum()), [int(x) for x in fail_per.sum(axis=0)], basis


def worker_count() -> int:
    env = os.environ.get("HQL_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ConfigError(f"HQL_THREADS = {env!r} is not an integer") from exc
        if n < 1:
            raise ConfigError("HQL_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def run_experiment(config: ExperimentConfig) -> list[ResultRecord]:
    """Sweep the p grid, appending one record per point; resumable by key."""
    code = config.code
    T = config.rounds or default_rounds(code, config.noise)
    existing = {rec.key() for rec in read_results(config.out)}
    todo = []
    for i, p in enumerate(config.ps):
        seed = _point_seed(config.seed, i)
        key = (code.name, config.noise, p, config.shots, T, seed)
        if key not in existing:
            todo.append((i, p, seed))
    results: dict[int, ResultRecord] = {}

    def work(item):
        i, p, seed = item
        fails, per, basis = _run_point(
            code, config.noise, p, config.shots, T, seed
        )
        return i, ResultRecord(
            code=code.name,
            noise=config.noise,
            p=p,
            shots=config.shots,
            rounds=T,
            basis=basis,
            fails_any=fails,
            per_logical=per,
            seed=seed,
        )

    if todo:
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            for i, rec in pool.map(work, todo):
                results[i] = rec
    ordered = [results[i] for i in sorted(results)]
    append_results(config.out, ordered)
    if config.dump_shots:
        _dump_shots(config, T)
    return ordered


def _dump_shots(config: ExperimentConfig, T: int) -> None:
    """Debug detector dumps: one hex line per shot of the Z-basis batch."""
    code = config.code
    with open(config.dump_shots, "w", encoding="utf-8") as fh:
        for i, p in enumerate(config.ps):
            seed = _point_seed(config.seed, i)
            if config.noise == "phenom":
                batch, _ = sample_phenomenological(
                    code, T, p, config.shots, seed
                )
            else:
                circuit, dmap = build_memory_circuit(code, "Z", T)
                sampler = (
                    sample_pauli if config.noise == "pauli" else sample_erasure
                )
                batch = sampler(circuit, dmap, p, config.shots, seed)
            for s in range(batch.shots):
                fh.write(np.packbits(batch.detector_bits[s]).tobytes().hex())
                fh.write("\n")
