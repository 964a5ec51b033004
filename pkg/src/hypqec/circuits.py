"""Syndrome-extraction memory circuits with detectors and observables.

One ancilla per stabilizer; Z-checks are extracted first (data -> ancilla
CXs, three layers when an edge 3-coloring exists), then X-checks (ancilla ->
data CXs packed greedily along each face's cyclic boundary).  A final
noiseless data readout in the memory basis closes the experiment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .css import CssCode
from .errors import ScheduleConflict


@dataclass
class Layer:
    kind: str  # reset | h | cx | measure
    ops: list  # qubits, or (control, target) pairs for cx
    noisy: bool = False  # measurement flips / gate noise eligible


@dataclass
class Circuit:
    n_qubits: int
    n_data: int
    layers: list[Layer]
    rounds: int
    n_measurements: int = 0

    def __post_init__(self):
        count = 0
        for layer in self.layers:
            seen = set()
            if layer.kind == "cx":
                for c, t in layer.ops:
                    if c in seen or t in seen:
                        raise ScheduleConflict(
                            f"qubit reused within a {layer.kind} layer"
                        )
                    seen.update((c, t))
            else:
                for q in layer.ops:
                    if q in seen:
                        raise ScheduleConflict("qubit repeated in layer")
                    seen.add(q)
                if layer.kind == "measure":
                    count += len(layer.ops)
        self.n_measurements = count

    def cx_count(self) -> int:
        return sum(len(l.ops) for l in self.layers if l.kind == "cx")

    def dump(self) -> str:
        lines = []
        for k, layer in enumerate(self.layers):
            if layer.kind == "cx":
                body = "; ".join(f"CX {c}>{t}" for c, t in layer.ops)
            else:
                tag = {"reset": "R", "h": "H", "measure": "M"}[layer.kind]
                body = tag + " " + " ".join(str(q) for q in layer.ops)
            lines.append(f"L{k}: {body}")
        return "\n".join(lines) + "\n"


@dataclass
class DetectorMap:
    detectors: list[list[int]]  # each a set of measurement indices to XOR
    detector_type: list[str]  # "v" (vertex/Z-check) or "f" (face/X-check)
    detector_coord: list[tuple]  # (stabilizer index, round tag) for debugging
    observables: list[list[int]]  # k memory-basis logicals on final readout


def schedule_layers(
    code: CssCode,
) -> tuple[list[list[tuple[int, int]]], list[list[tuple[int, int]]]]:
    """Per-round CX plans: (z_layers of (edge, vertex), x_layers of (face, edge)).

    Z-extraction uses one layer per edge color when a 3-coloring is present
    (every degree-3 vertex acts exactly once per layer); otherwise, and for
    X-extraction always, stabilizers walk their supports in cyclic order and
    are packed greedily into layers without data-qubit conflicts.
    """
    c = code.complex
    if code.edge_colors is not None and all(
        len(s) == 3 for s in c.vertex_star
    ):
        # each color-c edge serves both endpoint checks, which share the data
        # qubit; a color layer therefore splits into two endpoint sub-layers
        z_layers = []
        for col in range(3):
            for side in (0, 1):
                layer = []
                for e, (u, v) in enumerate(c.edge_endpoints):
                    if code.edge_colors.color[e] == col:
                        layer.append((e, (u, v)[side]))
                z_layers.append(layer)
        for layer in z_layers:
            ancs = [v for _, v in layer]
            if len(set(ancs)) != len(ancs):
                raise ScheduleConflict("ancilla reused in a color sub-layer")
    else:
        z_layers = _greedy_pack(
            [[(e, v) for e in star] for v, star in enumerate(c.vertex_star)]
        )

    x_layers = _greedy_pack(
        [[(f, e) for e in cyc] for f, cyc in enumerate(c.face_boundary)],
        data_pos=1,
    )
    max_p = max(len(b) for b in c.face_boundary)
    if len(x_layers) > max_p + 1:
        raise ScheduleConflict(
            f"X-extraction needed {len(x_layers)} layers (> {max_p + 1})"
        )
    return z_layers, x_layers


def _greedy_pack(per_stab_ops: list[list[tuple]], data_pos: int = 0):
    """Pack each stabilizer's ordered op list into data-disjoint layers.

    Within-stabilizer order is preserved (only contiguous boundary segments
    ever remain pending, which keeps ancilla hook faults two-detector
    events); stabilizers with the most pending ops get first pick, and
    several deterministic start rotations are tried to stay within the
    max-weight + 1 layer budget.
    """
    counts = [len(ops) for ops in per_stab_ops]
    total = sum(counts)
    best = None
    for rot in range(max(counts) + 1):
        rotated = [
            ops[min(rot, len(ops)) * (s % 2) :]
            + ops[: min(rot, len(ops)) * (s % 2)]
            for s, ops in enumerate(per_stab_ops)
        ]
        pointers = [0] * len(rotated)
        layers = []
        done = 0
        stalled = False
        while done < total:
            used = set()
            layer = []
            order = sorted(
                range(len(rotated)),
                key=lambda s: (pointers[s] - len(rotated[s]), s),
            )
            for s in order:
                ops = rotated[s]
                if pointers[s] >= len(ops):
                    continue
                op = ops[pointers[s]]
                if op[data_pos] in used:
                    continue
                used.add(op[data_pos])
                layer.append(op)
                pointers[s] += 1
                done += 1
            if not layer:
                stalled = True
                break
            layers.append(layer)
        if stalled:
            continue
        if best is None or len(layers) < len(best):
            best = layers
        if len(best) <= max(counts):
            break
    if best is None:
        raise ScheduleConflict("greedy packing stalled")
    return best


def build_memory_circuit(
    code: CssCode, basis: str, T: int
) -> tuple[Circuit, DetectorMap]:
    if basis not in ("Z", "X"):
        raise ValueError("basis must be 'Z' or 'X'")
    if T < 1:
        raise ValueError("T must be >= 1")
    c = code.complex
    n = code.n
    nv, nf = c.num_vertices, c.num_faces
    z_anc = [n + v for v in range(nv)]
    x_anc = [n + nv + f for f in range(nf)]
    z_plan, x_plan = schedule_layers(code)

    layers: list[Layer] = []
    meas_counter = 0
    z_meas: list[list[int]] = []
    x_meas: list[list[int]] = []

    layers.append(Layer("reset", list(range(n))))
    if basis == "X":
        layers.append(Layer("h", list(range(n))))

    for _ in range(T):
        layers.append(Layer("reset", list(z_anc)))
        for plan in z_plan:
            layers.append(
                Layer("cx", [(e, n + v) for e, v in plan], noisy=True)
            )
        layers.append(Layer("measure", list(z_anc), noisy=True))
        z_meas.append([meas_counter + v for v in range(nv)])
        meas_counter += nv

        layers.append(Layer("reset", list(x_anc)))
        layers.append(Layer("h", list(x_anc)))
        for plan in x_plan:
            layers.append(
                Layer("cx", [(n + nv + f, e) for f, e in plan], noisy=True)
            )
        layers.append(Layer("h", list(x_anc)))
        layers.append(Layer("measure", list(x_anc), noisy=True))
        x_meas.append([meas_counter + f for f in range(nf)])
        meas_counter += nf

    if basis == "X":
        layers.append(Layer("h", list(range(n))))
    layers.append(Layer("measure", list(range(n)), noisy=False))
    final_meas = [meas_counter + q for q in range(n)]
    meas_counter += n

    circuit = Circuit(
        n_qubits=n + nv + nf, n_data=n, layers=layers, rounds=T
    )

    detectors: list[list[int]] = []
    dtypes: list[str] = []
    coords: list[tuple] = []
    mem_meas, mem_rows, mem_type = (
        (z_meas, code.h_z, "v") if basis == "Z" else (x_meas, code.h_x, "f")
    )
    other_meas, other_type = (
        (x_meas, "f") if basis == "Z" else (z_meas, "v")
    )

    n_mem = len(mem_meas[0])
    for s in range(n_mem):
        detectors.append([mem_meas[0][s]])
        dtypes.append(mem_type)
        coords.append((s, 0))
    for r in range(1, T):
        for s in range(n_mem):
            detectors.append([mem_meas[r - 1][s], mem_meas[r][s]])
            dtypes.append(mem_type)
            coords.append((s, r))
    for r in range(1, T):
        for s in range(len(other_meas[0])):
            detectors.append([other_meas[r - 1][s], other_meas[r][s]])
            dtypes.append(other_type)
            coords.append((s, r))
    for s in range(n_mem):
        det = [final_meas[q] for q in mem_rows.row_support[s]]
        det.append(mem_meas[T - 1][s])
        detectors.append(det)
        dtypes.append(mem_type)
        coords.append((s, T))

    logicals = code.logical_z if basis == "Z" else code.logical_x
    observables = [
        [final_meas[q] for q in supp] for supp in logicals.row_support
    ]

    dmap = DetectorMap(detectors, dtypes, coords, observables)
    return circuit, dmap
