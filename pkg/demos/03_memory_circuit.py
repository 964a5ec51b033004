"""Build a syndrome-extraction memory circuit and inspect its anatomy.

Shows the color-scheduled CX layers, detector bookkeeping, and the
zero-noise silence check that validates the whole stack.
"""

from hypqec import css
from hypqec.circuits import build_memory_circuit, schedule_layers
from hypqec.groups import enumerate_normal_subgroups, triangle_rotation_presentation
from hypqec.sim import sample_pauli
from hypqec.tessellation import build_complex, edge_coloring, face_3_coloring

records = enumerate_normal_subgroups(triangle_rotation_presentation(8), 96)
rec = next(r for r in records if r.index == 96 and r.torsion_free)
c = build_complex(rec)
code = css.from_complex(c, edge_coloring(c, face_3_coloring(c)), "H32")

z_layers, x_layers = schedule_layers(code)
print(f"{code.name}: Z-extraction {len(z_layers)} CX layers, "
      f"X-extraction {len(x_layers)} CX layers")

T = 3
circuit, dmap = build_memory_circuit(code, "Z", T)
print(f"T={T}: {circuit.n_qubits} qubits ({circuit.n_data} data), "
      f"{circuit.cx_count()} CXs, {circuit.n_measurements} measurements, "
      f"{len(dmap.detectors)} detectors, {len(dmap.observables)} observables")

batch = sample_pauli(circuit, dmap, 0.0, 20_000, 1)
print(f"zero-noise sanity: {int(batch.detector_bits.sum())} detector flips, "
      f"{int(batch.observable_bits.sum())} observable flips over 20k shots")

print("\nfirst five layers:")
for line in circuit.dump().split("\n")[:5]:
    print(" ", line[:100] + ("..." if len(line) > 100 else ""))
