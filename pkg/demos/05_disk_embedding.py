"""Place a {8,3} tessellation in the Poincare disk and measure edge lengths.

The embedding applies the (2,3,8) rotation representation to BFS coset
words, so coordinates are lifts: edges inside the fundamental patch show the
exact {8,3} edge length, wrapped edges appear longer.
"""

import math

from hypqec.geometry import DiskPoint, embed_complex, hyperbolic_distance
from hypqec.groups import enumerate_normal_subgroups, triangle_rotation_presentation
from hypqec.tessellation import build_complex

records = enumerate_normal_subgroups(triangle_rotation_presentation(8), 48)
rec = next(r for r in records if r.index == 48 and r.torsion_free)
c = build_complex(rec)
embed_complex(c, rec)

exact = 2 * math.acosh(math.cos(math.pi / 8) / math.sin(math.pi / 3))
lengths = []
for (u, v) in c.edge_endpoints:
    zu, zv = c.vertex_coords[u], c.vertex_coords[v]
    lengths.append(
        hyperbolic_distance(DiskPoint(zu.real, zu.imag), DiskPoint(zv.real, zv.imag))
    )

unwrapped = sum(1 for L in lengths if abs(L - exact) < 1e-9)
print(f"{c.num_vertices} vertices, {c.num_edges} edges")
print(f"exact {{8,3}} edge length: {exact:.6f}")
print(f"edges at the exact length: {unwrapped}/{len(lengths)} "
      f"(the rest cross the fundamental domain)")
print(f"min/max placed length: {min(lengths):.6f} / {max(lengths):.6f}")
