"""Enumerate {p,3} quotients and print the resulting code parameters.

Runs the normal-subgroup search for the {8,3} rotation group up to index 96,
keeps the torsion-free quotients, and builds the edge-qubit CSS code of each
closed surface found.
"""

from hypqec import css
from hypqec.groups import enumerate_normal_subgroups, triangle_rotation_presentation
from hypqec.tessellation import build_complex, edge_coloring, face_3_coloring

pres = triangle_rotation_presentation(8, 3)
records = enumerate_normal_subgroups(pres, 96)
print(f"normal subgroups of index <= 96: {len(records)}")

for rec in records:
    if not rec.torsion_free or (rec.genus or 0) < 2:
        continue
    c = build_complex(rec)
    code = css.from_complex(c, edge_coloring(c, face_3_coloring(c)), rec.name())
    d_x, d_z = css.distance(code)
    print(
        f"  {rec.name()}: index {rec.index}, genus {rec.genus}, "
        f"V={c.num_vertices} E={c.num_edges} F={c.num_faces}  "
        f"[[{code.n},{code.k},{min(d_x, d_z)}]] (d_x={d_x}, d_z={d_z})"
    )
