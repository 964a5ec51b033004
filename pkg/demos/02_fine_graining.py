"""Fine-grain a small hyperbolic code and watch distance scale with f.

Each edge of the {8,3} dual triangulation is split into f segments; qubit
count grows as f^2 n while the logical count stays fixed, trading encoding
rate for distance.
"""

from hypqec import css
from hypqec.finegrain import fine_grained_code
from hypqec.groups import enumerate_normal_subgroups, triangle_rotation_presentation
from hypqec.tessellation import build_complex, edge_coloring, face_3_coloring

records = enumerate_normal_subgroups(triangle_rotation_presentation(8), 48)
rec = next(r for r in records if r.index == 48 and r.torsion_free)
c = build_complex(rec)
base = css.from_complex(c, edge_coloring(c, face_3_coloring(c)), "H16")
base.d_x, base.d_z = css.distance(base)
print(f"base {base.name}: [[{base.n},{base.k},{base.d}]]")

for f in (2, 3, 4):
    code = fine_grained_code(base, f)
    d_x, d_z = css.distance(code)
    rate = code.k / code.n
    print(
        f"  f={f}: [[{code.n},{code.k},{min(d_x, d_z)}]]  "
        f"rate {rate:.3f}, d_x={d_x} d_z={d_z}"
    )
