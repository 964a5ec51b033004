"""Sweep the three noise models on H32 and estimate a pseudothreshold.

Small shot counts keep this demo under a couple of minutes; the acceptance
suite runs the full-budget versions.
"""

import tempfile
import os

from hypqec import css
from hypqec.analysis import pseudothreshold, wilson_interval
from hypqec.groups import enumerate_normal_subgroups, triangle_rotation_presentation
from hypqec.harness import ExperimentConfig, run_experiment
from hypqec.tessellation import build_complex, edge_coloring, face_3_coloring

records = enumerate_normal_subgroups(triangle_rotation_presentation(8), 96)
rec = next(r for r in records if r.index == 96 and r.torsion_free)
c = build_complex(rec)
code = css.from_complex(c, edge_coloring(c, face_3_coloring(c)), "H32")
code.d_x, code.d_z = css.distance(code)

out = os.path.join(tempfile.mkdtemp(), "results.jsonl")
sweeps = {
    "pauli": ([0.001, 0.002, 0.003, 0.005], 400),
    "erasure": ([0.01, 0.02, 0.03], 150),
    "phenom": ([0.005, 0.01, 0.02, 0.03], 1000),
}

for noise, (ps, shots) in sweeps.items():
    recs = run_experiment(
        ExperimentConfig(code, noise, ps, shots, out, seed=1)
    )
    print(f"\n{noise}:")
    for r in recs:
        lo, hi = wilson_interval(r.fails_any, r.shots)
        print(f"  p={r.p:<6g} P_L={r.fails_any / r.shots:.4f} "
              f"[{lo:.4f}, {hi:.4f}]")
    points = [(r.p, r.fails_any / r.shots) for r in recs]
    est = pseudothreshold(points, code.k, recs[0].rounds, name=code.name)
    print(f"  pseudothreshold: {est.marker}")
