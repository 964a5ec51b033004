"""Command-line interface: construct, inspect, simulate, analyze."""

from __future__ import annotations

import argparse
import os
import sys

from . import css
from .analysis import (
    family_threshold,
    pseudothreshold,
    wilson_interval,
)
from .errors import HypqecError, NoCrossings
from .finegrain import fine_grained_code
from .groups import enumerate_normal_subgroups, triangle_rotation_presentation
from .harness import ExperimentConfig, run_experiment
from .io import load_code, read_results, save_code
from .tessellation import build_complex, edge_coloring, face_3_coloring


def _cmd_construct(args):
    if args.q != 3:
        raise HypqecError("only {p,3} tessellations are supported")
    pres = triangle_rotation_presentation(args.p, args.q)
    records = enumerate_normal_subgroups(pres, args.max_index)
    os.makedirs(args.out, exist_ok=True)
    used = set()
    for rec in records:
        if not rec.torsion_free or (rec.genus or 0) < 2:
            continue
        name = rec.name()
        if name in used:
            name = rec.name(disambiguate=True)
        used.add(name)
        c = build_complex(rec)
        code = css.from_complex(c, edge_coloring(c, face_3_coloring(c)), name)
        code.d_x, code.d_z = css.distance(code)
        code.provenance = {
            "base_name": name,
            "f": 1,
            "quotient_hash": rec.coset_table.hash_suffix(),
        }
        path = os.path.join(args.out, f"{name}.json")
        save_code(code, path)
        print(
            f"{name}: [[{code.n},{code.k},{code.d}]] "
            f"d_x={code.d_x} d_z={code.d_z} -> {path}"
        )


def _cmd_distance(args):
    code = load_code(args.code)
    d_x, d_z = css.distance(code)
    print(f"{code.name}: [[{code.n},{code.k},{min(d_x, d_z)}]] d_x={d_x} d_z={d_z}")


def _cmd_subdivide(args):
    base = load_code(args.code)
    code = fine_grained_code(base, args.f)
    code.d_x, code.d_z = css.distance(code)
    if "quotient_hash" in base.provenance:
        code.provenance["quotient_hash"] = base.provenance["quotient_hash"]
    save_code(code, args.out)
    print(
        f"{code.name}: [[{code.n},{code.k},{code.d}]] "
        f"d_x={code.d_x} d_z={code.d_z} -> {args.out}"
    )


def _cmd_simulate(args):
    code = load_code(args.code)
    ps = [float(x) for x in args.p.split(",") if x.strip()]
    rounds = None if args.rounds == "auto" else int(args.rounds)
    config = ExperimentConfig(
        code=code,
        noise=args.noise,
        ps=ps,
        shots=args.shots,
        out=args.out,
        rounds=rounds,
        seed=args.seed,
        dump_shots=args.dump_shots,
    )
    records = run_experiment(config)
    for rec in records:
        lo, hi = wilson_interval(rec.fails_any, rec.shots)
        print(
            f"{rec.code} {rec.noise} p={rec.p:g}: P_L="
            f"{rec.fails_any / rec.shots:.4f} "
            f"[{lo:.4f}, {hi:.4f}] ({rec.fails_any}/{rec.shots})"
        )
    if not records:
        print("all points already present; nothing to do")


def _points_for(records, code_name, noise):
    pts = sorted(
        (r.p, r.fails_any / r.shots, r)
        for r in records
        if r.code == code_name and r.noise == noise
    )
    return [(p, pl) for p, pl, _ in pts], [r for _, _, r in pts]


def _cmd_pseudothreshold(args):
    records = read_results(args.results)
    noises = sorted({r.noise for r in records if r.code == args.code})
    if not noises:
        raise HypqecError(f"no records for code {args.code!r}")
    for noise in noises:
        points, recs = _points_for(records, args.code, noise)
        k = len(recs[0].per_logical)
        T = recs[0].rounds
        est = pseudothreshold(points, k, T, name=args.code)
        print(f"{args.code} {noise}: p* = {est.marker} (T={T}, k={k})")


def _cmd_family(args):
    names = [x.strip() for x in args.codes.split(",") if x.strip()]
    records = read_results(args.results)
    noises = sorted({r.noise for r in records if r.code in names})
    for noise in noises:
        curves, ks = [], []
        for name in names:
            points, recs = _points_for(records, name, noise)
            if len(points) < 2:
                break
            curves.append(points)
            ks.append(len(recs[0].per_logical))
        if len(curves) != len(names):
            print(f"{noise}: incomplete sweeps, skipped")
            continue
        try:
            est = family_threshold(curves, ks, name=",".join(names))
        except NoCrossings:
            print(f"{noise}: no crossings")
            continue
        print(f"{noise}: p_th = {est.marker} (N={est.crossings_used})")


def _cmd_export_csv(args):
    records = read_results(args.results)
    print("code,noise,p,shots,rounds,fails_any,P_L,wilson_lo,wilson_hi,per_logical")
    for rec in records:
        lo, hi = wilson_interval(rec.fails_any, rec.shots)
        per = ";".join(str(x) for x in rec.per_logical)
        print(
            f"{rec.code},{rec.noise},{rec.p:g},{rec.shots},{rec.rounds},"
            f"{rec.fails_any},{rec.fails_any / rec.shots:.6f},"
            f"{lo:.6f},{hi:.6f},{per}"
        )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hypqec",
        description="Hyperbolic CSS surface codes: construction and simulation",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="enumerate quotients and save codes")
    c.add_argument("--p", type=int, required=True, choices=(8, 10, 12))
    c.add_argument("--q", type=int, default=3)
    c.add_argument("--max-index", type=int, required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=_cmd_construct)

    d = sub.add_parser("distance", help="recompute exact distances")
    d.add_argument("--code", required=True)
    d.set_defaults(func=_cmd_distance)

    s = sub.add_parser("subdivide", help="fine-grain a code by factor f")
    s.add_argument("--code", required=True)
    s.add_argument("--f", type=int, required=True, choices=(1, 2, 3, 4))
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_subdivide)

    m = sub.add_parser("simulate", help="Monte-Carlo sweep over a p grid")
    m.add_argument("--code", required=True)
    m.add_argument("--noise", required=True, choices=("pauli", "erasure", "phenom"))
    m.add_argument("--p", required=True, help="comma-separated probabilities")
    m.add_argument("--shots", type=int, required=True)
    m.add_argument("--rounds", default="auto")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out", required=True)
    m.add_argument("--dump-shots", default=None)
    m.set_defaults(func=_cmd_simulate)

    an = sub.add_parser("analyze", help="threshold estimates from results")
    ansub = an.add_subparsers(dest="analysis", required=True)
    ps = ansub.add_parser("pseudothreshold")
    ps.add_argument("--results", required=True)
    ps.add_argument("--code", required=True)
    ps.set_defaults(func=_cmd_pseudothreshold)
    fa = ansub.add_parser("family")
    fa.add_argument("--results", required=True)
    fa.add_argument("--codes", required=True)
    fa.set_defaults(func=_cmd_family)

    e = sub.add_parser("export-csv", help="flatten results JSONL to CSV")
    e.add_argument("--results", required=True)
    e.set_defaults(func=_cmd_export_csv)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except HypqecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
