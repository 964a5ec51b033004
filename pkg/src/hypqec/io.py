"""Stable on-disk formats: code JSON files and append-only results JSONL."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

from .css import CssCode
from .errors import IoError
from .gf2 import BinaryMatrix
from .tessellation import EdgeColoring, SurfaceComplex, face_3_coloring

_CODE_KEYS = [
    "name", "family", "n", "k", "d_x", "d_z", "h_x", "h_z",
    "logical_x", "logical_z", "edge_colors", "complex", "coords",
    "provenance",
]

_RESULT_KEYS = [
    "code", "noise", "p", "shots", "rounds", "basis", "fails_any",
    "per_logical", "seed", "wall_time",
]


def code_to_json(code: CssCode) -> dict:
    c = code.complex
    doc = {
        "name": code.name,
        "family": {"p": c.p, "q": c.q},
        "n": code.n,
        "k": code.k,
        "d_x": code.d_x,
        "d_z": code.d_z,
        "h_x": code.h_x.row_support,
        "h_z": code.h_z.row_support,
        "logical_x": code.logical_x.row_support,
        "logical_z": code.logical_z.row_support,
        "edge_colors": code.edge_colors.color if code.edge_colors else None,
        "complex": {
            "edge_endpoints": [list(e) for e in c.edge_endpoints],
            "face_boundary": [list(b) for b in c.face_boundary],
            "face_colors": face_3_coloring(c).color
            if code.edge_colors
            else None,
        },
        "coords": (
            [[z.real, z.imag] for z in c.vertex_coords]
            if c.vertex_coords is not None
            else None
        ),
        "provenance": code.provenance,
    }
    return {key: doc[key] for key in _CODE_KEYS}


def _rebuild_complex(p: int, q: int, edge_endpoints, face_boundary):
    """Recover stars and (for degree-3 vertices) face rotation cycles."""
    nv = max(max(u, v) for u, v in edge_endpoints) + 1
    stars: list[list[int]] = [[] for _ in range(nv)]
    for e, (u, v) in enumerate(edge_endpoints):
        stars[u].append(e)
        if v != u:
            stars[v].append(e)
        else:
            stars[u].append(e)
    edge_faces: list[list[int]] = [[] for _ in range(len(edge_endpoints))]
    for f, cyc in enumerate(face_boundary):
        for e in cyc:
            edge_faces[e].append(f)
    cycles = None
    if all(len(s) == 3 for s in stars):
        # at a degree-3 vertex every star-edge pair is rotation-adjacent, so
        # cycle[k] is the face shared by star[k] and star[k+1]
        cycles = []
        for star in stars:
            cyc: list[int] = []
            for k in range(3):
                shared = sorted(
                    set(edge_faces[star[k]]) & set(edge_faces[star[(k + 1) % 3]])
                )
                # a two-face intersection is a bigon; avoid repeating the
                # previous pick so each surrounding face is walked once
                pick = shared[0]
                if len(shared) > 1 and cyc and pick == cyc[-1]:
                    pick = shared[1]
                cyc.append(pick)
            cycles.append(cyc)
    c = SurfaceComplex(
        p=p,
        q=q,
        edge_endpoints=[tuple(e) for e in edge_endpoints],
        face_boundary=[list(b) for b in face_boundary],
        vertex_star=stars,
        vertex_face_cycle=cycles,
    )
    c.validate()
    return c


def save_code(code: CssCode, path: str) -> None:
    doc = code_to_json(code)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")
    os.replace(tmp, path)


def load_code(path: str) -> CssCode:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IoError(f"cannot read code file {path}: {exc}") from exc
    fam = doc["family"]
    c = _rebuild_complex(
        fam["p"], fam["q"], doc["complex"]["edge_endpoints"],
        doc["complex"]["face_boundary"],
    )
    if doc.get("coords"):
        c.vertex_coords = [complex(re, im) for re, im in doc["coords"]]
    n = doc["n"]

    def mat(rows):
        return BinaryMatrix(len(rows), n, [list(map(int, r)) for r in rows])

    ec = (
        EdgeColoring(list(doc["edge_colors"]))
        if doc.get("edge_colors") is not None
        else None
    )
    return CssCode(
        name=doc["name"],
        n=n,
        h_x=mat(doc["h_x"]),
        h_z=mat(doc["h_z"]),
        k=doc["k"],
        logical_x=mat(doc["logical_x"]),
        logical_z=mat(doc["logical_z"]),
        d_x=doc.get("d_x"),
        d_z=doc.get("d_z"),
        edge_colors=ec,
        complex=c,
        provenance=dict(doc.get("provenance") or {}),
    )


@dataclass
class ResultRecord:
    code: str
    noise: str  # pauli | erasure | phenom
    p: float
    shots: int
    rounds: int
    basis: list[str]
    fails_any: int
    per_logical: list[int]
    seed: int
    wall_time: float | None = None  # serialized as null for diff-stability

    def key(self) -> tuple:
        return (self.code, self.noise, self.p, self.shots, self.rounds, self.seed)

    def to_line(self) -> str:
        doc = {
            "code": self.code,
            "noise": self.noise,
            "p": self.p,
            "shots": self.shots,
            "rounds": self.rounds,
            "basis": self.basis,
            "fails_any": self.fails_any,
            "per_logical": self.per_logical,
            "seed": self.seed,
            "wall_time": None,
        }
        return json.dumps({k: doc[k] for k in _RESULT_KEYS})

    @classmethod
    def from_line(cls, line: str) -> "ResultRecord":
        doc = json.loads(line)
        return cls(
            code=doc["code"],
            noise=doc["noise"],
            p=doc["p"],
            shots=doc["shots"],
            rounds=doc["rounds"],
            basis=list(doc["basis"]),
            fails_any=doc["fails_any"],
            per_logical=list(doc["per_logical"]),
            seed=doc["seed"],
            wall_time=doc.get("wall_time"),
        )


def read_results(path: str) -> list[ResultRecord]:
    if not os.path.exists(path):
        return []
    out = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(ResultRecord.from_line(line))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise IoError(f"corrupt results file {path}: {exc}") from exc
    return out


def append_results(path: str, records: list[ResultRecord]) -> None:
    """Atomic append: rewrite to a temp file in-directory, then rename."""
    if not records:
        return
    existing = read_results(path)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".jsonl.tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for rec in existing + records:
                fh.write(rec.to_line() + "\n")
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise IoError(f"cannot write results file {path}: {exc}") from exc
