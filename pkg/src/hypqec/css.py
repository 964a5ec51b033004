"""CSS codes on surface complexes: check matrices, logicals, exact distance."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .errors import CssViolation, Disconnected, RankDefect
from .gf2 import BinaryMatrix
from .tessellation import EdgeColoring, SurfaceComplex


@dataclass
class CssCode:
    name: str
    n: int
    h_x: BinaryMatrix
    h_z: BinaryMatrix
    k: int
    logical_x: BinaryMatrix | None = None
    logical_z: BinaryMatrix | None = None
    d_x: int | None = None
    d_z: int | None = None
    edge_colors: EdgeColoring | None = None
    complex: SurfaceComplex | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def d(self) -> int | None:
        if self.d_x is None or self.d_z is None:
            return None
        return min(self.d_x, self.d_z)


def gf2_rank(m: BinaryMatrix) -> int:
    return gf2.rank(m)


def from_complex(
    c: SurfaceComplex, ec: EdgeColoring | None, name: str
) -> CssCode:
    """Edge-qubit surface code: Z-checks on vertex stars, X-checks on faces.

    Supports appearing an even number of times in a star or boundary cancel
    over GF(2).
    """
    c.validate()
    n = c.num_edges
    h_z = BinaryMatrix.from_rows(
        [_parity_support(star) for star in c.vertex_star], n
    )
    h_x = BinaryMatrix.from_rows(
        [_parity_support(cycle) for cycle in c.face_boundary], n
    )
    prod = (h_x.to_dense() @ h_z.to_dense().T) & 1
    if prod.any():
        raise CssViolation("H_X . H_Z^T != 0; complex is corrupted")
    k = n - gf2.rank(h_x) - gf2.rank(h_z)
    code = CssCode(
        name=name, n=n, h_x=h_x, h_z=h_z, k=k, edge_colors=ec, complex=c
    )
    if k >= 1:
        logical_basis(code)
    return code


def _parity_support(indices: list[int]) -> list[int]:
    out = set()
    for i in indices:
        out.symmetric_difference_update({i})
    return sorted(out)


def logical_basis(code: CssCode) -> tuple[BinaryMatrix, BinaryMatrix]:
    """Symplectically paired logical representatives.

    X-logicals span ker(H_Z)/row(H_X), Z-logicals span ker(H_X)/row(H_Z);
    after normalization supp(Lx_i) . supp(Lz_j) is odd iff i = j.
    """
    if code.k < 1:
        raise RankDefect("code has no logical qubits")
    hx, hz = code.h_x.to_dense(), code.h_z.to_dense()
    lx = gf2.quotient_basis(gf2.kernel_basis(hz), hx)
    lz = gf2.quotient_basis(gf2.kernel_basis(hx), hz)
    if lx.shape[0] != code.k or lz.shape[0] != code.k:
        raise RankDefect(
            f"logical quotient dims ({lx.shape[0]}, {lz.shape[0]}) != k = {code.k}"
        )
    pairing = (lx @ lz.T) & 1
    lz = (gf2.invert_gf2(pairing).T @ lz) & 1
    lx = _reduce_weights(lx, hx)
    lz = _reduce_weights(lz, hz)
    # weight reduction adds stabilizer rows only, so the pairing is preserved
    code.logical_x = BinaryMatrix.from_dense(lx)
    code.logical_z = BinaryMatrix.from_dense(lz)
    return code.logical_x, code.logical_z


def _reduce_weights(logicals: np.ndarray, checks: np.ndarray) -> np.ndarray:
    out = logicals.copy()
    for i in range(out.shape[0]):
        improved = True
        while improved:
            improved = False
            w = out[i].sum()
            for row in checks:
                cand = out[i] ^ row
                if cand.sum() < w:
                    out[i] = cand
                    improved = True
                    break
    return out


def distance(code: CssCode) -> tuple[int, int]:
    """Exact (d_X, d_Z) via shortest homologically nontrivial cycles.

    d_X is found on the complex's edge graph (vertices/edges), d_Z on the
    dual graph (faces/edges); in each case the shortest cycle with odd
    pairing against some opposite-basis logical, by breadth-first search on
    the two-sheet cover that flips sheets across the logical's support.
    """
    c = code.complex
    if c is None:
        raise ValueError("distance requires the source complex")
    if code.logical_x is None or code.logical_z is None:
        logical_basis(code)

    primal = _adjacency(c.num_vertices, list(enumerate(c.edge_endpoints)))
    dual_edges = [(e, pair) for e, pair in enumerate(c.edge_faces)]
    dual = _adjacency(c.num_faces, dual_edges)

    d_x = min(
        _shortest_odd_cycle(primal, c.num_vertices, set(supp))
        for supp in code.logical_z.row_support
    )
    d_z = min(
        _shortest_odd_cycle(dual, c.num_faces, set(supp))
        for supp in code.logical_x.row_support
    )
    code.d_x, code.d_z = d_x, d_z
    return d_x, d_z


def _adjacency(
    nv: int, edges: list[tuple[int, tuple[int, int]]]
) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for e, (u, v) in edges:
        adj[u].append((v, e))
        if u != v:
            adj[v].append((u, e))
        else:
            adj[u].append((v, e))  # loops traversable in both senses
    return adj


def _shortest_odd_cycle(
    adj: list[list[tuple[int, int]]], nv: int, crossing: set[int]
) -> int:
    """Shortest closed walk whose crossing-edge count is odd (double cover BFS)."""
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w, _ in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != nv:
        raise Disconnected("complex graph is disconnected")

    best = None
    for src in range(nv):
        dist = {(src, 0): 0}
        queue = deque([(src, 0)])
        while queue:
            v, s = queue.popleft()
            d = dist[(v, s)]
            if best is not None and d >= best:
                continue
            for w, e in adj[v]:
                t = s ^ (1 if e in crossing else 0)
                if (w, t) not in dist:
                    dist[(w, t)] = d + 1
                    queue.append((w, t))
        if (src, 1) in dist:
            cand = dist[(src, 1)]
            best = cand if best is None else min(best, cand)
    if best is None:
        raise Disconnected("no homologically nontrivial cycle found")
    return best
