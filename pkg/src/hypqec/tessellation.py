"""Closed-surface complexes from triangle-group quotients.

A coset of the rotation group quotient is a flag (incident vertex/edge/face
triple); vertices, edges, and faces are its orbits under the cyclic subgroups
generated by b (vertex rotation), a (edge flip), and g (face rotation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    ImproperFaceColoring,
    InconsistentIncidence,
    NonIntegral,
    NotHyperbolic,
    NotThreeColorable,
    NotTorsionFree,
    OddEuler,
)
from .groups import QuotientRecord


@dataclass
class SurfaceComplex:
    """Combinatorial closed surface with explicit rotation system.

    face_boundary and vertex_star are cyclic; vertex_face_cycle lists the
    faces around each vertex in the same rotation order as vertex_star.
    Coordinates, when present, are decorative (never read by combinatorics).
    """

    p: int
    q: int
    edge_endpoints: list[tuple[int, int]]
    face_boundary: list[list[int]]
    vertex_star: list[list[int]]
    vertex_face_cycle: list[list[int]] | None = None
    vertex_coords: list[complex] | None = None
    face_coords: list[complex] | None = None

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_star)

    @property
    def num_edges(self) -> int:
        return len(self.edge_endpoints)

    @property
    def num_faces(self) -> int:
        return len(self.face_boundary)

    @cached_property
    def edge_faces(self) -> list[tuple[int, int]]:
        """The two face slots of each edge (a face can appear twice)."""
        slots: list[list[int]] = [[] for _ in range(self.num_edges)]
        for f, cycle in enumerate(self.face_boundary):
            for e in cycle:
                slots[e].append(f)
        for e, fs in enumerate(slots):
            if len(fs) != 2:
                raise InconsistentIncidence(
                    f"edge {e} lies in {len(fs)} face slots, expected 2"
                )
        return [tuple(fs) for fs in slots]

    def validate(self) -> None:
        ne = self.num_edges
        for e, (u, v) in enumerate(self.edge_endpoints):
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise InconsistentIncidence(f"edge {e} endpoint out of range")
        _ = self.edge_faces
        star_total = sum(len(s) for s in self.vertex_star)
        boundary_total = sum(len(b) for b in self.face_boundary)
        if star_total != 2 * ne or boundary_total != 2 * ne:
            raise InconsistentIncidence(
                "sum of vertex degrees and face degrees must both equal 2E"
            )
        for v, star in enumerate(self.vertex_star):
            for e in star:
                if v not in self.edge_endpoints[e]:
                    raise InconsistentIncidence(
                        f"edge {e} in star of vertex {v} but not incident"
                    )
        for f, cycle in enumerate(self.face_boundary):
            for i, e in enumerate(cycle):
                nxt = cycle[(i + 1) % len(cycle)]
                if not set(self.edge_endpoints[e]) & set(self.edge_endpoints[nxt]):
                    raise InconsistentIncidence(
                        f"face {f} boundary not a closed edge cycle"
                    )

    def invariant_vector(self) -> tuple:
        """Relabeling-invariant fingerprint: sorted degrees and chi."""
        chi = self.num_vertices - self.num_edges + self.num_faces
        return (
            tuple(sorted(len(b) for b in self.face_boundary)),
            tuple(sorted(len(s) for s in self.vertex_star)),
            chi,
        )


@dataclass
class FaceColoring:
    color: list[int]


@dataclass
class EdgeColoring:
    color: list[int]


def combinatorial_params(p: int, q: int, g: int) -> tuple[int, int, int]:
    """(F, E, V) of a {p,q} tessellation of a genus-g surface."""
    if (p - 2) * (q - 2) <= 4:
        raise NotHyperbolic(f"({p}-2)({q}-2) <= 4")
    if g < 2:
        raise ValueError("g must be >= 2")
    denom = p * q - 2 * p - 2 * q
    num = 4 * q * (g - 1)
    if num % denom:
        raise NonIntegral(f"F = {num}/{denom} is not an integer")
    f = num // denom
    if f <= 0:
        raise NonIntegral("F must be positive")
    if (p * f) % 2 or (p * f) % q:
        raise NonIntegral("E or V not integral")
    return f, p * f // 2, p * f // q


def euler_genus(c: SurfaceComplex) -> tuple[int, int]:
    chi = c.num_vertices - c.num_edges + c.num_faces
    if chi % 2:
        raise OddEuler(f"chi = {chi} is odd")
    return chi, (2 - chi) // 2


def build_complex(q: QuotientRecord) -> SurfaceComplex:
    """Surface complex of a torsion-free quotient: orbits of <b>, <a>, <g>."""
    if not q.torsion_free:
        raise NotTorsionFree(
            f"quotient has element orders {q.orders}, expected (2, 3, {q.p})"
        )
    ct = q.coset_table
    n = ct.index
    a, b, g = ct.action[0], ct.action[1], ct.action[2]
    p = q.p

    vertex_of = _orbits(b, 3, n)
    edge_of = _orbits(a, 2, n)
    face_of = _orbits(g, p, n)
    nv, ne, nf = max(vertex_of) + 1, max(edge_of) + 1, max(face_of) + 1
    if (nv, ne, nf) != (n // 3, n // 2, n // p):
        raise InconsistentIncidence("orbit counts disagree with V=i/3, E=i/2, F=i/p")

    edge_endpoints: list[tuple[int, int] | None] = [None] * ne
    for x in range(n):
        e = edge_of[x]
        if edge_endpoints[e] is None:
            edge_endpoints[e] = (vertex_of[x], vertex_of[a[x]])

    face_boundary: list[list[int] | None] = [None] * nf
    for x in range(n):
        f = face_of[x]
        if face_boundary[f] is None:
            cycle, y = [], x
            for _ in range(p):
                cycle.append(edge_of[y])
                y = g[y]
            face_boundary[f] = cycle

    vertex_star: list[list[int] | None] = [None] * nv
    vertex_face_cycle: list[list[int] | None] = [None] * nv
    for x in range(n):
        v = vertex_of[x]
        if vertex_star[v] is None:
            vertex_star[v] = [edge_of[x], edge_of[b[x]], edge_of[b[b[x]]]]
            vertex_face_cycle[v] = [face_of[x], face_of[b[x]], face_of[b[b[x]]]]

    c = SurfaceComplex(
        p=p,
        q=3,
        edge_endpoints=edge_endpoints,
        face_boundary=face_boundary,
        vertex_star=vertex_star,
        vertex_face_cycle=vertex_face_cycle,
    )
    c.validate()
    return c


def _orbits(perm: list[int], expected_len: int, n: int) -> list[int]:
    orbit = [-1] * n
    nxt = 0
    for start in range(n):
        if orbit[start] != -1:
            continue
        x, length = start, 0
        while orbit[x] == -1:
            orbit[x] = nxt
            x = perm[x]
            length += 1
        if length != expected_len:
            raise InconsistentIncidence(
                f"orbit of length {length}, expected {expected_len}"
            )
        nxt += 1
    return orbit


def face_3_coloring(c: SurfaceComplex) -> FaceColoring:
    """Deterministic backtracking 3-coloring of the face-adjacency graph."""
    nf = c.num_faces
    adj: list[set[int]] = [set() for _ in range(nf)]
    for f1, f2 in c.edge_faces:
        if f1 != f2:
            adj[f1].add(f2)
            adj[f2].add(f1)
        else:
            raise NotThreeColorable(f"face {f1} is adjacent to itself")
    colors = [-1] * nf

    def admissible(f: int, col: int) -> bool:
        return all(colors[g] != col for g in adj[f])

    f = 0
    choice = [0] * nf
    while 0 <= f < nf:
        placed = False
        for col in range(choice[f], 3):
            if admissible(f, col):
                colors[f] = col
                choice[f] = col + 1
                placed = True
                break
        if placed:
            f += 1
            if f < nf:
                choice[f] = 0
        else:
            colors[f] = -1
            f -= 1
    if f < 0:
        raise NotThreeColorable("face-adjacency graph admits no proper 3-coloring")
    return FaceColoring(colors)


def edge_coloring(c: SurfaceComplex, fc: FaceColoring) -> EdgeColoring:
    """color(e) = 3 - color(f1) - color(f2) mod 3 for the two incident faces."""
    out = []
    for e, (f1, f2) in enumerate(c.edge_faces):
        c1, c2 = fc.color[f1], fc.color[f2]
        if c1 == c2:
            raise ImproperFaceColoring(
                f"faces {f1}, {f2} of edge {e} share color {c1}"
            )
        out.append((3 - c1 - c2) % 3)
    return EdgeColoring(out)
