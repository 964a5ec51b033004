"""Semi-hyperbolic fine-graining: f-fold subdivision of the dual triangulation.

Each degree-3 vertex of the base complex is a triangle of the dual
triangulation (its corners are the three surrounding faces); subdivision
splits it into f^2 small triangles on a grid, gluing shared-edge grid points
globally, then dualizes back to a surface complex with f^2 times as many
edges and unchanged topology.
"""

from __future__ import annotations

from . import css, geometry
from .errors import (
    InvalidF,
    NotTriangulableDual,
    PostconditionFailed,
)
from .tessellation import (
    EdgeColoring,
    FaceColoring,
    SurfaceComplex,
)


def subdivide(
    c: SurfaceComplex,
    ec: EdgeColoring | None,
    fc: FaceColoring | None,
    f: int,
) -> tuple[SurfaceComplex, EdgeColoring | None]:
    if f < 1:
        raise InvalidF(f"f = {f} must be >= 1")
    if f == 1:
        out = SurfaceComplex(
            p=c.p,
            q=c.q,
            edge_endpoints=list(c.edge_endpoints),
            face_boundary=[list(b) for b in c.face_boundary],
            vertex_star=[list(s) for s in c.vertex_star],
            vertex_face_cycle=(
                [list(s) for s in c.vertex_face_cycle]
                if c.vertex_face_cycle
                else None
            ),
            vertex_coords=list(c.vertex_coords) if c.vertex_coords else None,
            face_coords=list(c.face_coords) if c.face_coords else None,
        )
        return out, (EdgeColoring(list(ec.color)) if ec else None)

    if c.vertex_face_cycle is None:
        raise NotTriangulableDual("complex lacks vertex rotation data")
    degrees = {len(s) for s in c.vertex_star}
    if degrees == {3}:
        cell_size = 3
    elif degrees == {4}:
        cell_size = 4  # square dual cells: fixture lattices only
    else:
        raise NotTriangulableDual(f"vertex degrees {sorted(degrees)} unsupported")
    for v in range(c.num_vertices):
        if len(set(c.vertex_face_cycle[v])) != len(c.vertex_face_cycle[v]):
            raise NotTriangulableDual(f"vertex {v} touches a face twice")
    for e, (f1, f2) in enumerate(c.edge_faces):
        if f1 == f2:
            raise NotTriangulableDual(f"edge {e} has one face on both sides")

    delta = _rotation_convention(c)

    def edge_at(v: int, k: int) -> int:
        # primal edge between faces cycle[k] and cycle[k+1] around v
        d = len(c.vertex_star[v])
        return c.vertex_star[v][k if delta == 1 else (k + 1) % d]

    node_id: dict = {}
    node_keys: list = []

    def nid(key) -> int:
        if key not in node_id:
            node_id[key] = len(node_keys)
            node_keys.append(key)
        return node_id[key]

    def edge_node(e: int, start_face: int, t: int) -> tuple:
        if c.edge_faces[e][0] != start_face:
            t = f - t
        return ("e", e, t)

    cells: list[list[int]] = []  # cyclic corner-node lists of small cells
    cell_owner: list[tuple] = []  # (base vertex, i, j, orientation) for coords
    color_delta: dict[tuple[int, int], int] = {}

    for v in range(c.num_vertices):
        cyc = c.vertex_face_cycle[v]
        if cell_size == 3:
            grid = _triangle_grid(c, v, cyc, f, edge_at, edge_node, nid)
            if fc is not None:
                di = (fc.color[cyc[2]] - fc.color[cyc[0]]) % 3
                dj = (fc.color[cyc[1]] - fc.color[cyc[0]]) % 3
                _record_deltas_triangle(grid, f, di, dj, color_delta)
            for i in range(f):
                for j in range(f - i):
                    cells.append([grid[i, j], grid[i + 1, j], grid[i, j + 1]])
                    cell_owner.append((v, i, j, "u"))
            for i in range(f - 1):
                for j in range(f - 1 - i):
                    cells.append(
                        [grid[i + 1, j], grid[i, j + 1], grid[i + 1, j + 1]]
                    )
                    cell_owner.append((v, i, j, "d"))
        else:
            grid = _square_grid(c, v, cyc, f, edge_at, edge_node, nid)
            for i in range(f):
                for j in range(f):
                    cells.append(
                        [
                            grid[i, j],
                            grid[i + 1, j],
                            grid[i + 1, j + 1],
                            grid[i, j + 1],
                        ]
                    )
                    cell_owner.append((v, i, j, "s"))

    edge_index: dict[frozenset, int] = {}
    edge_cells: list[list[int]] = []
    for t, corners in enumerate(cells):
        m = len(corners)
        for s in range(m):
            key = frozenset((corners[s], corners[(s + 1) % m]))
            if key not in edge_index:
                edge_index[key] = len(edge_cells)
                edge_cells.append([])
            edge_cells[edge_index[key]].append(t)
    for e, ts in enumerate(edge_cells):
        if len(ts) != 2:
            raise NotTriangulableDual(
                f"subdivided edge {e} borders {len(ts)} cells"
            )

    nn = len(node_keys)
    node_edges: list[list[int]] = [[] for _ in range(nn)]
    for key, e in edge_index.items():
        for node in key:
            node_edges[node].append(e)

    cell_edges: list[list[int]] = []
    for corners in cells:
        m = len(corners)
        cell_edges.append(
            [
                edge_index[frozenset((corners[s], corners[(s + 1) % m]))]
                for s in range(m)
            ]
        )

    face_boundary = [
        _boundary_walk(node, node_edges[node], edge_cells, cells, cell_edges)
        for node in range(nn)
    ]

    endpoints = [(ts[0], ts[1]) for ts in edge_cells]
    new = SurfaceComplex(
        p=c.p,
        q=c.q,
        edge_endpoints=endpoints,
        face_boundary=face_boundary,
        vertex_star=cell_edges,
        vertex_face_cycle=cells,
    )
    new.validate()
    if new.num_edges != f * f * c.num_edges:
        raise PostconditionFailed(
            f"E' = {new.num_edges}, expected {f * f * c.num_edges}"
        )
    chi = c.num_vertices - c.num_edges + c.num_faces
    chi_new = new.num_vertices - new.num_edges + new.num_faces
    if chi_new != chi:
        raise PostconditionFailed(f"chi changed: {chi} -> {chi_new}")

    new.node_keys = node_keys  # face index -> subdivision-grid identity
    new_ec = None
    if fc is not None and cell_size == 3:
        node_color = _integrate_colors(nn, node_keys, color_delta, fc)
        colors = [0] * len(edge_cells)
        for key, e in edge_index.items():
            n1, n2 = tuple(key)
            if node_color[n1] == node_color[n2]:
                raise PostconditionFailed("adjacent subdivision nodes share color")
            colors[e] = (3 - node_color[n1] - node_color[n2]) % 3
        new.node_colors = node_color
        new_ec = EdgeColoring(colors)

    if c.face_coords is not None and cell_size == 3:
        _place_coordinates(c, new, node_keys, cells, cell_owner, f)
    return new, new_ec


def _rotation_convention(c: SurfaceComplex) -> int:
    """Offset relating star slots to face-cycle slots (+1 or -1)."""
    for delta in (1, -1):
        ok = True
        for v in range(c.num_vertices):
            star, cyc = c.vertex_star[v], c.vertex_face_cycle[v]
            d = len(star)
            for k in range(d):
                e = star[k if delta == 1 else (k + 1) % d]
                if set(c.edge_faces[e]) != {cyc[k], cyc[(k + 1) % d]}:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return delta
    raise NotTriangulableDual("rotation data inconsistent with edge incidences")


def _triangle_grid(c, v, cyc, f, edge_at, edge_node, nid):
    a, b, cc = cyc[0], cyc[1], cyc[2]
    e_ab, e_bc, e_ca = edge_at(v, 0), edge_at(v, 1), edge_at(v, 2)
    grid = {}
    for i in range(f + 1):
        for j in range(f + 1 - i):
            if i == 0 and j == 0:
                key = ("c", a)
            elif i == f:
                key = ("c", cc)
            elif j == f:
                key = ("c", b)
            elif j == 0:
                key = edge_node(e_ca, a, i)
            elif i == 0:
                key = edge_node(e_ab, a, j)
            elif i + j == f:
                key = edge_node(e_bc, b, i)
            else:
                key = ("i", v, i, j)
            grid[i, j] = nid(key)
    return grid


def _square_grid(c, v, cyc, f, edge_at, edge_node, nid):
    a, b, cc, d = cyc[0], cyc[1], cyc[2], cyc[3]
    e_ab, e_bc, e_cd, e_da = (edge_at(v, k) for k in range(4))
    grid = {}
    for i in range(f + 1):
        for j in range(f + 1):
            if (i, j) == (0, 0):
                key = ("c", a)
            elif (i, j) == (f, 0):
                key = ("c", b)
            elif (i, j) == (f, f):
                key = ("c", cc)
            elif (i, j) == (0, f):
                key = ("c", d)
            elif j == 0:
                key = edge_node(e_ab, a, i)
            elif i == f:
                key = edge_node(e_bc, b, j)
            elif j == f:
                key = edge_node(e_cd, d, i)
            elif i == 0:
                key = edge_node(e_da, a, j)
            else:
                key = ("i", v, i, j)
            grid[i, j] = nid(key)
    return grid


def _record_deltas_triangle(grid, f, di, dj, color_delta):
    def put(n1, n2, d):
        if (n1, n2) in color_delta:
            if color_delta[n1, n2] != d:
                raise PostconditionFailed("inconsistent color step on shared edge")
        color_delta[n1, n2] = d
        color_delta[n2, n1] = (-d) % 3

    for i in range(f + 1):
        for j in range(f + 1 - i):
            if i + j < f:
                put(grid[i, j], grid[i + 1, j], di)
                put(grid[i, j], grid[i, j + 1], dj)
    for i in range(f):
        for j in range(f - i):
            # diagonal of the up-triangle at (i, j)
            put(grid[i + 1, j], grid[i, j + 1], (dj - di) % 3)


def _integrate_colors(nn, node_keys, color_delta, fc):
    """Globally consistent node colors from the per-step color differences."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nn)]
    for (n1, n2), d in color_delta.items():
        adj[n1].append((n2, d))
    base = min(
        (node_id for node_id, key in enumerate(node_keys) if key[0] == "c"),
        key=lambda n: node_keys[n][1],
    )
    color = [-1] * nn
    color[base] = fc.color[node_keys[base][1]]
    stack = [base]
    while stack:
        n = stack.pop()
        for m, d in adj[n]:
            val = (color[n] + d) % 3
            if color[m] == -1:
                color[m] = val
                stack.append(m)
            elif color[m] != val:
                raise PostconditionFailed("color holonomy around a cycle")
    if any(v == -1 for v in color):
        raise PostconditionFailed("color integration did not reach every node")
    return color


def _boundary_walk(node, incident, edge_cells, cells, cell_edges):
    """Cyclic edge order around a subdivision node, walked cell to cell."""

    def edges_at(t):
        return [e for e in cell_edges[t] if e in incident_set]

    incident_set = set(incident)
    e0 = incident[0]
    t = edge_cells[e0][0]
    walk = [e0]
    cur_e, cur_t = e0, t
    while True:
        pair = edges_at(cur_t)
        nxt_e = pair[0] if pair[1] == cur_e else pair[1]
        if nxt_e == e0:
            break
        walk.append(nxt_e)
        a, b = edge_cells[nxt_e]
        cur_t = b if a == cur_t else a
        cur_e = nxt_e
    if len(walk) != len(incident):
        raise NotTriangulableDual(
            f"node {node} link is not a single cycle"
        )
    return walk


def _place_coordinates(c, new, node_keys, cells, cell_owner, f):
    """Decorative disk coordinates for the subdivided complex."""
    try:
        node_z: list[complex | None] = [None] * len(node_keys)
        for t, (v, i, j, kind) in enumerate(cell_owner):
            cyc = c.vertex_face_cycle[v]
            za = c.face_coords[cyc[0]]
            zb = c.face_coords[cyc[1]]
            zc = c.face_coords[cyc[2]]
            if kind == "u":
                pts = [(i, j), (i + 1, j), (i, j + 1)]
            else:
                pts = [(i + 1, j), (i, j + 1), (i + 1, j + 1)]
            for node, (gi, gj) in zip(cells[t], pts):
                if node_z[node] is None:
                    node_z[node] = geometry.barycentric_point(
                        za, zb, zc, gi, gj, f
                    )
        vz = []
        for t, corners in enumerate(cells):
            zs = [node_z[n] for n in corners]
            m = geometry.geodesic_midpoint(zs[0], zs[1])
            vz.append(geometry.geodesic_interpolate(m, zs[2], 1.0 / 3.0))
        new.vertex_coords = vz
        new.face_coords = node_z
    except Exception:
        new.vertex_coords = None
        new.face_coords = None


def fine_grained_code(base: css.CssCode, f: int) -> css.CssCode:
    """Subdivide a base code's complex and rebuild the CSS code.

    n' = f^2 n and k' = k are enforced; distances are left to distance().
    """
    if base.complex is None:
        raise ValueError("base code lacks its source complex")
    fc = _face_coloring_from_edges(base)
    new_c, new_ec = subdivide(base.complex, base.edge_colors, fc, f)
    name = base.name if f == 1 else f"{base.name}_f{f}"
    code = css.from_complex(new_c, new_ec, name)
    if code.n != f * f * base.n:
        raise PostconditionFailed(f"n' = {code.n} != f^2 n = {f * f * base.n}")
    if code.k != base.k:
        raise PostconditionFailed(f"k' = {code.k} != k = {base.k}")
    code.provenance = {"base_name": base.name, "f": f}
    return code


def _face_coloring_from_edges(base: css.CssCode) -> FaceColoring | None:
    """Face 3-coloring backing the inherited colors (re-derived, deterministic)."""
    if base.edge_colors is None:
        return None
    from .tessellation import face_3_coloring

    return face_3_coloring(base.complex)
