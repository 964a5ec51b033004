"""Shared test scaffolding: small toric complexes and a brute-force distance."""

import numpy as np

from hypqec.gf2 import _eliminate, kernel_basis, rank
from hypqec.tessellation import SurfaceComplex


def toric_complex(lx: int, ly: int, twist: int = 0) -> SurfaceComplex:
    """{4,4} tessellation of a (possibly twisted) torus.

    Horizontal wrap from column lx-1 back to column 0 shifts rows by
    ``twist``, which changes the homology basis lengths without changing
    V - E + F.
    """
    assert lx >= 2 and ly >= 2

    def vid(i, j):
        return (i % lx) * ly + (j % ly)

    def h_edge(i, j):  # rightward from (i, j)
        return (i % lx) * ly + (j % ly)

    def v_edge(i, j):  # upward from (i, j)
        return lx * ly + (i % lx) * ly + (j % ly)

    endpoints = []
    for i in range(lx):
        for j in range(ly):
            jr = (j + twist) % ly if i == lx - 1 else j
            endpoints.append((vid(i, j), vid(i + 1, jr)))
    for i in range(lx):
        for j in range(ly):
            endpoints.append((vid(i, j), vid(i, j + 1)))

    faces = []
    for i in range(lx):
        for j in range(ly):
            jr = (j + twist) % ly if i == lx - 1 else j
            faces.append(
                [h_edge(i, j), v_edge(i + 1, jr), h_edge(i, j + 1), v_edge(i, j)]
            )

    stars = []
    cycles = []
    for i in range(lx):
        for j in range(ly):
            jl = (j - twist) % ly if i == 0 else j
            stars.append(
                [h_edge(i, j), v_edge(i, j), h_edge(i - 1, jl), v_edge(i, j - 1)]
            )
            fid = lambda a, b: (a % lx) * ly + (b % ly)
            cycles.append(
                [fid(i, j), fid(i - 1, jl), fid(i - 1, jl - 1), fid(i, j - 1)]
            )

    c = SurfaceComplex(
        p=4,
        q=4,
        edge_endpoints=endpoints,
        face_boundary=faces,
        vertex_star=stars,
        vertex_face_cycle=cycles,
    )
    c.validate()
    return c


def exhaustive_min_logical_weight(stab: np.ndarray, opposite: np.ndarray) -> int:
    """Min weight over ker(opposite) \\ rowspace(stab), by full enumeration."""
    ker = kernel_basis(opposite)
    stab_red, stab_rank, _ = _eliminate(np.asarray(stab, dtype=np.uint8) & 1)
    stab_red = stab_red[:stab_rank]
    dim = ker.shape[0]
    assert dim <= 22, "enumeration oracle limited to small kernels"
    best = None
    for bits in range(1, 1 << dim):
        v = np.zeros(ker.shape[1], dtype=np.uint8)
        for i in range(dim):
            if (bits >> i) & 1:
                v ^= ker[i]
        if rank(np.vstack([stab_red, v[None, :]])) == stab_rank:
            continue  # stabilizer, not a logical
        w = int(v.sum())
        if best is None or w < best:
            best = w
    assert best is not None
    return best
