import pytest

from hypqec.errors import NonIntegral, NotHyperbolic
from hypqec.tessellation import (
    build_complex,
    combinatorial_params,
    edge_coloring,
    euler_genus,
    face_3_coloring,
    SurfaceComplex,
)

from helpers import toric_complex


def torsion_free(recs, index):
    out = [r for r in recs if r.index == index and r.torsion_free]
    assert out, f"no torsion-free quotient at index {index}"
    return out[0]


def test_combinatorial_params_83():
    assert combinatorial_params(8, 3, 2) == (6, 24, 16)
    assert combinatorial_params(8, 3, 3) == (12, 48, 32)
    assert combinatorial_params(10, 3, 6) == (15, 75, 50)
    assert combinatorial_params(12, 3, 10) == (18, 108, 72)


def test_combinatorial_params_rejects_flat():
    with pytest.raises(NotHyperbolic):
        combinatorial_params(4, 4, 2)
    with pytest.raises(NotHyperbolic):
        combinatorial_params(6, 3, 2)


def test_combinatorial_params_non_integral():
    with pytest.raises(NonIntegral):
        combinatorial_params(14, 3, 2)  # F = 12/8


def test_genus2_complex_counts(quotient_cache):
    rec = torsion_free(quotient_cache(8, 96), 48)
    c = build_complex(rec)
    assert (c.num_faces, c.num_edges, c.num_vertices) == (6, 24, 16)
    assert euler_genus(c) == (-2, 2)


def test_h32_complex_counts(quotient_cache):
    rec = torsion_free(quotient_cache(8, 96), 96)
    c = build_complex(rec)
    assert (c.num_faces, c.num_edges, c.num_vertices) == (12, 48, 32)
    assert euler_genus(c) == (-4, 3)


def test_h50_complex_counts(quotient_cache):
    rec = torsion_free(quotient_cache(10, 150), 150)
    c = build_complex(rec)
    assert (c.num_faces, c.num_edges, c.num_vertices) == (15, 75, 50)
    assert euler_genus(c) == (-10, 6)


def test_tetrahedron_euler():
    c = SurfaceComplex(
        p=3,
        q=3,
        edge_endpoints=[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        face_boundary=[[0, 3, 1], [0, 4, 2], [1, 5, 2], [3, 5, 4]],
        vertex_star=[[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]],
    )
    c.validate()
    assert euler_genus(c) == (2, 0)


def test_face_coloring_proper(quotient_cache):
    for p, mi, idx in [(8, 96, 48), (8, 96, 96), (10, 150, 150)]:
        c = build_complex(torsion_free(quotient_cache(p, mi), idx))
        fc = face_3_coloring(c)
        assert set(fc.color) <= {0, 1, 2}
        for f1, f2 in c.edge_faces:
            assert fc.color[f1] != fc.color[f2]


def test_edge_colors_distinct_around_vertices(quotient_cache):
    c = build_complex(torsion_free(quotient_cache(8, 96), 96))
    ec = edge_coloring(c, face_3_coloring(c))
    for star in c.vertex_star:
        assert sorted(ec.color[e] for e in star) == [0, 1, 2]


def test_invariant_vector_labeling_independent(quotient_cache):
    c = build_complex(torsion_free(quotient_cache(8, 96), 96))
    # relabel edges by a fixed permutation and rebuild
    ne = c.num_edges
    perm = [(7 * e + 3) % ne for e in range(ne)]
    assert sorted(perm) == list(range(ne))
    inv = [0] * ne
    for e, pe in enumerate(perm):
        inv[pe] = e
    c2 = SurfaceComplex(
        p=c.p,
        q=c.q,
        edge_endpoints=[c.edge_endpoints[inv[e]] for e in range(ne)],
        face_boundary=[[perm[e] for e in cyc] for cyc in c.face_boundary],
        vertex_star=[[perm[e] for e in star] for star in c.vertex_star],
    )
    c2.validate()
    assert c.invariant_vector() == c2.invariant_vector()


def test_toric_complex_is_valid_torus():
    for lx, ly, twist in [(2, 2, 0), (3, 3, 0), (3, 3, 1), (4, 3, 2)]:
        c = toric_complex(lx, ly, twist)
        assert euler_genus(c) == (0, 1)
        assert c.num_edges == 2 * lx * ly
