import pytest

from hypqec import css
from hypqec.errors import InvalidF, NotTriangulableDual
from hypqec.finegrain import fine_grained_code, subdivide
from hypqec.geometry import embed_complex
from hypqec.tessellation import build_complex, edge_coloring, face_3_coloring

from helpers import toric_complex


@pytest.fixture(scope="session")
def base_codes(quotient_cache):
    cache = {}

    def get(p, max_index, index, name, coords=False):
        if name not in cache:
            recs = quotient_cache(p, max_index)
            rec = next(r for r in recs if r.index == index and r.torsion_free)
            c = build_complex(rec)
            if coords:
                embed_complex(c, rec)
            cache[name] = css.from_complex(
                c, edge_coloring(c, face_3_coloring(c)), name
            )
        return cache[name]

    return get


@pytest.mark.parametrize(
    "args,f,n,k,d",
    [
        ((8, 48, 48, "H16"), 2, 96, 4, 4),
        ((8, 48, 48, "H16"), 3, 216, 4, 6),
        ((8, 48, 48, "H16"), 4, 384, 4, 8),
        ((10, 150, 150, "H50"), 3, 675, 12, 9),
        ((12, 216, 216, "H72"), 2, 432, 20, 6),
    ],
)
def test_fine_grained_parameters(base_codes, args, f, n, k, d):
    code = fine_grained_code(base_codes(*args), f)
    assert (code.n, code.k) == (n, k)
    dx, dz = css.distance(code)
    assert min(dx, dz) == d
    base = base_codes(*args)
    css.distance(base)
    assert min(dx, dz) >= f * base.d


def test_f1_is_identity(base_codes):
    base = base_codes(8, 48, 48, "H16")
    c2, ec2 = subdivide(base.complex, base.edge_colors, None, 1)
    assert c2.edge_endpoints == base.complex.edge_endpoints
    assert c2.face_boundary == base.complex.face_boundary
    assert ec2.color == base.edge_colors.color


def test_invalid_f(base_codes):
    base = base_codes(8, 48, 48, "H16")
    with pytest.raises(InvalidF):
        subdivide(base.complex, base.edge_colors, None, 0)


def test_euler_characteristic_preserved(base_codes):
    base = base_codes(8, 48, 48, "H16")
    c = base.complex
    chi = c.num_vertices - c.num_edges + c.num_faces
    for f in (2, 3):
        code = fine_grained_code(base, f)
        nc = code.complex
        assert nc.num_vertices - nc.num_edges + nc.num_faces == chi


def test_inherited_colors_proper(base_codes):
    base = base_codes(8, 48, 48, "H16")
    for f in (2, 3, 4):
        code = fine_grained_code(base, f)
        nc, ec = code.complex, code.edge_colors
        for star in nc.vertex_star:
            assert sorted(ec.color[e] for e in star) == [0, 1, 2]


def test_corner_colors_match_base_when_f_is_1_mod_3(base_codes):
    base = base_codes(8, 48, 48, "H16")
    fc = face_3_coloring(base.complex)
    code = fine_grained_code(base, 4)
    nc = code.complex
    for idx, key in enumerate(nc.node_keys):
        if key[0] == "c":
            assert nc.node_colors[idx] == fc.color[key[1]]


def test_toric_subdivision_oracle():
    c = toric_complex(3, 3)
    new, ec = subdivide(c, None, None, 2)
    assert new.num_edges == 72
    assert ec is None
    code = css.from_complex(new, None, "toric_f2")
    assert code.k == 2
    assert css.distance(code) == (6, 6)


def test_coordinate_corruption_is_combinatorially_inert(quotient_cache):
    recs = quotient_cache(8, 48)
    rec = next(r for r in recs if r.index == 48 and r.torsion_free)
    c = build_complex(rec)
    embed_complex(c, rec)
    base = css.from_complex(c, edge_coloring(c, face_3_coloring(c)), "H16")
    clean = fine_grained_code(base, 2)
    d_clean = css.distance(clean)
    # scramble every coordinate, rebuild, compare combinatorics
    c.vertex_coords = [complex(0.001 * i, -0.002 * i) for i in range(c.num_vertices)]
    c.face_coords = [complex(-0.003 * i, 0.001 * i) for i in range(c.num_faces)]
    dirty = fine_grained_code(base, 2)
    assert (dirty.n, dirty.k) == (clean.n, clean.k)
    assert css.distance(dirty) == d_clean


def test_coordinates_placed_when_present(base_codes):
    base = base_codes(8, 48, 48, "H16c", coords=True)
    code = fine_grained_code(base, 2)
    nc = code.complex
    assert nc.vertex_coords is not None and len(nc.vertex_coords) == nc.num_vertices
    assert all(abs(z) < 1 for z in nc.vertex_coords)


def test_mixed_degree_rejected():
    c = toric_complex(3, 3)
    # merging two stars is illegal anyway; emulate a degree mismatch instead
    c.vertex_star[0] = c.vertex_star[0][:3]
    with pytest.raises(Exception):
        subdivide(c, None, None, 2)


def test_provenance_recorded(base_codes):
    code = fine_grained_code(base_codes(8, 48, 48, "H16"), 2)
    assert code.provenance == {"base_name": "H16", "f": 2}
    assert code.name == "H16_f2"
