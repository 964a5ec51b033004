import pytest

from hypqec.groups import enumerate_normal_subgroups, triangle_rotation_presentation


@pytest.fixture(scope="session")
def quotient_cache():
    """Memoized normal-subgroup enumerations, shared across test modules."""
    cache = {}

    def get(p, max_index):
        key = (p, max_index)
        if key not in cache:
            pres = triangle_rotation_presentation(p)
            cache[key] = enumerate_normal_subgroups(pres, max_index)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def code_factory(quotient_cache):
    """Build (and cache) named codes from (p, index) quotients."""
    from hypqec import css
    from hypqec.tessellation import build_complex, edge_coloring, face_3_coloring

    cache = {}

    def get(p, index, name):
        if name not in cache:
            recs = quotient_cache(p, index)
            rec = next(r for r in recs if r.index == index and r.torsion_free)
            c = build_complex(rec)
            cache[name] = css.from_complex(
                c, edge_coloring(c, face_3_coloring(c)), name
            )
        return cache[name]

    return get
