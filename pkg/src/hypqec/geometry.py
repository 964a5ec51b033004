"""Poincare-disk primitives: distances, midpoints, barycentric grid points.

All coordinates produced here are decorative; combinatorial code construction
never reads them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DegenerateTriangle, OutOfDisk

_TOL = 1e-12


@dataclass(frozen=True)
class DiskPoint:
    re: float
    im: float

    def __post_init__(self):
        if self.re * self.re + self.im * self.im >= 1.0 + _TOL:
            raise OutOfDisk(f"|z| >= 1 at ({self.re}, {self.im})")

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)


def _as_z(p) -> complex:
    z = p.z if isinstance(p, DiskPoint) else complex(p)
    if abs(z) >= 1.0 + _TOL:
        raise OutOfDisk(f"|z| = {abs(z)} >= 1")
    return z


def mobius_translate(a: complex, z: complex) -> complex:
    """The disk automorphism sending a to 0, applied to z."""
    return (z - a) / (1 - a.conjugate() * z)


def hyperbolic_distance(p1, p2) -> float:
    z1, z2 = _as_z(p1), _as_z(p2)
    return 2.0 * math.atanh(min(abs(mobius_translate(z1, z2)), 1.0 - 1e-16))


def geodesic_interpolate(p1, p2, t: float) -> complex:
    """Point at fraction t of the geodesic from p1 to p2."""
    z1, z2 = _as_z(p1), _as_z(p2)
    w = mobius_translate(z1, z2)
    r = abs(w)
    if r < _TOL:
        return z1
    # radial geodesic through 0: hyperbolic fraction t means tanh(t*d/2)
    s = math.tanh(t * math.atanh(r))
    u = s * w / r
    return (u + z1) / (1 + z1.conjugate() * u)


def geodesic_midpoint(p1, p2) -> complex:
    z1, z2 = _as_z(p1), _as_z(p2)
    w = mobius_translate(z1, z2)
    m = w / (1 + math.sqrt(max(0.0, 1 - abs(w) ** 2)))
    return (m + z1) / (1 + z1.conjugate() * m)


def barycentric_point(a, b, c, i: int, j: int, f: int) -> complex:
    """Grid point (i, j) of the f-fold subdivision of hyperbolic triangle abc.

    (0,0) is corner a, (f,0) corner c, (0,f) corner b; i steps run a -> c
    and j steps a -> b.  Interior points come from interpolating along the
    i-direction first, then the j-direction.
    """
    za, zb, zc = _as_z(a), _as_z(b), _as_z(c)
    if min(abs(za - zb), abs(zb - zc), abs(za - zc)) < _TOL:
        raise DegenerateTriangle("triangle corners coincide")
    if not (0 <= i and 0 <= j and i + j <= f):
        raise ValueError(f"grid point ({i}, {j}) outside triangle of order {f}")
    if i == f:
        return zc
    lo = geodesic_interpolate(za, zc, i / f)
    hi = geodesic_interpolate(zb, zc, i / f)
    if f - i == 0:
        return lo
    return geodesic_interpolate(lo, hi, j / (f - i))


def rotation_about(center: complex, theta: float):
    """Mobius 2x2 matrix rotating the disk by theta about center."""
    e = cmath.exp(1j * theta)
    cb = center.conjugate()
    # T_c R T_{-c} with T_c(z) = (z + c)/(1 + cb z)
    return (
        (e - center * cb, center * (1 - e)),
        (cb * (e - 1), 1 - e * center * cb),
    )


def mobius_apply(m, z: complex) -> complex:
    (a, b), (c, d) = m
    return (a * z + b) / (c * z + d)


def mobius_compose(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def triangle_rotation_matrices(p: int, q: int = 3):
    """Mobius representations of the {p,q} rotation generators (a, b, g).

    g rotates by 2*pi/p about the face center (origin), b by 2*pi/q about
    a vertex on the positive real axis, and a = (g b)^{-1} is the half-turn
    about the shared edge midpoint, so that the product relation a b g = 1
    holds with a^2 = b^q = g^p = 1.
    """
    if (p - 2) * (q - 2) <= 4:
        raise ValueError("not hyperbolic")
    d_pv = math.acosh(1.0 / (math.tan(math.pi / p) * math.tan(math.pi / q)))
    v = complex(math.tanh(d_pv / 2.0), 0.0)
    g = rotation_about(0j, 2 * math.pi / p)
    b = rotation_about(v, 2 * math.pi / q)
    gb = mobius_compose(b, g)
    (ga, gbb), (gc, gd) = gb
    det = ga * gd - gbb * gc
    a = ((gd / det, -gbb / det), (-gc / det, ga / det))
    return a, b, g


def _mobius_invert(m):
    (a, b), (c, d) = m
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


def embed_complex(c, record) -> None:
    """Attach disk coordinates to a base complex, in place.

    Each flag of the quotient carries the image of the fundamental triangle
    under its coset-representative word; vertices inherit the vertex corner,
    faces the face center (origin).  Purely decorative.
    """
    from .groups import coset_representative_words
    from .tessellation import _orbits

    p, q = c.p, c.q
    ma, mb, mg = triangle_rotation_matrices(p, q)
    d_pv = math.acosh(1.0 / (math.tan(math.pi / p) * math.tan(math.pi / q)))
    v0 = complex(math.tanh(d_pv / 2.0), 0.0)
    mats = {1: ma, 2: mb, 3: mg, -1: _mobius_invert(ma), -2: _mobius_invert(mb), -3: _mobius_invert(mg)}

    ct = record.coset_table
    n = ct.index
    vertex_of = _orbits(ct.action[1], q, n)
    face_of = _orbits(ct.action[2], p, n)
    words = coset_representative_words(ct)

    ident = ((1 + 0j, 0j), (0j, 1 + 0j))
    flag_m = [ident] * n
    for x in range(1, n):
        m = ident
        for letter in words[x]:
            m = mobius_compose(m, mats[letter])
        flag_m[x] = m

    nv = max(vertex_of) + 1
    nf = max(face_of) + 1
    vc: list[complex | None] = [None] * nv
    fc: list[complex | None] = [None] * nf
    for x in range(n):
        if vc[vertex_of[x]] is None:
            vc[vertex_of[x]] = mobius_apply(flag_m[x], v0)
        if fc[face_of[x]] is None:
            fc[face_of[x]] = mobius_apply(flag_m[x], 0j)
    c.vertex_coords = vc
    c.face_coords = fc
