import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gkzrank import NotFullLattice, NotPointed, enumerate_faces, face_volume, normalized_volume
from gkzrank.cone import check_pointed, cone_shift_membership, support_function
from gkzrank.errors import NotAFacet
from gkzrank.lattice import columns, det, rank

from conftest import EXAMPLES, module, random_modules

EXPECTED_VOLUMES = {"hidden": 15, "hidden4": 24, "two_lines": 20, "nonconstant": 185, "plane_line": 21, "four_lines": 16, "intro": 4}


@pytest.mark.parametrize("key,vol", sorted(EXPECTED_VOLUMES.items()))
def test_example_volumes(key, vol):
    m = module(key)
    assert face_volume(m.faces.full, m.faces) == vol


def test_codim_three_faces_of_two_lines_have_volume_one():
    m = module("two_lines")
    rays = [f for f in m.faces.faces if f.codim == 3]
    assert rays
    assert all(face_volume(f, m.faces) == 1 for f in rays)


def test_identity_has_four_faces():
    lat = enumerate_faces([[1, 0], [0, 1]])
    assert [f.columns for f in lat.faces] == [(), (0,), (1,), (0, 1)]
    assert face_volume(lat.full, lat) == 1
    assert face_volume(lat.empty, lat) == 1


def test_rejects_lines_and_sublattices():
    with pytest.raises(NotPointed):
        enumerate_faces([[1, -1, 0], [0, 0, 1]])
    with pytest.raises(NotPointed):
        enumerate_faces([[1, 0], [0, 0]])
    with pytest.raises(NotFullLattice):
        enumerate_faces([[2, 0], [0, 1]])


def test_support_function_rejects_non_facets():
    m = module("hidden")
    with pytest.raises(NotAFacet):
        support_function(m.faces.empty, m.faces)


def _face_checks(m):
    lat = m.faces
    cols = columns(lat.matrix)
    d = lat.d
    # Euler relation of the face poset of a pointed cone
    assert sum((-1) ** f.dim for f in lat.faces) == 0
    for f in lat.faces:
        inside = [i for i, c in enumerate(cols) if rank([cols[j] for j in f.columns] + [c]) == f.dim]
        # a face contains every column lying in its span
        assert tuple(inside) == f.columns
        h = f.interior_functional
        assert all((sum(x * y for x, y in zip(h, c)) == 0) == (i in f.columns) for i, c in enumerate(cols))
        assert all(sum(x * y for x, y in zip(h, c)) >= 0 for c in cols)
    for p in lat.facet_list:
        vals = [p(c) for c in cols]
        assert min(vals) >= 0
        assert p.facet.codim == 1
        from math import gcd
        g = 0
        for x in p.coefficients:
            g = gcd(g, x)
        assert g == 1


def test_face_lattice_properties_on_examples():
    for key in EXAMPLES:
        _face_checks(module(key))


def test_face_lattice_properties_random():
    for m in random_modules(11, 60):
        _face_checks(m)


def test_pulling_and_placing_volumes_agree():
    for m in random_modules(12, 80):
        for f in m.faces.faces:
            a = normalized_volume(f, m.faces, "pulling")
            b = normalized_volume(f, m.faces, "placing", seed=3)
            assert a == b


def _shoelace_volume(cols):
    # twice the area of conv(0, cols) in the plane
    pts = set(map(tuple, cols)) | {(0, 0)}
    pts = sorted(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return abs(sum(hull[i][0] * hull[(i + 1) % len(hull)][1] - hull[(i + 1) % len(hull)][0] * hull[i][1]
                   for i in range(len(hull))))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 5), st.integers(0, 5)), min_size=2, max_size=6))
def test_planar_volume_matches_shoelace(cols):
    a = [[c[0] for c in cols], [c[1] for c in cols]]
    try:
        lat = enumerate_faces(a)
    except (NotPointed, NotFullLattice):
        return
    assert face_volume(lat.full, lat) == _shoelace_volume(cols)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_simplicial_volume_is_determinant(rows):
    if det(rows) not in (1, -1):
        return
    try:
        lat = enumerate_faces(rows)
    except NotPointed:
        return
    assert face_volume(lat.full, lat) == 1


def test_pointedness_certificate_is_positive():
    for m in random_modules(13, 40):
        c = check_pointed(m.matrix)
        assert all(sum(Fraction(x) * y for x, y in zip(c, col)) > 0 for col in columns(m.matrix))


def test_cone_shift_membership():
    lat = module("intro").faces
    assert cone_shift_membership((1, 2), (1, 2), lat)
    assert cone_shift_membership((1, 2), (3, 5), lat)
    assert not cone_shift_membership((1, 2), (1, 1), lat)
