import random
from fractions import Fraction

from gkzrank import RankingPair, max_pairs, ranking_lattices, same_ranking_slab
from gkzrank.lattice import lattice_index
from gkzrank.ranking import (
    coset_classes,
    integral_slice,
    orbit_representatives,
    parse_rational_vector,
    slice_cosets,
)
from gkzrank.semigroup import mod_face_membership

from conftest import module, random_modules


def test_integral_slice_empty_for_off_lattice_parameters():
    m = module("hidden")
    g = m.faces.face([2])
    assert integral_slice((Fraction(1, 2), 0, 0), g) is None
    assert integral_slice((1, Fraction(1, 2), 0), g) is not None
    assert integral_slice((Fraction(1, 3), 0, 0), m.faces.empty) is None


def test_slice_cosets_partition_the_slice():
    for m in random_modules(31, 30, dmax=3):
        beta = (1, 2, 0)[: m.d] + (0,) * (m.d - 3)
        for f in m.faces.faces:
            cos = slice_cosets(beta, f)
            if f.dim == 0:
                assert len(cos) == 1
                continue
            assert len(cos) == lattice_index(f.saturated_lattice, f.span_lattice)
            assert len({c.basepoint for c in cos}) == len(cos)


def test_orbit_representatives_avoid_the_face_monoid():
    for m in random_modules(32, 40, dmax=3):
        rng = random.Random(len(m.matrix[0]))
        beta = tuple(rng.randint(-1, 3) for _ in range(m.d))
        for f in m.faces.faces:
            reps = orbit_representatives(m, beta, f)
            index = lattice_index(f.saturated_lattice, f.span_lattice) if f.dim else 1
            assert len(reps) <= index
            for c in reps:
                assert not mod_face_membership(m, f, c.basepoint)


def test_hidden_union_of_cosets():
    m = module("hidden")
    beta = (1, 0, 0)
    rl = ranking_lattices(m, beta)
    f, g = m.faces.face([0, 1, 2]), m.faces.face([2])
    assert sorted(p.basepoint for p in max_pairs(rl.pairs)) == [(0, 1, 0), (1, 1, 0)]
    for v in [(1, 0, 0), (2, 1, 0), (1, 2, 0), (0, 1, 0), (1, 1, 0), (1, 3, 0), (1, -1, 0)]:
        in_f = (tuple(a - b for a, b in zip(v, beta)) in f.span_lattice)
        in_g = (tuple(a - b for a, b in zip(v, (1, 1, 0))) in g.span_lattice)
        assert rl.contains_point(v) == (in_f or in_g)
    assert not rl.contains_point((1, 0, 1))


def test_pairs_are_canonical_and_classes_partition():
    m = module("four_lines")
    rl = ranking_lattices(m, (0, 0, -1))
    flat = [p for c in rl.classes for p in c]
    assert sorted(flat, key=RankingPair.sort_key) == list(rl.pairs)
    for c in coset_classes(list(rl.pairs)):
        for p in c:
            assert any(p.meets(q) for q in c if q != p) or len(c) == 1


def test_signature_is_a_function_of_the_union():
    m = module("hidden")
    assert same_ranking_slab(m, (1, 0, 0), (1, 0, 0))
    # off-lattice points of one line share every slice, so every pair
    assert same_ranking_slab(m, (1, Fraction(1, 2), 0), (1, Fraction(5, 2), 0))
    # an integral hole carries its own empty-face pair
    assert not same_ranking_slab(m, (1, 2, 0), (1, 4, 0))
    assert not same_ranking_slab(m, (1, 0, 0), (2, 0, 0))


def test_rational_parameters_parse_exactly():
    assert parse_rational_vector(["1/2", 3, Fraction(-2, 3)]) == (Fraction(1, 2), Fraction(3), Fraction(-2, 3))


def test_generic_parameter_has_no_ranking_lattices():
    m = module("intro")
    assert ranking_lattices(m, (Fraction(1, 3), Fraction(1, 7))).pairs == ()
    assert ranking_lattices(m, (10, 20)).pairs == ()
