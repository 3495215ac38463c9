# -*- coding: utf-8 -*-
"""
Tests unitaires pour le moteur semi-linéaire
============================================
Arrangements, ensembles drapeautés, opérations booléennes et description.
"""

import unittest
from fractions import Fraction

import hypothesis.strategies as hys
from hypothesis import given, settings

from arrangement_service import (
    CELL, EDGE, VERTEX, FlaggedSet, build_arrangement, complement, describe,
    difference, empty_set, equal, formula_to_set, full_set, intersect,
    is_subset, member, prune, refine, set_from_dict, transfer, union,
)
from errors import CapacityError, DimensionError
from geometry import (
    Space, conjunction, halfspace, normalize_equation, parse_rational,
)

LINE = Space(1)
PLANE = Space(2)


def interval(p, q, left='>=', right='<'):
    return formula_to_set(conjunction(halfspace([1], left, p), halfspace([1], right, q)), LINE)


def square(strict=False):
    low, high = ('>', '<') if strict else ('>=', '<=')
    return formula_to_set(conjunction(
        halfspace([1, 0], low, 0), halfspace([1, 0], high, 1),
        halfspace([0, 1], low, 0), halfspace([0, 1], high, 1),
    ), PLANE)


@hys.composite
def intervals(draw):
    p = draw(hys.integers(min_value=-4, max_value=4))
    q = draw(hys.integers(min_value=p + 1, max_value=5))
    left = draw(hys.sampled_from(['>', '>=']))
    right = draw(hys.sampled_from(['<', '<=']))
    return interval(p, q, left, right)


@hys.composite
def plane_sets(draw, max_lines=4):
    normals = hys.tuples(hys.integers(-2, 2), hys.integers(-2, 2)).filter(lambda a: a != (0, 0))
    equations = draw(hys.lists(hys.tuples(normals, hys.integers(-3, 3)), min_size=1, max_size=max_lines))
    arrangement = build_arrangement([normalize_equation(a, b)[0] for a, b in equations], PLANE)
    flags = draw(hys.lists(hys.booleans(), min_size=len(arrangement), max_size=len(arrangement)))
    return FlaggedSet(arrangement, tuple(flags))


quarter_points = hys.tuples(
    hys.integers(-16, 16).map(lambda n: Fraction(n, 4)),
    hys.integers(-16, 16).map(lambda n: Fraction(n, 4)),
)


class TestGeometry(unittest.TestCase):
    """Rationnels et normalisation des hyperplans."""

    def test_parse_rational(self):
        self.assertEqual(parse_rational('3/6'), Fraction(1, 2))
        self.assertEqual(parse_rational(-2), Fraction(-2))
        with self.assertRaises(ValueError):
            parse_rational('0.5')
        with self.assertRaises(ValueError):
            parse_rational('1/0')

    def test_normalize_equation_is_canonical(self):
        first, flipped_first = normalize_equation([2, -4], 6)
        second, flipped_second = normalize_equation(['-1/2', 1], '-3/2')
        self.assertEqual(first, second)
        self.assertEqual(first.a, (1, -2))
        self.assertEqual(first.b, 3)
        self.assertFalse(flipped_first)
        self.assertTrue(flipped_second)

    def test_zero_coefficients_rejected(self):
        with self.assertRaises(ValueError):
            normalize_equation([0, 0], 1)

    def test_space_dimension(self):
        with self.assertRaises(DimensionError):
            Space(3)


class TestArrangement(unittest.TestCase):
    """Construction des faces, incidences et localisation."""

    def test_two_axes(self):
        lines = [normalize_equation([1, 0], 0)[0], normalize_equation([0, 1], 0)[0]]
        arrangement = build_arrangement(lines, PLANE)
        self.assertEqual(arrangement.counts(), {'lines': 2, 'vertices': 1, 'edges': 4, 'cells': 4})
        origin = arrangement.faces[0]
        self.assertEqual(origin.representative, (0, 0))
        # un sommet voit ses 4 arêtes et ses 4 cellules
        self.assertEqual(len(origin.star), 8)

    def test_three_lines_general_position(self):
        lines = [normalize_equation(a, b)[0] for a, b in (([1, 0], 0), ([0, 1], 0), ([1, 1], 1))]
        arrangement = build_arrangement(lines, PLANE)
        self.assertEqual(arrangement.counts(), {'lines': 3, 'vertices': 3, 'edges': 9, 'cells': 7})

    def test_parallel_lines(self):
        lines = [normalize_equation([1, 0], b)[0] for b in (0, 1, 2)]
        arrangement = build_arrangement(lines, PLANE)
        self.assertEqual(arrangement.counts(), {'lines': 3, 'vertices': 0, 'edges': 3, 'cells': 4})

    def test_duplicates_are_merged(self):
        lines = [normalize_equation([1, 1], 1)[0], normalize_equation([2, 2], 2)[0]]
        self.assertEqual(len(build_arrangement(lines, PLANE).lines), 1)

    def test_real_line_faces(self):
        lines = [normalize_equation([1], b)[0] for b in (1, 0)]
        arrangement = build_arrangement(lines, LINE)
        self.assertEqual(arrangement.counts(), {'lines': 2, 'vertices': 2, 'edges': 0, 'cells': 3})
        self.assertEqual([f.representative for f in arrangement.faces],
                         [(0,), (1,), (-1,), (Fraction(1, 2),), (2,)])

    def test_representatives_are_located_in_their_face(self):
        lines = [normalize_equation(a, b)[0] for a, b in (([1, 0], 0), ([0, 1], 1), ([1, -1], 0), ([1, 2], 3))]
        arrangement = build_arrangement(lines, PLANE)
        for face in arrangement.faces:
            self.assertEqual(arrangement.locate(face.representative), face.index)

    def test_faces_on_line_are_ordered(self):
        lines = [normalize_equation(a, b)[0] for a, b in (([0, 1], 0), ([1, 0], 0), ([1, 0], 1))]
        arrangement = build_arrangement(lines, PLANE)
        trace = arrangement.faces_on_line(0)
        xs = [arrangement.faces[i].representative[0] for i in trace]
        # direction de y = 0 : (-1, 0), donc x décroissant
        self.assertEqual(xs, sorted(xs, reverse=True))
        self.assertEqual(len(trace), 5)

    def test_capacity(self):
        lines = [normalize_equation([1, 0], b)[0] for b in range(3)]
        with self.assertRaises(CapacityError):
            build_arrangement(lines, PLANE, capacity=2)

    def test_zero_capacity_is_honoured(self):
        with self.assertRaises(CapacityError):
            build_arrangement([normalize_equation([1, 0], 0)[0]], PLANE, capacity=0)
        self.assertEqual(len(build_arrangement([], PLANE, capacity=0)), 1)

    @given(plane_sets(), hys.lists(quarter_points, min_size=1, max_size=12))
    @settings(max_examples=80, deadline=None)
    def test_faces_partition_the_plane(self, flagged, points):
        arrangement = flagged.arrangement
        self.assertEqual(len({face.signs for face in arrangement.faces}), len(arrangement))
        for face in arrangement.faces:
            zeros = face.signs.count(0)
            self.assertEqual(face.kind, CELL if zeros == 0 else (EDGE if zeros == 1 else VERTEX))
            self.assertEqual(arrangement.signs_of(face.representative), face.signs)
        for point in points:
            signs = arrangement.signs_of(point)
            owners = [face.index for face in arrangement.faces if face.signs == signs]
            self.assertEqual(owners, [arrangement.locate(point)])

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            formula_to_set(halfspace([1, 0], '<', 0), LINE)


class TestFlaggedSets(unittest.TestCase):
    """Opérations booléennes et description."""

    def test_membership(self):
        closed = square()
        self.assertTrue(member(closed, (Fraction(1, 2), Fraction(1, 2))))
        self.assertTrue(member(closed, (1, 1)))
        self.assertFalse(member(closed, (2, 0)))
        self.assertFalse(member(square(strict=True), (1, Fraction(1, 2))))

    def test_union_across_arrangements(self):
        joined = union(interval(0, 1), interval(1, 2))
        self.assertTrue(equal(joined, interval(0, 2)))

    def test_intersection_and_difference(self):
        a, b = interval(0, 2), interval(1, 3)
        self.assertTrue(equal(intersect(a, b), interval(1, 2)))
        self.assertTrue(equal(difference(a, b), interval(0, 1)))
        self.assertTrue(is_subset(intersect(a, b), a))
        self.assertFalse(is_subset(a, b))

    def test_empty_and_full(self):
        self.assertTrue(empty_set(PLANE).is_empty())
        self.assertTrue(equal(complement(empty_set(PLANE)), full_set(PLANE)))
        self.assertTrue(equal(difference(square(), square()), empty_set(PLANE)))

    def test_describe_real_line(self):
        self.assertEqual(describe(interval(0, 1)), '[0, 1)')
        self.assertEqual(describe(empty_set(LINE)), '∅')
        self.assertEqual(describe(full_set(LINE)), '(-inf, +inf)')
        point = formula_to_set(halfspace([1], '=', 3), LINE)
        self.assertEqual(describe(point), '{3}')
        gaps = union(difference(interval(0, 2, '>', '<'), formula_to_set(halfspace([1], '=', 1), LINE)), point)
        self.assertEqual(describe(gaps), '(0, 1) ∪ (1, 2) ∪ {3}')
        self.assertEqual(describe(complement(interval(0, 1))), '(-inf, 0) ∪ [1, +inf)')

    def test_dict_round_trip(self):
        closed = square()
        restored = set_from_dict(closed.to_dict())
        self.assertEqual(restored, closed)

    def test_set_from_dict_rejects_wrong_flag_count(self):
        data = interval(0, 1).to_dict()
        data['flags']['cells'] = [True]
        with self.assertRaises(ValueError):
            set_from_dict(data)

    def test_prune_removes_useless_lines(self):
        joined = union(interval(0, 1), interval(1, 2))
        self.assertEqual(len(joined.arrangement.lines), 3)
        pruned = prune(joined)
        self.assertEqual(len(pruned.arrangement.lines), 2)
        self.assertTrue(equal(pruned, joined))

    @given(intervals(), intervals())
    @settings(max_examples=40, deadline=None)
    def test_de_morgan(self, a, b):
        self.assertTrue(equal(complement(union(a, b)), intersect(complement(a), complement(b))))
        self.assertTrue(equal(complement(complement(a)), a))

    @given(intervals(), intervals(), hys.integers(min_value=-12, max_value=12))
    @settings(max_examples=40, deadline=None)
    def test_pointwise_union(self, a, b, twice):
        x = (Fraction(twice, 2),)
        self.assertEqual(member(union(a, b), x), member(a, x) or member(b, x))
        self.assertEqual(member(intersect(a, b), x), member(a, x) and member(b, x))

    @given(plane_sets(), plane_sets(), hys.lists(quarter_points, min_size=1, max_size=12))
    @settings(max_examples=60, deadline=None)
    def test_refinement_keeps_membership(self, a, b, points):
        finer_a, finer_b = refine(a, b)
        self.assertEqual(finer_a.arrangement, finer_b.arrangement)
        self.assertTrue(equal(finer_a, a))
        for point in points:
            self.assertEqual(member(finer_a, point), member(a, point))
            self.assertEqual(member(finer_b, point), member(b, point))
        # retour sur l'arrangement d'origine
        self.assertEqual(transfer(finer_a, a.arrangement), a)


if __name__ == '__main__':
    unittest.main(verbosity=2)
