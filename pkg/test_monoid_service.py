# -*- coding: utf-8 -*-
"""
Tests unitaires pour le réécrivain
==================================
Formes canoniques, traces, sûreté des suffixes, table du monoïde et
validité sémantique des règles.
"""

import random
import unittest
from itertools import product

import hypothesis.strategies as hys
from hypothesis import given, settings

from arrangement_service import equal, formula_to_set
from errors import RewriteError
from geometry import Space, conjunction, halfspace
from monoid_service import (
    CONVEX, CONVEX_SAFE, GENERAL, enumerate_canonical, monoid_table, reduce,
    reduce_with_trace, semantic_classes, weight,
)
from orbit_service import OpWord, apply_word
from selftest_service import nonconvex_orbit_seed, random_convex_seed

GENERAL_WORDS = ['ε', 'f', 'g', 'fg', 'gf', 'fgf', 'gfg', 'fgfg', 'gfgf',
                 'fgfgf', 'gfgfg', 'fgfgfg', 'gfgfgf', 'gfgfgfg']
CONVEX_WORDS = ['ε', 'f', 'g', 'fg', 'gf', 'fgf', 'gfg', 'gfgf']

words = hys.text(alphabet='fgh', max_size=9)


class TestCanonicalForms(unittest.TestCase):

    def test_general_mode(self):
        self.assertEqual([str(w) for w in enumerate_canonical(GENERAL)], GENERAL_WORDS)

    def test_convex_mode(self):
        self.assertEqual([str(w) for w in enumerate_canonical(CONVEX)], CONVEX_WORDS)

    def test_max_len_too_small(self):
        with self.assertRaises(ValueError):
            enumerate_canonical(GENERAL, max_len=6)

    def test_unknown_mode(self):
        with self.assertRaises(ValueError):
            reduce('fg', 'topological')


class TestReduction(unittest.TestCase):

    def test_trace(self):
        normal, steps = reduce_with_trace('gfgfg', CONVEX)
        self.assertEqual(normal, OpWord('gf'))
        self.assertEqual(len(steps), 1)
        self.assertEqual(str(steps[0].rule), 'fgfg → f')
        self.assertEqual(steps[0].position, 1)
        self.assertEqual(steps[0].to_dict()['requirement'], 'convex-seed')

    def test_general_rules_do_not_use_convexity(self):
        self.assertEqual(reduce('gfgfg', GENERAL), OpWord('gfgfg'))
        self.assertEqual(reduce('fgfgfgf', GENERAL), OpWord('fgf'))
        self.assertEqual(reduce('ggffg', GENERAL), OpWord('fg'))

    def test_cor_letter(self):
        self.assertEqual(reduce('h', GENERAL), OpWord('gfg'))
        self.assertEqual(reduce('hf', GENERAL), OpWord('gfgf'))
        self.assertEqual(reduce('h', CONVEX), OpWord('gfg'))
        self.assertEqual(reduce('fh', CONVEX), OpWord('f'))
        self.assertEqual(reduce('hf', CONVEX), OpWord('gfg'))
        self.assertEqual(reduce('hhh', CONVEX), OpWord('gfg'))

    def test_misplaced_cor_rejected(self):
        with self.assertRaises(RewriteError) as ctx:
            reduce('fhg', CONVEX)
        self.assertEqual(ctx.exception.position, 1)

    def test_suffix_rule_skips_unsafe_occurrence(self):
        # l'occurrence en tête de fgfgfgf a un g à sa droite
        normal, steps = reduce_with_trace('fgfgfgf', CONVEX)
        self.assertEqual(normal, OpWord('fgf'))
        self.assertEqual(steps[0].position, 2)

    @given(words)
    @settings(max_examples=200, deadline=None)
    def test_weight_decreases(self, letters):
        _, steps = reduce_with_trace(letters, GENERAL)
        for step in steps:
            self.assertLess(weight(step.after), weight(step.before))

    @given(hys.text(alphabet='fg', max_size=12))
    @settings(max_examples=200, deadline=None)
    def test_convex_rules_only_fire_on_safe_suffix(self, letters):
        normal, steps = reduce_with_trace(letters, CONVEX)
        self.assertIn(str(normal), CONVEX_WORDS)
        for step in steps:
            if step.rule.requirement == 'convex-seed':
                suffix = step.before[step.position + len(step.rule.lhs):]
                self.assertTrue(set(suffix) <= CONVEX_SAFE)


class TestMonoidTable(unittest.TestCase):

    def test_general_table(self):
        table = monoid_table(GENERAL)
        self.assertTrue(table.closed)
        self.assertEqual(table.product('fg', 'fg'), OpWord('fgfg'))
        self.assertEqual(table.product('gfgfgfg', 'g'), OpWord('gfgfgf'))
        self.assertFalse(table.convex_entries)

    def test_convex_table(self):
        table = monoid_table(CONVEX)
        self.assertTrue(table.closed)
        self.assertEqual(table.product('fg', 'fg'), OpWord('f'))
        self.assertIn((OpWord('fg'), OpWord('fg')), table.convex_entries)
        data = table.to_dict()
        self.assertEqual(len(data['table']), 8)
        self.assertIn(['fg', 'fg'], data['convex_seed_entries'])
        self.assertIn('*', table.to_text())

    def test_frame_labels(self):
        frame = monoid_table(CONVEX).to_frame()
        self.assertEqual(list(frame.columns), CONVEX_WORDS)
        self.assertEqual(frame.loc['g', 'g'], 'ε')


class TestSemantics(unittest.TestCase):

    def test_semilinear_collapse_to_ten_classes(self):
        classes = semantic_classes(enumerate_canonical(GENERAL), [nonconvex_orbit_seed()])
        self.assertEqual(len(classes), 10)
        grouped = [[str(w) for w in group] for group in classes if len(group) > 1]
        self.assertEqual(grouped, [['fgf', 'fgfgfg'], ['fgfg', 'fgfgf'], ['gfgf', 'gfgfgfg'], ['gfgfg', 'gfgfgf']])

    def test_convex_rewrites_are_sound(self):
        rng = random.Random(17)
        seeds = [formula_to_set(conjunction(halfspace([1], '>=', 0), halfspace([1], '<', 1)), Space(1))]
        while len(seeds) < 6:
            seed = random_convex_seed(rng, 2)
            if not apply_word('h', seed).is_empty():
                seeds.append(seed)
        for seed in seeds:
            for length in range(8):
                for letters in product('fg', repeat=length):
                    word = ''.join(letters)
                    self.assertTrue(equal(apply_word(word, seed), apply_word(reduce(word, CONVEX), seed)), word)


if __name__ == '__main__':
    unittest.main(verbosity=2)
