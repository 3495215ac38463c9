# -*- coding: utf-8 -*-
"""
Tests unitaires pour l'autotest
===============================
Générateurs aléatoires, déterminisme et rapport des critères.
"""

import os
import random
import unittest
from unittest import mock

from config import Config
from operators_service import is_convex
from selftest_service import (
    CheckResult, SelftestService, random_convex_hrep, random_convex_seed,
    random_semilinear_set,
)
from separation_service import hrep_to_flagged


class TestGenerators(unittest.TestCase):
    """Générateurs d'ensembles."""

    def test_convex_generator_is_convex(self):
        rng = random.Random(1)
        for _ in range(25):
            self.assertTrue(is_convex(random_convex_seed(rng)))

    def test_generators_are_deterministic(self):
        first = [random_convex_hrep(random.Random(9)).to_json() for _ in range(3)]
        second = [random_convex_hrep(random.Random(9)).to_json() for _ in range(3)]
        self.assertEqual(first, second)
        a = random_semilinear_set(random.Random(4))
        b = random_semilinear_set(random.Random(4))
        self.assertEqual(a, b)

    def test_requested_dimension(self):
        rng = random.Random(2)
        for dim in (1, 2):
            self.assertEqual(random_convex_hrep(rng, dim).space.dim, dim)
            self.assertEqual(random_semilinear_set(rng, dim).space.dim, dim)

    def test_hrep_matches_flagged_set(self):
        rng = random.Random(8)
        hrep = random_convex_hrep(rng, 2)
        flagged = hrep_to_flagged(hrep)
        for face in flagged.arrangement.faces:
            self.assertEqual(flagged.flags[face.index], hrep.holds(face.representative))


class TestSelftestService(unittest.TestCase):
    """Exécution complète sur peu de graines."""

    @classmethod
    def setUpClass(cls):
        with mock.patch.dict(os.environ, {'KURA_RNG': ''}):
            cls.summary = SelftestService(seeds=5, rng_seed=3).run()

    def test_all_checks_pass(self):
        failed = [c.name for c in self.summary.checks if not c.passed]
        self.assertEqual(failed, [])
        self.assertTrue(self.summary.passed)

    def test_report(self):
        data = self.summary.to_dict()
        self.assertEqual(data['rng_seed'], 3)
        self.assertEqual(len(data['checks']), 9)
        self.assertEqual(data['checks'][5]['details'], {'taille': 10})
        self.assertIn('✅ autotest réussi', self.summary.to_text())
        self.assertEqual(list(self.summary.to_frame().columns), ['critère', 'cas', 'échecs', 'statut'])

    def test_convex_orbits_stay_small(self):
        maximum = next(c for c in self.summary.checks if c.name == 'orbite-convexe-max')
        self.assertLessEqual(maximum.details['taille-max'], 6)

    def test_proof_chains_meet_their_quota(self):
        chains = next(c for c in self.summary.checks if c.name == 'chaines-de-preuve')
        # trois égalités par graine retenue, graines à cor vide remplacées
        self.assertEqual(chains.cases, 3 * 5)
        self.assertIn('cor-vide-ecartes', chains.details)

    def test_convex_maximum_uses_more_seeds(self):
        maximum = next(c for c in self.summary.checks if c.name == 'orbite-convexe-max')
        self.assertEqual(maximum.cases, 5 * Config.CONVEX_MAX_FACTOR)

    def test_nonconvex_orbit_is_checked_pointwise(self):
        orbit = next(c for c in self.summary.checks if c.name == 'orbite-non-convexe')
        self.assertGreater(orbit.cases, 1)
        self.assertEqual(orbit.failures, 0)
        with mock.patch('selftest_service.lin_pointwise', return_value=False):
            broken = SelftestService(seeds=1, rng_seed=3).check_nonconvex_orbit()
        self.assertFalse(broken.passed)
        self.assertEqual(broken.details, {'taille': 10})

    def test_deterministic(self):
        with mock.patch.dict(os.environ, {'KURA_RNG': ''}):
            again = SelftestService(seeds=5, rng_seed=3).run()
        self.assertEqual(again.to_dict(), self.summary.to_dict())

    def test_environment_seed_wins(self):
        with mock.patch.dict(os.environ, {'KURA_RNG': '11'}):
            self.assertEqual(SelftestService(seeds=1, rng_seed=3).rng_seed, 11)

    def test_check_result(self):
        result = CheckResult('exemple')
        result.record(True)
        result.record(False)
        self.assertEqual((result.cases, result.failures, result.passed), (2, 1, False))


if __name__ == '__main__':
    unittest.main(verbosity=2)
