# -*- coding: utf-8 -*-
"""
Service d'autotest
==================
Rejoue les critères d'acceptation du moteur sur des graines aléatoires
reproductibles: borne des orbites convexes, formes canoniques du monoïde,
chaînes de réduction, identités sur cor / lin, orbites non convexes,
séparation et accord avec l'oracle ponctuel.

Toutes les générations passent par random.Random(graine): deux exécutions
avec la même graine produisent le même rapport.
"""

import json
import logging
import random
from dataclasses import dataclass, field

import pandas as pd

from arrangement_service import (
    FlaggedSet, build_arrangement, complement, equal, formula_to_set, member,
)
from config import Config, resolve_rng_seed
from errors import PreconditionError
from geometry import Space, conjunction, halfspace, normalize_equation
from monoid_service import CONVEX, GENERAL, enumerate_canonical, reduce_with_trace
from operators_service import (
    check_identity, cor, cor_pointwise, is_convex, lin, lin_pointwise,
)
from orbit_service import CONVEX_BOUND_WORDS, apply_word, enumerate_orbit, verify_convex_bound
from separation_service import (
    ConvexHRep, InCor, LinearFunctional, SeparationCertificate, cor_hrep,
    cor_membership_certificate, hrep_to_flagged, is_empty_hrep, separate,
    verify_separator,
)

logger = logging.getLogger(__name__)


# =============================================================================
# GÉNÉRATEURS
# =============================================================================

def _random_normal(rng, dim):
    while True:
        a = [rng.randint(-2, 2) for _ in range(dim)]
        if any(a):
            return a


def random_convex_hrep(rng, dim=None):
    """
    Conjonction aléatoire de demi-espaces à bornes mixtes.

    Dimension 1: intervalle, point ou demi-droite.
    Dimension 2: jusqu'à 6 demi-plans, avec parfois une égalité.
    """
    dim = dim or rng.choice((1, 2, 2))
    space = Space(dim)
    if dim == 1:
        kind = rng.choice(('interval', 'interval', 'point', 'ray'))
        p = rng.randint(-3, 2)
        if kind == 'point':
            return ConvexHRep.from_constraints(space, [([1], '=', p)])
        if kind == 'ray':
            return ConvexHRep.from_constraints(space, [([1], rng.choice(('<', '<=', '>', '>=')), p)])
        q = rng.randint(p + 1, 3)
        return ConvexHRep.from_constraints(space, [
            ([1], rng.choice(('>', '>=')), p),
            ([1], rng.choice(('<', '<=')), q),
        ])
    items = []
    for _ in range(rng.randint(1, 6)):
        relation = '=' if rng.random() < 0.1 else rng.choice(('<', '<=', '>', '>='))
        items.append((_random_normal(rng, 2), relation, rng.randint(-3, 3)))
    return ConvexHRep.from_constraints(space, items)


def random_convex_seed(rng, dim=None):
    return hrep_to_flagged(random_convex_hrep(rng, dim))


def random_semilinear_set(rng, dim=None):
    """Drapeaux aléatoires sur un arrangement aléatoire de 1 à 4 droites."""
    dim = dim or rng.choice((1, 2, 2))
    space = Space(dim)
    lines = [normalize_equation(_random_normal(rng, dim), rng.randint(-3, 3))[0]
             for _ in range(rng.randint(1, 4))]
    arrangement = build_arrangement(lines, space)
    return FlaggedSet(arrangement, tuple(rng.random() < 0.5 for _ in arrangement.faces))


def nonconvex_orbit_seed():
    """(0, 1) ∪ (1, 2) ∪ {3}: orbite de taille 10."""
    space = Space(1)
    formula = (
        conjunction(halfspace([1], '>', 0), halfspace([1], '<', 2), halfspace([1], '<', 1) | halfspace([1], '>', 1))
        | halfspace([1], '=', 3)
    )
    return formula_to_set(formula, space)


def segment_counterexample():
    """Segment ouvert du plan: convexe, cor vide, lin(cor S) ≠ lin(S)."""
    space = Space(2)
    return formula_to_set(conjunction(
        halfspace([0, 1], '=', 0), halfspace([1, 0], '>', 0), halfspace([1, 0], '<', 1),
    ), space)


# =============================================================================
# RAPPORT
# =============================================================================

@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.failures == 0

    def record(self, ok):
        self.cases += 1
        if not ok:
            self.failures += 1

    def to_dict(self):
        return {
            'name': self.name,
            'cases': self.cases,
            'failures': self.failures,
            'passed': self.passed,
            'details': self.details,
        }


@dataclass
class SelftestSummary:
    rng_seed: int
    seeds: int
    checks: list

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def to_frame(self):
        return pd.DataFrame([
            {'critère': c.name, 'cas': c.cases, 'échecs': c.failures, 'statut': 'OK' if c.passed else 'ÉCHEC'}
            for c in self.checks
        ])

    def to_text(self):
        status = "✅ autotest réussi" if self.passed else "❌ autotest en échec"
        header = f"autotest: graine {self.rng_seed}, {self.seeds} graines par critère"
        return f"{header}\n{self.to_frame().to_string(index=False)}\n{status}\n"

    def to_dict(self):
        return {
            'rng_seed': self.rng_seed,
            'seeds': self.seeds,
            'passed': self.passed,
            'checks': [c.to_dict() for c in self.checks],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + '\n'


# =============================================================================
# SERVICE
# =============================================================================

class SelftestService:
    """
    Exécute les critères d'acceptation.

    Args:
        seeds: nombre de graines aléatoires par critère
        rng_seed: graine maîtresse (KURA_RNG prioritaire)
    """

    def __init__(self, seeds=None, rng_seed=None):
        self.seeds = Config.SELFTEST_SEEDS if seeds is None else int(seeds)
        self.rng_seed = resolve_rng_seed(rng_seed)

    def _rng(self, salt):
        return random.Random(f"{self.rng_seed}:{salt}")

    def run(self):
        logger.info("🚀 Autotest: graine %d, %d graines par critère", self.rng_seed, self.seeds)
        checks = [
            self.check_convex_bound(),
            self.check_monoid_counts(),
            self.check_proof_chains(),
            self.check_cor_duality(),
            self.check_idempotence(),
            self.check_nonconvex_orbit(),
            self.check_convex_orbit_maximum(),
            self.check_separation(),
            self.check_oracle_agreement(),
        ]
        summary = SelftestSummary(self.rng_seed, self.seeds, checks)
        for check in checks:
            if not check.passed:
                logger.warning("⚠️ Critère %s: %d échec(s) sur %d", check.name, check.failures, check.cases)
        logger.info("%s", "✅ Autotest réussi" if summary.passed else "❌ Autotest en échec")
        return summary

    def check_convex_bound(self):
        result = CheckResult('borne-8-convexe', details={'cor-vide': 0, 'cor-non-vide': 0, 'taille-max': 0})
        rng = self._rng('convex-bound')
        for _ in range(self.seeds):
            report = verify_convex_bound(random_convex_seed(rng))
            result.record(report.verdict)
            result.details[report.details['regime']] += 1
            result.details['taille-max'] = max(result.details['taille-max'], report.lhs)
        return result

    def check_monoid_counts(self):
        result = CheckResult('formes-canoniques')
        general = enumerate_canonical(GENERAL)
        convex = enumerate_canonical(CONVEX)
        result.record(len(general) == 14)
        result.record({w.letters for w in convex} == set(CONVEX_BOUND_WORDS) and len(convex) == 8)
        result.details = {'general': len(general), 'convex': len(convex)}
        return result

    def check_proof_chains(self):
        """fgfgA = fA et fgfgfA = fA, puis validité des réécritures convexes."""
        result = CheckResult('chaines-de-preuve', details={'cor-vide-ecartes': 0})
        rng = self._rng('chains')
        checked = 0
        while checked < self.seeds:
            word = ''.join(rng.choice('fg') for _ in range(rng.randint(1, 7)))
            seed = random_convex_seed(rng)
            if cor(seed).is_empty():
                result.details['cor-vide-ecartes'] += 1
                continue
            checked += 1
            f_image = lin(seed)
            result.record(equal(apply_word('fgfg', seed), f_image))
            result.record(equal(apply_word('fgfgf', seed), f_image))
            normal, _ = reduce_with_trace(word, CONVEX)
            result.record(equal(apply_word(word, seed), apply_word(normal, seed)))
        return result

    def check_cor_duality(self):
        """g∘cor = lin∘g: toujours sur les convexes; taux hors convexes informatif."""
        result = CheckResult('cor-complement', details={'hors-convexes': 0, 'hors-convexes-vrais': 0})
        rng = self._rng('cor-duality')
        for _ in range(self.seeds):
            result.record(check_identity('cor-duality', random_convex_seed(rng)).verdict)
            other = random_semilinear_set(rng)
            result.details['hors-convexes'] += 1
            if check_identity('cor-duality', other, enforce_gates=False).verdict:
                result.details['hors-convexes-vrais'] += 1
        return result

    def check_idempotence(self):
        result = CheckResult('cor-lin-idempotence')
        rng = self._rng('idempotence')
        for _ in range(self.seeds):
            result.record(check_identity('cor-idempotent', random_semilinear_set(rng)).verdict)
            seed = random_convex_seed(rng)
            result.record(check_identity('cor-idempotent', seed).verdict)
            if not cor(seed).is_empty():
                result.record(check_identity('lin-cor', seed).verdict)
                result.record(check_identity('cor-lin', seed).verdict)
        # cor(S) = ∅: l'hypothèse est nécessaire
        segment = segment_counterexample()
        try:
            check_identity('lin-cor', segment)
            result.record(False)
        except PreconditionError:
            result.record(True)
        result.record(not check_identity('lin-cor', segment, enforce_gates=False).verdict)
        return result

    def check_nonconvex_orbit(self):
        """Taille 10, puis chaque transition recoupée par l'oracle ponctuel."""
        result = CheckResult('orbite-non-convexe')
        orbit = enumerate_orbit(nonconvex_orbit_seed())
        result.record(orbit.size == 10)
        for index, current in enumerate(orbit.members):
            closure = orbit.members[orbit.edges[(index, 'f')]]
            opposite = orbit.members[orbit.edges[(index, 'g')]]
            # cor = g f g
            interior = orbit.members[orbit.edges[(orbit.edges[(orbit.edges[(index, 'g')], 'f')], 'g')]]
            for face in current.arrangement.faces:
                point = face.representative
                result.record(member(closure, point) == lin_pointwise(current, point))
                result.record(member(interior, point) == cor_pointwise(current, point))
                result.record(member(opposite, point) != member(current, point))
        result.details = {'taille': orbit.size}
        return result

    def check_convex_orbit_maximum(self):
        """Le maximum observé sur les convexes est 6, jamais plus."""
        result = CheckResult('orbite-convexe-max')
        rng = self._rng('maximum')
        largest = 0
        for _ in range(self.seeds * Config.CONVEX_MAX_FACTOR):
            size = enumerate_orbit(random_convex_seed(rng)).size
            largest = max(largest, size)
            result.record(size <= 6)
        result.details = {'taille-max': largest}
        return result

    def check_separation(self):
        """Certificats vérifiés et biconditionnel d'appartenance au cor."""
        result = CheckResult('separation', details={'intersections': 0, 'separateurs': 0})
        rng = self._rng('separation')
        for _ in range(self.seeds):
            s = random_convex_hrep(rng, 2)
            t = random_convex_hrep(rng, 2)
            if is_empty_hrep(s) or is_empty_hrep(t) or is_empty_hrep(cor_hrep(s)):
                continue
            outcome = separate(s, t)
            if isinstance(outcome, SeparationCertificate):
                result.details['separateurs'] += 1
                result.record(outcome.checked and verify_separator(s, t, outcome))
            else:
                result.details['intersections'] += 1
                result.record(cor_hrep(s).holds(outcome.point) and t.holds(outcome.point))

            x = tuple(rng.randint(-3, 3) for _ in range(2))
            answer = cor_membership_certificate(s, x)
            inside = cor_hrep(s).holds(x)
            result.record(isinstance(answer, InCor) == inside)
            if isinstance(answer, InCor):
                # aucun séparateur ne peut exister pour un point de cor(S)
                point = ConvexHRep.point(x)
                for l in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    alpha = l[0] * x[0] + l[1] * x[1]
                    attempt = SeparationCertificate(LinearFunctional(l, alpha), 'cor-point')
                    result.record(not verify_separator(s, point, attempt))
            else:
                result.record(answer.checked)
        return result

    def check_oracle_agreement(self):
        """Règles d'étoile contre oracle ponctuel des germes, en chaque représentant."""
        result = CheckResult('oracle-ponctuel')
        rng = self._rng('oracle')
        for _ in range(self.seeds):
            flagged = random_semilinear_set(rng)
            closure, interior = lin(flagged), cor(flagged)
            for face in flagged.arrangement.faces:
                point = face.representative
                result.record(closure.flags[face.index] == lin_pointwise(flagged, point))
                result.record(interior.flags[face.index] == cor_pointwise(flagged, point))
            result.record(equal(complement(cor(flagged)), lin(complement(flagged))) or not is_convex(flagged))
        return result
