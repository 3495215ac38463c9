# -*- coding: utf-8 -*-
"""
Service de séparation convexe
=============================
Ensembles convexes en représentation H (conjonction de demi-espaces
stricts ou larges), séparateurs l(s) ≤ α ≤ l(t) et certificats vérifiés
en arithmétique exacte.

Vide, témoins et intersections passent par le moteur semi-linéaire
(hrep_to_flagged). Le supremum d'une fonctionnelle se calcule par
énumération des sommets et rayons candidats de l'adhérence.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd

from arrangement_service import formula_to_set
from errors import (
    CertificateValidationError, DimensionError, PreconditionError, SeparationError,
)
from geometry import (
    Space, as_point, check_same_space, conjunction, dot, format_rational,
    halfspace, parse_rational,
)

logger = logging.getLogger(__name__)

INFINITY = float('inf')

_STRICT = {'<': True, '<=': False}


# =============================================================================
# REPRÉSENTATION H
# =============================================================================

@dataclass(frozen=True)
class HalfSpace:
    """a·x < b (strict) ou a·x ≤ b."""

    a: tuple
    b: Fraction
    strict: bool = False

    @property
    def relation(self):
        return '<' if self.strict else '<='

    def value(self, point):
        return dot(self.a, point) - self.b

    def holds(self, point):
        value = self.value(point)
        return value < 0 if self.strict else value <= 0

    def relaxed(self):
        return replace(self, strict=False)

    def tightened(self):
        return replace(self, strict=True)

    def to_formula(self):
        return halfspace(self.a, self.relation, self.b)

    def to_list(self):
        return [*(format_rational(c) for c in self.a), self.relation, format_rational(self.b)]


def _halfspaces(coefficients, relation, bound):
    """Ramène une contrainte à des demi-espaces < ou ≤ (= donne deux ≤)."""
    a = tuple(parse_rational(c) for c in coefficients)
    b = parse_rational(bound)
    if all(c == 0 for c in a):
        raise ValueError("Contrainte à coefficients tous nuls")
    negated = tuple(-c for c in a)
    if relation in _STRICT:
        return [HalfSpace(a, b, _STRICT[relation])]
    if relation == '>':
        return [HalfSpace(negated, -b, True)]
    if relation == '>=':
        return [HalfSpace(negated, -b, False)]
    if relation == '=':
        return [HalfSpace(a, b, False), HalfSpace(negated, -b, False)]
    raise ValueError(f"Relation inconnue: {relation!r}")


@dataclass(frozen=True)
class ConvexHRep:
    """Conjonction finie de demi-espaces (conjonction vide = espace entier)."""

    space: Space
    constraints: tuple = ()

    @classmethod
    def from_constraints(cls, space, items):
        """items: suite de (coefficients, relation, borne)."""
        constraints = []
        for coefficients, relation, bound in items:
            if len(coefficients) != space.dim:
                raise DimensionError(
                    f"Contrainte de dimension {len(coefficients)} dans un espace de dimension {space.dim}"
                )
            constraints.extend(_halfspaces(coefficients, relation, bound))
        return cls(space, tuple(constraints))

    @classmethod
    def empty(cls, space):
        """Vide canonique: x₁ < 0 et -x₁ < 0."""
        e = (Fraction(1),) + (Fraction(0),) * (space.dim - 1)
        return cls(space, (HalfSpace(e, Fraction(0), True),
                           HalfSpace(tuple(-c for c in e), Fraction(0), True)))

    @classmethod
    def point(cls, point, space=None):
        point = as_point(point)
        space = space or Space(len(point))
        items = []
        for k, coordinate in enumerate(point):
            coefficients = [0] * space.dim
            coefficients[k] = 1
            items.append((coefficients, '=', coordinate))
        return cls.from_constraints(space, items)

    @classmethod
    def from_json(cls, data):
        """{"dim": 2, "constraints": [[a1, a2, rel, b], ...]}"""
        space = Space(int(data['dim']))
        items = []
        for row in data.get('constraints', []):
            if len(row) != space.dim + 2:
                raise DimensionError(f"Contrainte {row!r}: {space.dim + 2} champs attendus")
            items.append((row[:space.dim], row[space.dim], row[space.dim + 1]))
        return cls.from_constraints(space, items)

    def to_json(self):
        return {'dim': self.space.dim, 'constraints': [h.to_list() for h in self.constraints]}

    def intersection(self, other):
        check_same_space(self.space, other.space)
        return ConvexHRep(self.space, self.constraints + other.constraints)

    def relaxed(self):
        return ConvexHRep(self.space, tuple(h.relaxed() for h in self.constraints))

    def tightened(self):
        return ConvexHRep(self.space, tuple(h.tightened() for h in self.constraints))

    def holds(self, point):
        return all(h.holds(point) for h in self.constraints)

    def to_formula(self):
        return conjunction(*(h.to_formula() for h in self.constraints))


def point_hrep(point):
    return ConvexHRep.point(point)


def hrep_to_flagged(hrep):
    """Ensemble drapeauté de la conjonction (réutilise le moteur exact)."""
    return formula_to_set(hrep.to_formula(), hrep.space)


def is_empty_hrep(hrep):
    return hrep_to_flagged(hrep).is_empty()


def witness(hrep):
    """Un point rationnel de l'ensemble, ou None s'il est vide."""
    for face in hrep_to_flagged(hrep).flagged_faces():
        return face.representative
    return None


def cor_hrep(hrep):
    """cor d'un convexe: toutes les contraintes strictes si non vide, sinon vide."""
    strict = hrep.tightened()
    return strict if not is_empty_hrep(strict) else ConvexHRep.empty(hrep.space)


def lin_hrep(hrep):
    """lin d'un convexe: toutes les contraintes larges (vide reste vide)."""
    if is_empty_hrep(hrep):
        return ConvexHRep.empty(hrep.space)
    return hrep.relaxed()


# =============================================================================
# SOMMETS, RAYONS ET SUPREMUM
# =============================================================================

def _solve(first, second):
    """Intersection des droites a·x = b, None si parallèles."""
    (a1, a2), b = first.a, first.b
    (c1, c2), d = second.a, second.b
    det = a1 * c2 - a2 * c1
    if det == 0:
        return None
    return ((b * c2 - a2 * d) / det, (a1 * d - b * c1) / det)


def _foot(halfspace_):
    norm2 = sum(c * c for c in halfspace_.a)
    return tuple(c * halfspace_.b / norm2 for c in halfspace_.a)


def _rot90(v):
    return (-v[1], v[0])


def _neg(v):
    return tuple(-c for c in v)


def vertex_ray_enumeration(hrep):
    """
    Points et rayons engendrant l'adhérence: P = conv(points) + cone(rays).

    Candidats ponctuels: intersections deux à deux des droites frontières,
    pieds des droites (faces non pointées) et origine; on garde les points
    admissibles. Candidats rayons: directions des frontières, opposés des
    normales et axes; on garde ceux de la cône de récession a·r ≤ 0.
    """
    closed = hrep.relaxed().constraints
    dim = hrep.space.dim

    candidates = [hrep.space.origin()]
    if dim == 1:
        candidates.extend((h.b / h.a[0],) for h in closed)
        ray_candidates = [(Fraction(1),), (Fraction(-1),)]
    else:
        candidates.extend(p for first, second in combinations(closed, 2)
                          if (p := _solve(first, second)) is not None)
        candidates.extend(_foot(h) for h in closed)
        ray_candidates = []
        for h in closed:
            ray_candidates.extend([_rot90(h.a), _neg(_rot90(h.a)), _neg(h.a)])
        ray_candidates.extend([(1, 0), (-1, 0), (0, 1), (0, -1)])

    points = sorted({p for p in candidates if all(h.holds(p) for h in closed)})
    rays = sorted({
        tuple(Fraction(c) for c in r) for r in ray_candidates
        if all(dot(h.a, r) <= 0 for h in closed)
    })
    return points, rays


def sup_functional(hrep, l):
    """sup de l sur l'adhérence; None si vide, INFINITY si non borné."""
    points, rays = vertex_ray_enumeration(hrep)
    if not points:
        return None
    if any(dot(l, r) > 0 for r in rays):
        return INFINITY
    return max(dot(l, p) for p in points)


def inf_functional(hrep, l):
    value = sup_functional(hrep, _neg(l))
    return None if value is None else -value


# =============================================================================
# CERTIFICATS
# =============================================================================

@dataclass(frozen=True)
class LinearFunctional:
    l: tuple
    alpha: Fraction

    def __call__(self, point):
        return dot(self.l, point)

    def validate(self, dim):
        if len(self.l) != dim:
            raise CertificateValidationError(f"Fonctionnelle de dimension {len(self.l)} (attendu {dim})")
        if all(c == 0 for c in self.l):
            raise CertificateValidationError("Fonctionnelle nulle: ce n'est pas un séparateur")


@dataclass(frozen=True)
class SeparationCertificate:
    functional: LinearFunctional
    kind: str
    checked: bool = False

    def to_dict(self):
        return {
            'l': [format_rational(c) for c in self.functional.l],
            'alpha': format_rational(self.functional.alpha),
            'kind': self.kind,
            'checked': self.checked,
        }

    def __str__(self):
        coordinates = ', '.join(format_rational(c) for c in self.functional.l)
        status = 'vérifié' if self.checked else 'non vérifié'
        return f"certificat: l = ({coordinates}), α = {format_rational(self.functional.alpha)} ({self.kind}, {status})"


@dataclass(frozen=True)
class Intersects:
    point: tuple

    def to_dict(self):
        return {'point': [format_rational(c) for c in self.point]}

    def __str__(self):
        return "intersection: point (" + ', '.join(format_rational(c) for c in self.point) + ")"


@dataclass(frozen=True)
class InCor:
    point: tuple

    def to_dict(self):
        return {'in_cor': True, 'point': [format_rational(c) for c in self.point]}

    def __str__(self):
        return "dans cor: point (" + ', '.join(format_rational(c) for c in self.point) + ")"


def verify_separator(s, t, certificate):
    """
    Vérifie l(s) ≤ α pour s ∈ S̄, α ≤ l(t) pour t ∈ T̄, et l(s) < α sur cor(S).

    Raises:
        CertificateValidationError: fonctionnelle nulle ou mal dimensionnée
    """
    check_same_space(s.space, t.space)
    functional = certificate.functional
    functional.validate(s.space.dim)
    l, alpha = functional.l, functional.alpha

    upper = sup_functional(s, l)
    if upper is not None and upper > alpha:
        return False
    lower = inf_functional(t, l)
    if lower is not None and lower < alpha:
        return False
    # cor(S) ∩ {l·x ≥ α} doit être vide
    touching = cor_hrep(s).intersection(ConvexHRep(s.space, (HalfSpace(_neg(l), -alpha, False),)))
    return is_empty_hrep(touching)


def _primitive(v):
    """Représentant entier primitif d'une direction (None si nulle)."""
    v = [Fraction(c) for c in v]
    if all(c == 0 for c in v):
        return None
    scale = reduce(lambda acc, c: acc * c.denominator // gcd(acc, c.denominator), v, 1)
    integers = [int(c * scale) for c in v]
    divisor = reduce(gcd, (abs(c) for c in integers))
    return tuple(Fraction(c // divisor) for c in integers)


def candidate_functionals(s, t):
    """Directions candidates, dans un ordre déterministe."""
    if s.space.dim == 1:
        return [(Fraction(1),), (Fraction(-1),)]
    raw = []
    for h in s.constraints + t.constraints:
        raw.extend([h.a, _neg(h.a)])
    s_points, s_rays = vertex_ray_enumeration(s)
    t_points, t_rays = vertex_ray_enumeration(t)
    for u in s_points:
        for w in t_points:
            difference = (u[0] - w[0], u[1] - w[1])
            raw.extend([_rot90(difference), _neg(_rot90(difference))])
    for r in s_rays + t_rays:
        raw.extend([_rot90(r), _neg(_rot90(r))])
    raw.extend([(1, 0), (-1, 0), (0, 1), (0, -1)])

    seen = set()
    result = []
    for v in raw:
        direction = _primitive(v)
        if direction is not None and direction not in seen:
            seen.add(direction)
            result.append(direction)
    return result


def separate(s, t):
    """
    Sépare S (cor(S) ≠ ∅) de T, ou exhibe un point de cor(S) ∩ T.

    Returns:
        Intersects | SeparationCertificate (checked=True, kind 'cor-set')

    Raises:
        PreconditionError: S ou T vide, ou cor(S) vide
    """
    check_same_space(s.space, t.space)
    if is_empty_hrep(s):
        raise PreconditionError('nonempty', "S est vide")
    if is_empty_hrep(t):
        raise PreconditionError('nonempty', "T est vide")
    interior = cor_hrep(s)
    if is_empty_hrep(interior):
        raise PreconditionError('cor-nonempty', "cor(S) est vide")

    meeting = witness(interior.intersection(t))
    if meeting is not None:
        return Intersects(meeting)

    candidates = candidate_functionals(s, t)
    for l in candidates:
        upper = sup_functional(s, l)
        if upper == INFINITY:
            continue
        lower = inf_functional(t, l)
        if upper <= lower:
            certificate = SeparationCertificate(LinearFunctional(l, upper), 'cor-set')
            if verify_separator(s, t, certificate):
                logger.debug("Séparateur trouvé: %s", certificate)
                return replace(certificate, checked=True)
    logger.error("❌ Aucun séparateur parmi %d directions candidates", len(candidates))
    raise SeparationError("Aucun séparateur trouvé alors que cor(S) ∩ T est vide")


def cor_membership_certificate(s, x):
    """
    x ∈ cor(S), ou certificat séparant S du singleton {x}.

    Le certificat provient d'une contrainte non stricte en x: a·x ≥ b.

    Raises:
        PreconditionError: S vide
    """
    if is_empty_hrep(s):
        raise PreconditionError('nonempty', "S est vide")
    x = as_point(x, s.space.dim)
    violated = next((h for h in s.constraints if h.value(x) >= 0), None)
    if violated is None:
        return InCor(x)
    certificate = SeparationCertificate(LinearFunctional(violated.a, violated.b), 'cor-point')
    checked = verify_separator(s, ConvexHRep.point(x, s.space), certificate)
    if not checked:
        logger.warning("⚠️ Certificat de non-appartenance non vérifié pour %s", x)
    return replace(certificate, checked=checked)
